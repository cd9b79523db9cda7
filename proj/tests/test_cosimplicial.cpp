#include "stackcoh/cosimplicial.hpp"

#include <catch_amalgamated.hpp>

using namespace stackcoh;

namespace {

/// Tuples of length len over {0..k-1}, lexicographic.
std::vector<std::vector<std::size_t>> tuples(std::size_t k, std::size_t len) {
    std::vector<std::vector<std::size_t>> out{{}};
    for (std::size_t l = 0; l < len; ++l) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& t : out)
            for (std::size_t a = 0; a < k; ++a) {
                next.push_back(t);
                next.back().push_back(a);
            }
        out = std::move(next);
    }
    return out;
}

/// Face d_i deletes position i: (d_i x)(tau) = x(tau without tau_i), as a
/// 0/1 matrix from k^{n+1} coordinates to k^{n+2} coordinates.
Matrix face_matrix(std::size_t k, std::size_t n, std::size_t i) {
    auto src = tuples(k, n + 1), dst = tuples(k, n + 2);
    Matrix m(dst.size(), src.size());
    for (std::size_t r = 0; r < dst.size(); ++r) {
        auto t = dst[r];
        t.erase(t.begin() + static_cast<std::ptrdiff_t>(i));
        std::size_t c = 0;
        for (auto a : t) c = c * k + a;
        m(r, c) = 1;
    }
    return m;
}

/// Constant Cech diagram of a k-set cover of a point with coefficients p.
PrecosimplicialPic constant_cech(const Pic2Group& p, std::size_t k, std::size_t top,
                                 std::vector<PrecosimplicialPic::TrackTable> tracks = {}) {
    std::vector<Pic2Group> objs;
    std::size_t size = k;
    for (std::size_t n = 0; n <= top; ++n, size *= k) objs.push_back(product(std::vector<Pic2Group>(size, p)));
    std::vector<std::vector<StrictMor>> cof;
    for (std::size_t n = 0; n < top; ++n) {
        cof.emplace_back();
        for (std::size_t i = 0; i <= n + 1; ++i) {
            Matrix f = face_matrix(k, n, i);
            auto kron = [&](std::size_t block) {
                Matrix m(f.rows() * block, f.cols() * block);
                for (std::size_t r = 0; r < f.rows(); ++r)
                    for (std::size_t c = 0; c < f.cols(); ++c)
                        if (f(r, c) != 0) m.set_block(r * block, c * block, Matrix::identity(block));
                return m;
            };
            cof.back().emplace_back(objs[n], objs[n + 1], kron(p.c1().ngens()), kron(p.c0().ngens()));
        }
    }
    return PrecosimplicialPic(objs, cof, std::move(tracks));
}

CosimplicialAb constant_cech_ab(const FgAbGroup& a, std::size_t k, std::size_t top) {
    PrecosimplicialPic x = constant_cech(discrete(a), k, top);
    CosimplicialAb g;
    for (std::size_t n = 0; n <= top; ++n) g.groups.push_back(x.object(n).c0());
    for (std::size_t n = 0; n < top; ++n) {
        g.cofaces.emplace_back();
        for (std::size_t i = 0; i <= n + 1; ++i) g.cofaces.back().push_back(x.coface(n, i).f0());
    }
    return g;
}

PrecosimplicialPic::TrackTable all_ones(std::size_t n) {
    PrecosimplicialPic::TrackTable t;
    for (std::size_t j = 0; j <= n + 1; ++j)
        for (std::size_t i = 0; i <= j; ++i) t[{i, j}] = Matrix{{1}};
    return t;
}

}  // namespace

TEST_CASE("strict diagrams validate", "[cosimplicial]") {
    PrecosimplicialPic x = constant_cech(mk_phi(), 1, 4);
    CHECK(x.level() == 4);
    CHECK(x.coface(2, 3).f0().matrix() == Matrix{{1}});
    CHECK(x.track(1, 0, 2).is_zero());
    CHECK_NOTHROW(to_complex(x));
}

TEST_CASE("discrete lift of a two-set cover of a point", "[cosimplicial]") {
    CosimplicialAb g = constant_cech_ab(FgAbGroup::free(1), 2, 4);
    PrecosimplicialPic x = discrete_lift(g);
    CHECK(x.object(2).c0().ngens() == 8);
    CHECK(x.object(2).c1().ngens() == 0);
    TwoCochainComplex c = to_complex(x);
    for (int n = 0; n + 2 < 4; ++n) CHECK(c.track(n).is_zero());
    CHECK(tu_cohomology(c, 0).str() == "Z");
    CHECK(tu_cohomology(c, 1).str() == "0");
    CHECK(tu_cohomology(c, 2).str() == "0");
    CHECK(tu_cohomology(c, -1).str() == "0");
}

TEST_CASE("constant Phi on a point", "[cosimplicial]") {
    TwoCochainComplex c = to_complex(constant_cech(mk_phi(), 1, 5));
    CHECK(tu_cohomology(c, -1).str() == "Z/2");
    CHECK(tu_cohomology(c, 0).str() == "Z");
    for (int n = 1; n <= 3; ++n) CHECK(tu_cohomology(c, n).str() == "0");

    TwoCochainComplex c2 = to_complex(constant_cech(mk_phi(), 2, 4));
    CHECK(tu_cohomology(c2, 0).str() == "Z");
    CHECK(tu_cohomology(c2, 1).str() == "0");
    CHECK(tu_cohomology(c2, 2).str() == "0");
}

TEST_CASE("nontrivial tracks and the hexagon", "[cosimplicial]") {
    std::vector<PrecosimplicialPic::TrackTable> ones;
    for (std::size_t n = 0; n + 2 <= 5; ++n) ones.push_back(all_ones(n));
    PrecosimplicialPic x = constant_cech(mk_phi(), 1, 5, ones);
    TwoCochainComplex c = to_complex(x);
    CHECK(c.track(0).is_zero() == false);
    CHECK(tu_exact_sequence(c, -1, 3).verdict());
    for (int n = 0; n <= 3; ++n) {
        auto inv = invariants(secondary_cohomology(c, n));
        CHECK(inv.pi0.str() == tu_cohomology(c, n).str());
        CHECK(inv.pi1.str() == tu_cohomology(c, n - 1).str());
    }

    std::vector<PrecosimplicialPic::TrackTable> bad(3);
    bad[0][{0, 0}] = Matrix{{1}};
    try {
        constant_cech(mk_phi(), 1, 4, bad);
        FAIL("perturbed tracks accepted");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("hexagon fails at level 0 for (i,j,k) = (0,0,0)") != std::string::npos);
    }

    std::vector<PrecosimplicialPic::TrackTable> wrong(1);
    wrong[0][{1, 0}] = Matrix{{1}};
    CHECK_THROWS_AS(constant_cech(mk_phi(), 1, 2, wrong), ValidationError);
}

TEST_CASE("tracks must be valid for the coface composites", "[cosimplicial]") {
    // K(id : Z -> Z) has no nonzero track between equal maps.
    Pic2Group k = mk_K(GroupHom::identity(FgAbGroup::free(1)));
    std::vector<PrecosimplicialPic::TrackTable> t(1);
    t[0][{0, 1}] = Matrix{{1}};
    CHECK_THROWS_AS(constant_cech(k, 1, 2, t), ValidationError);
    CHECK_NOTHROW(constant_cech(k, 1, 2));
}

TEST_CASE("discrete input gives classical cosimplicial cohomology", "[cosimplicial]") {
    // Three-set cover of a point with Z/6 coefficients: H^0 = Z/6, higher zero.
    CosimplicialAb g = constant_cech_ab(FgAbGroup::cyclic(6), 3, 3);
    TwoCochainComplex c = to_complex(discrete_lift(g));
    std::vector<GroupHom> diffs;
    for (std::size_t n = 0; n < 3; ++n) {
        Matrix m(g.groups[n + 1].ngens(), g.groups[n].ngens());
        for (std::size_t i = 0; i <= n + 1; ++i) m = m + Integer(i % 2 ? -1 : 1) * g.cofaces[n][i].matrix();
        diffs.emplace_back(g.groups[n], g.groups[n + 1], m);
    }
    AbCochainComplex classical(0, g.groups, diffs);
    for (int n = 0; n <= 1; ++n) CHECK(tu_cohomology(c, n).str() == cochain_cohomology(classical, n).str());
    CHECK(tu_cohomology(c, 0).str() == "Z/6");
}

TEST_CASE("truncation stability", "[cosimplicial][property]") {
    for (std::size_t k : {1, 2}) {
        for (const Pic2Group& p : {mk_phi(), mk_K(GroupHom(FgAbGroup::free(1), FgAbGroup::free(1), Matrix{{3}}))}) {
            const std::size_t top = k == 1 ? 5 : 3;
            TwoCochainComplex a = to_complex(constant_cech(p, k, top));
            TwoCochainComplex b = to_complex(constant_cech(p, k, top + 1));
            for (int n = -1; n <= static_cast<int>(top) - 2; ++n)
                CHECK(tu_cohomology(a, n).str() == tu_cohomology(b, n).str());
        }
    }
    CHECK(default_truncation(2) == 4);
}
