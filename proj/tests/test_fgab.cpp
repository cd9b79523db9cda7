#include "stackcoh/fgab.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace stackcoh;

namespace {

std::vector<Integer> ints(std::initializer_list<long long> xs) {
    std::vector<Integer> v;
    for (auto x : xs) v.emplace_back(x);
    return v;
}

bool unimodular(const Matrix& m) {
    Integer d = oracle::determinant(m);
    return d == 1 || d == -1;
}

void check_smith(const Matrix& m) {
    auto s = smith_normal_form(m);
    REQUIRE(s.u * m * s.v == s.d);
    REQUIRE(unimodular(s.u));
    REQUIRE(unimodular(s.v));
    for (std::size_t i = 0; i < s.d.rows(); ++i)
        for (std::size_t j = 0; j < s.d.cols(); ++j)
            if (i != j) REQUIRE(s.d(i, j) == 0);
    for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i) {
        REQUIRE(s.diagonal[i] >= 0);
        if (s.diagonal[i] == 0)
            REQUIRE(s.diagonal[i + 1] == 0);
        else
            REQUIRE(s.diagonal[i + 1] % s.diagonal[i] == 0);
    }
    REQUIRE(s.diagonal == oracle::smith_diagonal_by_minors(m));
}

}  // namespace

TEST_CASE("smith normal form of small fixed matrices", "[snf]") {
    Matrix m{{2, 4}, {6, 8}};
    auto s = smith_normal_form(m);
    // gcd of 1x1 minors is 2, det = -8, so d = (2, 4).
    REQUIRE(s.diagonal == ints({2, 4}));
    check_smith(m);

    auto z = smith_normal_form(Matrix(3, 2));
    REQUIRE(z.d.is_zero());
    REQUIRE(z.u == Matrix::identity(3));
    REQUIRE(z.v == Matrix::identity(2));

    REQUIRE(smith_normal_form(Matrix::identity(4)).d == Matrix::identity(4));
}

TEST_CASE("smith normal form handles empty dimensions", "[snf]") {
    auto s = smith_normal_form(Matrix(0, 3));
    REQUIRE(s.v == Matrix::identity(3));
    REQUIRE(s.rank == 0);
    auto t = smith_normal_form(Matrix(2, 0));
    REQUIRE(t.u == Matrix::identity(2));
}

TEST_CASE("smith normal form is deterministic and agrees with minors", "[snf][property]") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        std::uniform_int_distribution<int> dim(1, 4);
        Matrix m = oracle::random_matrix(rng, dim(rng), dim(rng), -9, 9);
        check_smith(m);
        auto a = smith_normal_form(m);
        auto b = smith_normal_form(m);
        REQUIRE(a.u == b.u);
        REQUIRE(a.v == b.v);
    }
}

TEST_CASE("integer solver finds solutions and kernels", "[snf]") {
    Matrix a{{2, 4, 6}, {1, 1, 1}};
    IntegerSolver s(a);
    auto x = s.solve({Integer(2), Integer(1)});
    REQUIRE(x);
    REQUIRE(a.apply(*x) == Vec{2, 1});
    REQUIRE_FALSE(s.solve({Integer(1), Integer(0)}));
    Matrix k = s.kernel_basis();
    REQUIRE(k.cols() == 1);
    REQUIRE((a * k).is_zero());
}

TEST_CASE("presented groups reduce to canonical form", "[fgab]") {
    FgAbGroup z6(1, Matrix{{6}});
    REQUIRE(z6.normalize({Integer(8)}) == Vec{2});
    REQUIRE(z6.str() == "Z/6");

    FgAbGroup z2z3(2, Matrix{{2, 0}, {0, 3}});
    REQUIRE(z2z3.invariant_factors() == ints({6}));
    REQUIRE(z2z3.isomorphic(z6));

    FgAbGroup z = FgAbGroup::free(1);
    REQUIRE(z.invariant_factors() == ints({0}));
    REQUIRE(z.str() == "Z");

    REQUIRE(FgAbGroup().invariant_factors().empty());
    REQUIRE(FgAbGroup().str() == "0");
    REQUIRE(FgAbGroup(3, Matrix{{1, 0, 0}, {0, 2, 0}, {0, 0, 6}}).str() == "Z/2 + Z/6");
    REQUIRE(FgAbGroup(4, Matrix{{0, 0, 2, 0}}).str() == "Z^3 + Z/2");
}

TEST_CASE("presentations reject dimension mismatch", "[fgab]") {
    REQUIRE_THROWS_AS(FgAbGroup(2, Matrix{{1, 2, 3}}), ValidationError);
}

TEST_CASE("canonical form agrees with minor oracle on random presentations", "[fgab][property]") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> dim(0, 4);
    for (int trial = 0; trial < 80; ++trial) {
        std::size_t g = static_cast<std::size_t>(dim(rng)) + 1;
        Matrix rel = oracle::random_matrix(rng, static_cast<std::size_t>(dim(rng)), g, -5, 5);
        FgAbGroup grp(g, rel);
        REQUIRE(grp.invariant_factors() == oracle::quotient_factors_by_minors(rel, g));
        // Simplification maps are mutually inverse on the group.
        Matrix round = grp.from_simplified() * grp.to_simplified();
        for (std::size_t j = 0; j < g; ++j) REQUIRE(grp.equal(round.col(j), unit_vec(g, j)));
    }
}

TEST_CASE("homomorphisms are validated against source relations", "[fgab]") {
    FgAbGroup z2 = FgAbGroup::cyclic(2);
    FgAbGroup z = FgAbGroup::free(1);
    REQUIRE_THROWS_AS(GroupHom(z2, z, Matrix{{1}}), ValidationError);
    REQUIRE_NOTHROW(GroupHom(z, z2, Matrix{{1}}));
    REQUIRE_NOTHROW(GroupHom(z2, FgAbGroup::cyclic(4), Matrix{{2}}));
}

TEST_CASE("kernel, image and cokernel of basic maps", "[fgab]") {
    FgAbGroup z = FgAbGroup::free(1);
    auto times2 = hom_exactness(GroupHom(z, z, Matrix{{2}}));
    REQUIRE(times2.kernel.is_trivial());
    REQUIRE(times2.cokernel.str() == "Z/2");

    // Z --(2,3)^T--> Z^2: the column has gcd 1, so the cokernel is free of rank 1.
    auto col = hom_exactness(GroupHom(z, FgAbGroup::free(2), Matrix{{2}, {3}}));
    REQUIRE(col.kernel.is_trivial());
    REQUIRE(col.cokernel.str() == "Z");

    auto zero = hom_exactness(GroupHom::zero(z, z));
    REQUIRE(zero.kernel.str() == "Z");
    REQUIRE(zero.cokernel.str() == "Z");
}

TEST_CASE("rank additivity and mono/epi properties", "[fgab][property]") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> dim(1, 4);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t a = static_cast<std::size_t>(dim(rng)), b = static_cast<std::size_t>(dim(rng));
        GroupHom f(FgAbGroup::free(a), FgAbGroup::free(b), oracle::random_matrix(rng, b, a, -3, 3));
        auto e = hom_exactness(f);
        REQUIRE(a == e.kernel.free_rank() + e.image.free_rank());
        REQUIRE(is_exact_at(e.kernel_inclusion, f));
        REQUIRE(is_exact_at(f, e.cokernel_projection));
        REQUIRE(is_epi(e.cokernel_projection));
        REQUIRE(is_mono(e.kernel_inclusion));
        REQUIRE(cokernel_of(e.cokernel_projection).group.is_trivial());
        REQUIRE(kernel_of(e.kernel_inclusion).group().is_trivial());
    }
}

TEST_CASE("exactness with torsion", "[fgab]") {
    // Z --2--> Z --> Z/2 --> 0 is exact at the middle and at Z/2.
    FgAbGroup z = FgAbGroup::free(1), z2 = FgAbGroup::cyclic(2);
    GroupHom f(z, z, Matrix{{2}});
    GroupHom p(z, z2, Matrix{{1}});
    REQUIRE(is_exact_at(f, p));
    REQUIRE(is_exact_at(p, GroupHom::zero(z2, FgAbGroup())));
    REQUIRE_FALSE(is_exact_at(GroupHom(z, z, Matrix{{4}}), p));
}

TEST_CASE("cochain cohomology examples", "[fgab]") {
    FgAbGroup z = FgAbGroup::free(1);
    AbCochainComplex c(0, {z, z}, {GroupHom(z, z, Matrix{{2}})});
    REQUIRE(cochain_cohomology(c, 0).is_trivial());
    REQUIRE(cochain_cohomology(c, 1).str() == "Z/2");
    REQUIRE_THROWS_AS(cochain_cohomology(c, 2), ValidationError);

    // Boundary of a triangle.
    auto cochains = oracle::simplicial_cochains({{0, 1}, {1, 2}, {0, 2}});
    AbCochainComplex tri(0, {FgAbGroup::free(3), FgAbGroup::free(3)},
                         {GroupHom(FgAbGroup::free(3), FgAbGroup::free(3), cochains.coboundary[0])});
    std::vector<std::size_t> dims{3, 3};
    REQUIRE(cochain_cohomology(tri, 0).invariant_factors() ==
            oracle::free_complex_cohomology(cochains.coboundary, dims, 0));
    REQUIRE(cochain_cohomology(tri, 1).invariant_factors() ==
            oracle::free_complex_cohomology(cochains.coboundary, dims, 1));
    REQUIRE(cochain_cohomology(tri, 0).str() == "Z");
    REQUIRE(cochain_cohomology(tri, 1).str() == "Z");

    AbCochainComplex zero(0, {FgAbGroup(), FgAbGroup()}, {GroupHom::zero(FgAbGroup(), FgAbGroup())});
    REQUIRE(cochain_cohomology(zero, 0).is_trivial());
    REQUIRE(cochain_cohomology(zero, 1).is_trivial());
}

TEST_CASE("complexes with zero differential return their groups", "[fgab]") {
    FgAbGroup a(2, Matrix{{4, 0}}), b = FgAbGroup::cyclic(3);
    AbCochainComplex c(-1, {a, b}, {GroupHom::zero(a, b)});
    REQUIRE(cochain_cohomology(c, -1).isomorphic(a));
    REQUIRE(cochain_cohomology(c, 0).isomorphic(b));
}

TEST_CASE("non-complexes are rejected", "[fgab]") {
    FgAbGroup z = FgAbGroup::free(1);
    GroupHom id = GroupHom::identity(z);
    REQUIRE_THROWS_AS(AbCochainComplex(0, {z, z, z}, {id, id}), ValidationError);
}

TEST_CASE("two-term complexes match brute force modulo small exponents", "[fgab][property]") {
    // For 0 -> Z^a --M--> Z^b -> 0 and coefficients Z/e:
    //   |H^0(C (x) Z/e)| = |ker M mod e| = e^{rank H^0} * prod gcd(e, t) over torsion t of H^1
    //   |H^1(C (x) Z/e)| = e^b / |im M mod e| = prod over factors f of H^1 of gcd(e, f), with gcd(e, 0) = e.
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> dim(1, 3);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t a = static_cast<std::size_t>(dim(rng)), b = static_cast<std::size_t>(dim(rng));
        Matrix m = oracle::random_matrix(rng, b, a, -3, 3);
        AbCochainComplex c(0, {FgAbGroup::free(a), FgAbGroup::free(b)},
                           {GroupHom(FgAbGroup::free(a), FgAbGroup::free(b), m)});
        FgAbGroup h0 = cochain_cohomology(c, 0), h1 = cochain_cohomology(c, 1);
        for (int e : {2, 3, 4, 6}) {
            std::uint64_t ker = oracle::count_kernel_mod(m, e);
            std::uint64_t image = 1;
            for (std::size_t i = 0; i < a; ++i) image *= static_cast<std::uint64_t>(e);
            image /= ker;
            std::uint64_t eb = 1;
            for (std::size_t i = 0; i < b; ++i) eb *= static_cast<std::uint64_t>(e);

            Integer pred0 = 1, pred1 = 1;
            for (std::size_t i = 0; i < h0.free_rank(); ++i) pred0 *= e;
            for (const auto& f : h1.invariant_factors()) {
                Integer g = f == 0 ? Integer(e) : boost::multiprecision::gcd(Integer(e), f);
                pred1 *= g;
                if (f != 0) pred0 *= g;
            }
            REQUIRE(Integer(ker) == pred0);
            REQUIRE(Integer(eb / image) == pred1);
        }
    }
}

TEST_CASE("induced maps on cohomology", "[fgab]") {
    // Multiplication by 3 on 0 -> Z --2--> Z -> 0 induces an isomorphism of H^1 = Z/2.
    FgAbGroup z = FgAbGroup::free(1);
    AbCochainComplex c(0, {z, z}, {GroupHom(z, z, Matrix{{2}})});
    auto h1 = c.cohomology_data(1);
    GroupHom m = induced_hom(h1, h1, Matrix{{3}});
    REQUIRE(is_iso(m));
    GroupHom m2 = induced_hom(h1, h1, Matrix{{2}});
    REQUIRE(m2.is_zero());
}
