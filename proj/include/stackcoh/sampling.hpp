#pragma once

// Seeded random samples of the library's objects: small 2-groups and strict
// morphisms, 2-cochain complexes, finite posets and special covers.  Used by
// the property tests and by the command-line self checks.

#include "stackcoh/complex2.hpp"
#include "stackcoh/space.hpp"

#include <optional>
#include <random>

namespace stackcoh::sampling {

/// Random integer matrix with entries in [lo, hi].
inline Matrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
    return m;
}

inline int uniform(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Free C0, C1 a sum of cyclic groups, d supported on the free part of C1,
/// braid values drawn from the 2-torsion of C1.
inline Pic2Group random_pic(std::mt19937& rng) {
    for (;;) {
        const std::size_t g0 = static_cast<std::size_t>(uniform(rng, 0, 3));
        const std::size_t g1 = static_cast<std::size_t>(uniform(rng, 0, 3));
        std::vector<Integer> orders;
        static const int choices[] = {0, 0, 2, 2, 3, 4, 6};
        for (std::size_t k = 0; k < g1; ++k) orders.emplace_back(choices[uniform(rng, 0, 6)]);
        FgAbGroup c1 = FgAbGroup::from_factors(orders);
        Matrix d(g0, g1);
        for (std::size_t i = 0; i < g0; ++i)
            for (std::size_t k = 0; k < g1; ++k)
                if (orders[k] == 0) d(i, k) = uniform(rng, -2, 2);
        std::vector<BetaTerm> beta;
        std::vector<std::size_t> two_torsion;
        for (std::size_t k = 0; k < g1; ++k)
            if (orders[k] != 0 && orders[k] % 2 == 0) two_torsion.push_back(k);
        if (!two_torsion.empty())
            for (std::size_t i = 0; i < g0; ++i)
                for (std::size_t j = i; j < g0; ++j) {
                    if (uniform(rng, 0, 2) != 0) continue;
                    std::size_t k = two_torsion[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(two_torsion.size()) - 1))];
                    Integer half = orders[k] / 2;
                    beta.push_back({i, j, k, half});
                    if (i != j) beta.push_back({j, i, k, -half});
                }
        try {
            return Pic2Group(c1, FgAbGroup::free(g0), d, beta);
        } catch (const ValidationError&) {
        }
    }
}

/// A random strict morphism a -> b, if one is found within a few attempts.
inline std::optional<StrictMor> random_mor(std::mt19937& rng, const Pic2Group& a, const Pic2Group& b) {
    const std::size_t a0 = a.c0().ngens(), a1 = a.c1().ngens(), b0 = b.c0().ngens(), b1 = b.c1().ngens();
    Matrix rt = b.c0().relations().transpose();
    if (rt.rows() != b0) rt = Matrix(b0, 0);
    IntegerSolver solver(Matrix::hcat({&b.d().matrix(), &rt}, b0));
    Matrix ker = solver.kernel_basis();
    for (int attempt = 0; attempt < 30; ++attempt) {
        Matrix f0 = random_matrix(rng, b0, a0, -2, 2);
        if (attempt % 3 == 2) f0 = Matrix(b0, a0);
        Matrix f1(b1, a1);
        bool ok = true;
        for (std::size_t x = 0; x < a1 && ok; ++x) {
            auto sol = solver.solve(f0.apply(a.d().matrix().col(x)));
            if (!sol) {
                ok = false;
                break;
            }
            Vec v(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(b1));
            for (std::size_t c = 0; c < ker.cols(); ++c) {
                int s = uniform(rng, -1, 1);
                for (std::size_t k = 0; k < b1; ++k) v[k] += s * ker(k, c);
            }
            f1.set_col(x, v);
        }
        if (!ok) continue;
        try {
            return StrictMor(a, b, f1, f0);
        } catch (const ValidationError&) {
        }
    }
    return std::nullopt;
}

inline StrictMor random_mor(std::mt19937& rng) {
    for (;;) {
        Pic2Group a = random_pic(rng), b = random_pic(rng);
        if (auto m = random_mor(rng, a, b)) return *m;
    }
}

inline Vec random_vec(std::mt19937& rng, std::size_t n, int lo = -3, int hi = 3) {
    Vec v(n);
    for (auto& x : v) x = uniform(rng, lo, hi);
    return v;
}

// Complexes ------------------------------------------------------------------

/// Random cochain complex of free groups: ranks[i] in [0, max_rank], d[i] : Z^ranks[i] -> Z^ranks[i+1].
struct FreeComplex {
    std::vector<std::size_t> ranks;
    std::vector<Matrix> d;
};

inline FreeComplex random_free_complex(std::mt19937& rng, std::size_t len, int max_rank) {
    FreeComplex x;
    for (std::size_t i = 0; i < len; ++i) x.ranks.push_back(static_cast<std::size_t>(uniform(rng, 0, max_rank)));
    for (std::size_t i = 0; i + 1 < len; ++i) {
        const std::size_t r0 = x.ranks[i], r1 = x.ranks[i + 1];
        if (i == 0) {
            x.d.push_back(random_matrix(rng, r1, r0, -2, 2));
            continue;
        }
        Matrix k = integer_kernel(x.d.back().transpose());
        Matrix coeff = random_matrix(rng, r1, k.cols(), -1, 1);
        x.d.push_back(coeff * k.transpose());
    }
    return x;
}

/// A sample is a strict complex
///   A^n = K(k : X^n -> X^n) x Phi^{s_n},  d = (dX, dX) on the K part, (0, 2 dW) on Phi,
/// conjugated by a random gauge h^n : C0^n -> C1^{n+1} (which introduces
/// nonzero tracks), and optionally twisted by a 2-torsion track in one degree.
struct ComplexSample {
    int lo = 0;
    int k = 1;
    FreeComplex x;  // K part
    FreeComplex w;  // Phi part
    TwoCochainComplex plain;
    TwoCochainComplex gauged;
    TwoCochainComplex twisted;
    std::vector<Matrix> gauge;  // h^n for n = lo .. hi
};

inline Pic2Group sample_object(int k, std::size_t r, std::size_t s) {
    Matrix kk = Integer(k) * Matrix::identity(r);
    std::vector<Pic2Group> parts{mk_K(GroupHom(FgAbGroup::free(r), FgAbGroup::free(r), kk))};
    for (std::size_t i = 0; i < s; ++i) parts.push_back(mk_phi());
    return product(parts);
}

inline ComplexSample random_complex(std::mt19937& rng, std::size_t max_len = 4) {
    ComplexSample out;
    const std::size_t len = static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(max_len)));
    out.lo = uniform(rng, -1, 1);
    out.k = uniform(rng, 0, 3);
    out.x = random_free_complex(rng, len, 2);
    out.w = random_free_complex(rng, len, 1);

    std::vector<Pic2Group> objs;
    for (std::size_t i = 0; i < len; ++i) objs.push_back(sample_object(out.k, out.x.ranks[i], out.w.ranks[i]));
    auto c0 = [&](std::size_t i) { return objs[i].c0().ngens(); };
    auto c1 = [&](std::size_t i) { return objs[i].c1().ngens(); };
    auto delta = [&](std::size_t i) { return objs[i].d().matrix(); };

    std::vector<Matrix> d0, d1;
    for (std::size_t i = 0; i + 1 < len; ++i) {
        d1.push_back(Matrix::direct_sum({out.x.d[i], Matrix(out.w.ranks[i + 1], out.w.ranks[i])}));
        d0.push_back(Matrix::direct_sum({out.x.d[i], Integer(2) * out.w.d[i]}));
    }
    std::vector<StrictMor> ds;
    for (std::size_t i = 0; i + 1 < len; ++i) ds.emplace_back(objs[i], objs[i + 1], d1[i], d0[i]);
    out.plain = TwoCochainComplex(out.lo, objs, ds, {});

    // Gauge: d0 + delta h, d1 + h delta, tracks -(d1 h + h' d0 + h' delta h).
    for (std::size_t i = 0; i < len; ++i)
        out.gauge.push_back(i + 1 < len ? random_matrix(rng, c1(i + 1), c0(i), -1, 1)
                                        : Matrix(0, c0(i)));
    std::vector<StrictMor> gds;
    for (std::size_t i = 0; i + 1 < len; ++i)
        gds.emplace_back(objs[i], objs[i + 1], d1[i] + out.gauge[i] * delta(i), d0[i] + delta(i + 1) * out.gauge[i]);
    std::vector<Matrix> tracks;
    for (std::size_t i = 0; i + 2 < len; ++i)
        tracks.push_back(-(d1[i + 1] * out.gauge[i] + out.gauge[i + 1] * d0[i] +
                           out.gauge[i + 1] * delta(i + 1) * out.gauge[i]));
    out.gauged = TwoCochainComplex(out.lo, objs, gds, tracks);

    if (len >= 3) {
        const std::size_t i = static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(len) - 3));
        const std::size_t xr0 = out.x.ranks[i], xr2 = out.x.ranks[i + 2];
        Matrix t(c1(i + 2), c0(i));
        for (std::size_t a = 0; a < out.w.ranks[i]; ++a)
            for (std::size_t b = 0; b < out.w.ranks[i + 2]; ++b) t(xr2 + b, xr0 + a) = uniform(rng, 0, 1);
        tracks[i] = tracks[i] + t;
    }
    out.twisted = TwoCochainComplex(out.lo, objs, gds, tracks);
    return out;
}

// Spaces ----------------------------------------------------------------------


/// Random poset on n points: i <= j (i < j) with probability p, then closed.
inline FiniteSpace random_space(std::mt19937& rng, std::size_t n, double p = 0.35) {
    std::bernoulli_distribution coin(p);
    std::vector<std::string> names;
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coin(rng)) rel.emplace_back(i, j);
    return FiniteSpace(names, rel);
}

/// Random special cover: U_x is U_x^min joined with random minimal opens.
inline SpecialCover random_special(std::mt19937& rng, const FiniteSpace& x) {
    std::bernoulli_distribution coin(0.3);
    std::vector<Open> u;
    for (std::size_t p = 0; p < x.size(); ++p) {
        Open v = x.min_open(p);
        for (std::size_t q = 0; q < x.size(); ++q)
            if (coin(rng)) v |= x.min_open(q);
        u.push_back(v);
    }
    return SpecialCover(x, u);
}

}  // namespace stackcoh::sampling
