#pragma once

// Oracle values for the random 2-cochain complexes of stackcoh/sampling.hpp.

#include "stackcoh/complex2.hpp"

#include "generators.hpp"

namespace gen {

/// Cone cohomology of the untwisted sample by an independent computation:
/// K part T^n = X^n + X^{n+1}, D(a, m) = (dX a - k m, -dX m); Phi part
/// H^n(2 dW) + (Z/2)^{s_{n+1}}.
inline std::string oracle_tu(const ComplexSample& s, int n) {
    const int len = static_cast<int>(s.x.ranks.size());
    auto rank = [&](const FreeComplex& f, int deg) -> std::size_t {
        int i = deg - s.lo;
        return i >= 0 && i < len ? f.ranks[static_cast<std::size_t>(i)] : 0;
    };
    auto dx = [&](const FreeComplex& f, int deg) -> Matrix {
        int i = deg - s.lo;
        if (i >= 0 && i + 1 < len) return f.d[static_cast<std::size_t>(i)];
        return Matrix(rank(f, deg + 1), rank(f, deg));
    };
    auto cone_d = [&](int deg) {
        const std::size_t a = rank(s.x, deg), b = rank(s.x, deg + 1), c = rank(s.x, deg + 2);
        Matrix m(b + c, a + b);
        m.set_block(0, 0, dx(s.x, deg));
        m.set_block(0, a, Integer(-s.k) * Matrix::identity(b));
        m.set_block(b, a, -dx(s.x, deg + 1));
        return m;
    };
    std::vector<Integer> f = oracle::middle_cohomology(cone_d(n - 1), cone_d(n), rank(s.x, n) + rank(s.x, n + 1));
    auto w = oracle::middle_cohomology(Integer(2) * dx(s.w, n - 1), Integer(2) * dx(s.w, n), rank(s.w, n));
    f.insert(f.end(), w.begin(), w.end());
    for (std::size_t i = 0; i < rank(s.w, n + 1); ++i) f.emplace_back(2);
    return FgAbGroup::from_factors(f).str();
}

}  // namespace gen
