#pragma once

// Kernels, cokernels (plain and relative), the six-term pi sequence,
// Hom(Phi, -) and colimits over finite directed posets.

#include "stackcoh/picard.hpp"
#include "stackcoh/sequence.hpp"

namespace stackcoh {

struct KernelData {
    Pic2Group object;
    StrictMor inclusion;  // Ker -> A
    Track kappa;          // 0 => f . inclusion
    Subquotient objects;  // C0 of Ker inside C0(A) + C1(B)
};

struct CokernelData {
    Pic2Group object;
    StrictMor projection;  // B -> Coker (C -> Coker in the relative case)
    Track tau;             // 0 => projection . g
};

namespace detail {

/// Objects (a, m) of A x C1(B) with f0 a = d m and g1 m = alpha a; arrows C1(A).
inline KernelData relative_kernel_impl(const StrictMor& f, const StrictMor& g, const Matrix& alpha) {
    const Pic2Group& a = f.source();
    const Pic2Group& b = f.target();
    const Pic2Group& c = g.target();
    const std::size_t ga0 = a.c0().ngens(), gb1 = b.c1().ngens(), gb0 = b.c0().ngens(), gc1 = c.c1().ngens();

    FgAbGroup ambient = direct_sum({a.c0(), b.c1()});
    Matrix sys(gb0 + gc1, ga0 + gb1);
    sys.set_block(0, 0, f.f0().matrix());
    sys.set_block(0, ga0, -b.d().matrix());
    sys.set_block(gb0, 0, -alpha);
    sys.set_block(gb0, ga0, g.f1().matrix());
    Subquotient objs = kernel_of(GroupHom(ambient, direct_sum({b.c0(), c.c1()}), sys));

    const std::size_t gk = objs.group().ngens();
    Matrix la = objs.lift().block(0, ga0, 0, gk);
    Matrix lm = objs.lift().block(ga0, ga0 + gb1, 0, gk);

    Matrix dk(gk, a.c1().ngens());
    for (std::size_t x = 0; x < a.c1().ngens(); ++x) {
        Vec z = a.d().matrix().col(x);
        Vec fx = f.f1().matrix().col(x);
        z.insert(z.end(), fx.begin(), fx.end());
        dk.set_col(x, objs.classify(z));
    }
    // Only the diagonal (q) part of the pulled-back braid is kept: the
    // off-diagonal part depends on the monoidal constraint of f.
    BetaValues beta;
    for (auto& [p, v] : a.pullback(la))
        if (p.first == p.second) beta.emplace(p, std::move(v));
    Pic2Group k(a.c1(), objs.group(), dk, beta);
    StrictMor incl(k, a, Matrix::identity(a.c1().ngens()), la);
    Track kappa(StrictMor::zero(k, b), compose(f, incl), lm);
    return {k, incl, kappa, objs};
}

/// C0 = C0(C); C1 = C1(C) + C0(B) modulo (g1 x, -d x) and (-alpha a, f0 a);
/// d(m, b) = d m + g0 b.
inline CokernelData relative_cokernel_impl(const StrictMor& f, const StrictMor& g, const Matrix& alpha) {
    const Pic2Group& b = g.source();
    const Pic2Group& c = g.target();
    const std::size_t gc1 = c.c1().ngens(), gb0 = b.c0().ngens(), gc0 = c.c0().ngens();
    const std::size_t n = gc1 + gb0;

    std::vector<Vec> rows;
    auto push = [&](const Vec& top, const Vec& bottom) {
        Vec r(n);
        for (std::size_t i = 0; i < gc1; ++i) r[i] = top[i];
        for (std::size_t i = 0; i < gb0; ++i) r[gc1 + i] = bottom[i];
        rows.push_back(std::move(r));
    };
    const Vec zero1(gc1), zero0(gb0);
    for (std::size_t r = 0; r < c.c1().relations().rows(); ++r) push(c.c1().relations().row(r), zero0);
    for (std::size_t r = 0; r < b.c0().relations().rows(); ++r) push(zero1, b.c0().relations().row(r));
    for (std::size_t x = 0; x < b.c1().ngens(); ++x) {
        Vec dx = b.d().matrix().col(x);
        for (auto& v : dx) v = -v;
        push(g.f1().matrix().col(x), dx);
    }
    for (std::size_t i = 0; i < f.source().c0().ngens(); ++i) {
        Vec al = alpha.col(i);
        for (auto& v : al) v = -v;
        push(al, f.f0().matrix().col(i));
    }
    FgAbGroup c1(n, Matrix::from_rows(rows, n));

    Matrix d(gc0, n);
    d.set_block(0, 0, c.d().matrix());
    d.set_block(0, gc1, g.f0().matrix());
    Pic2Group q(c1, c.c0(), d, c.beta_terms());

    Matrix p1(n, gc1);
    p1.set_block(0, 0, Matrix::identity(gc1));
    StrictMor proj(c, q, p1, Matrix::identity(gc0));
    Matrix t(n, gb0);
    t.set_block(gc1, 0, Matrix::identity(gb0));
    Track tau(StrictMor::zero(b, q), compose(proj, g), t);
    return {q, proj, tau};
}

}  // namespace detail

inline KernelData kernel(const StrictMor& f) {
    const Pic2Group& b = f.target();
    StrictMor g = StrictMor::zero(b, Pic2Group());
    return detail::relative_kernel_impl(f, g, Matrix(0, f.source().c0().ngens()));
}

inline CokernelData cokernel(const StrictMor& f) {
    StrictMor z = StrictMor::zero(Pic2Group(), f.source());
    return detail::relative_cokernel_impl(z, f, Matrix(f.target().c1().ngens(), 0));
}

/// Kernel of f relative to a track alpha : 0 => g f.
inline KernelData relative_kernel(const StrictMor& f, const StrictMor& g, const Track& alpha) {
    Track check(StrictMor::zero(f.source(), g.target()), compose(g, f), alpha.matrix());
    return detail::relative_kernel_impl(f, g, alpha.matrix());
}

/// Cokernel of g relative to a track alpha : 0 => g f.
inline CokernelData relative_cokernel(const StrictMor& f, const StrictMor& g, const Track& alpha) {
    Track check(StrictMor::zero(f.source(), g.target()), compose(g, f), alpha.matrix());
    return detail::relative_cokernel_impl(f, g, alpha.matrix());
}

/// 0 -> pi1 Ker -> pi1 A -> pi1 B -> pi0 Ker -> pi0 A -> pi0 B.
inline ExactSequence gz_sequence(const StrictMor& f) {
    KernelData k = kernel(f);
    const Pic2Group& b = f.target();
    Subquotient b1 = b.pi1_data();
    Subquotient k0 = k.object.pi0_data();
    const std::size_t ga0 = f.source().c0().ngens();
    Matrix delta(k0.group().ngens(), b1.group().ngens());
    for (std::size_t j = 0; j < b1.group().ngens(); ++j) {
        Vec z(ga0);
        Vec m = b1.lift().col(j);
        z.insert(z.end(), m.begin(), m.end());
        delta.set_col(j, k0.classify(k.objects.classify(z)));
    }
    return make_sequence({"pi1 Ker", "pi1 A", "pi1 B", "pi0 Ker", "pi0 A", "pi0 B"},
                         {k.inclusion.pi1_map(), f.pi1_map(), GroupHom(b1.group(), k0.group(), delta),
                          k.inclusion.pi0_map(), f.pi0_map()},
                         true, false);
}

struct HomFromPhi {
    Pic2Group object;
    StrictMor evaluation;  // f -> f0(1)
};

/// Strict morphisms Phi -> P and their tracks.  A morphism is a pair (x, y)
/// with y = f1(1) forced to equal q(x); a track is an element of C1.
inline HomFromPhi hom_from_phi(const Pic2Group& p) {
    const std::size_t g0 = p.c0().ngens(), g1 = p.c1().ngens();
    FgAbGroup ambient = direct_sum({p.c0(), p.c1()});
    Matrix h(g1, g0 + g1);
    for (std::size_t i = 0; i < g0; ++i) {
        Vec qi = p.q(unit_vec(g0, i));
        for (std::size_t k = 0; k < g1; ++k) h(k, i) = -qi[k];
    }
    h.set_block(0, g0, Matrix::identity(g1));
    Subquotient objs = kernel_of(GroupHom(ambient, p.c1(), h));
    const std::size_t gh = objs.group().ngens();
    Matrix lx = objs.lift().block(0, g0, 0, gh);
    Matrix dh(gh, g1);
    for (std::size_t z = 0; z < g1; ++z) {
        Vec v = p.d().matrix().col(z);
        v.resize(g0 + g1);
        dh.set_col(z, objs.classify(v));
    }
    Pic2Group hom(p.c1(), objs.group(), dh, p.pullback(lx));
    return {hom, StrictMor(hom, p, Matrix::identity(g1), lx)};
}

/// Diagram over a finite poset with strict, strictly functorial transition maps.
struct DirectedDiagram {
    std::vector<Pic2Group> values;
    std::vector<std::vector<bool>> leq;  // leq[i][j] iff i <= j
    std::map<GenPair, StrictMor> maps;   // one per i < j
};

struct ColimitData {
    Pic2Group object;
    std::vector<StrictMor> inclusions;
};

namespace detail {

inline void validate_directed(const DirectedDiagram& dg) {
    const std::size_t n = dg.values.size();
    if (n == 0) throw ValidationError("colimit over an empty poset");
    if (dg.leq.size() != n) throw ValidationError("order relation has wrong size");
    for (const auto& row : dg.leq)
        if (row.size() != n) throw ValidationError("order relation has wrong size");
    for (std::size_t i = 0; i < n; ++i) {
        if (!dg.leq[i][i]) throw ValidationError("order relation is not reflexive at " + std::to_string(i));
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && dg.leq[i][j] && dg.leq[j][i])
                throw ValidationError("order relation is not antisymmetric at " + pair_str({i, j}));
            for (std::size_t k = 0; k < n; ++k)
                if (dg.leq[i][j] && dg.leq[j][k] && !dg.leq[i][k])
                    throw ValidationError("order relation is not transitive at " + pair_str({i, k}));
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            bool bounded = false;
            for (std::size_t k = 0; k < n && !bounded; ++k) bounded = dg.leq[i][k] && dg.leq[j][k];
            if (!bounded) throw ValidationError("index poset is not directed: " + pair_str({i, j}) + " has no upper bound");
        }
}

inline Matrix transition0(const DirectedDiagram& dg, std::size_t i, std::size_t j) {
    if (i == j) return Matrix::identity(dg.values[i].c0().ngens());
    return dg.maps.at({i, j}).f0().matrix();
}

}  // namespace detail

/// Chosen least upper bound: the smallest-index minimal upper bound.
inline std::size_t chosen_lub(const DirectedDiagram& dg, std::size_t i, std::size_t j) {
    const std::size_t n = dg.values.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (!dg.leq[i][k] || !dg.leq[j][k]) continue;
        bool minimal = true;
        for (std::size_t u = 0; u < n && minimal; ++u)
            if (u != k && dg.leq[i][u] && dg.leq[j][u] && dg.leq[u][k]) minimal = false;
        if (minimal) return k;
    }
    throw ValidationError("index poset is not directed");
}

inline ColimitData colim_directed(const DirectedDiagram& dg) {
    detail::validate_directed(dg);
    const std::size_t n = dg.values.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !dg.leq[i][j]) continue;
            auto it = dg.maps.find({i, j});
            if (it == dg.maps.end()) throw ValidationError("missing transition map " + detail::pair_str({i, j}));
            if (it->second.source().c0().ngens() != dg.values[i].c0().ngens() ||
                it->second.target().c0().ngens() != dg.values[j].c0().ngens() ||
                it->second.source().c1().ngens() != dg.values[i].c1().ngens() ||
                it->second.target().c1().ngens() != dg.values[j].c1().ngens())
                throw ValidationError("transition map " + detail::pair_str({i, j}) + " has wrong endpoints");
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (i == j || j == k || !dg.leq[i][j] || !dg.leq[j][k]) continue;
                StrictMor via = compose(dg.maps.at({j, k}), dg.maps.at({i, j}));
                const StrictMor& direct = dg.maps.at({i, k});
                if (!via.f0().equals(direct.f0()) || !via.f1().equals(direct.f1()))
                    throw ValidationError("transition maps are not strictly functorial at " + std::to_string(i) + " <= " +
                                          std::to_string(j) + " <= " + std::to_string(k) +
                                          "; only identity coherence is supported");
            }

    std::vector<std::size_t> o0(n + 1), o1(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        o0[i + 1] = o0[i] + dg.values[i].c0().ngens();
        o1[i + 1] = o1[i] + dg.values[i].c1().ngens();
    }
    std::vector<Vec> r0, r1;
    auto glue = [](std::vector<Vec>& rows, std::size_t total, const FgAbGroup& g, std::size_t off) {
        for (std::size_t r = 0; r < g.relations().rows(); ++r) {
            Vec v(total);
            for (std::size_t c = 0; c < g.ngens(); ++c) v[off + c] = g.relations()(r, c);
            rows.push_back(std::move(v));
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        glue(r0, o0[n], dg.values[i].c0(), o0[i]);
        glue(r1, o1[n], dg.values[i].c1(), o1[i]);
    }
    for (const auto& [p, m] : dg.maps) {
        auto [i, j] = p;
        for (std::size_t a = 0; a < m.f0().matrix().cols(); ++a) {
            Vec v(o0[n]);
            v[o0[i] + a] = 1;
            for (std::size_t b = 0; b < m.f0().matrix().rows(); ++b) v[o0[j] + b] -= m.f0().matrix()(b, a);
            r0.push_back(std::move(v));
        }
        for (std::size_t a = 0; a < m.f1().matrix().cols(); ++a) {
            Vec v(o1[n]);
            v[o1[i] + a] = 1;
            for (std::size_t b = 0; b < m.f1().matrix().rows(); ++b) v[o1[j] + b] -= m.f1().matrix()(b, a);
            r1.push_back(std::move(v));
        }
    }
    FgAbGroup c0(o0[n], Matrix::from_rows(r0, o0[n]));
    FgAbGroup c1(o1[n], Matrix::from_rows(r1, o1[n]));
    std::vector<Matrix> ds;
    for (const auto& v : dg.values) ds.push_back(v.d().matrix());
    Matrix d = Matrix::direct_sum(ds);

    BetaValues beta;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t x = chosen_lub(dg, i, j);
            Matrix ri = detail::transition0(dg, i, x), rj = detail::transition0(dg, j, x);
            const std::size_t gi = ri.cols();
            BetaValues vals = dg.values[x].pullback(Matrix::hcat({&ri, &rj}, ri.rows()));
            for (const auto& [p, v] : vals) {
                if (p.first >= gi || p.second < gi) continue;
                Vec w(o1[n]);
                for (std::size_t k = 0; k < v.size(); ++k) w[o1[x] + k] = v[k];
                auto [it, fresh] = beta.try_emplace({o0[i] + p.first, o0[j] + p.second - gi}, Vec(o1[n]));
                detail::add_scaled(it->second, w, 1);
            }
        }
    Pic2Group colim(c1, c0, d, beta);
    std::vector<StrictMor> incl;
    for (std::size_t i = 0; i < n; ++i) {
        Matrix e1(o1[n], dg.values[i].c1().ngens()), e0(o0[n], dg.values[i].c0().ngens());
        e1.set_block(o1[i], 0, Matrix::identity(e1.cols()));
        e0.set_block(o0[i], 0, Matrix::identity(e0.cols()));
        incl.emplace_back(dg.values[i], colim, e1, e0);
    }
    return {colim, incl};
}

}  // namespace stackcoh
