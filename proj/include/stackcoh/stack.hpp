#pragma once

// Descent along minimal covers: separated and stack conditions, the two-step
// stackification, weak equivalences and openwise extensions.

#include "stackcoh/site.hpp"

namespace stackcoh {

/// The minimal cover of an open u, indexed by the points of u.
inline OpenCover minimal_cover(const FiniteSpace& x, Open u) {
    OpenCover c;
    for (std::size_t p : x.points(u)) {
        c.opens.push_back(x.min_open(p));
        c.labels.push_back(x.name(p));
    }
    return c;
}

/// H^0 of the Cech complex of the minimal cover of u, with the comparison
/// P(u) -> H^0.
struct Descent {
    Open open = 0;
    std::vector<std::size_t> points;
    Diagram diagram;
    TwoCochainComplex complex;
    SecondaryData h0;
    StrictMor comparison;
};

inline Descent descent(const Prestack& p, Open u) {
    const FiniteSpace& x = p.space();
    Diagram dg = cech_diagram_data(minimal_cover(x, u), p, 2);
    TwoCochainComplex c = to_complex(dg.pic);
    SecondaryData h = secondary_cohomology_data(c, 0);
    const Pic2Group pu = p.value(u);
    const Pic2Group& a0 = c.object(0);
    // Restrictions to every U_x^min; the family is a strict cycle with m = 0.
    Matrix r0(a0.c0().ngens(), pu.c0().ngens()), r1(a0.c1().ngens(), pu.c1().ngens());
    for (std::size_t k = 0; k < dg.levels[0].tuples.size(); ++k) {
        StrictMor r = p.restriction(u, dg.levels[0].opens[k]);
        r0.set_block(dg.off0[0][k], 0, r.f0().matrix());
        r1.set_block(dg.off1[0][k], 0, r.f1().matrix());
    }
    const std::size_t gm = c.object(1).c1().ngens();
    Matrix f0(h.cycles.object.c0().ngens(), pu.c0().ngens());
    for (std::size_t j = 0; j < pu.c0().ngens(); ++j) {
        Vec z = r0.col(j);
        z.resize(z.size() + gm);
        f0.set_col(j, h.cycles.objects.classify(z));
    }
    StrictMor cmp(pu, h.cohomology, r1, f0);
    return {u, x.points(u), std::move(dg), std::move(c), std::move(h), std::move(cmp)};
}

/// Witness of the first open where a descent condition fails.
struct DescentReport {
    bool holds = true;
    std::string witness;
};

namespace detail {

inline std::vector<Open> nonempty_opens(const FiniteSpace& x) {
    std::vector<Open> out;
    for (Open u : x.all_opens())
        if (u) out.push_back(u);
    return out;
}

}  // namespace detail

/// P(u) -> H^0(minimal cover of u) is fully faithful on every open.
inline DescentReport separated_check(const Prestack& p) {
    for (Open u : detail::nonempty_opens(p.space())) {
        StrictMor c = descent(p, u).comparison;
        if (!is_iso(c.pi1_map()) || !is_mono(c.pi0_map()))
            return {false, "descent comparison is not fully faithful on " + p.space().open_str(u)};
    }
    return {};
}

/// P(u) -> H^0(minimal cover of u) is an equivalence on every open.
inline DescentReport stack_check(const Prestack& p) {
    for (Open u : detail::nonempty_opens(p.space()))
        if (!classify(descent(p, u).comparison).equivalence)
            return {false, "descent comparison is not an equivalence on " + p.space().open_str(u)};
    return {};
}

namespace detail {

/// Strict projection of minimal-cover Cech complexes of v onto those of u,
/// for u inside v.
inline ComplexMor descent_projection(const Prestack& p, const Descent& dv, const Descent& du) {
    std::vector<StrictMor> comps;
    for (std::size_t n = 0; n < du.diagram.levels.size(); ++n) {
        const DiagramLevel& lu = du.diagram.levels[n];
        const DiagramLevel& lv = dv.diagram.levels[n];
        const Pic2Group& src = dv.complex.object(static_cast<int>(n));
        const Pic2Group& dst = du.complex.object(static_cast<int>(n));
        Matrix s0(dst.c0().ngens(), src.c0().ngens()), s1(dst.c1().ngens(), src.c1().ngens());
        for (std::size_t k = 0; k < lu.tuples.size(); ++k) {
            Tuple t;
            for (std::size_t i : lu.tuples[k]) {
                auto it = std::find(dv.points.begin(), dv.points.end(), du.points[i]);
                t.push_back(static_cast<std::size_t>(it - dv.points.begin()));
            }
            const std::size_t r = lv.index.at(t);
            const Pic2Group val = p.value(lu.opens[k]);
            s0.set_block(du.diagram.off0[n][k], dv.diagram.off0[n][r], Matrix::identity(val.c0().ngens()));
            s1.set_block(du.diagram.off1[n][k], dv.diagram.off1[n][r], Matrix::identity(val.c1().ngens()));
        }
        comps.emplace_back(src, dst, s1, s0);
    }
    return ComplexMor(dv.complex, du.complex, 0, comps);
}

}  // namespace detail

/// One descent step: u -> H^0(minimal cover of u, P).
inline Prestack plus(const Prestack& p) {
    struct Shared {
        std::mutex m;
        std::map<Open, std::shared_ptr<const Descent>> cache;
    };
    auto shared = std::make_shared<Shared>();
    auto get = [p, shared](Open u) {
        {
            std::lock_guard<std::mutex> lock(shared->m);
            auto it = shared->cache.find(u);
            if (it != shared->cache.end()) return it->second;
        }
        auto d = std::make_shared<const Descent>(descent(p, u));
        std::lock_guard<std::mutex> lock(shared->m);
        return shared->cache.emplace(u, d).first->second;
    };
    return Prestack(
        p.space(), p.name() + "+", [get](Open u) { return get(u)->h0.cohomology; },
        [p, get](Open v, Open u, const Pic2Group&, const Pic2Group&) {
            auto dv = get(v), du = get(u);
            return secondary_map(detail::descent_projection(p, *dv, *du), 0, dv->h0, du->h0);
        });
}

/// The unit P -> P^+: each P(u) maps to its descent data.
inline PrestackMor plus_unit(const Prestack& p) {
    Prestack q = plus(p);
    return {p, q, [p, q](Open u) { return u ? descent(p, u).comparison : StrictMor::zero(p.value(u), q.value(u)); }};
}

/// Two descent steps, then the stack condition is re-validated.
inline Prestack stackify(const Prestack& p) {
    Prestack s = plus(plus(p));
    DescentReport r = stack_check(s);
    if (!r.holds) throw Error("stackification defect: " + r.witness);
    return s;
}

/// pi^{-1} iso and pi^0 mono on every open, pi^0 epi on every stalk.
inline DescentReport weak_equiv_check(const PrestackMor& f) {
    const FiniteSpace& x = f.source.space();
    for (Open u : detail::nonempty_opens(x)) {
        StrictMor m = f.at(u);
        if (!is_iso(m.pi1_map())) return {false, "pi^-1 is not an isomorphism on " + x.open_str(u)};
        if (!is_mono(m.pi0_map())) return {false, "pi^0 is not a monomorphism on " + x.open_str(u)};
    }
    for (std::size_t p = 0; p < x.size(); ++p)
        if (!is_epi(f.at(x.min_open(p)).pi0_map()))
            return {false, "not locally surjective at " + x.name(p)};
    return {};
}

/// A --i--> B --p--> C with alpha : 0 => p i is an extension: p cofaithful
/// and A -> Ker p an equivalence.
inline bool is_extension(const StrictMor& i, const StrictMor& p, const Track& alpha) {
    if (!classify(p).cofaithful) return false;
    return classify(comparison_to_kernel(i, p, alpha)).equivalence;
}

enum class ExtensionLevel { prestack, stack };

/// Openwise (prestack level) or stalkwise (stack level) extension test.
/// alpha(u) : C0(A(u)) -> C1(C(u)) is the track 0 => p(u) i(u).
inline bool extension_check(const PrestackMor& i, const PrestackMor& p, const std::function<Matrix(Open)>& alpha,
                            ExtensionLevel level) {
    const FiniteSpace& x = i.source.space();
    std::vector<Open> opens;
    if (level == ExtensionLevel::prestack) {
        opens = detail::nonempty_opens(x);
    } else {
        for (std::size_t pt = 0; pt < x.size(); ++pt) opens.push_back(x.min_open(pt));
    }
    for (Open u : opens) {
        StrictMor iu = i.at(u), pu = p.at(u);
        try {
            Track t(StrictMor::zero(iu.source(), pu.target()), compose(pu, iu), alpha(u));
            if (!is_extension(iu, pu, t)) return false;
        } catch (const ValidationError&) {
            return false;
        }
    }
    return true;
}

}  // namespace stackcoh
