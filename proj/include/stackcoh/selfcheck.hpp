#pragma once

// Seeded self checks behind `stackcoh verify`: each suite runs internal
// consistency properties on random samples and a few fixed spaces.

#include "stackcoh/cohomology.hpp"
#include "stackcoh/sampling.hpp"

namespace stackcoh::selfcheck {

namespace detail {

inline void record(SuiteReport& r, std::string name, bool ok, std::string witness = "") {
    r.items.push_back({std::move(name), ok, ok ? "" : std::move(witness)});
}

inline bool unimodular(const Matrix& m) {
    if (m.rows() != m.cols()) return false;
    for (const auto& d : smith_normal_form(m, {false, false, false}).diagonal)
        if (d != 1 && d != -1) return false;
    return true;
}

}  // namespace detail

/// U M V = D with U, V unimodular and d_1 | d_2 | ... on random matrices.
inline SuiteReport snf(std::uint32_t seed = 1, int trials = 150) {
    std::mt19937 rng(seed);
    int bad_product = 0, bad_unimodular = 0, bad_chain = 0;
    std::string witness;
    for (int t = 0; t < trials; ++t) {
        const auto r = static_cast<std::size_t>(sampling::uniform(rng, 1, 6));
        const auto c = static_cast<std::size_t>(sampling::uniform(rng, 1, 6));
        Matrix m = sampling::random_matrix(rng, r, c, -9, 9);
        SmithForm s = smith_normal_form(m);
        if (!(s.u * m * s.v == s.d)) {
            ++bad_product;
            if (witness.empty()) witness = "U M V != D for a " + std::to_string(r) + "x" + std::to_string(c) + " matrix";
        }
        if (!detail::unimodular(s.u) || !detail::unimodular(s.v)) ++bad_unimodular;
        for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i) {
            const Integer& a = s.diagonal[i];
            const Integer& b = s.diagonal[i + 1];
            if (a < 0 || (a == 0 ? b != 0 : b % a != 0)) {
                ++bad_chain;
                break;
            }
        }
    }
    SuiteReport rep;
    detail::record(rep, "U M V = D", bad_product == 0, witness);
    detail::record(rep, "U and V unimodular", bad_unimodular == 0, std::to_string(bad_unimodular) + " failures");
    detail::record(rep, "divisibility chain", bad_chain == 0, std::to_string(bad_chain) + " failures");
    return rep;
}

/// Six-term exactness, Hom(Phi, -) reproducing its argument, and the
/// classification of a few fixed morphisms.
inline SuiteReport picard(std::uint32_t seed = 2, int trials = 60) {
    std::mt19937 rng(seed);
    SuiteReport rep;
    int gz_bad = 0, hom_bad = 0;
    std::string gz_witness;
    for (int t = 0; t < trials; ++t) {
        StrictMor f = sampling::random_mor(rng);
        ExactSequence s = gz_sequence(f);
        if (!s.verdict() && gz_witness.empty()) gz_witness = s.str();
        gz_bad += !s.verdict();
        Pic2Group p = sampling::random_pic(rng);
        HomFromPhi h = hom_from_phi(p);
        hom_bad += !(same_invariants(h.object, p) && classify(h.evaluation).equivalence);
    }
    detail::record(rep, "six-term sequence exact", gz_bad == 0, gz_witness);
    detail::record(rep, "Hom(Phi, P) equivalent to P", hom_bad == 0, std::to_string(hom_bad) + " failures");
    MorClass two = classify(phi_multiply(2));
    detail::record(rep, "Phi --2--> Phi neither faithful nor cofaithful", !two.faithful && !two.cofaithful);
    detail::record(rep, "identity is an equivalence", classify(StrictMor::identity(mk_phi())).equivalence);
    return rep;
}

/// Categorical and cone routes agree; the TU sequence is exact.
inline SuiteReport complex2(std::uint32_t seed = 3, int trials = 40) {
    std::mt19937 rng(seed);
    SuiteReport rep;
    int route_bad = 0, tu_bad = 0;
    std::string witness;
    for (int t = 0; t < trials; ++t) {
        const TwoCochainComplex c = sampling::random_complex(rng).twisted;
        for (int n = c.lo() - 1; n <= c.hi() + 1; ++n) {
            Pic2Invariants inv = invariants(secondary_cohomology(c, n));
            if (inv.pi0.str() != tu_cohomology(c, n).str() || inv.pi1.str() != tu_cohomology(c, n - 1).str()) {
                ++route_bad;
                if (witness.empty()) witness = "degree " + std::to_string(n) + ": " + inv.str();
            }
        }
        tu_bad += !tu_exact_sequence(c).verdict();
    }
    detail::record(rep, "pi^0 H^n = H^n_U = pi^-1 H^n+1", route_bad == 0, witness);
    detail::record(rep, "TU sequence exact", tu_bad == 0, std::to_string(tu_bad) + " failures");
    return rep;
}

/// Star covers of small triangulations, refinement of special covers and
/// the Berishvili axioms on random posets.
inline SuiteReport site(std::uint32_t seed = 4, int trials = 20) {
    SuiteReport rep;
    struct Case {
        std::string name;
        SimplicialComplex k;
        std::string want;
    };
    const std::vector<Case> cases{{"circle", triangle_boundary(), "H^0_U = Z; H^1_U = Z"},
                                  {"sphere", tetrahedron_boundary(), "H^0_U = Z; H^1_U = 0; H^2_U = Z"}};
    for (const auto& c : cases) {
        FacePoset fp = face_poset(c.k);
        PipelineOptions opt;
        opt.cech_cover = star_cover(c.k, fp);
        const int top = static_cast<int>(c.k.counts().size()) - 1;
        std::string got = cohomology(constant(fp.space, discrete(FgAbGroup::free(1))), Mode::cech, top, false, opt).table();
        detail::record(rep, "star cover cohomology of the " + c.name, got == c.want, got);
    }
    std::mt19937 rng(seed);
    int refine_bad = 0, axiom_bad = 0;
    for (int t = 0; t < trials; ++t) {
        FiniteSpace x = sampling::random_space(rng, 5);
        SpecialCover u = sampling::random_special(rng, x);
        refine_bad += !refinement_check(covers(x), u);
        try {
            BerishviliCover b = berishvili_from_special(x, u, 3);
            refine_bad += !berishvili_refines(berishvili_from_special(x, covers(x), 3), b, 3);
        } catch (const ValidationError&) {
            ++axiom_bad;
        }
    }
    detail::record(rep, "minimal cover refines every special cover", refine_bad == 0,
                   std::to_string(refine_bad) + " failures");
    detail::record(rep, "generated Berishvili covers satisfy the axioms", axiom_bad == 0,
                   std::to_string(axiom_bad) + " failures");
    return rep;
}

/// The prestack verification suite, the stack check of elementary
/// prestacks and stalk invariance under stackification.
inline SuiteReport prestack(const Prestack& p, int max_degree) {
    SuiteReport rep = verification_suite(p, max_degree);
    for (auto& it : rep.items) it.name = p.name() + ": " + it.name;
    const FiniteSpace& x = p.space();
    detail::record(rep, p.name() + ": elementary prestack of stalks is a stack",
                   stack_check(elementary_of_stalks(p)).holds);
    Prestack s = stackify(p);
    bool stalks = true;
    for (std::size_t pt = 0; pt < x.size(); ++pt) stalks = stalks && same_invariants(s.stalk(pt), p.stalk(pt));
    detail::record(rep, p.name() + ": stackification keeps stalks", stalks);
    return rep;
}

}  // namespace stackcoh::selfcheck
