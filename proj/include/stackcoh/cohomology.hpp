#pragma once

// Cohomology of prestacks on finite spaces: Cech and Berishvili pipelines,
// their comparison, the TU sequence of a space, and the verification suite.

#include "stackcoh/stack.hpp"

#include <sstream>

namespace stackcoh {

enum class Mode { cech, berishvili };

inline std::string mode_name(Mode m) { return m == Mode::cech ? "cech" : "berishvili"; }

inline Mode parse_mode(const std::string& s) {
    if (s == "cech") return Mode::cech;
    if (s == "berishvili") return Mode::berishvili;
    throw ValidationError("unknown cohomology mode '" + s + "' (expected cech or berishvili)");
}

/// Cover choices; defaults are the minimal special cover and the Berishvili
/// cover it generates.
struct PipelineOptions {
    std::optional<OpenCover> cech_cover;
    std::optional<SpecialCover> berishvili_base;
};

struct SpaceComplex {
    Diagram diagram;
    TwoCochainComplex complex;
};

/// Cover -> diagram -> 2-cochain complex, truncated for degrees <= max_degree.
inline SpaceComplex space_complex(const Prestack& p, Mode mode, int max_degree, const PipelineOptions& opt = {}) {
    if (max_degree < 0) throw ValidationError("maximal degree must be nonnegative");
    const FiniteSpace& x = p.space();
    const std::size_t top = default_truncation(max_degree);
    Diagram dg = [&] {
        if (mode == Mode::cech)
            return cech_diagram_data(opt.cech_cover ? *opt.cech_cover : covers(x).as_family(x), p, top);
        SpecialCover base = opt.berishvili_base ? *opt.berishvili_base : covers(x);
        return berishvili_diagram_data(berishvili_from_special(x, base, top + 1), p, top);
    }();
    TwoCochainComplex c = to_complex(dg.pic);
    return {std::move(dg), std::move(c)};
}

struct DegreeResult {
    int degree = 0;
    FgAbGroup tu;                        // H^n_U
    std::optional<Pic2Group> secondary;  // bold H^n
};

struct CohomologyResult {
    Mode mode = Mode::cech;
    std::vector<DegreeResult> degrees;

    [[nodiscard]] const DegreeResult& at(int n) const {
        for (const auto& d : degrees)
            if (d.degree == n) return d;
        throw ValidationError("degree " + std::to_string(n) + " was not computed");
    }
    /// "H^0_U = Z; H^1_U = Z"
    [[nodiscard]] std::string table() const {
        std::string out;
        for (const auto& d : degrees) {
            if (!out.empty()) out += "; ";
            out += "H^" + std::to_string(d.degree) + "_U = " + d.tu.str();
        }
        return out;
    }
};

inline CohomologyResult cohomology_of(const TwoCochainComplex& c, Mode mode, int max_degree, bool with_secondary) {
    CohomologyResult r;
    r.mode = mode;
    for (int n = 0; n <= max_degree; ++n) {
        DegreeResult d;
        d.degree = n;
        d.tu = tu_cohomology(c, n);
        if (with_secondary) d.secondary = secondary_cohomology(c, n);
        r.degrees.push_back(std::move(d));
    }
    return r;
}

/// H^n_U (and optionally bold H^n) for n = 0 .. max_degree.
inline CohomologyResult cohomology(const Prestack& p, Mode mode, int max_degree, bool with_secondary = false,
                                   const PipelineOptions& opt = {}) {
    return cohomology_of(space_complex(p, mode, max_degree, opt).complex, mode, max_degree, with_secondary);
}

/// A degree above which H^n_U vanishes for the default (or given Cech)
/// cover: the nerve dimension for Cech, the height of the poset for
/// Berishvili on the minimal cover.  Both pi presheaf terms of the TU
/// sequence vanish there.  None for other Berishvili bases.
inline std::optional<int> vanishing_bound(const FiniteSpace& x, Mode mode, const PipelineOptions& opt = {}) {
    if (mode == Mode::cech) {
        auto counts = nerve_counts(opt.cech_cover ? *opt.cech_cover : covers(x).as_family(x));
        return static_cast<int>(counts.size()) - 1;
    }
    if (opt.berishvili_base) return std::nullopt;
    std::size_t longest = 0;
    for (const auto& c : x.chains()) longest = std::max(longest, c.size());
    return static_cast<int>(longest) - 1;
}

namespace detail {

/// Tuplewise f(open(t)) between two diagrams over the same tuples.
inline ComplexMor induced_complex_mor(const PrestackMor& f, const SpaceComplex& a, const SpaceComplex& b) {
    std::vector<StrictMor> comps;
    for (std::size_t n = 0; n < a.diagram.levels.size(); ++n) {
        const DiagramLevel& lv = a.diagram.levels[n];
        const Pic2Group& src = a.complex.object(static_cast<int>(n));
        const Pic2Group& dst = b.complex.object(static_cast<int>(n));
        Matrix m0(dst.c0().ngens(), src.c0().ngens()), m1(dst.c1().ngens(), src.c1().ngens());
        for (std::size_t k = 0; k < lv.tuples.size(); ++k) {
            StrictMor fu = f.at(lv.opens[k]);
            m0.set_block(b.diagram.off0[n][k], a.diagram.off0[n][k], fu.f0().matrix());
            m1.set_block(b.diagram.off1[n][k], a.diagram.off1[n][k], fu.f1().matrix());
        }
        comps.emplace_back(src, dst, m1, m0);
    }
    return ComplexMor(a.complex, b.complex, 0, comps);
}

}  // namespace detail

/// An openwise extension A --i--> B --p--> C of prestacks; alpha(u) is the
/// track 0 => p(u) i(u), natural in u.
struct PrestackExtension {
    PrestackMor i;
    PrestackMor p;
    std::function<Matrix(Open)> alpha;
};

/// The long TU sequence of H^*_U(X, -) along an extension of prestacks.
inline ExtensionLes space_extension_les(const PrestackExtension& e, Mode mode, int max_degree,
                                        const PipelineOptions& opt = {}) {
    SpaceComplex a = space_complex(e.i.source, mode, max_degree, opt);
    SpaceComplex b = space_complex(e.i.target, mode, max_degree, opt);
    SpaceComplex c = space_complex(e.p.target, mode, max_degree, opt);
    Extension ext{detail::induced_complex_mor(e.i, a, b), detail::induced_complex_mor(e.p, b, c), 0, {}};
    for (std::size_t n = 0; n < a.diagram.levels.size(); ++n) {
        const DiagramLevel& lv = a.diagram.levels[n];
        Matrix al(c.complex.object(static_cast<int>(n)).c1().ngens(), a.complex.object(static_cast<int>(n)).c0().ngens());
        for (std::size_t k = 0; k < lv.tuples.size(); ++k)
            al.set_block(c.diagram.off1[n][k], a.diagram.off0[n][k], e.alpha(lv.opens[k]));
        ext.alpha.push_back(std::move(al));
    }
    return extension_les(ext);
}

/// Berishvili cohomology along refinement rounds, from the coarsest special
/// cover down to the minimal one, where refinement reaches a fixed point.
struct RefinementReport {
    std::vector<std::vector<std::string>> rounds;  // per round, H^n_U for n = 0 .. max
    bool changed = false;                          // some round differs from the previous one
    bool stabilized = false;                       // refinement reached its fixed point

    [[nodiscard]] const std::vector<std::string>& final_values() const { return rounds.back(); }
};

inline RefinementReport berishvili_refinement(const Prestack& p, int max_degree) {
    const FiniteSpace& x = p.space();
    RefinementReport r;
    SpecialCover u = whole_cover(x);
    for (std::size_t round = 0; round <= x.size() * x.size(); ++round) {
        PipelineOptions opt;
        opt.berishvili_base = u;
        CohomologyResult h = cohomology(p, Mode::berishvili, max_degree, false, opt);
        std::vector<std::string> vals;
        for (const auto& d : h.degrees) vals.push_back(d.tu.str());
        if (!r.rounds.empty() && vals != r.rounds.back()) r.changed = true;
        r.rounds.push_back(std::move(vals));
        SpecialCover next = refine_special(x, u);
        if (refinement_check(u, next)) {
            r.stabilized = true;
            break;
        }
        u = std::move(next);
    }
    return r;
}

// Comparison ----------------------------------------------------------------------

struct CompareRow {
    int degree = 0;
    std::string cech;
    std::string berishvili;
    [[nodiscard]] bool equal() const { return cech == berishvili; }
};

struct CompareReport {
    std::string direction = "cech -> berishvili";
    std::vector<CompareRow> rows;

    [[nodiscard]] bool agree() const {
        for (const auto& r : rows)
            if (!r.equal()) return false;
        return true;
    }
    [[nodiscard]] std::string str() const {
        std::ostringstream os;
        os << "comparison " << direction << "\n";
        for (const auto& r : rows)
            os << "H^" << r.degree << "_U: cech = " << r.cech << ", berishvili = " << r.berishvili << "  "
               << (r.equal() ? "[equal]" : "[differ]") << "\n";
        return os.str();
    }
};

inline CompareReport compare(const Prestack& p, int max_degree, const PipelineOptions& opt = {}) {
    CohomologyResult c = cohomology(p, Mode::cech, max_degree, false, opt);
    CohomologyResult b = cohomology(p, Mode::berishvili, max_degree, false, opt);
    CompareReport r;
    for (int n = 0; n <= max_degree; ++n) r.rows.push_back({n, c.at(n).tu.str(), b.at(n).tu.str()});
    return r;
}

// TU sequence ---------------------------------------------------------------------

struct SpaceTuSequence {
    ExactSequence sequence;
    /// The pi-groups in the sequence agree with the pipeline applied to the
    /// pi presheaves in discrete mode.
    bool pi_groups_match = true;
    std::vector<std::string> mismatches;

    [[nodiscard]] bool verdict() const { return sequence.verdict() && pi_groups_match; }
};

/// ... -> H^{n+1}(X, pi^-1 P) -> H^n_U(X, P) -> H^n(X, pi^0 P) -> H^{n+2}(X, pi^-1 P) -> ...
/// for n = -2 .. max_degree.
inline SpaceTuSequence space_tu_sequence(const Prestack& p, Mode mode, int max_degree,
                                         const PipelineOptions& opt = {}) {
    SpaceComplex sc = space_complex(p, mode, max_degree, opt);
    SpaceTuSequence out;
    out.sequence = tu_exact_sequence(sc.complex, -2, max_degree);
    CohomologyResult h1 = cohomology(pi_presheaf(p, -1).as_prestack(), mode, max_degree + 1, false, opt);
    CohomologyResult h0 = cohomology(pi_presheaf(p, 0).as_prestack(), mode, max_degree, false, opt);
    for (std::size_t i = 0; i < out.sequence.groups.size(); ++i) {
        const int n = -2 + static_cast<int>(i / 3);
        const std::size_t slot = i % 3;
        if (slot == 1) continue;
        const int deg = slot == 0 ? n + 1 : n;
        const std::string expect = deg < 0 ? "0" : (slot == 0 ? h1 : h0).at(deg).tu.str();
        if (out.sequence.groups[i].str() != expect) {
            out.pi_groups_match = false;
            out.mismatches.push_back(out.sequence.labels[i] + ": " + out.sequence.groups[i].str() + " vs " + expect);
        }
    }
    return out;
}

// Verification suite ---------------------------------------------------------------

struct SuiteItem {
    std::string name;
    bool passed = false;
    std::string witness;
};

struct SuiteReport {
    std::vector<SuiteItem> items;
    [[nodiscard]] bool passed() const {
        for (const auto& i : items)
            if (!i.passed) return false;
        return true;
    }
    [[nodiscard]] std::string str() const {
        std::string out;
        for (const auto& i : items)
            out += (i.passed ? "PASS " : "FAIL ") + i.name + (i.witness.empty() ? "" : "  (" + i.witness + ")") + "\n";
        return out;
    }
};

/// Elementary prestack on the stalks of p.
inline Prestack elementary_of_stalks(const Prestack& p) {
    std::vector<Pic2Group> fam;
    for (std::size_t x = 0; x < p.space().size(); ++x) fam.push_back(p.stalk(x));
    return elementary(p.space(), fam, "elementary(" + p.name() + ")");
}

/// Contraction of the Berishvili complex of an elementary prestack by
/// evaluation at an appended point: (h c)(x_0..x_{n-1})_y = c(x_0..x_{n-1}, y)_y.
/// On the cone complex, H D - D H = (-1)^{n+1}, so a cocycle z in degree n >= 1
/// equals (-1)^n D(H z).
struct ContractionReport {
    bool holds = true;
    std::string witness;
};

inline ContractionReport elementary_contraction_check(const FiniteSpace& x, const std::vector<Pic2Group>& family,
                                                      int max_degree) {
    Prestack p = elementary(x, family);
    const std::size_t top = default_truncation(max_degree);
    BerishviliCover alpha = berishvili_from_special(x, covers(x), top + 1);
    Diagram dg = berishvili_diagram_data(alpha, p, top);
    TwoCochainComplex c = to_complex(dg.pic);
    Cone cone(c);

    // Offset of point y inside the product over the points of u.
    auto inner = [&](Open u, std::size_t y, bool level0) {
        std::size_t o = 0;
        for (std::size_t z = 0; z < y; ++z)
            if (contains(u, z)) o += level0 ? family[z].c0().ngens() : family[z].c1().ngens();
        return o;
    };
    // h : level n -> level n-1 on C0 (level0) or C1.
    auto h = [&](std::size_t n, bool level0) {
        const Pic2Group& src = dg.pic.object(n);
        const Pic2Group& dst = dg.pic.object(n - 1);
        Matrix m(level0 ? dst.c0().ngens() : dst.c1().ngens(), level0 ? src.c0().ngens() : src.c1().ngens());
        const DiagramLevel& lo = dg.levels[n - 1];
        const DiagramLevel& hi = dg.levels[n];
        for (std::size_t k = 0; k < lo.tuples.size(); ++k)
            for (std::size_t y : x.points(lo.opens[k])) {
                Tuple t = lo.tuples[k];
                t.push_back(y);
                const std::size_t r = hi.index.at(t);
                const std::size_t g = level0 ? family[y].c0().ngens() : family[y].c1().ngens();
                const std::size_t row = (level0 ? dg.off0 : dg.off1)[n - 1][k] + inner(lo.opens[k], y, level0);
                const std::size_t col = (level0 ? dg.off0 : dg.off1)[n][r] + inner(hi.opens[r], y, level0);
                m.set_block(row, col, Matrix::identity(g));
            }
        return m;
    };

    for (int n = 1; n <= max_degree; ++n) {
        const auto un = static_cast<std::size_t>(n);
        Matrix hn = Matrix::direct_sum({h(un, true), h(un + 1, false)});  // T^n -> T^{n-1}
        Subquotient z = kernel_of(cone.differential(n));
        Matrix back = cone.differential(n - 1).matrix() * hn;
        const Integer sign = n % 2 ? -1 : 1;
        for (std::size_t j = 0; j < z.lift().cols(); ++j) {
            Vec v = z.lift().col(j);
            Vec w = back.apply(v);
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = sign * w[i] - v[i];
            if (!cone.group(n).is_zero(w))
                return {false, "contraction fails on cocycle " + std::to_string(j) + " in degree " + std::to_string(n)};
        }
    }
    return {};
}

/// Elementary bounds: H^n_U = 0 for n > 0, bold H^n = 0 for n > 1, pi^0 bold H^1 = 0.
inline SuiteItem elementary_bounds(const Prestack& elem, int max_degree) {
    SuiteItem item{"elementary bounds", true, ""};
    CohomologyResult h = cohomology(elem, Mode::berishvili, max_degree, true);
    for (const auto& d : h.degrees) {
        auto inv = invariants(*d.secondary);
        if (d.degree > 0 && !d.tu.is_trivial()) {
            item = {item.name, false, "H^" + std::to_string(d.degree) + "_U = " + d.tu.str()};
            break;
        }
        if (d.degree > 1 && !(inv.pi0.is_trivial() && inv.pi1.is_trivial())) {
            item = {item.name, false, "bold H^" + std::to_string(d.degree) + " is " + inv.str()};
            break;
        }
        if (d.degree == 1 && !inv.pi0.is_trivial()) {
            item = {item.name, false, "pi^0 of bold H^1 is " + inv.pi0.str()};
            break;
        }
    }
    return item;
}

/// Refinement killing a cocycle of a prestack whose stalks all vanish: the
/// Berishvili cover generated by the minimal special cover refines alpha, and
/// each component of the cocycle restricts into a stalk.
struct KillReport {
    bool refines = false;
    bool cocycle = false;
    bool nonzero = false;
    bool killed = false;
    [[nodiscard]] bool passed() const { return refines && cocycle && nonzero && killed; }
};

/// z is a cone cochain in degree n of the Berishvili complex of q over alpha.
inline KillReport refinement_kill(const Prestack& q, const BerishviliCover& alpha, int n, const Vec& z) {
    const FiniteSpace& x = q.space();
    for (std::size_t p = 0; p < x.size(); ++p)
        if (!q.stalk(p).c0().is_trivial() || !q.stalk(p).c1().is_trivial())
            throw ValidationError("refinement_kill needs a prestack with zero stalks");
    const auto top = static_cast<std::size_t>(n + 2);
    BerishviliCover beta = berishvili_from_special(x, covers(x), top + 1);
    KillReport r;
    r.refines = berishvili_refines(beta, alpha, top + 1);
    if (!r.refines) return r;
    RefinementMap rm = berishvili_refinement_map(q, alpha, beta, top);
    Cone cone_a(rm.map.source()), cone_b(rm.map.target());
    r.cocycle = cone_a.differential(n).target().is_zero(cone_a.differential(n).matrix().apply(z));
    r.nonzero = !cone_a.group(n).is_zero(z);
    r.killed = cone_b.group(n).is_zero(rm.map.cone_map(n).apply(z));
    return r;
}

/// Prestack equal to p on the whole space and zero on every smaller open.
inline Prestack global_only(const Prestack& p) {
    const Open whole = p.space().whole();
    return Prestack(
        p.space(), "global(" + p.name() + ")", [p, whole](Open u) { return u == whole ? p.value(u) : Pic2Group(); },
        [](Open, Open, const Pic2Group& pv, const Pic2Group& pu) { return StrictMor::zero(pv, pu); });
}

/// Runs (a) the elementary contraction, (b) the refinement constructor, (c)
/// elementary bounds and (d) invariance of Berishvili cohomology under
/// stackification.
inline SuiteReport verification_suite(const Prestack& p, int max_degree) {
    const FiniteSpace& x = p.space();
    SuiteReport rep;
    std::vector<Pic2Group> stalks;
    for (std::size_t i = 0; i < x.size(); ++i) stalks.push_back(p.stalk(i));

    ContractionReport con = elementary_contraction_check(x, stalks, max_degree);
    rep.items.push_back({"elementary contraction", con.holds, con.witness});

    {
        SuiteItem item{"refinement kills cocycles", true, ""};
        bool has_top = false;
        for (std::size_t i = 0; i < x.size(); ++i) has_top = has_top || x.min_open(i) == x.whole();
        Pic2Group g = p.value(x.whole());
        std::optional<std::size_t> gen;
        for (std::size_t j = 0; j < g.c0().ngens() && !gen; ++j)
            if (!g.c0().is_zero(unit_vec(g.c0().ngens(), j))) gen = j;
        if (has_top || !gen) {
            item.witness = "not applicable: no global object away from the stalks";
        } else {
            Prestack q = global_only(p);
            BerishviliCover alpha = berishvili_from_special(x, whole_cover(x), 3);
            // The constant family (s, s, ..., s) over alpha(x) = X is a 0-cocycle.
            TwoCochainComplex c = to_complex(berishvili_diagram(alpha, q, 2));
            Vec z(Cone(c).group(0).ngens());
            for (std::size_t k = 0; k < x.size(); ++k) z[k * g.c0().ngens() + *gen] = 1;
            KillReport kr = refinement_kill(q, alpha, 0, z);
            item.passed = kr.passed();
            if (!item.passed)
                item.witness = std::string("refines=") + (kr.refines ? "1" : "0") + " cocycle=" +
                               (kr.cocycle ? "1" : "0") + " nonzero=" + (kr.nonzero ? "1" : "0") +
                               " killed=" + (kr.killed ? "1" : "0");
        }
        rep.items.push_back(item);
    }

    rep.items.push_back(elementary_bounds(elementary(x, stalks), max_degree));

    {
        SuiteItem item{"invariance under stackification", true, ""};
        Prestack s = stackify(p);
        CohomologyResult a = cohomology(p, Mode::berishvili, max_degree);
        CohomologyResult b = cohomology(s, Mode::berishvili, max_degree);
        if (a.table() != b.table()) item = {item.name, false, a.table() + " vs " + b.table()};
        rep.items.push_back(item);
    }
    return rep;
}

}  // namespace stackcoh
