#pragma once

// Cech and Berishvili precosimplicial diagrams of a prestack.

#include "stackcoh/cosimplicial.hpp"
#include "stackcoh/prestack.hpp"

namespace stackcoh {

using Tuple = std::vector<std::size_t>;

/// One level of a diagram: tuples with their opens, and an index by tuple.
struct DiagramLevel {
    std::vector<Tuple> tuples;
    std::vector<Open> opens;
    std::map<Tuple, std::size_t> index;

    void add(Tuple t, Open u) {
        index.emplace(t, tuples.size());
        tuples.push_back(std::move(t));
        opens.push_back(u);
    }
};

/// A strict diagram prod_t P(open(t)) together with its tuple bookkeeping:
/// off0[n][k] / off1[n][k] is the first C0 / C1 coordinate of tuple k at level n.
struct Diagram {
    std::vector<DiagramLevel> levels;
    std::vector<std::vector<std::size_t>> off0, off1;
    PrecosimplicialPic pic;
};

namespace detail {

inline Diagram assemble(const Prestack& p, std::vector<DiagramLevel> levels) {
    std::vector<Pic2Group> objs;
    std::vector<std::vector<std::size_t>> off0, off1;
    for (const auto& lv : levels) {
        std::vector<Pic2Group> parts;
        off0.emplace_back();
        off1.emplace_back();
        std::size_t a = 0, b = 0;
        for (Open u : lv.opens) {
            parts.push_back(p.value(u));
            off0.back().push_back(a);
            off1.back().push_back(b);
            a += parts.back().c0().ngens();
            b += parts.back().c1().ngens();
        }
        objs.push_back(product(parts));
    }
    std::vector<std::vector<StrictMor>> cof;
    for (std::size_t n = 0; n + 1 < levels.size(); ++n) {
        cof.emplace_back();
        const DiagramLevel& src = levels[n];
        const DiagramLevel& dst = levels[n + 1];
        for (std::size_t i = 0; i <= n + 1; ++i) {
            Matrix f0(objs[n + 1].c0().ngens(), objs[n].c0().ngens());
            Matrix f1(objs[n + 1].c1().ngens(), objs[n].c1().ngens());
            for (std::size_t r = 0; r < dst.tuples.size(); ++r) {
                Tuple face = dst.tuples[r];
                face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
                auto it = src.index.find(face);
                if (it == src.index.end()) throw ValidationError("diagram face is missing");
                const std::size_t c = it->second;
                StrictMor res = p.restriction(src.opens[c], dst.opens[r]);
                f0.set_block(off0[n + 1][r], off0[n][c], res.f0().matrix());
                f1.set_block(off1[n + 1][r], off1[n][c], res.f1().matrix());
            }
            cof.back().emplace_back(objs[n], objs[n + 1], f1, f0);
        }
    }
    PrecosimplicialPic pic(objs, cof);
    return {std::move(levels), std::move(off0), std::move(off1), std::move(pic)};
}

}  // namespace detail

/// Cech tuples up to level top: ordered index tuples with repeats, tuples with
/// empty intersection dropped.
inline std::vector<DiagramLevel> cech_levels(const OpenCover& cover, std::size_t top) {
    std::vector<DiagramLevel> levels(1);
    for (std::size_t i = 0; i < cover.opens.size(); ++i)
        if (cover.opens[i]) levels[0].add({i}, cover.opens[i]);
    for (std::size_t n = 1; n <= top; ++n) {
        DiagramLevel next;
        const DiagramLevel& prev = levels.back();
        for (std::size_t k = 0; k < prev.tuples.size(); ++k)
            for (std::size_t i = 0; i < cover.opens.size(); ++i) {
                Open u = prev.opens[k] & cover.opens[i];
                if (!u) continue;
                Tuple t = prev.tuples[k];
                t.push_back(i);
                next.add(std::move(t), u);
            }
        levels.push_back(std::move(next));
    }
    return levels;
}

inline Diagram cech_diagram_data(const OpenCover& cover, const Prestack& p, std::size_t top) {
    return detail::assemble(p, cech_levels(cover, top));
}

inline PrecosimplicialPic cech_diagram(const OpenCover& cover, const Prestack& p, std::size_t top) {
    return cech_diagram_data(cover, p, top).pic;
}

inline PrecosimplicialPic cech_diagram(const SpecialCover& cover, const Prestack& p, std::size_t top) {
    return cech_diagram(cover.as_family(p.space()), p, top);
}

/// Tuple counts per level of the Cech diagram.
inline std::vector<std::size_t> cech_tuple_counts(const OpenCover& cover, std::size_t top) {
    std::vector<std::size_t> out;
    for (const auto& lv : cech_levels(cover, top)) out.push_back(lv.tuples.size());
    return out;
}

/// Berishvili tuples up to level top: defined tuples of length n+1 at level n.
inline std::vector<DiagramLevel> berishvili_levels(const BerishviliCover& alpha, std::size_t top) {
    if (top + 1 > alpha.max_length())
        throw ValidationError("Berishvili cover enumerated to length " + std::to_string(alpha.max_length()) +
                              ", level " + std::to_string(top) + " needs " + std::to_string(top + 1));
    std::vector<DiagramLevel> levels(top + 1);
    for (const auto& [t, u] : alpha.values())
        if (t.size() <= top + 1) levels[t.size() - 1].add(t, u);
    return levels;
}

inline Diagram berishvili_diagram_data(const BerishviliCover& alpha, const Prestack& p, std::size_t top) {
    return detail::assemble(p, berishvili_levels(alpha, top));
}

/// Berishvili diagram: level n is the product over defined tuples of length n+1.
inline PrecosimplicialPic berishvili_diagram(const BerishviliCover& alpha, const Prestack& p, std::size_t top) {
    return berishvili_diagram_data(alpha, p, top).pic;
}

/// Refinement beta <= alpha of Berishvili covers: every beta tuple is alpha
/// defined with a smaller value.
inline bool berishvili_refines(const BerishviliCover& beta, const BerishviliCover& alpha, std::size_t max_len) {
    for (const auto& [t, u] : beta.values())
        if (t.size() <= max_len && (!alpha.defined(t) || !subset(u, alpha.at(t)))) return false;
    return true;
}

/// The strict complex morphism induced by a refinement beta <= alpha:
/// restriction P(alpha(t)) -> P(beta(t)) on every beta tuple.
struct RefinementMap {
    Diagram source;
    Diagram target;
    ComplexMor map;
};

inline RefinementMap berishvili_refinement_map(const Prestack& p, const BerishviliCover& alpha,
                                               const BerishviliCover& beta, std::size_t top) {
    if (!berishvili_refines(beta, alpha, top + 1)) throw ValidationError("Berishvili cover does not refine");
    Diagram da = berishvili_diagram_data(alpha, p, top);
    Diagram db = berishvili_diagram_data(beta, p, top);
    TwoCochainComplex ca = to_complex(da.pic), cb = to_complex(db.pic);
    std::vector<StrictMor> comps;
    for (std::size_t lvl = 0; lvl <= top; ++lvl) {
        const Pic2Group& sa = da.pic.object(lvl);
        const Pic2Group& sb = db.pic.object(lvl);
        Matrix m0(sb.c0().ngens(), sa.c0().ngens()), m1(sb.c1().ngens(), sa.c1().ngens());
        const DiagramLevel& lb = db.levels[lvl];
        const DiagramLevel& la = da.levels[lvl];
        for (std::size_t k = 0; k < lb.tuples.size(); ++k) {
            const std::size_t ka = la.index.at(lb.tuples[k]);
            StrictMor res = p.restriction(la.opens[ka], lb.opens[k]);
            m0.set_block(db.off0[lvl][k], da.off0[lvl][ka], res.f0().matrix());
            m1.set_block(db.off1[lvl][k], da.off1[lvl][ka], res.f1().matrix());
        }
        comps.emplace_back(sa, sb, m1, m0);
    }
    ComplexMor map(ca, cb, 0, comps);
    return {std::move(da), std::move(db), std::move(map)};
}

}  // namespace stackcoh
