#pragma once

// Strict prestacks of presented 2-groups on a finite space, presheaves of
// abelian groups, and the standard constructors.  Values and restrictions
// are produced on demand and cached.

#include "stackcoh/picard_ops.hpp"
#include "stackcoh/space.hpp"

#include <functional>
#include <memory>
#include <mutex>

namespace stackcoh {

class Prestack {
public:
    using ValueFn = std::function<Pic2Group(Open)>;
    /// Restriction P(v) -> P(u) for u a subset of v; both values are passed in.
    using RestrictFn = std::function<StrictMor(Open v, Open u, const Pic2Group& pv, const Pic2Group& pu)>;

    Prestack() = default;
    Prestack(FiniteSpace x, std::string name, ValueFn value, RestrictFn restrict)
        : x_(std::move(x)), name_(std::move(name)), cache_(std::make_shared<Cache>()) {
        cache_->value = std::move(value);
        cache_->restrict = std::move(restrict);
    }

    [[nodiscard]] const FiniteSpace& space() const noexcept { return x_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }

    /// P(u); the empty open has the zero 2-group.
    [[nodiscard]] Pic2Group value(Open u) const {
        if (!x_.is_open(u)) throw ValidationError("prestack evaluated on a non-open set " + x_.open_str(u));
        if (u == 0) return Pic2Group();
        std::lock_guard<std::mutex> lock(cache_->m);
        auto it = cache_->values.find(u);
        if (it != cache_->values.end()) return it->second;
        Pic2Group p = cache_->value(u);
        cache_->values.emplace(u, p);
        return p;
    }

    [[nodiscard]] StrictMor restriction(Open v, Open u) const {
        if (!subset(u, v)) throw ValidationError("restriction needs " + x_.open_str(u) + " inside " + x_.open_str(v));
        Pic2Group pv = value(v), pu = value(u);
        if (u == v) return StrictMor::identity(pv);
        if (u == 0) return StrictMor::zero(pv, pu);
        {
            std::lock_guard<std::mutex> lock(cache_->m);
            auto it = cache_->restrictions.find({v, u});
            if (it != cache_->restrictions.end()) return it->second;
        }
        StrictMor r = cache_->restrict(v, u, pv, pu);
        if (!detail::same_shape(r.source(), pv) || !detail::same_shape(r.target(), pu))
            throw ValidationError("restriction " + x_.open_str(v) + " -> " + x_.open_str(u) + " has wrong endpoints");
        std::lock_guard<std::mutex> lock(cache_->m);
        cache_->restrictions.emplace(std::make_pair(v, u), r);
        return r;
    }

    /// Stalk at x: the value on the minimal open of x.
    [[nodiscard]] Pic2Group stalk(std::size_t x) const { return value(x_.min_open(x)); }

    /// Identity and strict composition on every chain w >= v >= u of the given opens.
    void validate(const std::vector<Open>& opens) const {
        for (Open u : opens) {
            Pic2Group pu = value(u);
            StrictMor id = restriction(u, u);
            (void)pu;
            (void)id;
        }
        for (Open w : opens)
            for (Open v : opens) {
                if (!subset(v, w)) continue;
                StrictMor rwv = restriction(w, v);
                for (Open u : opens) {
                    if (!subset(u, v)) continue;
                    StrictMor a = compose(restriction(v, u), rwv);
                    StrictMor b = restriction(w, u);
                    if (!(a.f0().equals(b.f0()) && a.f1().equals(b.f1())))
                        throw ValidationError("restrictions do not compose strictly on " + x_.open_str(w) + " > " +
                                              x_.open_str(v) + " > " + x_.open_str(u));
                }
            }
    }

private:
    struct Cache {
        std::mutex m;
        ValueFn value;
        RestrictFn restrict;
        std::map<Open, Pic2Group> values;
        std::map<std::pair<Open, Open>, StrictMor> restrictions;
    };

    FiniteSpace x_;
    std::string name_;
    std::shared_ptr<Cache> cache_;
};

/// Openwise strict morphism with exact naturality.
struct PrestackMor {
    Prestack source;
    Prestack target;
    std::function<StrictMor(Open)> at;

    /// Checks endpoints and f(u) r = r f(v) on the given opens.
    void validate(const std::vector<Open>& opens) const {
        for (Open v : opens) {
            StrictMor fv = at(v);
            if (!detail::same_shape(fv.source(), source.value(v)) || !detail::same_shape(fv.target(), target.value(v)))
                throw ValidationError("prestack morphism has wrong endpoints on " + source.space().open_str(v));
            for (Open u : opens) {
                if (!subset(u, v)) continue;
                StrictMor a = compose(at(u), source.restriction(v, u));
                StrictMor b = compose(target.restriction(v, u), fv);
                if (!(a.f0().equals(b.f0()) && a.f1().equals(b.f1())))
                    throw ValidationError("prestack morphism is not natural on " + source.space().open_str(v) +
                                          " > " + source.space().open_str(u));
            }
        }
    }
};

// Constructors -----------------------------------------------------------------

inline Prestack constant(const FiniteSpace& x, const Pic2Group& a, std::string name = "constant") {
    return Prestack(
        x, std::move(name), [a](Open) { return a; },
        [](Open, Open, const Pic2Group& pv, const Pic2Group&) { return StrictMor::identity(pv); });
}

/// f : A -> B on every nonempty open, between constant prestacks.
inline PrestackMor constant_mor(const FiniteSpace& x, const StrictMor& f) {
    Prestack a = constant(x, f.source()), b = constant(x, f.target());
    return {a, b, [f, a, b](Open u) { return u ? f : StrictMor::zero(a.value(u), b.value(u)); }};
}

namespace detail {

/// Projection prod_{x in v} A_x -> prod_{x in u} A_x.
inline StrictMor product_projection(const std::vector<Pic2Group>& family, Open v, Open u, const Pic2Group& pv,
                                    const Pic2Group& pu) {
    Matrix f1(pu.c1().ngens(), pv.c1().ngens()), f0(pu.c0().ngens(), pv.c0().ngens());
    std::size_t r0 = 0, r1 = 0, c0 = 0, c1 = 0;
    for (std::size_t x = 0; x < family.size(); ++x) {
        if (!contains(v, x)) continue;
        const std::size_t g0 = family[x].c0().ngens(), g1 = family[x].c1().ngens();
        if (contains(u, x)) {
            f0.set_block(r0, c0, Matrix::identity(g0));
            f1.set_block(r1, c1, Matrix::identity(g1));
            r0 += g0;
            r1 += g1;
        }
        c0 += g0;
        c1 += g1;
    }
    return StrictMor(pv, pu, f1, f0);
}

}  // namespace detail

/// P(U) = prod_{x in U} A_x with projections.
inline Prestack elementary(const FiniteSpace& x, std::vector<Pic2Group> family, std::string name = "elementary") {
    if (family.size() != x.size())
        throw ValidationError("elementary prestack needs one 2-group per point (" + std::to_string(family.size()) +
                              " given for " + std::to_string(x.size()) + " points)");
    auto fam = std::make_shared<std::vector<Pic2Group>>(std::move(family));
    return Prestack(
        x, std::move(name),
        [fam](Open u) {
            std::vector<Pic2Group> parts;
            for (std::size_t p = 0; p < fam->size(); ++p)
                if (contains(u, p)) parts.push_back((*fam)[p]);
            return product(parts);
        },
        [fam](Open v, Open u, const Pic2Group& pv, const Pic2Group& pu) {
            return detail::product_projection(*fam, v, u, pv, pu);
        });
}

/// i_x(A): A on opens containing x, 0 elsewhere.
inline Prestack skyscraper(const FiniteSpace& x, std::size_t point, const Pic2Group& a,
                           std::string name = "skyscraper") {
    if (point >= x.size()) throw ValidationError("skyscraper point out of range");
    return Prestack(
        x, std::move(name), [a, point](Open u) { return contains(u, point) ? a : Pic2Group(); },
        [point](Open, Open u, const Pic2Group& pv, const Pic2Group& pu) {
            return contains(u, point) ? StrictMor::identity(pv) : StrictMor::zero(pv, pu);
        });
}

/// Explicit tables: a value for every nonempty open and a restriction for
/// every pair v > u of nonempty opens.  Validated in full.
inline Prestack from_tables(const FiniteSpace& x, std::map<Open, Pic2Group> values,
                            std::map<std::pair<Open, Open>, StrictMor> restrictions, std::string name = "table") {
    auto vals = std::make_shared<std::map<Open, Pic2Group>>(std::move(values));
    auto res = std::make_shared<std::map<std::pair<Open, Open>, StrictMor>>(std::move(restrictions));
    std::vector<Open> opens = x.all_opens();
    for (Open u : opens)
        if (u && !vals->count(u)) throw ValidationError("prestack table has no value on " + x.open_str(u));
    for (Open v : opens)
        for (Open u : opens)
            if (u && u != v && subset(u, v) && !res->count({v, u}))
                throw ValidationError("prestack table has no restriction " + x.open_str(v) + " -> " + x.open_str(u));
    Prestack p(
        x, std::move(name), [vals](Open u) { return vals->at(u); },
        [res](Open v, Open u, const Pic2Group&, const Pic2Group&) { return res->at({v, u}); });
    std::vector<Open> nonempty;
    for (Open u : opens)
        if (u) nonempty.push_back(u);
    p.validate(nonempty);
    return p;
}

// Presheaves of abelian groups ----------------------------------------------------

class Presheaf {
public:
    using ValueFn = std::function<FgAbGroup(Open)>;
    using RestrictFn = std::function<GroupHom(Open v, Open u, const FgAbGroup& fv, const FgAbGroup& fu)>;

    Presheaf() = default;
    Presheaf(FiniteSpace x, ValueFn value, RestrictFn restrict)
        : p_(std::move(x), "presheaf",
             [value](Open u) { return discrete(value(u)); },
             [restrict](Open v, Open u, const Pic2Group& pv, const Pic2Group& pu) {
                 return StrictMor(pv, pu, Matrix(0, 0), restrict(v, u, pv.c0(), pu.c0()).matrix());
             }) {}

    [[nodiscard]] const FiniteSpace& space() const noexcept { return p_.space(); }
    [[nodiscard]] FgAbGroup value(Open u) const { return p_.value(u).c0(); }
    [[nodiscard]] GroupHom restriction(Open v, Open u) const { return p_.restriction(v, u).f0(); }
    [[nodiscard]] FgAbGroup stalk(std::size_t x) const { return p_.stalk(x).c0(); }
    /// The same data as a prestack of discrete 2-groups.
    [[nodiscard]] const Prestack& as_prestack() const noexcept { return p_; }

private:
    Prestack p_;
};

/// U -> pi^i P(U) for i = 0 or i = -1, with induced maps.
inline Presheaf pi_presheaf(const Prestack& p, int i) {
    if (i != 0 && i != -1) throw ValidationError("pi presheaves exist for i = 0 and i = -1");
    return Presheaf(
        p.space(), [p, i](Open u) { return i == 0 ? p.value(u).pi0() : p.value(u).pi1(); },
        [p, i](Open v, Open u, const FgAbGroup&, const FgAbGroup&) {
            StrictMor r = p.restriction(v, u);
            return i == 0 ? r.pi0_map() : r.pi1_map();
        });
}

namespace detail {

/// Compatible families (s_x)_{x in u} with s_y = r(s_x) for y <= x, as a
/// subgroup of the sum of stalks over u.
struct CompatibleFamilies {
    std::vector<std::size_t> pts;
    std::vector<std::size_t> offset;
    FgAbGroup ambient;
    Subquotient families;
};

inline CompatibleFamilies compatible_families(const Presheaf& f, Open u) {
    const FiniteSpace& x = f.space();
    CompatibleFamilies c;
    c.pts = x.points(u);
    std::vector<FgAbGroup> stalks;
    std::size_t g = 0;
    for (auto p : c.pts) {
        stalks.push_back(f.stalk(p));
        c.offset.push_back(g);
        g += stalks.back().ngens();
    }
    c.ambient = direct_sum(stalks);
    std::vector<FgAbGroup> targets;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (x index, y index), y < x
    for (std::size_t a = 0; a < c.pts.size(); ++a)
        for (std::size_t b = 0; b < c.pts.size(); ++b)
            if (a != b && x.leq(c.pts[b], c.pts[a])) {
                pairs.emplace_back(a, b);
                targets.push_back(stalks[b]);
            }
    FgAbGroup tgt = direct_sum(targets);
    Matrix m(tgt.ngens(), g);
    std::size_t row = 0;
    for (auto [a, b] : pairs) {
        Matrix r = f.restriction(x.min_open(c.pts[a]), x.min_open(c.pts[b])).matrix();
        m.set_block(row, c.offset[a], r);
        m.set_block(row, c.offset[b], -Matrix::identity(stalks[b].ngens()));
        row += stalks[b].ngens();
    }
    c.families = kernel_of(GroupHom(c.ambient, tgt, m));
    return c;
}

}  // namespace detail

/// F^+(U) = compatible families of stalks over U; on a finite space this is
/// the sheafification.
inline Presheaf sheafify_presheaf(const Presheaf& f) {
    return Presheaf(
        f.space(), [f](Open u) { return detail::compatible_families(f, u).families.group(); },
        [f](Open v, Open u, const FgAbGroup& fv, const FgAbGroup& fu) {
            auto cv = detail::compatible_families(f, v);
            auto cu = detail::compatible_families(f, u);
            // Project each family over v onto the points of u.
            Matrix proj(cu.ambient.ngens(), cv.ambient.ngens());
            for (std::size_t b = 0; b < cu.pts.size(); ++b) {
                auto it = std::find(cv.pts.begin(), cv.pts.end(), cu.pts[b]);
                const std::size_t a = static_cast<std::size_t>(it - cv.pts.begin());
                const std::size_t n = f.stalk(cu.pts[b]).ngens();
                proj.set_block(cu.offset[b], cv.offset[a], Matrix::identity(n));
            }
            GroupHom h = induced_hom(cv.families, cu.families, proj);
            return GroupHom(fv, fu, h.matrix());
        });
}

}  // namespace stackcoh
