#pragma once

// Finite (Alexandrov) spaces, finite simplicial complexes, special covers and
// Berishvili covers.  Opens are down-sets of the specialization order and are
// stored as 64-bit point masks.

#include "stackcoh/matrix.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace stackcoh {

using Open = std::uint64_t;

inline bool contains(Open u, std::size_t x) { return (u >> x) & 1U; }
inline bool subset(Open a, Open b) { return (a & ~b) == 0; }
inline std::size_t cardinality(Open u) { return static_cast<std::size_t>(std::popcount(u)); }

class FiniteSpace {
public:
    FiniteSpace() = default;

    /// relations are pairs (a, b) meaning a <= b; the reflexive-transitive
    /// closure is taken and must be antisymmetric.
    FiniteSpace(std::vector<std::string> names, const std::vector<std::pair<std::size_t, std::size_t>>& relations)
        : names_(std::move(names)) {
        const std::size_t n = names_.size();
        if (n == 0) throw ValidationError("space needs at least one point");
        if (n > 64) throw ValidationError("spaces are limited to 64 points");
        below_.assign(n, 0);
        for (std::size_t x = 0; x < n; ++x) below_[x] = Open(1) << x;
        for (auto [a, b] : relations) {
            if (a >= n || b >= n) throw ValidationError("order relation mentions an unknown point");
            below_[b] |= Open(1) << a;
        }
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t x = 0; x < n; ++x) {
                Open acc = below_[x];
                for (std::size_t y = 0; y < n; ++y)
                    if (contains(below_[x], y)) acc |= below_[y];
                if (acc != below_[x]) {
                    below_[x] = acc;
                    changed = true;
                }
            }
        }
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = x + 1; y < n; ++y)
                if (contains(below_[x], y) && contains(below_[y], x))
                    throw ValidationError("order is not antisymmetric: " + names_[x] + " and " + names_[y]);
    }

    [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }
    [[nodiscard]] const std::string& name(std::size_t x) const { return names_.at(x); }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] Open whole() const { return size() == 64 ? ~Open(0) : (Open(1) << size()) - 1; }

    [[nodiscard]] bool leq(std::size_t a, std::size_t b) const { return contains(below_.at(b), a); }
    /// Smallest open containing x: {y : y <= x}.
    [[nodiscard]] Open min_open(std::size_t x) const { return below_.at(x); }

    [[nodiscard]] bool is_open(Open u) const {
        for (std::size_t x = 0; x < size(); ++x)
            if (contains(u, x) && !subset(below_[x], u)) return false;
        return subset(u, whole());
    }

    [[nodiscard]] std::vector<std::size_t> points(Open u) const {
        std::vector<std::size_t> out;
        for (std::size_t x = 0; x < size(); ++x)
            if (contains(u, x)) out.push_back(x);
        return out;
    }

    [[nodiscard]] std::string open_str(Open u) const {
        std::string s = "{";
        for (auto x : points(u)) s += (s.size() > 1 ? "," : "") + names_[x];
        return s + "}";
    }

    /// All opens, by closing the minimal opens under unions.  Exponential in
    /// general; intended for small spaces.
    [[nodiscard]] std::vector<Open> all_opens(std::size_t limit = 1U << 16) const {
        std::set<Open> seen{0};
        std::vector<Open> frontier{0};
        while (!frontier.empty()) {
            std::vector<Open> next;
            for (Open u : frontier)
                for (std::size_t x = 0; x < size(); ++x) {
                    Open v = u | below_[x];
                    if (seen.insert(v).second) {
                        if (seen.size() > limit) throw Error("too many opens to enumerate");
                        next.push_back(v);
                    }
                }
            frontier = std::move(next);
        }
        return {seen.begin(), seen.end()};
    }

    /// Order complex: chains x_0 < ... < x_k, as sorted point lists.
    [[nodiscard]] std::vector<std::vector<std::size_t>> chains() const {
        std::vector<std::vector<std::size_t>> out;
        std::vector<std::vector<std::size_t>> frontier;
        for (std::size_t x = 0; x < size(); ++x) frontier.push_back({x});
        while (!frontier.empty()) {
            std::vector<std::vector<std::size_t>> next;
            for (const auto& c : frontier) {
                out.push_back(c);
                for (std::size_t y = 0; y < size(); ++y)
                    if (y != c.back() && leq(c.back(), y)) {
                        next.push_back(c);
                        next.back().push_back(y);
                    }
            }
            frontier = std::move(next);
        }
        return out;
    }

private:
    std::vector<std::string> names_;
    std::vector<Open> below_;
};

inline FiniteSpace mk_space(std::vector<std::string> names,
                            const std::vector<std::pair<std::size_t, std::size_t>>& relations) {
    return FiniteSpace(std::move(names), relations);
}

inline FiniteSpace point_space() { return FiniteSpace({"p"}, {}); }

/// Points a, b, c, d with a, b <= c and a, b <= d.
inline FiniteSpace pseudocircle() { return FiniteSpace({"a", "b", "c", "d"}, {{0, 2}, {1, 2}, {0, 3}, {1, 3}}); }

inline FiniteSpace discrete_space(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
    return FiniteSpace(names, {});
}

// Simplicial complexes -------------------------------------------------------

class SimplicialComplex {
public:
    using Simplex = std::vector<int>;

    SimplicialComplex() = default;

    /// Validates that the family is closed under taking faces.
    explicit SimplicialComplex(const std::vector<Simplex>& simplices) {
        for (auto s : simplices) {
            std::sort(s.begin(), s.end());
            if (s.empty()) throw ValidationError("empty simplex");
            if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw ValidationError("simplex repeats a vertex");
            simplices_.insert(s);
        }
        for (const auto& s : simplices_)
            for (std::size_t i = 0; s.size() > 1 && i < s.size(); ++i) {
                Simplex f = s;
                f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
                if (!simplices_.count(f)) throw ValidationError("simplex family is not closed under faces");
            }
    }

    static SimplicialComplex from_facets(const std::vector<Simplex>& facets) {
        std::set<Simplex> all;
        for (auto f : facets) {
            std::sort(f.begin(), f.end());
            const std::size_t k = f.size();
            if (k == 0 || k > 20) throw ValidationError("facet size out of range");
            for (std::uint32_t mask = 1; mask < (1U << k); ++mask) {
                Simplex s;
                for (std::size_t i = 0; i < k; ++i)
                    if (mask >> i & 1U) s.push_back(f[i]);
                all.insert(s);
            }
        }
        return SimplicialComplex({all.begin(), all.end()});
    }

    [[nodiscard]] const std::set<Simplex>& simplices() const noexcept { return simplices_; }

    [[nodiscard]] std::vector<int> vertices() const {
        std::vector<int> v;
        for (const auto& s : simplices_)
            if (s.size() == 1) v.push_back(s[0]);
        return v;
    }

    [[nodiscard]] bool has(Simplex s) const {
        std::sort(s.begin(), s.end());
        return simplices_.count(s) > 0;
    }

    /// Number of simplices of each dimension 0, 1, ...
    [[nodiscard]] std::vector<std::size_t> counts() const {
        std::vector<std::size_t> c;
        for (const auto& s : simplices_) {
            if (c.size() < s.size()) c.resize(s.size());
            ++c[s.size() - 1];
        }
        return c;
    }

private:
    std::set<Simplex> simplices_;
};

inline SimplicialComplex triangle_boundary() { return SimplicialComplex::from_facets({{0, 1}, {1, 2}, {0, 2}}); }

inline SimplicialComplex tetrahedron_boundary() {
    return SimplicialComplex::from_facets({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
}

/// Six-vertex triangulation of the real projective plane.
inline SimplicialComplex rp2_six() {
    return SimplicialComplex::from_facets({{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5},
                                           {1, 2, 4}, {2, 3, 5}, {1, 3, 4}, {2, 4, 5}, {1, 3, 5}});
}

/// Face poset with opens = down-sets: a simplex lies below its faces, so the
/// minimal open of a simplex is its open star.
struct FacePoset {
    FiniteSpace space;
    std::vector<SimplicialComplex::Simplex> simplices;  // point index -> simplex
};

inline FacePoset face_poset(const SimplicialComplex& k) {
    FacePoset fp;
    fp.simplices.assign(k.simplices().begin(), k.simplices().end());
    std::vector<std::string> names;
    for (const auto& s : fp.simplices) {
        std::string label;
        for (std::size_t i = 0; i < s.size(); ++i) label += (i ? "." : "") + std::to_string(s[i]);
        names.push_back(label);
    }
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t a = 0; a < fp.simplices.size(); ++a)
        for (std::size_t b = 0; b < fp.simplices.size(); ++b)
            if (a != b && std::includes(fp.simplices[a].begin(), fp.simplices[a].end(), fp.simplices[b].begin(),
                                        fp.simplices[b].end()))
                rel.emplace_back(a, b);
    fp.space = FiniteSpace(names, rel);
    return fp;
}

// Covers -----------------------------------------------------------------------

/// An indexed family of opens.
struct OpenCover {
    std::vector<Open> opens;
    std::vector<std::string> labels;
};

/// x -> U_x with x in U_x.
class SpecialCover {
public:
    SpecialCover() = default;
    SpecialCover(const FiniteSpace& x, std::vector<Open> u) : u_(std::move(u)) {
        if (u_.size() != x.size()) throw ValidationError("special cover needs one open per point");
        for (std::size_t p = 0; p < u_.size(); ++p) {
            if (!x.is_open(u_[p])) throw ValidationError("U_" + x.name(p) + " is not open");
            if (!contains(u_[p], p)) throw ValidationError("U_" + x.name(p) + " does not contain " + x.name(p));
        }
    }
    [[nodiscard]] Open at(std::size_t p) const { return u_.at(p); }
    [[nodiscard]] std::size_t size() const noexcept { return u_.size(); }
    [[nodiscard]] OpenCover as_family(const FiniteSpace& x) const {
        OpenCover c{u_, {}};
        for (std::size_t p = 0; p < u_.size(); ++p) c.labels.push_back(x.name(p));
        return c;
    }

private:
    std::vector<Open> u_;
};

/// Minimal special cover x -> U_x^min; it refines every special cover.
inline SpecialCover covers(const FiniteSpace& x) {
    std::vector<Open> u;
    for (std::size_t p = 0; p < x.size(); ++p) u.push_back(x.min_open(p));
    return SpecialCover(x, u);
}

/// V <= U iff V_x is contained in U_x for every x.
inline bool refinement_check(const SpecialCover& v, const SpecialCover& u) {
    if (v.size() != u.size()) return false;
    for (std::size_t p = 0; p < v.size(); ++p)
        if (!subset(v.at(p), u.at(p))) return false;
    return true;
}

/// Open stars of the vertices, as opens of the face poset.
inline OpenCover star_cover(const SimplicialComplex& k, const FacePoset& fp) {
    OpenCover c;
    for (int v : k.vertices()) {
        Open u = 0;
        for (std::size_t p = 0; p < fp.simplices.size(); ++p)
            if (std::binary_search(fp.simplices[p].begin(), fp.simplices[p].end(), v)) u |= Open(1) << p;
        c.opens.push_back(u);
        c.labels.push_back(std::to_string(v));
    }
    return c;
}

/// Nondegenerate nerve simplex counts of an indexed cover: index sets of each
/// size with nonempty common intersection.
inline std::vector<std::size_t> nerve_counts(const OpenCover& c) {
    std::vector<std::size_t> counts;
    const std::size_t n = c.opens.size();
    std::vector<std::pair<std::size_t, Open>> frontier;  // (last index, intersection)
    for (std::size_t i = 0; i < n; ++i)
        if (c.opens[i]) frontier.emplace_back(i, c.opens[i]);
    while (!frontier.empty()) {
        counts.push_back(frontier.size());
        std::vector<std::pair<std::size_t, Open>> next;
        for (auto [last, u] : frontier)
            for (std::size_t j = last + 1; j < n; ++j)
                if (u & c.opens[j]) next.emplace_back(j, u & c.opens[j]);
        frontier = std::move(next);
    }
    return counts;
}

/// Partial map from point tuples to opens, enumerated up to a maximal length.
class BerishviliCover {
public:
    using Tuple = std::vector<std::size_t>;

    BerishviliCover() = default;
    BerishviliCover(const FiniteSpace& x, std::map<Tuple, Open> values, std::size_t max_len)
        : values_(std::move(values)), max_len_(max_len) {
        validate(x);
    }

    [[nodiscard]] std::size_t max_length() const noexcept { return max_len_; }
    [[nodiscard]] bool defined(const Tuple& t) const { return values_.count(t) > 0; }
    [[nodiscard]] Open at(const Tuple& t) const {
        auto it = values_.find(t);
        if (it == values_.end()) throw ValidationError("Berishvili cover is not defined on this tuple");
        return it->second;
    }
    [[nodiscard]] const std::map<Tuple, Open>& values() const noexcept { return values_; }

    /// Defined tuples of length len.
    [[nodiscard]] std::vector<Tuple> tuples(std::size_t len) const {
        std::vector<Tuple> out;
        for (const auto& [t, u] : values_)
            if (t.size() == len) out.push_back(t);
        return out;
    }

private:
    void validate(const FiniteSpace& x) const {
        for (std::size_t p = 0; p < x.size(); ++p)
            if (!defined({p})) throw ValidationError("axiom iv: alpha(" + x.name(p) + ") is not defined");
        for (const auto& [t, u] : values_) {
            if (t.empty() || t.size() > max_len_) throw ValidationError("Berishvili tuple length out of range");
            if (!x.is_open(u)) throw ValidationError("Berishvili value is not open");
            if (!contains(u, t.back())) throw ValidationError("axiom i: last point not in alpha");
            for (std::size_t i = 0; t.size() > 1 && i < t.size(); ++i) {
                Tuple f = t;
                f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
                auto it = values_.find(f);
                if (it == values_.end() || !subset(u, it->second))
                    throw ValidationError("axiom ii: face of a defined tuple is undefined or smaller");
            }
            if (t.size() < max_len_)
                for (std::size_t y : x.points(u)) {
                    Tuple e = t;
                    e.push_back(y);
                    if (!defined(e)) throw ValidationError("axiom iii: extension by a point of alpha is undefined");
                }
        }
    }

    std::map<Tuple, Open> values_;
    std::size_t max_len_ = 0;
};

/// alpha(x) = U_x;  alpha(x_0..x_n) = alpha(x_0..x_{n-1}) & U_{x_n} when x_n
/// lies in alpha(x_0..x_{n-1}), undefined otherwise.
inline BerishviliCover berishvili_from_special(const FiniteSpace& x, const SpecialCover& u, std::size_t max_len) {
    std::map<BerishviliCover::Tuple, Open> values;
    std::vector<BerishviliCover::Tuple> frontier;
    for (std::size_t p = 0; p < x.size(); ++p) {
        values[{p}] = u.at(p);
        frontier.push_back({p});
    }
    for (std::size_t len = 2; len <= max_len; ++len) {
        std::vector<BerishviliCover::Tuple> next;
        for (const auto& t : frontier) {
            Open a = values[t];
            for (std::size_t y : x.points(a)) {
                auto e = t;
                e.push_back(y);
                values[e] = a & u.at(y);
                next.push_back(std::move(e));
            }
        }
        frontier = std::move(next);
    }
    return BerishviliCover(x, std::move(values), max_len);
}

/// One refinement round of a special cover: from each U_x that is larger than
/// U_x^min, drop its highest-index maximal point other than x.  Repeated
/// rounds reach the minimal cover.
inline SpecialCover refine_special(const FiniteSpace& x, const SpecialCover& u) {
    std::vector<Open> out;
    for (std::size_t p = 0; p < x.size(); ++p) {
        Open v = u.at(p);
        if (v != x.min_open(p)) {
            for (std::size_t y = x.size(); y-- > 0;) {
                if (y == p || !contains(v, y)) continue;
                bool maximal = true;
                for (std::size_t z = 0; z < x.size() && maximal; ++z)
                    if (z != y && contains(v, z) && x.leq(y, z)) maximal = false;
                if (maximal) {
                    v &= ~(Open(1) << y);
                    break;
                }
            }
        }
        out.push_back(v);
    }
    return SpecialCover(x, out);
}

/// The coarsest special cover: every U_x is the whole space.
inline SpecialCover whole_cover(const FiniteSpace& x) { return SpecialCover(x, std::vector<Open>(x.size(), x.whole())); }

}  // namespace stackcoh
