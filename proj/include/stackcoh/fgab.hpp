#pragma once

// Finitely generated abelian groups given by presentations, homomorphisms
// between them, and cochain complexes of such groups.

#include "stackcoh/matrix.hpp"
#include "stackcoh/snf.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace stackcoh {

/// Z^n modulo the row span of a relation matrix.  Immutable; copies share
/// the cached Smith data.
class FgAbGroup {
public:
    FgAbGroup() : FgAbGroup(0, Matrix(0, 0)) {}

    FgAbGroup(std::size_t ngens, Matrix relations) {
        if (relations.cols() != ngens && !(relations.rows() == 0))
            throw ValidationError("relation matrix has " + std::to_string(relations.cols()) +
                                  " columns, expected " + std::to_string(ngens));
        if (relations.rows() == 0) relations = Matrix(0, ngens);
        auto d = std::make_shared<Data>();
        d->ngens = ngens;
        d->relations = std::move(relations);
        compute(*d);
        d_ = std::move(d);
    }

    static FgAbGroup free(std::size_t rank) { return FgAbGroup(rank, Matrix(0, rank)); }

    /// Canonical presentation: one generator per factor, Z/d for d > 1, Z for 0.
    static FgAbGroup from_factors(const std::vector<Integer>& factors) {
        std::vector<Vec> rows;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (factors[i] < 0) throw ValidationError("negative invariant factor");
            if (factors[i] == 0) continue;
            Vec r(factors.size());
            r[i] = factors[i];
            rows.push_back(std::move(r));
        }
        return FgAbGroup(factors.size(), Matrix::from_rows(rows, factors.size()));
    }

    static FgAbGroup cyclic(long long n) { return from_factors({Integer(n)}); }

    [[nodiscard]] std::size_t ngens() const noexcept { return d_->ngens; }
    [[nodiscard]] const Matrix& relations() const noexcept { return d_->relations; }

    /// Invariant factors with unit factors dropped: torsion d_1 | d_2 | ... then
    /// one 0 per free summand.  The zero group has an empty list.
    [[nodiscard]] const std::vector<Integer>& invariant_factors() const noexcept { return d_->factors; }

    [[nodiscard]] std::size_t free_rank() const {
        std::size_t r = 0;
        for (const auto& f : d_->factors) r += (f == 0);
        return r;
    }
    [[nodiscard]] bool is_trivial() const noexcept { return d_->factors.empty(); }
    [[nodiscard]] bool isomorphic(const FgAbGroup& o) const { return d_->factors == o.d_->factors; }

    /// Canonical coordinates of an element: one entry per invariant factor,
    /// reduced into [0, d) on torsion factors.
    [[nodiscard]] Vec normalize(const Vec& x) const {
        if (x.size() != ngens()) throw ValidationError("element has wrong number of coordinates");
        Vec c;
        if (d_->selection) {
            c.reserve(d_->pick.size());
            for (std::size_t j : d_->pick) c.push_back(x[j]);
        } else {
            c = d_->to_simplified.apply(x);
        }
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i] != 0 && d_->factors[i] != 0) c[i] = mod_floor(c[i], d_->factors[i]);
        return c;
    }
    [[nodiscard]] bool is_zero(const Vec& x) const { return is_zero_vec(x) || is_zero_vec(normalize(x)); }
    [[nodiscard]] bool equal(const Vec& x, const Vec& y) const {
        Vec diff = x;
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= y[i];
        return is_zero(diff);
    }

    /// The canonical presentation isomorphic to this group.
    [[nodiscard]] FgAbGroup simplified() const { return from_factors(d_->factors); }
    /// ngens(simplified) x ngens(): this group -> simplified().
    [[nodiscard]] const Matrix& to_simplified() const noexcept { return d_->to_simplified; }
    /// ngens() x ngens(simplified): simplified() -> this group.
    [[nodiscard]] const Matrix& from_simplified() const noexcept { return d_->from_simplified; }

    [[nodiscard]] std::string str() const { return format_factors(d_->factors); }

    static std::string format_factors(const std::vector<Integer>& factors) {
        std::size_t r = 0;
        std::string out;
        for (const auto& f : factors) r += (f == 0);
        if (r == 1) out = "Z";
        if (r > 1) out = "Z^" + std::to_string(r);
        for (const auto& f : factors) {
            if (f == 0) continue;
            if (!out.empty()) out += " + ";
            out += "Z/" + f.str();
        }
        return out.empty() ? "0" : out;
    }

    friend FgAbGroup direct_sum(const std::vector<FgAbGroup>& parts) {
        std::size_t g = 0;
        std::vector<Matrix> rels;
        for (const auto& p : parts) {
            g += p.ngens();
            rels.push_back(p.relations());
        }
        return FgAbGroup(g, Matrix::direct_sum(rels));
    }

private:
    struct Data {
        std::size_t ngens = 0;
        Matrix relations;
        std::vector<Integer> factors;
        Matrix to_simplified;
        Matrix from_simplified;
        bool selection = false;  // to_simplified picks the coordinates in `pick`
        std::vector<std::size_t> pick;
    };

    static void compute(Data& d) {
        if (compute_diagonal(d)) return;
        const std::size_t g = d.ngens;
        auto snf = smith_normal_form(d.relations, {.want_u = false, .want_v = true, .want_v_inv = true});
        std::vector<std::size_t> keep;
        for (std::size_t i = 0; i < g; ++i) {
            Integer f = i < snf.diagonal.size() ? snf.diagonal[i] : Integer(0);
            if (f == 1) continue;
            keep.push_back(i);
            d.factors.push_back(f);
        }
        // Coordinates c = V^T x; the relation lattice is {c : d_i | c_i}.
        d.to_simplified = Matrix(keep.size(), g);
        d.from_simplified = Matrix(g, keep.size());
        for (std::size_t k = 0; k < keep.size(); ++k)
            for (std::size_t j = 0; j < g; ++j) {
                d.to_simplified(k, j) = snf.v(j, keep[k]);
                d.from_simplified(j, k) = snf.v_inv(keep[k], j);
            }
    }

    // Relations that are multiples of distinct generators, with the non-unit
    // moduli forming a divisibility chain, already are in normal form.
    static bool compute_diagonal(Data& d) {
        const std::size_t g = d.ngens;
        const Matrix& r = d.relations;
        std::vector<Integer> modulus(g);
        for (std::size_t i = 0; i < r.rows(); ++i) {
            std::size_t col = g;
            for (std::size_t j = 0; j < g; ++j) {
                if (r(i, j) == 0) continue;
                if (col != g) return false;
                col = j;
            }
            if (col == g) continue;
            if (modulus[col] != 0) return false;
            modulus[col] = abs(r(i, col));
        }
        std::vector<std::size_t> torsion, free;
        for (std::size_t j = 0; j < g; ++j) {
            if (modulus[j] == 0) free.push_back(j);
            else if (modulus[j] != 1) torsion.push_back(j);
        }
        std::stable_sort(torsion.begin(), torsion.end(),
                         [&](std::size_t a, std::size_t b) { return modulus[a] < modulus[b]; });
        for (std::size_t k = 1; k < torsion.size(); ++k)
            if (modulus[torsion[k]] % modulus[torsion[k - 1]] != 0) return false;
        std::vector<std::size_t> keep = torsion;
        keep.insert(keep.end(), free.begin(), free.end());
        d.to_simplified = Matrix(keep.size(), g);
        d.from_simplified = Matrix(g, keep.size());
        for (std::size_t k = 0; k < keep.size(); ++k) {
            d.factors.push_back(modulus[keep[k]]);
            d.to_simplified(k, keep[k]) = 1;
            d.from_simplified(keep[k], k) = 1;
        }
        d.selection = true;
        d.pick = std::move(keep);
        return true;
    }

    std::shared_ptr<const Data> d_;
};

FgAbGroup direct_sum(const std::vector<FgAbGroup>& parts);

/// Homomorphism given by its matrix on generators (target.ngens x source.ngens).
class GroupHom {
public:
    GroupHom() = default;
    GroupHom(FgAbGroup source, FgAbGroup target, Matrix m)
        : src_(std::move(source)), tgt_(std::move(target)), m_(std::move(m)) {
        if (m_.rows() != tgt_.ngens() || m_.cols() != src_.ngens())
            throw ValidationError("homomorphism matrix is " + std::to_string(m_.rows()) + "x" +
                                  std::to_string(m_.cols()) + ", expected " + std::to_string(tgt_.ngens()) +
                                  "x" + std::to_string(src_.ngens()));
        const Matrix& rel = src_.relations();
        for (std::size_t r = 0; r < rel.rows(); ++r)
            if (!tgt_.is_zero(m_.apply(rel.row(r))))
                throw ValidationError("homomorphism does not respect source relation " + std::to_string(r));
    }

    static GroupHom zero(const FgAbGroup& s, const FgAbGroup& t) {
        return GroupHom(s, t, Matrix(t.ngens(), s.ngens()));
    }
    static GroupHom identity(const FgAbGroup& g) { return GroupHom(g, g, Matrix::identity(g.ngens())); }

    [[nodiscard]] const FgAbGroup& source() const noexcept { return src_; }
    [[nodiscard]] const FgAbGroup& target() const noexcept { return tgt_; }
    [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }

    [[nodiscard]] Vec operator()(const Vec& x) const { return m_.apply(x); }

    /// Equality as homomorphisms (agreement on every generator in the target).
    [[nodiscard]] bool equals(const GroupHom& o) const {
        if (m_.rows() != o.m_.rows() || m_.cols() != o.m_.cols()) return false;
        for (std::size_t j = 0; j < m_.cols(); ++j)
            if (!m_.col_equals(j, o.m_) && !tgt_.equal(m_.col(j), o.m_.col(j))) return false;
        return true;
    }
    [[nodiscard]] bool is_zero() const {
        for (std::size_t j = 0; j < m_.cols(); ++j)
            if (!tgt_.is_zero(m_.col(j))) return false;
        return true;
    }

    friend GroupHom compose(const GroupHom& g, const GroupHom& f) {
        if (f.tgt_.ngens() != g.src_.ngens()) throw ValidationError("compose: incompatible homomorphisms");
        return GroupHom(f.src_, g.tgt_, g.m_ * f.m_);
    }

private:
    FgAbGroup src_;
    FgAbGroup tgt_;
    Matrix m_;
};

/// A subgroup N of an ambient group (generated by columns of a numerator
/// matrix) modulo a subgroup generated by denominator columns, presented in
/// canonical form, with a way back and forth.
class Subquotient {
public:
    Subquotient() = default;
    Subquotient(const FgAbGroup& ambient, const Matrix& numerator, const Matrix& denominator)
        : ambient_(ambient), k_(numerator.cols()) {
        const std::size_t g = ambient.ngens();
        Matrix rt = ambient.relations().transpose();
        if (rt.rows() != g) rt = Matrix(g, 0);
        Matrix den = denominator.rows() == g ? denominator : Matrix(g, 0);
        Matrix system = Matrix::hcat({&numerator, &den, &rt}, g);
        solver_ = IntegerSolver(system);
        Matrix ker = solver_.kernel_basis();
        Matrix rel = ker.block(0, k_, 0, ker.cols()).transpose();
        FgAbGroup raw(k_, rel);
        group_ = raw.simplified();
        to_group_ = raw.to_simplified();
        lift_ = numerator * raw.from_simplified();
    }

    [[nodiscard]] const FgAbGroup& group() const noexcept { return group_; }
    [[nodiscard]] const FgAbGroup& ambient() const noexcept { return ambient_; }
    /// ambient.ngens x group.ngens: a representative of each generator.
    [[nodiscard]] const Matrix& lift() const noexcept { return lift_; }
    /// group.ngens x (numerator columns): numerator generator -> group element.
    [[nodiscard]] const Matrix& to_group() const noexcept { return to_group_; }

    /// Class of an ambient element lying in N + D + relations, if it does.
    [[nodiscard]] std::optional<Vec> try_classify(const Vec& z) const {
        auto x = solver_.solve(z);
        if (!x) return std::nullopt;
        Vec c(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(k_));
        return group_.normalize(to_group_.apply(c));
    }
    [[nodiscard]] Vec classify(const Vec& z) const {
        auto c = try_classify(z);
        if (!c) throw ValidationError("element does not lie in the numerator subgroup");
        return *c;
    }

    [[nodiscard]] GroupHom inclusion() const { return GroupHom(group_, ambient_, lift_); }

private:
    FgAbGroup ambient_;
    std::size_t k_ = 0;
    IntegerSolver solver_;
    FgAbGroup group_;
    Matrix to_group_;
    Matrix lift_;
};

/// Generators (as columns) of {x : f(x) = 0 in the target}.
inline Matrix kernel_generators(const GroupHom& f) {
    const std::size_t gs = f.source().ngens();
    const std::size_t gt = f.target().ngens();
    Matrix rt = f.target().relations().transpose();
    if (rt.rows() != gt) rt = Matrix(gt, 0);
    Matrix sys = Matrix::hcat({&f.matrix(), &rt}, gt);
    Matrix ker = integer_kernel(sys);
    return ker.block(0, gs, 0, ker.cols());
}

inline Subquotient kernel_of(const GroupHom& f) {
    return Subquotient(f.source(), kernel_generators(f), Matrix(f.source().ngens(), 0));
}

inline Subquotient image_of(const GroupHom& f) {
    return Subquotient(f.target(), f.matrix(), Matrix(f.target().ngens(), 0));
}

struct Cokernel {
    FgAbGroup group;
    GroupHom projection;
};

inline Cokernel cokernel_of(const GroupHom& f) {
    const auto& t = f.target();
    Matrix mt = f.matrix().transpose();
    Matrix rel = Matrix::vcat({&t.relations(), &mt}, t.ngens());
    FgAbGroup raw(t.ngens(), rel);
    FgAbGroup simple = raw.simplified();
    return {simple, GroupHom(t, simple, raw.to_simplified())};
}

/// Kernel, image and cokernel of a homomorphism with their structure maps.
struct HomExactness {
    FgAbGroup kernel;
    GroupHom kernel_inclusion;   // kernel -> source
    FgAbGroup image;
    GroupHom corestriction;      // source -> image
    GroupHom image_inclusion;    // image -> target
    FgAbGroup cokernel;
    GroupHom cokernel_projection;  // target -> cokernel
};

inline HomExactness hom_exactness(const GroupHom& f) {
    Subquotient k = kernel_of(f);
    Subquotient im = image_of(f);
    Cokernel c = cokernel_of(f);
    HomExactness out{k.group(),
                     k.inclusion(),
                     im.group(),
                     GroupHom(f.source(), im.group(), im.to_group()),
                     im.inclusion(),
                     c.group,
                     c.projection};
    if (!compose(f, out.kernel_inclusion).is_zero() || !compose(out.cokernel_projection, f).is_zero() ||
        !compose(out.image_inclusion, out.corestriction).equals(f))
        throw Error("hom_exactness: structural identities failed");
    return out;
}

inline bool is_mono(const GroupHom& f) { return kernel_of(f).group().is_trivial(); }
inline bool is_epi(const GroupHom& f) { return cokernel_of(f).group.is_trivial(); }
inline bool is_iso(const GroupHom& f) { return is_mono(f) && is_epi(f); }

/// Exactness of A --f--> B --g--> C at B.
inline bool is_exact_at(const GroupHom& f, const GroupHom& g) {
    if (!compose(g, f).is_zero()) return false;
    const auto& b = f.target();
    Matrix rt = b.relations().transpose();
    if (rt.rows() != b.ngens()) rt = Matrix(b.ngens(), 0);
    IntegerSolver solver(Matrix::hcat({&f.matrix(), &rt}, b.ngens()));
    Matrix kg = kernel_generators(g);
    for (std::size_t j = 0; j < kg.cols(); ++j)
        if (!solver.solve(kg.col(j))) return false;
    return true;
}

/// Inverse of an isomorphism, computed generator by generator.
inline GroupHom invert_iso(const GroupHom& f) {
    if (!is_iso(f)) throw ValidationError("invert_iso: map is not an isomorphism");
    const auto& t = f.target();
    Matrix rt = t.relations().transpose();
    if (rt.rows() != t.ngens()) rt = Matrix(t.ngens(), 0);
    IntegerSolver solver(Matrix::hcat({&f.matrix(), &rt}, t.ngens()));
    const std::size_t gs = f.source().ngens();
    Matrix inv(gs, t.ngens());
    for (std::size_t j = 0; j < t.ngens(); ++j) {
        auto x = solver.solve(unit_vec(t.ngens(), j));
        if (!x) throw Error("invert_iso: generator has no preimage");
        inv.set_col(j, Vec(x->begin(), x->begin() + static_cast<std::ptrdiff_t>(gs)));
    }
    return GroupHom(t, f.source(), inv);
}

/// Cochain complex of finitely generated abelian groups on degrees [lo, lo + size).
/// Degrees outside the window are zero.
class AbCochainComplex {
public:
    AbCochainComplex() = default;
    /// differentials[i] : groups[i] -> groups[i+1]; there are groups.size() - 1 of them.
    AbCochainComplex(int lo, std::vector<FgAbGroup> groups, std::vector<GroupHom> differentials)
        : lo_(lo), groups_(std::move(groups)), diffs_(std::move(differentials)) {
        if (groups_.empty()) throw ValidationError("cochain complex needs at least one group");
        if (diffs_.size() + 1 != groups_.size())
            throw ValidationError("cochain complex needs one differential between consecutive groups");
        for (std::size_t i = 0; i < diffs_.size(); ++i)
            if (diffs_[i].source().ngens() != groups_[i].ngens() ||
                diffs_[i].target().ngens() != groups_[i + 1].ngens())
                throw ValidationError("differential " + std::to_string(lo_ + static_cast<int>(i)) +
                                      " has wrong shape");
        for (std::size_t i = 0; i + 1 < diffs_.size(); ++i)
            if (!compose(diffs_[i + 1], diffs_[i]).is_zero())
                throw ValidationError("differentials do not square to zero at degree " +
                                      std::to_string(lo_ + static_cast<int>(i)));
    }

    [[nodiscard]] int lo() const noexcept { return lo_; }
    [[nodiscard]] int hi() const noexcept { return lo_ + static_cast<int>(groups_.size()) - 1; }

    [[nodiscard]] FgAbGroup group(int n) const {
        if (n < lo() || n > hi()) return FgAbGroup();
        return groups_[static_cast<std::size_t>(n - lo_)];
    }
    /// delta^n : C^n -> C^{n+1}, zero outside the window.
    [[nodiscard]] GroupHom differential(int n) const {
        if (n >= lo() && n < hi()) return diffs_[static_cast<std::size_t>(n - lo_)];
        return GroupHom::zero(group(n), group(n + 1));
    }

    /// H^n as a subquotient of C^n (cocycles modulo coboundaries).
    [[nodiscard]] Subquotient cohomology_data(int n) const {
        GroupHom out = differential(n);
        GroupHom in = differential(n - 1);
        return Subquotient(group(n), kernel_generators(out), in.matrix());
    }

private:
    int lo_ = 0;
    std::vector<FgAbGroup> groups_;
    std::vector<GroupHom> diffs_;
};

/// H^n = ker delta^n / im delta^{n-1} in canonical form.  Degrees must lie
/// inside the window (zero padding covers the boundary differentials).
inline FgAbGroup cochain_cohomology(const AbCochainComplex& c, int n) {
    if (n < c.lo() || n > c.hi())
        throw ValidationError("degree " + std::to_string(n) + " outside the complex window [" +
                              std::to_string(c.lo()) + ", " + std::to_string(c.hi()) + "]");
    return c.cohomology_data(n).group();
}

/// Homomorphism between subquotients induced by an ambient-level map that
/// sends numerator into numerator.
inline GroupHom induced_hom(const Subquotient& src, const Subquotient& dst, const Matrix& ambient_map) {
    Matrix images = ambient_map * src.lift();
    Matrix m(dst.group().ngens(), src.group().ngens());
    for (std::size_t j = 0; j < images.cols(); ++j) m.set_col(j, dst.classify(images.col(j)));
    return GroupHom(src.group(), dst.group(), m);
}

}  // namespace stackcoh
