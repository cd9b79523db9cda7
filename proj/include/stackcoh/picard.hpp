#pragma once

// Presented symmetric 2-groups in a skeletal strict model: a homomorphism
// d : C1 -> C0 of finitely generated abelian groups together with a bilinear
// antisymmetric braid pairing beta : C0 x C0 -> ker d.

#include "stackcoh/fgab.hpp"

#include <map>
#include <utility>

namespace stackcoh {

/// beta(e_i, e_j) has coefficient `coeff` on generator k of C1.
struct BetaTerm {
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t k = 0;
    Integer coeff;
};

using GenPair = std::pair<std::size_t, std::size_t>;
/// Values on generator pairs, as C1 coordinate vectors.  Missing pairs are zero.
using BetaValues = std::map<GenPair, Vec>;

namespace detail {

inline void add_scaled(Vec& acc, const Vec& x, const Integer& s) {
    for (std::size_t k = 0; k < x.size(); ++k)
        if (x[k] != 0) acc[k] += s * x[k];
}

inline std::string pair_str(const GenPair& p) {
    return "(" + std::to_string(p.first) + ", " + std::to_string(p.second) + ")";
}

}  // namespace detail

class Pic2Group {
public:
    Pic2Group() : Pic2Group(FgAbGroup(), FgAbGroup(), Matrix(0, 0), std::vector<BetaTerm>{}) {}

    /// d is c0.ngens x c1.ngens.  Validates all structural invariants.
    Pic2Group(FgAbGroup c1, FgAbGroup c0, Matrix d, std::vector<BetaTerm> beta) {
        auto data = std::make_shared<Data>();
        data->c1 = std::move(c1);
        data->c0 = std::move(c0);
        if (d.rows() == 0 && d.cols() == 0) d = Matrix(data->c0.ngens(), data->c1.ngens());
        data->d = GroupHom(data->c1, data->c0, std::move(d));
        data->by_first.resize(data->c0.ngens());
        std::map<std::pair<GenPair, std::size_t>, Integer> merged;
        for (auto& t : beta) {
            if (t.i >= data->c0.ngens() || t.j >= data->c0.ngens() || t.k >= data->c1.ngens())
                throw ValidationError("braid term index out of range at pair " + detail::pair_str({t.i, t.j}));
            merged[{{t.i, t.j}, t.k}] += t.coeff;
        }
        for (auto& [key, c] : merged)
            if (c != 0) data->by_first[key.first.first].push_back({key.first.first, key.first.second, key.second, c});
        d_ = std::move(data);
        validate();
    }

    Pic2Group(FgAbGroup c1, FgAbGroup c0, Matrix d, const BetaValues& beta)
        : Pic2Group(std::move(c1), std::move(c0), std::move(d), terms_from(beta)) {}

    [[nodiscard]] const FgAbGroup& c1() const noexcept { return d_->c1; }
    [[nodiscard]] const FgAbGroup& c0() const noexcept { return d_->c0; }
    [[nodiscard]] const GroupHom& d() const noexcept { return d_->d; }

    [[nodiscard]] std::vector<BetaTerm> beta_terms() const {
        std::vector<BetaTerm> out;
        for (const auto& row : d_->by_first) out.insert(out.end(), row.begin(), row.end());
        return out;
    }
    [[nodiscard]] bool braid_is_zero() const {
        for (const auto& row : d_->by_first)
            if (!row.empty()) return false;
        return true;
    }

    /// beta(a, b) in C1 coordinates.
    [[nodiscard]] Vec beta(const Vec& a, const Vec& b) const {
        Vec out(c1().ngens());
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (const auto& t : d_->by_first[i])
                if (b[t.j] != 0) out[t.k] += a[i] * b[t.j] * t.coeff;
        }
        return out;
    }
    [[nodiscard]] Vec q(const Vec& a) const { return beta(a, a); }

    /// j -> beta(a, e_j) for every j with a possibly nonzero value.
    [[nodiscard]] BetaValues left_contract(const Vec& a) const {
        BetaValues out;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (const auto& t : d_->by_first[i]) {
                auto [it, fresh] = out.try_emplace({0, t.j}, Vec(c1().ngens()));
                it->second[t.k] += a[i] * t.coeff;
            }
        }
        return out;
    }

    /// beta(F e_i, F e_j) for a matrix F : Z^n -> C0, on all pairs with a
    /// possibly nonzero value.
    [[nodiscard]] BetaValues pullback(const Matrix& f) const {
        if (f.rows() != c0().ngens()) throw ValidationError("braid pullback: matrix has wrong row count");
        std::vector<std::vector<std::pair<std::size_t, Integer>>> nz(f.rows());
        for (std::size_t p = 0; p < f.rows(); ++p)
            for (std::size_t i = 0; i < f.cols(); ++i)
                if (f(p, i) != 0) nz[p].emplace_back(i, f(p, i));
        BetaValues out;
        for (const auto& row : d_->by_first)
            for (const auto& t : row)
                for (const auto& [i, a] : nz[t.i])
                    for (const auto& [j, b] : nz[t.j]) {
                        auto [it, fresh] = out.try_emplace({i, j}, Vec(c1().ngens()));
                        it->second[t.k] += a * b * t.coeff;
                    }
        return out;
    }

    /// Subquotient data for pi^0 = coker d and pi^{-1} = ker d.
    [[nodiscard]] Subquotient pi0_data() const {
        return Subquotient(c0(), Matrix::identity(c0().ngens()), d().matrix());
    }
    [[nodiscard]] Subquotient pi1_data() const {
        return Subquotient(c1(), kernel_generators(d()), Matrix(c1().ngens(), 0));
    }
    [[nodiscard]] FgAbGroup pi0() const { return pi0_data().group(); }
    [[nodiscard]] FgAbGroup pi1() const { return pi1_data().group(); }

    /// Isomorphic presentation with C0 and C1 in canonical form.
    [[nodiscard]] Pic2Group simplified() const {
        const FgAbGroup& a1 = c1();
        const FgAbGroup& a0 = c0();
        Matrix dd = a0.to_simplified() * d().matrix() * a1.from_simplified();
        BetaValues b = pullback(a0.from_simplified());
        BetaValues bs;
        for (auto& [p, v] : b) bs[p] = a1.to_simplified().apply(v);
        return Pic2Group(a1.simplified(), a0.simplified(), dd, bs);
    }

    static std::vector<BetaTerm> terms_from(const BetaValues& values) {
        std::vector<BetaTerm> out;
        for (const auto& [p, v] : values)
            for (std::size_t k = 0; k < v.size(); ++k)
                if (v[k] != 0) out.push_back({p.first, p.second, k, v[k]});
        return out;
    }

private:
    void validate() const {
        const FgAbGroup& a1 = c1();
        const FgAbGroup& a0 = c0();
        BetaValues sym;
        for (const auto& row : d_->by_first)
            for (const auto& t : row) {
                GenPair p{std::min(t.i, t.j), std::max(t.i, t.j)};
                auto [it, fresh] = sym.try_emplace(p, Vec(a1.ngens()));
                it->second[t.k] += (t.i == t.j ? 2 : 1) * t.coeff;
            }
        for (const auto& [p, v] : sym)
            if (!a1.is_zero(v)) throw ValidationError("braid is not antisymmetric at generator pair " + detail::pair_str(p));
        for (std::size_t i = 0; i < a0.ngens(); ++i) {
            BetaValues row = left_contract(unit_vec(a0.ngens(), i));
            for (const auto& [p, v] : row)
                if (!a0.is_zero(d().matrix().apply(v)))
                    throw ValidationError("braid does not land in ker d at generator pair " +
                                          detail::pair_str({i, p.second}));
        }
        for (std::size_t r = 0; r < a0.relations().rows(); ++r)
            for (const auto& [p, v] : left_contract(a0.relations().row(r)))
                if (!a1.is_zero(v))
                    throw ValidationError("braid does not respect C0 relation " + std::to_string(r) +
                                          " against generator " + std::to_string(p.second));
        // q must vanish on d(C1) to be well defined on pi^0.
        for (std::size_t x = 0; x < a1.ngens(); ++x)
            if (!a1.is_zero(q(d().matrix().col(x))))
                throw ValidationError("quadratic map does not vanish on d(e_" + std::to_string(x) + ")");
    }

    struct Data {
        FgAbGroup c1;
        FgAbGroup c0;
        GroupHom d;
        std::vector<std::vector<BetaTerm>> by_first;
    };
    std::shared_ptr<const Data> d_;
};

// Constructors -------------------------------------------------------------

inline Pic2Group mk_pic(FgAbGroup c1, FgAbGroup c0, Matrix d, std::vector<BetaTerm> beta) {
    return Pic2Group(std::move(c1), std::move(c0), std::move(d), std::move(beta));
}

/// The strictly commutative 2-group of a homomorphism f : C1 -> C0.
inline Pic2Group mk_K(const GroupHom& f) {
    return Pic2Group(f.source(), f.target(), f.matrix(), std::vector<BetaTerm>{});
}
inline Pic2Group discrete(const FgAbGroup& g) { return mk_K(GroupHom::zero(FgAbGroup(), g)); }
inline Pic2Group shifted(const FgAbGroup& g) { return mk_K(GroupHom::zero(g, FgAbGroup())); }

/// Objects Z, automorphisms Z/2, symmetry (-1)^{nm}.
inline Pic2Group mk_phi() {
    return Pic2Group(FgAbGroup::cyclic(2), FgAbGroup::free(1), Matrix(1, 1), {BetaTerm{0, 0, 0, 1}});
}

inline Pic2Group product(const std::vector<Pic2Group>& parts) {
    std::vector<FgAbGroup> g1, g0;
    std::vector<Matrix> ds;
    std::vector<BetaTerm> beta;
    std::size_t o0 = 0, o1 = 0;
    for (const auto& p : parts) {
        g1.push_back(p.c1());
        g0.push_back(p.c0());
        ds.push_back(p.d().matrix());
        for (auto t : p.beta_terms()) beta.push_back({t.i + o0, t.j + o0, t.k + o1, t.coeff});
        o0 += p.c0().ngens();
        o1 += p.c1().ngens();
    }
    return Pic2Group(direct_sum(g1), direct_sum(g0), Matrix::direct_sum(ds), std::move(beta));
}

/// Loop 2-group: automorphisms of the unit as a discrete 2-group.
inline Pic2Group loop(const Pic2Group& p) { return discrete(p.pi1()); }

// Morphisms ----------------------------------------------------------------

/// Symmetric monoidal functor with underlying homomorphisms (f1, f0).  The
/// monoidal constraint is left implicit: one exists exactly when the pulled
/// back braid differs from f1 beta by an alternating form, i.e. when
/// q'(f0 e_i) = f1 q(e_i) on generators.
class StrictMor {
public:
    StrictMor() = default;
    StrictMor(Pic2Group source, Pic2Group target, Matrix f1, Matrix f0)
        : src_(std::move(source)), tgt_(std::move(target)) {
        h1_ = GroupHom(src_.c1(), tgt_.c1(), std::move(f1));
        h0_ = GroupHom(src_.c0(), tgt_.c0(), std::move(f0));
        const FgAbGroup& t0 = tgt_.c0();
        Matrix lhs = h0_.matrix() * src_.d().matrix();
        Matrix rhs = tgt_.d().matrix() * h1_.matrix();
        for (std::size_t x = 0; x < lhs.cols(); ++x)
            if (!lhs.col_equals(x, rhs) && !t0.equal(lhs.col(x), rhs.col(x)))
                throw ValidationError("morphism does not commute with d on generator " + std::to_string(x));
        BetaValues diff = tgt_.pullback(h0_.matrix());
        for (const auto& t : src_.beta_terms()) {
            auto [it, fresh] = diff.try_emplace({t.i, t.j}, Vec(tgt_.c1().ngens()));
            detail::add_scaled(it->second, h1_.matrix().col(t.k), -t.coeff);
        }
        for (const auto& [p, v] : diff)
            if (p.first == p.second && !tgt_.c1().is_zero(v))
                throw ValidationError("morphism does not preserve the braid at generator pair " + detail::pair_str(p));
    }

    static StrictMor identity(const Pic2Group& p) {
        return StrictMor(p, p, Matrix::identity(p.c1().ngens()), Matrix::identity(p.c0().ngens()));
    }
    static StrictMor zero(const Pic2Group& a, const Pic2Group& b) {
        return StrictMor(a, b, Matrix(b.c1().ngens(), a.c1().ngens()), Matrix(b.c0().ngens(), a.c0().ngens()));
    }

    [[nodiscard]] const Pic2Group& source() const noexcept { return src_; }
    [[nodiscard]] const Pic2Group& target() const noexcept { return tgt_; }
    [[nodiscard]] const GroupHom& f1() const noexcept { return h1_; }
    [[nodiscard]] const GroupHom& f0() const noexcept { return h0_; }

    /// Induced maps on pi^0 and pi^{-1}.
    [[nodiscard]] GroupHom pi0_map() const {
        return induced_hom(src_.pi0_data(), tgt_.pi0_data(), h0_.matrix());
    }
    [[nodiscard]] GroupHom pi1_map() const {
        return induced_hom(src_.pi1_data(), tgt_.pi1_data(), h1_.matrix());
    }

    friend StrictMor compose(const StrictMor& g, const StrictMor& f) {
        return StrictMor(f.src_, g.tgt_, g.h1_.matrix() * f.h1_.matrix(), g.h0_.matrix() * f.h0_.matrix());
    }

private:
    Pic2Group src_;
    Pic2Group tgt_;
    GroupHom h1_;
    GroupHom h0_;
};

/// Monoidal transformation f => g given by t : C0 -> C1'.
class Track {
public:
    Track() = default;
    Track(StrictMor from, StrictMor to, Matrix t) : from_(std::move(from)), to_(std::move(to)) {
        const Pic2Group& a = from_.source();
        const Pic2Group& b = from_.target();
        if (to_.source().c0().ngens() != a.c0().ngens() || to_.target().c0().ngens() != b.c0().ngens() ||
            to_.source().c1().ngens() != a.c1().ngens() || to_.target().c1().ngens() != b.c1().ngens())
            throw ValidationError("track between morphisms with different endpoints");
        t_ = GroupHom(a.c0(), b.c1(), std::move(t));
        Matrix obj = b.d().matrix() * t_.matrix();
        Matrix want0 = to_.f0().matrix() - from_.f0().matrix();
        for (std::size_t i = 0; i < obj.cols(); ++i)
            if (!b.c0().equal(obj.col(i), want0.col(i)))
                throw ValidationError("track fails d t = g0 - f0 on generator " + std::to_string(i));
        Matrix arr = t_.matrix() * a.d().matrix();
        Matrix want1 = to_.f1().matrix() - from_.f1().matrix();
        for (std::size_t x = 0; x < arr.cols(); ++x)
            if (!b.c1().equal(arr.col(x), want1.col(x)))
                throw ValidationError("track fails t d = g1 - f1 on generator " + std::to_string(x));
    }

    static Track identity(const StrictMor& f) {
        return Track(f, f, Matrix(f.target().c1().ngens(), f.source().c0().ngens()));
    }

    [[nodiscard]] const StrictMor& from() const noexcept { return from_; }
    [[nodiscard]] const StrictMor& to() const noexcept { return to_; }
    [[nodiscard]] const Matrix& matrix() const noexcept { return t_.matrix(); }

    /// Vertical composite this ; s : f => g => h.
    [[nodiscard]] Track then(const Track& s) const { return Track(from_, s.to_, t_.matrix() + s.matrix()); }
    [[nodiscard]] Track inverse() const { return Track(to_, from_, -t_.matrix()); }

private:
    StrictMor from_;
    StrictMor to_;
    GroupHom t_;
};

/// Horizontal composite of t : f => f' (A -> B) and s : g => g' (B -> C).
inline Track horizontal(const Track& s, const Track& t) {
    Matrix m = s.from().f1().matrix() * t.matrix() + s.matrix() * t.to().f0().matrix();
    return Track(compose(s.from(), t.from()), compose(s.to(), t.to()), m);
}

/// Whiskerings g t : g f => g f' and t h : f h => f' h.
inline Track whisker_left(const StrictMor& g, const Track& t) {
    return Track(compose(g, t.from()), compose(g, t.to()), g.f1().matrix() * t.matrix());
}
inline Track whisker_right(const Track& t, const StrictMor& h) {
    return Track(compose(t.from(), h), compose(t.to(), h), t.matrix() * h.f0().matrix());
}

// Invariants ---------------------------------------------------------------

struct Pic2Invariants {
    FgAbGroup pi0;
    FgAbGroup pi1;
    FgAbGroup pi0_mod2;  // pi0 / 2 pi0 on the generators of pi0
    GroupHom q;          // pi0 / 2 pi0 -> pi1, a -> beta(a, a)
    std::size_t q_image_order = 1;

    [[nodiscard]] bool q_nontrivial() const { return !q.is_zero(); }
    [[nodiscard]] std::string str() const {
        return "pi0=" + pi0.str() + ", pi1=" + pi1.str() + ", q=" + (q_nontrivial() ? "nontrivial" : "trivial");
    }
};

inline Pic2Invariants invariants(const Pic2Group& p) {
    Subquotient s0 = p.pi0_data();
    Subquotient s1 = p.pi1_data();
    Pic2Invariants out;
    out.pi0 = s0.group();
    out.pi1 = s1.group();
    const std::size_t k = out.pi0.ngens();
    Matrix two = Integer(2) * Matrix::identity(k);
    out.pi0_mod2 = FgAbGroup(k, Matrix::vcat({&out.pi0.relations(), &two}, k));
    Matrix qm(out.pi1.ngens(), k);
    for (std::size_t j = 0; j < k; ++j) qm.set_col(j, s1.classify(p.q(s0.lift().col(j))));
    out.q = GroupHom(out.pi0_mod2, out.pi1, qm);
    Integer order = 1;
    FgAbGroup image = image_of(out.q).group();
    for (const auto& f : image.invariant_factors()) order *= f;
    out.q_image_order = static_cast<std::size_t>(order);
    return out;
}

/// Canonical data comparison: isomorphic pi-groups and matching order of the image of q.
inline bool same_invariants(const Pic2Group& a, const Pic2Group& b) {
    auto ia = invariants(a), ib = invariants(b);
    return ia.pi0.isomorphic(ib.pi0) && ia.pi1.isomorphic(ib.pi1) && ia.q_image_order == ib.q_image_order;
}

inline std::string describe(const Pic2Group& p) { return invariants(p).str(); }

struct MorClass {
    bool faithful = false;
    bool cofaithful = false;
    bool equivalence = false;
};

inline MorClass classify(const StrictMor& m) {
    GroupHom p1 = m.pi1_map(), p0 = m.pi0_map();
    MorClass c;
    c.faithful = is_mono(p1);
    c.cofaithful = is_epi(p0);
    c.equivalence = is_iso(p0) && is_iso(p1);
    return c;
}

/// Phi -> Phi, multiplication by k on objects.
inline StrictMor phi_multiply(long long k) {
    Pic2Group phi = mk_phi();
    long long parity = ((k % 2) + 2) % 2;
    return StrictMor(phi, phi, Matrix{{parity}}, Matrix{{k}});
}

}  // namespace stackcoh
