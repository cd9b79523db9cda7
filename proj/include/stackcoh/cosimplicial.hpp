#pragma once

// Precosimplicial abelian 2-groups truncated at a level N, and their
// alternating-sum 2-cochain complexes.

#include "stackcoh/complex2.hpp"

#include <map>
#include <utility>

namespace stackcoh {

/// Levels 0..N.  coface(n, i) : A^n -> A^{n+1} for 0 <= i <= n+1 and n < N;
/// track(n, i, j) : d_i d_j => d_{j+1} d_i on A^n for i <= j <= n+1, n + 2 <= N,
/// stored as C0^n -> C1^{n+2}.  Missing tracks are zero.
class PrecosimplicialPic {
public:
    using TrackTable = std::map<std::pair<std::size_t, std::size_t>, Matrix>;

    PrecosimplicialPic(std::vector<Pic2Group> objects, std::vector<std::vector<StrictMor>> cofaces,
                       std::vector<TrackTable> tracks = {})
        : objects_(std::move(objects)), cofaces_(std::move(cofaces)), tracks_(std::move(tracks)) {
        if (objects_.empty()) throw ValidationError("precosimplicial object needs level 0");
        const std::size_t top = level();
        if (cofaces_.size() != top) throw ValidationError("precosimplicial object needs cofaces below every level");
        tracks_.resize(top >= 2 ? top - 1 : 0);
        for (std::size_t n = 0; n < top; ++n) {
            if (cofaces_[n].size() != n + 2)
                throw ValidationError("level " + std::to_string(n) + " needs " + std::to_string(n + 2) + " cofaces");
            for (std::size_t i = 0; i <= n + 1; ++i)
                if (!detail::same_shape(cofaces_[n][i].source(), objects_[n]) ||
                    !detail::same_shape(cofaces_[n][i].target(), objects_[n + 1]))
                    throw ValidationError("coface d_" + std::to_string(i) + " at level " + std::to_string(n) +
                                          " has wrong endpoints");
        }
        for (std::size_t n = 0; n + 2 <= top; ++n) {
            for (const auto& [ij, m] : tracks_[n])
                if (ij.first > ij.second || ij.second > n + 1)
                    throw ValidationError("track index (" + std::to_string(ij.first) + ", " +
                                          std::to_string(ij.second) + ") out of range at level " + std::to_string(n));
            for (std::size_t j = 0; j <= n + 1; ++j)
                for (std::size_t i = 0; i <= j; ++i) {
                    try {
                        Track(compose(coface(n + 1, i), coface(n, j)), compose(coface(n + 1, j + 1), coface(n, i)),
                              track(n, i, j));
                    } catch (const ValidationError& e) {
                        throw ValidationError("alpha_{" + std::to_string(i) + "," + std::to_string(j) +
                                              "} at level " + std::to_string(n) + " is invalid: " + e.what());
                    }
                }
        }
        for (std::size_t n = 0; n + 3 <= top; ++n)
            for (std::size_t k = 0; k <= n + 1; ++k)
                for (std::size_t j = 0; j <= k; ++j)
                    for (std::size_t i = 0; i <= j; ++i)
                        if (!hexagon_holds(n, i, j, k))
                            throw ValidationError("hexagon fails at level " + std::to_string(n) + " for (i,j,k) = (" +
                                                  std::to_string(i) + "," + std::to_string(j) + "," +
                                                  std::to_string(k) + ")");
    }

    [[nodiscard]] std::size_t level() const noexcept { return objects_.size() - 1; }
    [[nodiscard]] const Pic2Group& object(std::size_t n) const { return objects_.at(n); }
    [[nodiscard]] const StrictMor& coface(std::size_t n, std::size_t i) const { return cofaces_.at(n).at(i); }
    [[nodiscard]] Matrix track(std::size_t n, std::size_t i, std::size_t j) const {
        auto it = tracks_.at(n).find({i, j});
        if (it != tracks_[n].end()) return it->second;
        return Matrix(objects_[n + 2].c1().ngens(), objects_[n].c0().ngens());
    }

private:
    // d_i d_j d_k => d_{k+2} d_{j+1} d_i along both sides of the hexagon.
    [[nodiscard]] bool hexagon_holds(std::size_t n, std::size_t i, std::size_t j, std::size_t k) const {
        auto f1 = [&](std::size_t lvl, std::size_t a) { return coface(lvl, a).f1().matrix(); };
        auto f0 = [&](std::size_t lvl, std::size_t a) { return coface(lvl, a).f0().matrix(); };
        Matrix left = f1(n + 2, i) * track(n, j, k) + track(n + 1, i, k + 1) * f0(n, j) +
                      f1(n + 2, k + 2) * track(n, i, j);
        Matrix right = track(n + 1, i, j) * f0(n, k) + f1(n + 2, j + 1) * track(n, i, k) +
                       track(n + 1, j + 1, k + 1) * f0(n, i);
        return detail::homs_agree(objects_[n + 3].c1(), left, right);
    }

    std::vector<Pic2Group> objects_;
    std::vector<std::vector<StrictMor>> cofaces_;
    std::vector<TrackTable> tracks_;
};

inline PrecosimplicialPic mk_precosimplicial(std::vector<Pic2Group> objects,
                                             std::vector<std::vector<StrictMor>> cofaces,
                                             std::vector<PrecosimplicialPic::TrackTable> tracks = {}) {
    return PrecosimplicialPic(std::move(objects), std::move(cofaces), std::move(tracks));
}

/// Cosimplicial abelian group truncated at level groups.size() - 1.
struct CosimplicialAb {
    std::vector<FgAbGroup> groups;
    std::vector<std::vector<GroupHom>> cofaces;  // cofaces[n][i] : G^n -> G^{n+1}
};

inline PrecosimplicialPic discrete_lift(const CosimplicialAb& g) {
    std::vector<Pic2Group> objs;
    for (const auto& x : g.groups) objs.push_back(discrete(x));
    std::vector<std::vector<StrictMor>> cof;
    for (std::size_t n = 0; n < g.cofaces.size(); ++n) {
        cof.emplace_back();
        for (const auto& h : g.cofaces[n])
            cof.back().emplace_back(objs.at(n), objs.at(n + 1), Matrix(0, 0), h.matrix());
    }
    return PrecosimplicialPic(objs, cof);
}

/// d^n = sum (-1)^i d_i,  track^n = sum_{i <= j} (-1)^{i+j} alpha_{i,j}.
inline TwoCochainComplex to_complex(const PrecosimplicialPic& x) {
    const std::size_t top = x.level();
    std::vector<Pic2Group> objs;
    std::vector<StrictMor> ds;
    std::vector<Matrix> tracks;
    for (std::size_t n = 0; n <= top; ++n) objs.push_back(x.object(n));
    for (std::size_t n = 0; n < top; ++n) {
        Matrix f1(objs[n + 1].c1().ngens(), objs[n].c1().ngens());
        Matrix f0(objs[n + 1].c0().ngens(), objs[n].c0().ngens());
        for (std::size_t i = 0; i <= n + 1; ++i) {
            const Integer sign = i % 2 ? -1 : 1;
            f1 = f1 + sign * x.coface(n, i).f1().matrix();
            f0 = f0 + sign * x.coface(n, i).f0().matrix();
        }
        ds.emplace_back(objs[n], objs[n + 1], f1, f0);
    }
    for (std::size_t n = 0; n + 2 <= top; ++n) {
        Matrix t(objs[n + 2].c1().ngens(), objs[n].c0().ngens());
        for (std::size_t j = 0; j <= n + 1; ++j)
            for (std::size_t i = 0; i <= j; ++i) t = t + Integer((i + j) % 2 ? -1 : 1) * x.track(n, i, j);
        tracks.push_back(t);
    }
    try {
        return TwoCochainComplex(0, objs, ds, tracks);
    } catch (const ValidationError& e) {
        throw Error(std::string("alternating-sum complex fails validation: ") + e.what());
    }
}

/// Truncation level needed for cohomology up to degree top.
inline std::size_t default_truncation(int top) { return static_cast<std::size_t>(std::max(top, 0)) + 2; }

}  // namespace stackcoh
