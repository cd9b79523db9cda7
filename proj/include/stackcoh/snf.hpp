#pragma once

#include "stackcoh/matrix.hpp"

#include <optional>

namespace stackcoh {

/// Result of a Smith reduction U * M * V = D.  Transform matrices are only
/// populated when requested; `v_inv` is the inverse of `v`.
struct SmithForm {
    Matrix u;
    Matrix d;
    Matrix v;
    Matrix v_inv;
    std::vector<Integer> diagonal;  // min(rows, cols) entries, d_1 | d_2 | ...
    std::size_t rank = 0;
};

struct SmithOptions {
    bool want_u = true;
    bool want_v = true;
    bool want_v_inv = false;
};

namespace detail {

class SmithReducer {
public:
    SmithReducer(const Matrix& m, SmithOptions opt) : a_(m), opt_(opt) {
        if (opt_.want_u) u_ = Matrix::identity(a_.rows());
        if (opt_.want_v) v_ = Matrix::identity(a_.cols());
        if (opt_.want_v_inv) vi_ = Matrix::identity(a_.cols());
    }

    SmithForm run() {
        const std::size_t n = std::min(a_.rows(), a_.cols());
        std::size_t t = 0;
        for (; t < n; ++t) {
            if (!place_global_pivot(t)) break;
            reduce_at(t);
            if (a_(t, t) < 0) {
                a_.negate_row(t);
                if (opt_.want_u) u_.negate_row(t);
            }
        }
        SmithForm out;
        out.rank = t;
        out.diagonal.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.diagonal[i] = a_(i, i);
        out.d = std::move(a_);
        out.u = std::move(u_);
        out.v = std::move(v_);
        out.v_inv = std::move(vi_);
        return out;
    }

private:
    // Smallest nonzero |entry| in the trailing block, ties broken row-major.
    bool place_global_pivot(std::size_t t) {
        std::size_t bi = 0, bj = 0;
        bool found = false;
        Integer best;
        for (std::size_t i = t; i < a_.rows(); ++i)
            for (std::size_t j = t; j < a_.cols(); ++j) {
                const Integer& x = a_(i, j);
                if (x == 0) continue;
                Integer ax = abs(x);
                if (!found || ax < best) {
                    best = std::move(ax);
                    bi = i;
                    bj = j;
                    found = true;
                    if (best == 1) goto done;
                }
            }
    done:
        if (!found) return false;
        do_swap_rows(t, bi);
        do_swap_cols(t, bj);
        return true;
    }

    void reduce_at(std::size_t t) {
        for (;;) {
            bool dirty = false;
            const Integer p = a_(t, t);
            for (std::size_t i = t + 1; i < a_.rows(); ++i) {
                if (a_(i, t) == 0) continue;
                Integer q = a_(i, t) / p;
                do_add_row(i, t, -q);
                if (a_(i, t) != 0) dirty = true;
            }
            for (std::size_t j = t + 1; j < a_.cols(); ++j) {
                if (a_(t, j) == 0) continue;
                Integer q = a_(t, j) / p;
                do_add_col(j, t, -q);
                if (a_(t, j) != 0) dirty = true;
            }
            if (dirty) {
                place_cross_pivot(t);
                continue;
            }
            // Divisibility of the trailing block by the pivot.
            if (p == 1 || p == -1) return;
            bool fixed = false;
            for (std::size_t i = t + 1; i < a_.rows() && !fixed; ++i)
                for (std::size_t j = t + 1; j < a_.cols(); ++j)
                    if (a_(i, j) != 0 && a_(i, j) % p != 0) {
                        do_add_row(t, i, 1);
                        fixed = true;
                        break;
                    }
            if (!fixed) return;
        }
    }

    // Smallest nonzero entry in row t / column t (beyond the pivot) becomes the pivot.
    void place_cross_pivot(std::size_t t) {
        Integer best = abs(a_(t, t));
        std::size_t bi = t, bj = t;
        for (std::size_t i = t + 1; i < a_.rows(); ++i)
            if (a_(i, t) != 0 && abs(a_(i, t)) < best) {
                best = abs(a_(i, t));
                bi = i;
                bj = t;
            }
        for (std::size_t j = t + 1; j < a_.cols(); ++j)
            if (a_(t, j) != 0 && abs(a_(t, j)) < best) {
                best = abs(a_(t, j));
                bi = t;
                bj = j;
            }
        do_swap_rows(t, bi);
        do_swap_cols(t, bj);
    }

    void do_swap_rows(std::size_t a, std::size_t b) {
        a_.swap_rows(a, b);
        if (opt_.want_u) u_.swap_rows(a, b);
    }
    void do_swap_cols(std::size_t a, std::size_t b) {
        a_.swap_cols(a, b);
        if (opt_.want_v) v_.swap_cols(a, b);
        if (opt_.want_v_inv) vi_.swap_rows(a, b);
    }
    void do_add_row(std::size_t dst, std::size_t src, const Integer& q) {
        a_.add_row(dst, src, q);
        if (opt_.want_u) u_.add_row(dst, src, q);
    }
    void do_add_col(std::size_t dst, std::size_t src, const Integer& q) {
        a_.add_col(dst, src, q);
        if (opt_.want_v) v_.add_col(dst, src, q);
        if (opt_.want_v_inv) vi_.add_row(src, dst, -q);
    }

    Matrix a_, u_, v_, vi_;
    SmithOptions opt_;
};

}  // namespace detail

/// Smith normal form with unimodular transforms.  Deterministic: pivots are
/// the smallest absolute entry, ties broken by row-major position.
inline SmithForm smith_normal_form(const Matrix& m, SmithOptions opt = {}) {
    return detail::SmithReducer(m, opt).run();
}

/// Exact solver for integer systems A x = b and integer null spaces of A.
class IntegerSolver {
public:
    IntegerSolver() = default;
    explicit IntegerSolver(const Matrix& a) : rows_(a.rows()), cols_(a.cols()) {
        snf_ = smith_normal_form(a, {.want_u = true, .want_v = true, .want_v_inv = false});
    }

    [[nodiscard]] std::size_t rank() const noexcept { return snf_.rank; }

    /// Some integer solution of A x = b, if one exists.
    [[nodiscard]] std::optional<Vec> solve(const Vec& b) const {
        if (b.size() != rows_) throw ValidationError("solve: right-hand side has wrong length");
        Vec y = snf_.u.apply(b);
        Vec z(cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i < snf_.rank) {
                const Integer& d = snf_.diagonal[i];
                if (y[i] % d != 0) return std::nullopt;
                z[i] = y[i] / d;
            } else if (y[i] != 0) {
                return std::nullopt;
            }
        }
        return snf_.v.apply(z);
    }

    /// Basis of the integer kernel, as columns.
    [[nodiscard]] Matrix kernel_basis() const { return snf_.v.block(0, cols_, snf_.rank, cols_); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    SmithForm snf_;
};

inline Matrix integer_kernel(const Matrix& a) {
    auto snf = smith_normal_form(a, {.want_u = false, .want_v = true, .want_v_inv = false});
    return snf.v.block(0, a.cols(), snf.rank, a.cols());
}

}  // namespace stackcoh
