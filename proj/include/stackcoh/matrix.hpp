#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stackcoh {

using Integer = boost::multiprecision::cpp_int;
using Vec = std::vector<Integer>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when input data violates a structural invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Dense row-major integer matrix.  Zero-sized dimensions are allowed.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::initializer_list<std::initializer_list<long long>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw ValidationError("ragged matrix literal");
            for (long long v : r) data_.emplace_back(v);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static Matrix from_rows(const std::vector<Vec>& rows, std::size_t cols) {
        Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw ValidationError("row length mismatch");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static Matrix from_columns(const std::vector<Vec>& cols, std::size_t rows) {
        Matrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows) throw ValidationError("column length mismatch");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] Vec row(std::size_t i) const {
        return Vec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                   data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }
    [[nodiscard]] Vec col(std::size_t j) const {
        Vec v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    [[nodiscard]] bool col_equals(std::size_t j, const Matrix& o) const {
        for (std::size_t i = 0; i < rows_; ++i)
            if ((*this)(i, j) != o(i, j)) return false;
        return true;
    }
    void set_col(std::size_t j, const Vec& v) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    [[nodiscard]] bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const Integer& v) { return v == 0; });
    }

    [[nodiscard]] Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Rows [r0, r1) and columns [c0, c1).
    [[nodiscard]] Matrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const {
        Matrix b(r1 - r0, c1 - c0);
        for (std::size_t i = r0; i < r1; ++i)
            for (std::size_t j = c0; j < c1; ++j) b(i - r0, j - c0) = (*this)(i, j);
        return b;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    [[nodiscard]] Vec apply(const Vec& x) const {
        if (x.size() != cols_) throw ValidationError("matrix-vector dimension mismatch");
        Vec y(rows_);
        for (std::size_t j = 0; j < cols_; ++j) {
            if (x[j] == 0) continue;
            for (std::size_t i = 0; i < rows_; ++i) {
                const Integer& a = (*this)(i, j);
                if (a != 0) y[i] += a * x[j];
            }
        }
        return y;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw ValidationError("matrix product dimension mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Integer& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const Integer& bkj = b(k, j);
                    if (bkj != 0) c(i, j) += aik * bkj;
                }
            }
        return c;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) {
        a.check_same(b);
        for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
        return a;
    }
    friend Matrix operator-(Matrix a, const Matrix& b) {
        a.check_same(b);
        for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
        return a;
    }
    friend Matrix operator-(Matrix a) {
        for (auto& v : a.data_) v = -v;
        return a;
    }
    friend Matrix operator*(const Integer& s, Matrix a) {
        for (auto& v : a.data_) v *= s;
        return a;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    /// [a | b]
    [[nodiscard]] static Matrix hcat(const std::vector<const Matrix*>& parts, std::size_t rows) {
        std::size_t cols = 0;
        for (const Matrix* p : parts) {
            if (p->rows() != rows) throw ValidationError("hcat row mismatch");
            cols += p->cols();
        }
        Matrix m(rows, cols);
        std::size_t c0 = 0;
        for (const Matrix* p : parts) {
            m.set_block(0, c0, *p);
            c0 += p->cols();
        }
        return m;
    }

    [[nodiscard]] static Matrix vcat(const std::vector<const Matrix*>& parts, std::size_t cols) {
        std::size_t rows = 0;
        for (const Matrix* p : parts) {
            if (p->cols() != cols) throw ValidationError("vcat column mismatch");
            rows += p->rows();
        }
        Matrix m(rows, cols);
        std::size_t r0 = 0;
        for (const Matrix* p : parts) {
            m.set_block(r0, 0, *p);
            r0 += p->rows();
        }
        return m;
    }

    /// Block diagonal matrix.
    [[nodiscard]] static Matrix direct_sum(const std::vector<Matrix>& parts) {
        std::size_t r = 0, c = 0;
        for (const auto& p : parts) {
            r += p.rows();
            c += p.cols();
        }
        Matrix m(r, c);
        r = c = 0;
        for (const auto& p : parts) {
            m.set_block(r, c, p);
            r += p.rows();
            c += p.cols();
        }
        return m;
    }

    // Elementary operations used by the reduction routines.
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }
    /// row[dst] += q * row[src]
    void add_row(std::size_t dst, std::size_t src, const Integer& q) {
        if (q == 0) return;
        Integer* d = &data_[dst * cols_];
        const Integer* s = &data_[src * cols_];
        for (std::size_t j = 0; j < cols_; ++j)
            if (s[j] != 0) d[j] += q * s[j];
    }
    /// col[dst] += q * col[src]
    void add_col(std::size_t dst, std::size_t src, const Integer& q) {
        if (q == 0) return;
        for (std::size_t i = 0; i < rows_; ++i) {
            const Integer& s = (*this)(i, src);
            if (s != 0) (*this)(i, dst) += q * s;
        }
    }
    void negate_row(std::size_t r) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
    }
    void negate_col(std::size_t c) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
    }

    [[nodiscard]] std::string str() const {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < rows_; ++i) {
            os << (i ? ",[" : "[");
            for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << (*this)(i, j);
            os << ']';
        }
        os << ']';
        return os.str();
    }

private:
    void check_same(const Matrix& b) const {
        if (rows_ != b.rows_ || cols_ != b.cols_) throw ValidationError("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

inline Vec unit_vec(std::size_t n, std::size_t i) {
    Vec v(n);
    v[i] = 1;
    return v;
}

inline bool is_zero_vec(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

/// Euclidean remainder in [0, m) for m > 0.
inline Integer mod_floor(const Integer& a, const Integer& m) {
    Integer r = a % m;
    if (r < 0) r += m;
    return r;
}

}  // namespace stackcoh
