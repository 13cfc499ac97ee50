#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pbcode/field.hpp"

namespace pbcode {

struct ShapeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SingularMatrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense row-major matrix over a finite field.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<FieldElem> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

    FieldElem& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    FieldElem at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static Mat from_rows(std::vector<std::vector<FieldElem>> rows_in) {
        Mat m(rows_in.size(), rows_in.empty() ? 0 : rows_in[0].size());
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (rows_in[i].size() != m.cols) throw ShapeMismatch("ragged rows");
            for (std::size_t j = 0; j < m.cols; ++j) m.at(i, j) = rows_in[i][j];
        }
        return m;
    }

    bool operator==(const Mat&) const = default;
};

inline Mat mat_mul(const Field& f, const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw ShapeMismatch("mat_mul shape");
    Mat z(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t l = 0; l < x.cols; ++l) {
            FieldElem v = x.at(i, l);
            if (!v) continue;
            for (std::size_t j = 0; j < y.cols; ++j)
                z.at(i, j) = f.add(z.at(i, j), f.mul(v, y.at(l, j)));
        }
    return z;
}

inline Mat mat_add(const Field& f, const Mat& x, const Mat& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw ShapeMismatch("mat_add shape");
    Mat z = x;
    for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] = f.add(z.a[i], y.a[i]);
    return z;
}

namespace detail {

// In-place row echelon on m, mirroring eliminations on rhs when given.
// Returns pivot columns.
inline std::vector<std::size_t> echelon(const Field& f, Mat& m, Mat* rhs) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t sel = row;
        while (sel < m.rows && m.at(sel, col) == 0) ++sel;
        if (sel == m.rows) continue;
        for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(row, j), m.at(sel, j));
        if (rhs)
            for (std::size_t j = 0; j < rhs->cols; ++j) std::swap(rhs->at(row, j), rhs->at(sel, j));
        FieldElem piv_inv = f.inv(m.at(row, col));
        for (std::size_t j = col; j < m.cols; ++j) m.at(row, j) = f.mul(m.at(row, j), piv_inv);
        if (rhs)
            for (std::size_t j = 0; j < rhs->cols; ++j) rhs->at(row, j) = f.mul(rhs->at(row, j), piv_inv);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row) continue;
            FieldElem factor = m.at(i, col);
            if (!factor) continue;
            for (std::size_t j = col; j < m.cols; ++j)
                m.at(i, j) = f.sub(m.at(i, j), f.mul(factor, m.at(row, j)));
            if (rhs)
                for (std::size_t j = 0; j < rhs->cols; ++j)
                    rhs->at(i, j) = f.sub(rhs->at(i, j), f.mul(factor, rhs->at(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace detail

inline std::size_t mat_rank(const Field& f, Mat m) {
    return detail::echelon(f, m, nullptr).size();
}

// Solves A * X = B for square nonsingular A.
inline Mat mat_solve(const Field& f, Mat a, Mat b) {
    if (a.rows != a.cols) throw ShapeMismatch("mat_solve needs square A");
    if (a.rows != b.rows) throw ShapeMismatch("mat_solve A/B row mismatch");
    auto pivots = detail::echelon(f, a, &b);
    if (pivots.size() != a.cols) throw SingularMatrix("singular matrix in mat_solve");
    return b;
}

inline Mat mat_inverse(const Field& f, const Mat& a) {
    if (a.rows != a.cols) throw ShapeMismatch("mat_inverse needs square A");
    return mat_solve(f, a, Mat::identity(a.rows));
}

// Expresses each row of `targets` as a combination of the rows of `basis`:
// returns C with C * basis = targets, or nullopt if some target row is
// outside the row span.
inline std::optional<Mat> solve_in_span(const Field& f, const Mat& basis, const Mat& targets) {
    if (basis.cols != targets.cols) throw ShapeMismatch("solve_in_span width mismatch");
    // Work on the transpose: basis^T * C^T = targets^T.
    Mat bt(basis.cols, basis.rows);
    for (std::size_t i = 0; i < basis.rows; ++i)
        for (std::size_t j = 0; j < basis.cols; ++j) bt.at(j, i) = basis.at(i, j);
    Mat tt(targets.cols, targets.rows);
    for (std::size_t i = 0; i < targets.rows; ++i)
        for (std::size_t j = 0; j < targets.cols; ++j) tt.at(j, i) = targets.at(i, j);
    auto pivots = detail::echelon(f, bt, &tt);
    Mat ct(basis.rows, targets.rows);  // C^T, free variables left at zero
    std::size_t row = 0;
    for (std::size_t col : pivots) {
        for (std::size_t j = 0; j < targets.rows; ++j) ct.at(col, j) = tt.at(row, j);
        ++row;
    }
    // Rows of bt below the pivot count are zero; any leftover rhs there means
    // the target is not in the span.
    for (std::size_t i = pivots.size(); i < bt.rows; ++i)
        for (std::size_t j = 0; j < targets.rows; ++j)
            if (tt.at(i, j) != 0) return std::nullopt;
    Mat c(targets.rows, basis.rows);
    for (std::size_t i = 0; i < c.rows; ++i)
        for (std::size_t j = 0; j < c.cols; ++j) c.at(i, j) = ct.at(j, i);
    return c;
}

// Cauchy matrix: entry (i,j) = 1 / (x_i - y_j). Every entry is nonzero and
// every square submatrix is nonsingular.
inline Mat cauchy_matrix(const Field& f, const std::vector<FieldElem>& x,
                         const std::vector<FieldElem>& y) {
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j)
            if (x[i] == x[j]) throw std::invalid_argument("duplicate x point");
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = i + 1; j < y.size(); ++j)
            if (y[i] == y[j]) throw std::invalid_argument("duplicate y point");
    for (FieldElem xi : x)
        for (FieldElem yj : y)
            if (xi == yj) throw std::invalid_argument("x and y points must be disjoint");
    Mat m(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j)
            m.at(i, j) = f.inv(f.sub(x[i], y[j]));
    return m;
}

}  // namespace pbcode
