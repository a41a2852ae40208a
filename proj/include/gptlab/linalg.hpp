#pragma once

#include <optional>
#include <vector>

#include "gptlab/scalar.hpp"

namespace gptlab {

// Backend-aware Gaussian elimination helpers. Pivoting: exact takes the first
// nonzero entry, float takes the largest magnitude, so rank decisions respect
// the configured tolerance.

template <class B>
int elimination(const B& bk, Mat<B>& m, std::vector<int>* pivot_cols = nullptr) {
    const int rows = static_cast<int>(m.rows());
    const int cols = static_cast<int>(m.cols());
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        if constexpr (B::is_exact) {
            for (int r = rank; r < rows; ++r)
                if (!bk.is_zero(m(r, col))) { piv = r; break; }
        } else {
            typename B::Value best = 0;
            for (int r = rank; r < rows; ++r)
                if (bk.abs(m(r, col)) > best) { best = bk.abs(m(r, col)); piv = r; }
            if (piv >= 0 && bk.is_zero(m(piv, col))) piv = -1;
        }
        if (piv < 0) continue;
        m.row(rank).swap(m.row(piv));
        for (int r = 0; r < rows; ++r) {
            if (r == rank || bk.is_zero(m(r, col))) continue;
            typename B::Value f = m(r, col) / m(rank, col);
            m.row(r) -= f * m.row(rank);
            m(r, col) = 0;
        }
        if (pivot_cols) pivot_cols->push_back(col);
        ++rank;
    }
    return rank;
}

template <class B>
int rank_of(const B& bk, const Mat<B>& m) {
    Mat<B> tmp = m;
    return elimination(bk, tmp);
}

/// Solves a*x = rhs; empty result when the system is inconsistent.
template <class B>
std::optional<Vec<B>> solve_linear(const B& bk, const Mat<B>& a, const Vec<B>& rhs) {
    const int rows = static_cast<int>(a.rows());
    const int cols = static_cast<int>(a.cols());
    Mat<B> aug(rows, cols + 1);
    aug.leftCols(cols) = a;
    aug.col(cols) = rhs;
    std::vector<int> pivots;
    elimination(bk, aug, &pivots);
    Vec<B> x = Vec<B>::Zero(cols);
    int row = 0;
    for (int col : pivots) {
        if (col == cols) return std::nullopt;  // pivot in rhs column
        x(col) = aug(row, cols) / aug(row, col);
        ++row;
    }
    // consistency on remaining rows
    for (int r = row; r < rows; ++r)
        if (!bk.is_zero(aug(r, cols))) return std::nullopt;
    if constexpr (!B::is_exact) {
        Vec<B> resid = a * x - rhs;
        for (int r = 0; r < rows; ++r)
            if (!bk.is_zero(resid(r))) return std::nullopt;
    }
    return x;
}

/// Basis of the null space of a, as columns.
template <class B>
Mat<B> kernel_basis(const B& bk, const Mat<B>& a) {
    const int cols = static_cast<int>(a.cols());
    Mat<B> red = a;
    std::vector<int> pivots;
    elimination(bk, red, &pivots);
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivots) is_pivot[c] = true;
    Mat<B> basis(cols, cols - static_cast<int>(pivots.size()));
    int out = 0;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        Vec<B> v = Vec<B>::Zero(cols);
        v(free) = 1;
        for (int i = 0; i < static_cast<int>(pivots.size()); ++i)
            v(pivots[i]) = -red(i, free) / red(i, pivots[i]);
        basis.col(out++) = v;
    }
    return basis;
}

template <class B>
std::optional<Mat<B>> invert(const B& bk, const Mat<B>& a) {
    const int n = static_cast<int>(a.rows());
    Mat<B> aug(n, 2 * n);
    aug.leftCols(n) = a;
    aug.rightCols(n) = Mat<B>::Identity(n, n);
    std::vector<int> pivots;
    elimination(bk, aug, &pivots);
    if (static_cast<int>(pivots.size()) < n || pivots.back() >= n) return std::nullopt;
    Mat<B> inv(n, n);
    for (int i = 0; i < n; ++i) inv.row(i) = aug.row(i).tail(n) / aug(i, i);
    return inv;
}

/// Kronecker product, row-major pairing: result((i*rowsB+k),(j*colsB+l)) = a(i,j)*b(k,l).
template <class B>
Mat<B> kron(const Mat<B>& a, const Mat<B>& b) {
    Mat<B> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

template <class B>
Vec<B> kron_vec(const Vec<B>& a, const Vec<B>& b) {
    Vec<B> out(a.size() * b.size());
    for (int i = 0; i < a.size(); ++i)
        for (int k = 0; k < b.size(); ++k) out(i * b.size() + k) = a(i) * b(k);
    return out;
}

}  // namespace gptlab
