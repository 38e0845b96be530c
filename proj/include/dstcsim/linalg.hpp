#pragma once

#include <cmath>
#include <utility>

#include "dstcsim/common.hpp"

namespace dstcsim {

// Dense row-major complex matrix, sized for chip-length systems (N ~ 16).
struct CMatrix {
    int rows = 0;
    int cols = 0;
    CVec a;

    CMatrix() = default;
    CMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

    Complex& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const Complex& at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

inline CVec mat_vec(const CMatrix& m, std::span<const Complex> x) {
    if (static_cast<int>(x.size()) != m.cols)
        throw ModelError("mat_vec: dimension mismatch");
    CVec y(m.rows, Complex{0.0, 0.0});
    for (int i = 0; i < m.rows; ++i) {
        Complex acc{0.0, 0.0};
        for (int j = 0; j < m.cols; ++j)
            acc += m.at(i, j) * x[j];
        y[i] = acc;
    }
    return y;
}

// Solves A X = B for several right-hand sides, Gaussian elimination with
// partial pivoting. B columns are given as separate vectors.
inline std::vector<CVec> solve_multi(CMatrix m, std::vector<CVec> rhs) {
    const int n = m.rows;
    if (m.cols != n)
        throw ModelError("solve_multi: matrix not square");
    for (const CVec& b : rhs)
        if (static_cast<int>(b.size()) != n)
            throw ModelError("solve_multi: rhs length mismatch");

    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::abs(m.at(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double cand = std::abs(m.at(i, k));
            if (cand > best) {
                best = cand;
                pivot = i;
            }
        }
        if (best < 1e-300)
            throw ModelError("solve_multi: singular or nearly singular matrix");
        if (pivot != k) {
            for (int j = 0; j < n; ++j)
                std::swap(m.at(k, j), m.at(pivot, j));
            for (CVec& b : rhs)
                std::swap(b[k], b[pivot]);
        }
        for (int i = k + 1; i < n; ++i) {
            const Complex factor = m.at(i, k) / m.at(k, k);
            if (factor == Complex{0.0, 0.0})
                continue;
            for (int j = k; j < n; ++j)
                m.at(i, j) -= factor * m.at(k, j);
            for (CVec& b : rhs)
                b[i] -= factor * b[k];
        }
    }

    std::vector<CVec> out(rhs.size(), CVec(n));
    for (std::size_t r = 0; r < rhs.size(); ++r) {
        for (int i = n - 1; i >= 0; --i) {
            Complex acc = rhs[r][i];
            for (int j = i + 1; j < n; ++j)
                acc -= m.at(i, j) * out[r][j];
            out[r][i] = acc / m.at(i, i);
        }
    }
    return out;
}

inline CVec solve(const CMatrix& m, const CVec& b) {
    return solve_multi(m, {b})[0];
}

inline double residual_norm(const CMatrix& m, std::span<const Complex> x,
                            std::span<const Complex> b) {
    const CVec ax = mat_vec(m, x);
    double acc = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i)
        acc += std::norm(ax[i] - b[i]);
    return std::sqrt(acc);
}

}  // namespace dstcsim
