// oracles.hpp — test-only reference implementations, kept independent of the
// library code paths they check.

#pragma once

#include "qfid/linalg.hpp"
#include "qfid/states.hpp"

#include <vector>

namespace qfid::oracle {

// exp(-i s H) by scaled-and-squared truncated Taylor series (50 terms after
// rescaling to ||sH|| < 1); no eigendecomposition involved.
inline Matrix taylor_expm(const Matrix& h, double scale) {
    const Index n = h.rows();
    Matrix a = Complex(0.0, -scale) * h;
    int squarings = 0;
    double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    while (norm >= 1.0) {
        a *= 0.5;
        norm *= 0.5;
        ++squarings;
    }
    Matrix result = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int k = 1; k <= 50; ++k) {
        term = term * a / static_cast<double>(k);
        result += term;
    }
    for (int k = 0; k < squarings; ++k) result = result * result;
    return result;
}

// partial trace by explicit four-index summation over scalar entries
inline Matrix naive_partial_trace(const Matrix& m, Index dim_a, Index dim_b, Subsystem keep) {
    const Index dk = keep == Subsystem::A ? dim_a : dim_b;
    Matrix out = Matrix::Zero(dk, dk);
    for (Index a1 = 0; a1 < dim_a; ++a1)
        for (Index b1 = 0; b1 < dim_b; ++b1)
            for (Index a2 = 0; a2 < dim_a; ++a2)
                for (Index b2 = 0; b2 < dim_b; ++b2) {
                    const Complex v = m(a1 * dim_b + b1, a2 * dim_b + b2);
                    if (keep == Subsystem::A && b1 == b2) out(a1, a2) += v;
                    if (keep == Subsystem::B && a1 == a2) out(b1, b2) += v;
                }
    return out;
}

// Commutant dimension by an element-wise linear system: one equation per
// (state, row, col) demanding sum_k X(a,k) rho(k,b) - rho(a,k) X(k,b) = 0,
// rank via hand-rolled complex Gaussian elimination with partial pivoting.
inline Index brute_force_commutant_dimension(const std::vector<DensityOperator>& states,
                                             double pivot_tol = 1e-8) {
    const Index d = states.front().dim();
    const Index n = d * d;  // unknowns X(r,c), flattened as r*d + c
    std::vector<std::vector<Complex>> rows;
    for (const auto& s : states) {
        for (Index a = 0; a < d; ++a) {
            for (Index b = 0; b < d; ++b) {
                std::vector<Complex> row(static_cast<std::size_t>(n), Complex(0, 0));
                for (Index k = 0; k < d; ++k) {
                    row[static_cast<std::size_t>(a * d + k)] += s.rho(k, b);
                    row[static_cast<std::size_t>(k * d + b)] -= s.rho(a, k);
                }
                rows.push_back(std::move(row));
            }
        }
    }
    double scale = 0.0;
    for (const auto& row : rows)
        for (const auto& v : row) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return n;

    Index rank = 0;
    std::size_t next_row = 0;
    for (Index col = 0; col < n && next_row < rows.size(); ++col) {
        std::size_t pivot = next_row;
        for (std::size_t r = next_row + 1; r < rows.size(); ++r) {
            if (std::abs(rows[r][static_cast<std::size_t>(col)]) >
                std::abs(rows[pivot][static_cast<std::size_t>(col)])) {
                pivot = r;
            }
        }
        if (std::abs(rows[pivot][static_cast<std::size_t>(col)]) <= pivot_tol * scale) continue;
        std::swap(rows[pivot], rows[next_row]);
        const Complex p = rows[next_row][static_cast<std::size_t>(col)];
        for (std::size_t r = next_row + 1; r < rows.size(); ++r) {
            const Complex f = rows[r][static_cast<std::size_t>(col)] / p;
            if (f == Complex(0, 0)) continue;
            for (Index c = col; c < n; ++c) {
                rows[r][static_cast<std::size_t>(c)] -=
                    f * rows[next_row][static_cast<std::size_t>(c)];
            }
        }
        ++rank;
        ++next_row;
    }
    return n - rank;
}

}  // namespace qfid::oracle
