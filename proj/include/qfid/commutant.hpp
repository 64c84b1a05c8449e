// commutant.hpp — commutant-space dimension of a state collection, the
// injectivity criterion derived from it, and the projector-purity
// certificate for unitarity of a dynamical map.

#pragma once

#include "qfid/channels.hpp"
#include "qfid/linalg.hpp"
#include "qfid/states.hpp"

#include <vector>

namespace qfid {

struct CommutantResult {
    Index dimension = 0;
    std::vector<Matrix> basis_ops;  // orthonormal under the HS inner product
    double residual = 0;            // max_j ||[X, rho_j]||_F over basis ops
};

// Dimension of {X : [X, rho_j] = 0 for all j}, computed as the nullspace of
// the stacked commutator superoperators (rho^T x I - I x rho acting on the
// column-major vec(X)). This is the *linear* commutant; dimension 1 implies
// the projective-unitary commutant is trivial, which is the direction every
// caller needs.
inline CommutantResult commutant_dimension(const std::vector<DensityOperator>& states,
                                           double rank_tol = 1e-8) {
    if (states.empty()) {
        throw std::invalid_argument("commutant_dimension: empty state list");
    }
    const Index d = states.front().dim();
    if (d > 16) {
        throw std::invalid_argument("commutant_dimension: d > 16 unsupported (d^4 cost)");
    }
    for (const auto& s : states) {
        if (s.dim() != d) {
            throw std::invalid_argument("commutant_dimension: mixed dimensions");
        }
    }
    const Index n = d * d;
    const Matrix id = Matrix::Identity(d, d);
    Matrix stacked(static_cast<Index>(states.size()) * n, n);
    for (std::size_t j = 0; j < states.size(); ++j) {
        stacked.middleRows(static_cast<Index>(j) * n, n) =
            kron(states[j].rho.transpose(), id) - kron(id, states[j].rho);
    }

    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
    const RealVector sigma = svd.singularValues();
    const double sigma_max = sigma.size() ? sigma(0) : 0.0;

    CommutantResult result;
    for (Index k = 0; k < n; ++k) {
        if (sigma_max == 0.0 || sigma(k) < rank_tol * sigma_max) {
            const Vector col = svd.matrixV().col(k);
            result.basis_ops.push_back(Eigen::Map<const Matrix>(col.data(), d, d));
        }
    }
    result.dimension = static_cast<Index>(result.basis_ops.size());
    for (const auto& x : result.basis_ops) {
        for (const auto& s : states) {
            result.residual = std::max(result.residual, commutator(x, s.rho).norm());
        }
    }
    return result;
}

// True iff only multiples of the identity commute with every state, i.e.
// time-evolved copies of these states distinguish any two unitaries.
inline bool check_injectivity(const std::vector<DensityOperator>& states) {
    return commutant_dimension(states).dimension == 1;
}

struct UnitarityVerdict {
    bool is_unitary = false;
    RealVector projector_purities;  // Tr[D(P_i)^2] for i = 1..d, then D(P_TR)
    double orthogonality_residual = 0;
    double tr_purity = 0;
};

// A map is unitary iff it sends the d basis projectors onto d orthonormal
// one-dimensional projectors and the totally rotated projector onto a
// one-dimensional projector; all three conditions reduce to purity and
// pairwise-overlap checks on the evolved states.
inline UnitarityVerdict certify_unitarity(const QuantumChannel& ch, const ReducedStateSet& set,
                                          double tol = 1e-8) {
    if (set.kind != SetKind::PureSet) {
        throw std::invalid_argument("certify_unitarity: needs the d+1 pure set");
    }
    if (tol <= 0) throw std::invalid_argument("certify_unitarity: tol must be > 0");
    const Index d = set.d;

    std::vector<Matrix> evolved;
    evolved.reserve(static_cast<std::size_t>(d) + 1);
    for (const auto& s : set.states) evolved.push_back(apply(ch, s).rho);

    UnitarityVerdict v;
    v.projector_purities.resize(d + 1);
    for (Index j = 0; j <= d; ++j) {
        v.projector_purities(j) = purity(evolved[static_cast<std::size_t>(j)]);
    }
    v.tr_purity = v.projector_purities(d);
    for (Index i = 0; i < d; ++i) {
        for (Index j = i + 1; j < d; ++j) {
            const double overlap = std::abs((evolved[static_cast<std::size_t>(i)] *
                                             evolved[static_cast<std::size_t>(j)])
                                                .trace());
            v.orthogonality_residual = std::max(v.orthogonality_residual, overlap);
        }
    }
    v.is_unitary = v.projector_purities.minCoeff() > 1.0 - tol &&
                   v.orthogonality_residual < tol;
    return v;
}

}  // namespace qfid
