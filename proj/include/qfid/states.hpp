// states.hpp — density operators, projectors, and the reduced input-state
// sets used for gate characterization: the d+1 pure set, the two-state
// minimal set, and mutually unbiased basis pairs.

#pragma once

#include "qfid/linalg.hpp"

#include <vector>

namespace qfid {

// ---------------------------------------------------------------------------
// DensityOperator / Projector
// ---------------------------------------------------------------------------

struct DensityOperator {
    Matrix rho;
    Index dim() const { return rho.rows(); }
};

// Validated constructor: Hermitian, unit trace, positive semidefinite.
inline DensityOperator make_density(const Matrix& m, double tol = 1e-10) {
    require_square(m, "make_density");
    if (hermiticity_defect(m) > tol) {
        throw std::invalid_argument("make_density: not Hermitian");
    }
    if (std::abs(real_trace(m) - 1.0) > tol || std::abs(m.trace().imag()) > tol) {
        throw std::invalid_argument("make_density: trace != 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tol) {
        throw std::invalid_argument("make_density: negative eigenvalue " +
                                    std::to_string(es.eigenvalues().minCoeff()));
    }
    return {m};
}

inline DensityOperator pure_state(const Vector& psi) {
    const double n = psi.norm();
    if (n <= 0.0) throw std::invalid_argument("pure_state: zero vector");
    Vector v = psi / n;
    return {v * v.adjoint()};
}

struct Projector {
    Matrix mat;
    Index rank;
};

// ---------------------------------------------------------------------------
// Reduced state sets
// ---------------------------------------------------------------------------

enum class SetKind {
    PureSet,     // d basis projectors + the totally rotated state (d+1 states)
    MinimalSet,  // {rho_B with distinct spectrum, rho_TR} (2 states)
    MubPair,     // two mutually unbiased bases (2d pure states)
};

// For PureSet/MinimalSet `basis` is the d x d reference basis (columns).
// For MubPair it is the d x 2d concatenation [B1 | B2] of both bases.
//
// MinimalSet caveat: distinguishing unitaries with the two-state set assumes
// a unital map; detecting non-unital behaviour needs an extra input state
// that this library does not construct.
struct ReducedStateSet {
    SetKind kind;
    Index d;
    Matrix basis;
    std::vector<DensityOperator> states;
};

inline void require_orthonormal_basis(const Matrix& basis, double tol = 1e-10) {
    require_square(basis, "basis");
    const double defect =
        max_abs(basis.adjoint() * basis - Matrix::Identity(basis.cols(), basis.cols()));
    if (defect > tol) {
        throw std::invalid_argument("basis columns not orthonormal, defect " +
                                    std::to_string(defect));
    }
}

// rank-1 projectors |phi_i><phi_i| onto the basis columns
inline std::vector<Projector> basis_projectors(const Matrix& basis) {
    require_orthonormal_basis(basis);
    std::vector<Projector> out;
    out.reserve(basis.cols());
    for (Index i = 0; i < basis.cols(); ++i) {
        out.push_back({basis.col(i) * basis.col(i).adjoint(), 1});
    }
    return out;
}

// |Psi><Psi| with |Psi> = d^{-1/2} sum_i |phi_i>; overlaps every basis projector
inline DensityOperator totally_rotated_state(const Matrix& basis) {
    require_orthonormal_basis(basis);
    const Index d = basis.cols();
    Vector psi = Vector::Zero(basis.rows());
    for (Index i = 0; i < d; ++i) psi += basis.col(i);
    psi /= std::sqrt(static_cast<double>(d));
    return {psi * psi.adjoint()};
}

// the d+1 pure states: basis projectors first, rho_TR last
inline ReducedStateSet pure_set(const Matrix& basis) {
    const auto projectors = basis_projectors(basis);
    ReducedStateSet set{SetKind::PureSet, basis.cols(), basis, {}};
    set.states.reserve(projectors.size() + 1);
    for (const auto& p : projectors) set.states.push_back({p.mat});
    set.states.push_back(totally_rotated_state(basis));
    return set;
}

inline ReducedStateSet pure_set_computational(Index d) {
    return pure_set(Matrix::Identity(d, d));
}

// gap-uniform default spectrum: lambda_i = 2(d+1-i)/(d(d+1)), i = 1..d
inline RealVector default_minimal_spectrum(Index d) {
    RealVector lam(d);
    for (Index i = 0; i < d; ++i) {
        lam(i) = 2.0 * static_cast<double>(d - i) / (static_cast<double>(d) * (d + 1));
    }
    return lam;
}

// {rho_B = sum_i lambda_i P_i, rho_TR}; spectrum must be a distinct simplex
inline ReducedStateSet minimal_set(const Matrix& basis, const RealVector& eigenvalues) {
    require_orthonormal_basis(basis);
    const Index d = basis.cols();
    if (eigenvalues.size() != d) {
        throw std::invalid_argument("minimal_set: spectrum size mismatch");
    }
    double sum = 0.0;
    for (Index i = 0; i < d; ++i) {
        if (eigenvalues(i) < 0.0) {
            throw std::invalid_argument("minimal_set: negative eigenvalue");
        }
        sum += eigenvalues(i);
        for (Index j = 0; j < i; ++j) {
            if (std::abs(eigenvalues(i) - eigenvalues(j)) <= 1e-8) {
                throw std::invalid_argument("minimal_set: degenerate spectrum at (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    if (std::abs(sum - 1.0) > 1e-10) {
        throw std::invalid_argument("minimal_set: eigenvalues must sum to 1");
    }
    Matrix rho_b = Matrix::Zero(d, d);
    for (Index i = 0; i < d; ++i) {
        rho_b += eigenvalues(i) * (basis.col(i) * basis.col(i).adjoint());
    }
    ReducedStateSet set{SetKind::MinimalSet, d, basis, {}};
    set.states.push_back({rho_b});
    set.states.push_back(totally_rotated_state(basis));
    return set;
}

// computational basis + Hadamard-rotated basis; both separable, mutually
// unbiased: |<k_i^(1)|k_j^(2)>|^2 = 1/d for all i, j
inline ReducedStateSet mub_pair(int n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("mub_pair: need at least one qubit");
    const Index d = Index{1} << n_qubits;
    const Matrix b1 = Matrix::Identity(d, d);
    Matrix h1(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h1 << s, s, s, -s;
    Matrix b2 = h1;
    for (int q = 1; q < n_qubits; ++q) b2 = kron(b2, h1);

    Matrix basis(d, 2 * d);
    basis.leftCols(d) = b1;
    basis.rightCols(d) = b2;

    ReducedStateSet set{SetKind::MubPair, d, basis, {}};
    set.states.reserve(2 * d);
    for (Index i = 0; i < d; ++i) set.states.push_back({b1.col(i) * b1.col(i).adjoint()});
    for (Index i = 0; i < d; ++i) set.states.push_back({b2.col(i) * b2.col(i).adjoint()});
    return set;
}

inline Matrix mub_first_basis(const ReducedStateSet& set) {
    return set.kind == SetKind::MubPair ? set.basis.leftCols(set.d) : set.basis;
}

inline Matrix mub_second_basis(const ReducedStateSet& set) {
    if (set.kind != SetKind::MubPair) {
        throw std::invalid_argument("mub_second_basis: not a MUB pair");
    }
    return set.basis.rightCols(set.d);
}

// Every designated totally-rotated state must overlap every reference basis
// projector: ||P_TR P_i||_F above threshold separates structural zeros from
// the generic ~1/d overlap.
inline bool is_totally_rotating(const ReducedStateSet& set, double threshold = 1e-8) {
    const Matrix ref = mub_first_basis(set);
    const auto projectors = basis_projectors(ref);
    const auto rotated_against_all = [&](const Matrix& p_tr) {
        for (const auto& p : projectors) {
            if ((p_tr * p.mat).norm() <= threshold) return false;
        }
        return true;
    };
    switch (set.kind) {
        case SetKind::PureSet:
        case SetKind::MinimalSet:
            return rotated_against_all(set.states.back().rho);
        case SetKind::MubPair:
            for (Index i = set.d; i < 2 * set.d; ++i) {
                if (!rotated_against_all(set.states[static_cast<std::size_t>(i)].rho)) {
                    return false;
                }
            }
            return true;
    }
    return false;
}

}  // namespace qfid
