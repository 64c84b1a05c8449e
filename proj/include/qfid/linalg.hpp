// linalg.hpp — dense complex kernel: random matrices, Hermitian eigensolves,
// matrix exponentials, orthonormalization, partial trace, Kronecker products.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace qfid {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// ---------------------------------------------------------------------------
// Rng — deterministic, stream-splittable random source
// ---------------------------------------------------------------------------
//
// Draws are bit-reproducible across runs and platforms for a fixed
// (seed, stream) pair: the engine is the fully specified mt19937_64 and the
// uniform/normal transforms are written out explicitly instead of relying on
// std::*_distribution (whose output is implementation-defined).

class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {
        // splitmix64 on (seed, stream) decorrelates nearby streams
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        engine_.seed(z ^ (z >> 31));
    }

    static constexpr const char* algorithm() { return "mt19937_64/boxmuller-v1"; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    // uniform on [0, 1), 53-bit resolution
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform on the half-open interval (0, hi]
    double uniform_positive(double hi) {
        return (1.0 - uniform()) * hi;
    }

    // standard normal via Box-Muller; caches the second variate
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Complex normal_complex() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// ---------------------------------------------------------------------------
// Shape / validity helpers
// ---------------------------------------------------------------------------

inline void require_square(const Matrix& A, const char* who) {
    if (A.rows() != A.cols() || A.rows() < 1) {
        throw std::invalid_argument(std::string(who) + ": square matrix required, got " +
                                    std::to_string(A.rows()) + "x" + std::to_string(A.cols()));
    }
}

inline double max_abs(const Matrix& A) {
    return A.size() == 0 ? 0.0 : A.cwiseAbs().maxCoeff();
}

// max-norm deviation from Hermiticity, relative to the matrix scale
inline double hermiticity_defect(const Matrix& A) {
    const double scale = std::max(1.0, max_abs(A));
    return max_abs(A - A.adjoint()) / scale;
}

inline bool is_hermitian(const Matrix& A, double tol = 1e-10) {
    return A.rows() == A.cols() && hermiticity_defect(A) <= tol;
}

inline bool is_unitary(const Matrix& U, double tol = 1e-10) {
    if (U.rows() != U.cols()) return false;
    return max_abs(U.adjoint() * U - Matrix::Identity(U.rows(), U.cols())) <= tol;
}

// ---------------------------------------------------------------------------
// Random matrices
// ---------------------------------------------------------------------------

// d x d Ginibre matrix: i.i.d. entries with N(0,1) real and imaginary parts
inline Matrix ginibre(Index d, Rng& rng) {
    if (d < 1) throw std::invalid_argument("ginibre: dimension must be >= 1");
    Matrix A(d, d);
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < d; ++j)
            A(i, j) = rng.normal_complex();
    return A;
}

inline Matrix hermitize(const Matrix& A) {
    require_square(A, "hermitize");
    return 0.5 * (A + A.adjoint());
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition and exponential
// ---------------------------------------------------------------------------

struct HermitianEigen {
    RealVector values;  // ascending
    Matrix vectors;     // unitary, columns match values
};

inline HermitianEigen eig_hermitian(const Matrix& H, double tol = 1e-10) {
    require_square(H, "eig_hermitian");
    const double defect = hermiticity_defect(H);
    if (defect > tol) {
        throw std::invalid_argument("eig_hermitian: input not Hermitian, relative defect " +
                                    std::to_string(defect));
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(H));
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

// exp(-i s H) for Hermitian H, via eigendecomposition
inline Matrix herm_expm(const Matrix& H, double scale) {
    const auto [w, V] = eig_hermitian(H);
    Vector phases(w.size());
    for (Index k = 0; k < w.size(); ++k) {
        phases(k) = std::polar(1.0, -scale * w(k));
    }
    return V * phases.asDiagonal() * V.adjoint();
}

// ---------------------------------------------------------------------------
// Haar-ready orthonormalization
// ---------------------------------------------------------------------------

// QR-based Gram-Schmidt with the phase convention that makes the triangular
// factor's diagonal real positive; Ginibre input then yields Haar measure.
inline Matrix gram_schmidt_unitary(const Matrix& G, double pivot_tol = 1e-12) {
    require_square(G, "gram_schmidt_unitary");
    const Index n = G.rows();
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ();
    const Matrix R = qr.matrixQR().template triangularView<Eigen::Upper>();

    double max_diag = 0.0;
    for (Index k = 0; k < n; ++k) max_diag = std::max(max_diag, std::abs(R(k, k)));
    if (max_diag <= 0.0) {
        throw std::invalid_argument("gram_schmidt_unitary: zero input");
    }
    for (Index k = 0; k < n; ++k) {
        const Complex r = R(k, k);
        if (std::abs(r) <= pivot_tol * max_diag) {
            throw std::invalid_argument("gram_schmidt_unitary: rank-deficient input (pivot " +
                                        std::to_string(k) + ")");
        }
        Q.col(k) *= r / std::abs(r);
    }
    return Q;
}

// ---------------------------------------------------------------------------
// Tensor structure
// ---------------------------------------------------------------------------

enum class Subsystem { A, B };

// Kronecker product, (i*rowsB+k, j*colsB+l) -> A(i,j)*B(k,l)
inline Matrix kron(const Matrix& A, const Matrix& B) {
    Matrix K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Index i = 0; i < A.rows(); ++i)
        for (Index j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

// Partial trace of a (dimA*dimB)-dimensional operator onto one subsystem.
// Index convention matches kron: row = a*dimB + b.
inline Matrix partial_trace(const Matrix& M, Index dimA, Index dimB, Subsystem keep) {
    if (dimA < 1 || dimB < 1) {
        throw std::invalid_argument("partial_trace: subsystem dimensions must be >= 1");
    }
    const Index n = dimA * dimB;
    if (M.rows() != n || M.cols() != n) {
        throw std::invalid_argument("partial_trace: matrix is " + std::to_string(M.rows()) +
                                    "x" + std::to_string(M.cols()) + ", expected " +
                                    std::to_string(n) + "x" + std::to_string(n));
    }
    if (keep == Subsystem::A) {
        Matrix out = Matrix::Zero(dimA, dimA);
        for (Index i = 0; i < dimA; ++i)
            for (Index j = 0; j < dimA; ++j)
                for (Index b = 0; b < dimB; ++b)
                    out(i, j) += M(i * dimB + b, j * dimB + b);
        return out;
    }
    Matrix out = Matrix::Zero(dimB, dimB);
    for (Index i = 0; i < dimB; ++i)
        for (Index j = 0; j < dimB; ++j)
            for (Index a = 0; a < dimA; ++a)
                out(i, j) += M(a * dimB + i, a * dimB + j);
    return out;
}

// ---------------------------------------------------------------------------
// Small helpers used throughout
// ---------------------------------------------------------------------------

inline double real_trace(const Matrix& A) { return A.trace().real(); }

// Tr[rho^2]
inline double purity(const Matrix& rho) {
    return (rho * rho).trace().real();
}

// Hilbert-Schmidt inner product Tr[A^+ B]
inline Complex hs_inner(const Matrix& A, const Matrix& B) {
    return (A.adjoint() * B).trace();
}

inline Matrix commutator(const Matrix& A, const Matrix& B) {
    return A * B - B * A;
}

}  // namespace qfid
