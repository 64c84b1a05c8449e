// channels.hpp — dynamical maps (unitary or Kraus), named target gates, and
// the random channel ensembles: Haar unitaries, randomized unitaries (generic
// and near-basis), and randomized dynamical maps from a traced-out bath.

#pragma once

#include "qfid/linalg.hpp"
#include "qfid/states.hpp"

#include <string>
#include <vector>

namespace qfid {

// ---------------------------------------------------------------------------
// QuantumChannel / TargetGate
// ---------------------------------------------------------------------------

enum class ChannelRep { Unitary, Kraus };

struct QuantumChannel {
    ChannelRep rep;
    Index d;
    Matrix u;                   // Unitary rep
    std::vector<Matrix> kraus;  // Kraus rep

    static QuantumChannel unitary(Matrix U, double tol = 1e-10) {
        require_square(U, "QuantumChannel::unitary");
        if (!is_unitary(U, tol)) {
            throw std::invalid_argument("QuantumChannel::unitary: matrix not unitary");
        }
        QuantumChannel ch;
        ch.rep = ChannelRep::Unitary;
        ch.d = U.rows();
        ch.u = std::move(U);
        return ch;
    }

    static QuantumChannel kraus_list(std::vector<Matrix> ops, double tol = 1e-8) {
        if (ops.empty()) throw std::invalid_argument("QuantumChannel::kraus_list: empty list");
        const Index d = ops.front().rows();
        Matrix sum = Matrix::Zero(d, d);
        for (const auto& e : ops) {
            if (e.rows() != d || e.cols() != d) {
                throw std::invalid_argument("QuantumChannel::kraus_list: inconsistent shapes");
            }
            sum += e.adjoint() * e;
        }
        if (max_abs(sum - Matrix::Identity(d, d)) > tol) {
            throw std::invalid_argument(
                "QuantumChannel::kraus_list: not trace preserving, defect " +
                std::to_string(max_abs(sum - Matrix::Identity(d, d))));
        }
        QuantumChannel ch;
        ch.rep = ChannelRep::Kraus;
        ch.d = d;
        ch.kraus = std::move(ops);
        return ch;
    }
};

struct TargetGate {
    std::string name;
    Matrix matrix;
    Index d;
};

inline DensityOperator apply(const QuantumChannel& ch, const DensityOperator& state) {
    if (state.dim() != ch.d) {
        throw std::invalid_argument("apply: channel dimension " + std::to_string(ch.d) +
                                    " vs state dimension " + std::to_string(state.dim()));
    }
    Matrix out;
    if (ch.rep == ChannelRep::Unitary) {
        out = ch.u * state.rho * ch.u.adjoint();
    } else {
        out = Matrix::Zero(ch.d, ch.d);
        for (const auto& e : ch.kraus) out += e * state.rho * e.adjoint();
    }
    return {hermitize(out)};
}

// ---------------------------------------------------------------------------
// Named gates
// ---------------------------------------------------------------------------

inline TargetGate target_identity(int n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("target_identity: need >= 1 qubit");
    const Index d = Index{1} << n_qubits;
    return {"identity", Matrix::Identity(d, d), d};
}

inline TargetGate target_cnot() {
    Matrix m = Matrix::Identity(4, 4);
    m(2, 2) = 0; m(3, 3) = 0;
    m(2, 3) = 1; m(3, 2) = 1;
    return {"cnot", m, 4};
}

inline TargetGate target_toffoli() {
    Matrix m = Matrix::Identity(8, 8);
    m(6, 6) = 0; m(7, 7) = 0;
    m(6, 7) = 1; m(7, 6) = 1;
    return {"toffoli", m, 8};
}

inline TargetGate target_gate(const std::string& name, int n_qubits) {
    if (name == "identity") return target_identity(n_qubits);
    if (name == "cnot") {
        if (n_qubits != 2) throw std::invalid_argument("cnot is a 2-qubit gate");
        return target_cnot();
    }
    if (name == "toffoli") {
        if (n_qubits != 3) throw std::invalid_argument("toffoli is a 3-qubit gate");
        return target_toffoli();
    }
    throw std::invalid_argument("unknown gate '" + name + "' (expected identity|cnot|toffoli)");
}

// ---------------------------------------------------------------------------
// Random ensembles
// ---------------------------------------------------------------------------

// Haar-distributed unitary: phase-fixed QR of a Ginibre matrix
inline QuantumChannel random_unitary_haar(Index d, Rng& rng) {
    if (d < 2) throw std::invalid_argument("random_unitary_haar: need d >= 2");
    for (;;) {
        try {
            return QuantumChannel::unitary(gram_schmidt_unitary(ginibre(d, rng)), 1e-10);
        } catch (const std::invalid_argument&) {
            // rank-deficient draw (probability ~0): redraw
        }
    }
}

// exp(-i s H) with H a hermitized Ginibre matrix and s uniform on (0, scale_max]
inline QuantumChannel randomized_unitary(Index d, double scale_max, Rng& rng) {
    if (scale_max <= 0) throw std::invalid_argument("randomized_unitary: scale_max must be > 0");
    const Matrix h = hermitize(ginibre(d, rng));
    const double s = rng.uniform_positive(scale_max);
    return QuantumChannel::unitary(herm_expm(h, s), 1e-10);
}

// Randomized unitary whose eigenbasis stays close to the computational basis:
// exp(-i s (diag(g) + tilt*W)) with g_k uniform on (0,1], W a hermitized
// Ginibre matrix and s uniform on (0, phase_spread]. The shared scale s lets
// near-degenerate diagonal entries acquire O(1) relative phases while their
// eigenvectors mix, which is what drives the arithmetic-mean failure mode.
inline QuantumChannel randomized_unitary_near_basis(Index d, double phase_spread,
                                                    double basis_tilt, Rng& rng) {
    if (phase_spread <= 0) {
        throw std::invalid_argument("randomized_unitary_near_basis: phase_spread must be > 0");
    }
    if (basis_tilt < 0) {
        throw std::invalid_argument("randomized_unitary_near_basis: basis_tilt must be >= 0");
    }
    Matrix h = Matrix::Zero(d, d);
    for (Index k = 0; k < d; ++k) h(k, k) = rng.uniform_positive(1.0);
    if (basis_tilt > 0) h += basis_tilt * hermitize(ginibre(d, rng));
    const double s = rng.uniform_positive(phase_spread);
    return QuantumChannel::unitary(herm_expm(h, s), 1e-10);
}

// ---------------------------------------------------------------------------
// Stinespring dilation helpers
// ---------------------------------------------------------------------------

// Kraus operators of the map rho -> Tr_bath[U_tot (rho x |0><0|) U_tot^+]:
// E_k(i,j) = U_tot(i*d_bath + k, j*d_bath), one operator per bath level.
inline QuantumChannel kraus_from_stinespring(const Matrix& u_tot, Index d_sys, Index d_bath) {
    if (d_sys < 1 || d_bath < 1 || u_tot.rows() != d_sys * d_bath) {
        throw std::invalid_argument("kraus_from_stinespring: dimension mismatch");
    }
    if (!is_unitary(u_tot, 1e-10)) {
        throw std::invalid_argument("kraus_from_stinespring: U_tot not unitary");
    }
    std::vector<Matrix> ops;
    ops.reserve(d_bath);
    for (Index k = 0; k < d_bath; ++k) {
        Matrix e(d_sys, d_sys);
        for (Index i = 0; i < d_sys; ++i)
            for (Index j = 0; j < d_sys; ++j)
                e(i, j) = u_tot(i * d_bath + k, j * d_bath);
        ops.push_back(std::move(e));
    }
    return QuantumChannel::kraus_list(std::move(ops), 1e-8);
}

// Whether the target acts before or after the random bath coupling in the
// total unitary; the construction is stated ambiguously, so both are exposed.
enum class MapOrder { TargetAfterNoise, TargetBeforeNoise };

// Randomized dynamical map for a d-dimensional system: hermitized Ginibre
// generator on system+bath (bath of equal size, prepared in |0...0>),
// exponentiated with a random scale, composed with target x identity, bath
// traced out.
inline QuantumChannel random_dynamical_map(const TargetGate& target, double scale_max, Rng& rng,
                                           MapOrder order = MapOrder::TargetAfterNoise) {
    if (scale_max <= 0) throw std::invalid_argument("random_dynamical_map: scale_max must be > 0");
    const Index d = target.d;
    const Matrix h = hermitize(ginibre(d * d, rng));
    const double s = rng.uniform_positive(scale_max);
    const Matrix noise = herm_expm(h, s);
    const Matrix ext = kron(target.matrix, Matrix::Identity(d, d));
    const Matrix u_tot = (order == MapOrder::TargetAfterNoise) ? Matrix(ext * noise)
                                                               : Matrix(noise * ext);
    try {
        return kraus_from_stinespring(u_tot, d, d);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("random_dynamical_map: construction violated "
                                             "its own invariants: ") + e.what());
    }
}

// Choi matrix sum_k vec(E_k) vec(E_k)^+ (column-major vec); unitary channels
// contribute the single term vec(U) vec(U)^+.
inline Matrix choi_matrix(const QuantumChannel& ch) {
    const Index n = ch.d * ch.d;
    Matrix c = Matrix::Zero(n, n);
    const auto add = [&](const Matrix& e) {
        const Eigen::Map<const Vector> v(e.data(), n);
        c += v * v.adjoint();
    };
    if (ch.rep == ChannelRep::Unitary) {
        add(ch.u);
    } else {
        for (const auto& e : ch.kraus) add(e);
    }
    return c;
}

// Depolarizing channel via the d^2 Weyl operators X^a Z^b; p = 1 is the
// totally depolarizing map rho -> I/d. Test fixture, not an ensemble member.
inline QuantumChannel depolarizing_channel(Index d, double p) {
    if (d < 2 || p < 0.0 || p > 1.0) {
        throw std::invalid_argument("depolarizing_channel: need d >= 2, p in [0,1]");
    }
    Matrix x = Matrix::Zero(d, d);
    Matrix z = Matrix::Zero(d, d);
    for (Index k = 0; k < d; ++k) {
        x((k + 1) % d, k) = 1.0;
        z(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / d);
    }
    std::vector<Matrix> ops;
    ops.reserve(d * d);
    ops.push_back(std::sqrt(1.0 - p + p / (d * d)) * Matrix::Identity(d, d));
    Matrix xa = Matrix::Identity(d, d);
    for (Index a = 0; a < d; ++a) {
        Matrix w = xa;
        for (Index b = 0; b < d; ++b) {
            if (a != 0 || b != 0) ops.push_back(std::sqrt(p) / d * w);
            w = w * z;
        }
        xa = x * xa;
    }
    return QuantumChannel::kraus_list(std::move(ops), 1e-10);
}

}  // namespace qfid
