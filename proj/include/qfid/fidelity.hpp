// fidelity.hpp — per-state fidelities, the arithmetic / geometric / lambda
// composite estimators, the dissipation measure, classical fidelities with
// their process-fidelity bounds, and the exact and Monte-Carlo average
// fidelity.

#pragma once

#include "qfid/channels.hpp"
#include "qfid/linalg.hpp"
#include "qfid/states.hpp"

#include <algorithm>
#include <cmath>

namespace qfid {

// Tr[ideal * actual]; for two pure states this is the squared overlap.
inline double state_fidelity(const DensityOperator& ideal, const DensityOperator& actual) {
    if (ideal.dim() != actual.dim()) {
        throw std::invalid_argument("state_fidelity: dimension mismatch");
    }
    const double f = (ideal.rho * actual.rho).trace().real();
    return f < 0.0 ? 0.0 : f;  // clip fp noise on orthogonal states
}

struct FidelityReport {
    RealVector per_state;  // F_{B,1..d} then F_TR
    double f_arith = 0;
    double f_geom = 0;
    double lambda_weight = 0;
    double f_lambda = 0;
    double f_diss = 0;
    Index d = 0;
};

namespace detail {

// product of fidelities via exp(sum log); exact zero propagates
inline double fidelity_product(const RealVector& f, Index count) {
    double log_sum = 0.0;
    for (Index i = 0; i < count; ++i) {
        if (f(i) <= 0.0) return 0.0;
        log_sum += std::log(f(i));
    }
    return std::exp(log_sum);
}

}  // namespace detail

// Composite estimators over the d+1 pure input states.
//
// lambda interpolates from the arithmetic mean (lambda = 0 when F_TR = 1)
// to the offset geometric mean (lambda = 1 when all F_{B,i} = 1); the 0/0
// case with every fidelity equal to 1 is taken as lambda = 1 by continuity.
inline FidelityReport evaluate_set(const QuantumChannel& ch, const TargetGate& target,
                                   const ReducedStateSet& set) {
    if (set.kind != SetKind::PureSet) {
        throw std::invalid_argument("evaluate_set: composite estimators need the d+1 pure set");
    }
    if (target.d != set.d || ch.d != set.d) {
        throw std::invalid_argument("evaluate_set: dimension mismatch");
    }
    const Index d = set.d;
    const Index n = d + 1;

    FidelityReport rep;
    rep.d = d;
    rep.per_state.resize(n);
    double purity_sum = 0.0;
    for (Index j = 0; j < n; ++j) {
        const auto& rho = set.states[static_cast<std::size_t>(j)];
        const DensityOperator ideal{target.matrix * rho.rho * target.matrix.adjoint()};
        const DensityOperator evolved = apply(ch, rho);
        rep.per_state(j) = state_fidelity(ideal, evolved);
        purity_sum += purity(evolved.rho);
    }

    const double inv = 1.0 / static_cast<double>(n);
    rep.f_arith = rep.per_state.sum() * inv;

    const double prod_basis = detail::fidelity_product(rep.per_state, d);
    const double prod_all = prod_basis * std::max(rep.per_state(d), 0.0);
    rep.f_geom = inv + (1.0 - inv) * prod_all;

    const double denom = 1.0 - prod_all;
    rep.lambda_weight = denom <= 0.0 ? 1.0 : 1.0 - (1.0 - prod_basis) / denom;
    rep.lambda_weight = std::clamp(rep.lambda_weight, 0.0, 1.0);
    rep.f_lambda = rep.lambda_weight * rep.f_geom + (1.0 - rep.lambda_weight) * rep.f_arith;

    rep.f_diss = 1.0 - purity_sum * inv;
    return rep;
}

// Purity deficit over the d+1 states; zero iff the evolution is unitary.
inline double f_diss(const QuantumChannel& ch, const ReducedStateSet& set) {
    if (set.kind != SetKind::PureSet) {
        throw std::invalid_argument("f_diss: needs the d+1 pure set");
    }
    double purity_sum = 0.0;
    for (const auto& rho : set.states) purity_sum += purity(apply(ch, rho).rho);
    return 1.0 - purity_sum / static_cast<double>(set.d + 1);
}

// Average population-transfer fidelity over one basis.
inline double classical_fidelity(const QuantumChannel& ch, const TargetGate& target,
                                 const Matrix& basis) {
    require_orthonormal_basis(basis);
    if (basis.rows() != ch.d || target.d != ch.d) {
        throw std::invalid_argument("classical_fidelity: dimension mismatch");
    }
    double sum = 0.0;
    for (Index i = 0; i < basis.cols(); ++i) {
        const DensityOperator rho{basis.col(i) * basis.col(i).adjoint()};
        const DensityOperator ideal{target.matrix * rho.rho * target.matrix.adjoint()};
        sum += state_fidelity(ideal, apply(ch, rho));
    }
    return sum / static_cast<double>(basis.cols());
}

struct BoundsReport {
    double f1 = 0;
    double f2 = 0;
    double f_pro_lower = 0;
    double f_pro_upper = 0;
    double f_av_lower = 0;
    double f_av_upper = 0;
};

// Classical fidelities on the two mutually unbiased bases sandwich the
// process fidelity, F_1 + F_2 - 1 <= F_pro <= min(F_1, F_2), which converts
// to average-fidelity bounds through F_av = (d F_pro + 1)/(d + 1).
inline BoundsReport hofmann_bounds(const QuantumChannel& ch, const TargetGate& target,
                                   const ReducedStateSet& mubs) {
    if (mubs.kind != SetKind::MubPair) {
        throw std::invalid_argument("hofmann_bounds: needs a MUB pair set");
    }
    BoundsReport b;
    b.f1 = classical_fidelity(ch, target, mub_first_basis(mubs));
    b.f2 = classical_fidelity(ch, target, mub_second_basis(mubs));
    b.f_pro_lower = b.f1 + b.f2 - 1.0;
    b.f_pro_upper = std::min(b.f1, b.f2);
    const double d = static_cast<double>(mubs.d);
    b.f_av_lower = (d * b.f_pro_lower + 1.0) / (d + 1.0);
    b.f_av_upper = (d * b.f_pro_upper + 1.0) / (d + 1.0);
    return b;
}

// Exact Haar-average fidelity through the entanglement fidelity:
// F_e = (1/d^2) sum_k |Tr[O^+ E_k]|^2, F_av = (d F_e + 1)/(d + 1).
inline double average_fidelity_exact(const QuantumChannel& ch, const TargetGate& target) {
    if (ch.d != target.d) {
        throw std::invalid_argument("average_fidelity_exact: dimension mismatch");
    }
    const double dd = static_cast<double>(ch.d);
    double fe = 0.0;
    if (ch.rep == ChannelRep::Unitary) {
        fe = std::norm((target.matrix.adjoint() * ch.u).trace()) / (dd * dd);
    } else {
        for (const auto& e : ch.kraus) {
            fe += std::norm((target.matrix.adjoint() * e).trace()) / (dd * dd);
        }
    }
    return (dd * fe + 1.0) / (dd + 1.0);
}

struct MonteCarloEstimate {
    double estimate = 0;
    double std_error = 0;
};

// Monte-Carlo evaluation of the Haar average of <Psi|O^+ D(|Psi><Psi|) O|Psi>,
// sampling states as normalized complex-Gaussian vectors. Kept independent of
// average_fidelity_exact so the two can cross-check each other.
inline MonteCarloEstimate average_fidelity_haar_mc(const QuantumChannel& ch,
                                                   const TargetGate& target,
                                                   std::size_t n_samples, Rng& rng) {
    if (ch.d != target.d) {
        throw std::invalid_argument("average_fidelity_haar_mc: dimension mismatch");
    }
    if (n_samples < 100) {
        throw std::invalid_argument("average_fidelity_haar_mc: need at least 100 samples");
    }
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        Vector psi(ch.d);
        for (Index i = 0; i < ch.d; ++i) psi(i) = rng.normal_complex();
        psi /= psi.norm();
        const Vector ideal = target.matrix * psi;
        const DensityOperator evolved = apply(ch, DensityOperator{psi * psi.adjoint()});
        const double f = (ideal.adjoint() * evolved.rho * ideal)(0, 0).real();
        const double delta = f - mean;
        mean += delta / static_cast<double>(k + 1);
        m2 += delta * (f - mean);
    }
    const double var = m2 / static_cast<double>(n_samples - 1);
    return {mean, std::sqrt(std::max(var, 0.0) / static_cast<double>(n_samples))};
}

}  // namespace qfid
