#include "qfid/channels.hpp"

#include "qfid/fidelity.hpp"

#include <doctest.h>

#include <cmath>

using namespace qfid;

namespace {

DensityOperator random_density(Index d, Rng& rng) {
    const Matrix g = ginibre(d, rng);
    Matrix m = g * g.adjoint();
    m /= m.trace();
    return {hermitize(m)};
}

}  // namespace

TEST_CASE("named gates") {
    const auto cnot = target_cnot();
    // permutation swapping |10> and |11>
    CHECK(cnot.matrix(2, 3) == Complex(1, 0));
    CHECK(cnot.matrix(3, 2) == Complex(1, 0));
    CHECK(cnot.matrix(0, 0) == Complex(1, 0));
    CHECK(cnot.matrix(1, 1) == Complex(1, 0));
    CHECK(is_unitary(cnot.matrix, 1e-12));
    CHECK(max_abs(cnot.matrix * cnot.matrix - Matrix::Identity(4, 4)) == 0.0);

    const auto toffoli = target_toffoli();
    CHECK(toffoli.matrix(6, 7) == Complex(1, 0));
    CHECK(toffoli.matrix(7, 6) == Complex(1, 0));
    for (Index i = 0; i < 6; ++i) CHECK(toffoli.matrix(i, i) == Complex(1, 0));
    CHECK(is_unitary(toffoli.matrix, 1e-12));

    CHECK(max_abs(target_identity(2).matrix - Matrix::Identity(4, 4)) == 0.0);
    CHECK_THROWS_AS(target_gate("cnot", 3), std::invalid_argument);
    CHECK_THROWS_AS(target_gate("hadamard", 1), std::invalid_argument);
}

TEST_CASE("apply: identity, Pauli-X, depolarizing") {
    Rng rng(201);
    const auto rho = random_density(2, rng);
    const auto id = QuantumChannel::unitary(Matrix::Identity(2, 2));
    CHECK(max_abs(apply(id, rho).rho - rho.rho) < 1e-15);

    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    Matrix diag10(2, 2);
    diag10 << 1, 0, 0, 0;
    const auto flipped = apply(QuantumChannel::unitary(x), DensityOperator{diag10});
    Matrix diag01(2, 2);
    diag01 << 0, 0, 0, 1;
    CHECK(max_abs(flipped.rho - diag01) < 1e-15);

    const auto depol = depolarizing_channel(4, 1.0);
    const auto out = apply(depol, random_density(4, rng));
    CHECK(max_abs(out.rho - Matrix::Identity(4, 4) / 4.0) < 1e-12);

    CHECK_THROWS_AS(apply(id, random_density(4, rng)), std::invalid_argument);
}

TEST_CASE("random_unitary_haar: unitarity and determinism") {
    Rng a(7), b(7);
    const auto u1 = random_unitary_haar(4, a);
    const auto u2 = random_unitary_haar(4, b);
    CHECK(u1.u == u2.u);
    CHECK(max_abs(u1.u.adjoint() * u1.u - Matrix::Identity(4, 4)) < 1e-12);
}

TEST_CASE("randomized_unitary: unitary, dissipation-free, continuous at scale 0") {
    Rng rng(209);
    const auto ch = randomized_unitary(4, 0.5, rng);
    CHECK(is_unitary(ch.u, 1e-10));
    CHECK(f_diss(ch, pure_set_computational(4)) < 1e-10);

    // scale_max -> 0: the channel approaches the identity gate
    Rng rng2(209);
    const auto tiny = randomized_unitary(4, 1e-7, rng2);
    const double err = 1.0 - average_fidelity_exact(tiny, target_identity(2));
    CHECK(err < 1e-10);
}

TEST_CASE("randomized_unitary_near_basis: tilt 0 leaves basis projectors fixed") {
    Rng rng(211);
    const auto ch = randomized_unitary_near_basis(4, 100.0, 0.0, rng);
    for (Index i = 0; i < 4; ++i)
        for (Index j = 0; j < 4; ++j)
            if (i != j) CHECK(std::abs(ch.u(i, j)) == 0.0);

    const auto set = pure_set_computational(4);
    const auto rep = evaluate_set(ch, target_identity(2), set);
    for (Index i = 0; i < 4; ++i) CHECK(rep.per_state(i) == doctest::Approx(1.0).epsilon(1e-12));
    // arithmetic mean stays above d/(d+1): all error sits in F_TR
    CHECK(rep.f_arith >= 4.0 / 5.0 - 1e-12);
    CHECK(rep.f_arith == doctest::Approx((4.0 + rep.per_state(4)) / 5.0).epsilon(1e-12));
}

TEST_CASE("randomized_unitary_near_basis is unitary for positive tilt") {
    Rng rng(213);
    const auto ch = randomized_unitary_near_basis(8, 100.0, 1e-3, rng);
    CHECK(is_unitary(ch.u, 1e-10));
}

TEST_CASE("kraus_from_stinespring: factorized total unitary gives one Kraus op") {
    Rng rng(217);
    const Matrix u_sys = herm_expm(hermitize(ginibre(3, rng)), 0.8);
    const auto ch = kraus_from_stinespring(kron(u_sys, Matrix::Identity(5, 5)), 3, 5);
    CHECK(ch.kraus.size() == 5);
    CHECK(max_abs(ch.kraus[0] - u_sys) < 1e-12);
    for (std::size_t k = 1; k < 5; ++k) CHECK(max_abs(ch.kraus[k]) < 1e-12);
}

TEST_CASE("kraus_from_stinespring: SWAP maps every state to |0><0|") {
    Matrix swap = Matrix::Zero(4, 4);
    swap(0, 0) = 1;
    swap(1, 2) = 1;
    swap(2, 1) = 1;
    swap(3, 3) = 1;
    const auto ch = kraus_from_stinespring(swap, 2, 2);
    Rng rng(219);
    const auto out = apply(ch, random_density(2, rng));
    Matrix zero_state(2, 2);
    zero_state << 1, 0, 0, 0;
    CHECK(max_abs(out.rho - zero_state) < 1e-14);
}

TEST_CASE("kraus_from_stinespring: completeness and input validation") {
    Rng rng(223);
    const Matrix u_tot = herm_expm(hermitize(ginibre(8, rng)), 1.1);
    const auto ch = kraus_from_stinespring(u_tot, 4, 2);
    Matrix sum = Matrix::Zero(4, 4);
    for (const auto& e : ch.kraus) sum += e.adjoint() * e;
    CHECK(max_abs(sum - Matrix::Identity(4, 4)) < 1e-10);

    CHECK_THROWS_WITH_AS(kraus_from_stinespring(ginibre(4, rng), 2, 2),
                         doctest::Contains("not unitary"), std::invalid_argument);
}

TEST_CASE("random_dynamical_map: Kraus completeness and trace preservation") {
    Rng rng(227);
    const auto ch = random_dynamical_map(target_cnot(), 0.5, rng);
    CHECK(ch.rep == ChannelRep::Kraus);
    CHECK(ch.kraus.size() == 4);
    Matrix sum = Matrix::Zero(4, 4);
    for (const auto& e : ch.kraus) sum += e.adjoint() * e;
    CHECK(max_abs(sum - Matrix::Identity(4, 4)) < 1e-8);
}

TEST_CASE("random_dynamical_map agrees with the dilation-then-trace oracle") {
    // replay the same construction via partial_trace(U (rho x |0><0|) U^+)
    for (const auto order : {MapOrder::TargetAfterNoise, MapOrder::TargetBeforeNoise}) {
        Rng rng(229);
        const auto ch = random_dynamical_map(target_cnot(), 0.5, rng, order);
        Rng rng2(229);
        const Matrix h = hermitize(ginibre(16, rng2));
        const double s = rng2.uniform_positive(0.5);
        const Matrix ext = kron(target_cnot().matrix, Matrix::Identity(4, 4));
        const Matrix u_tot =
            order == MapOrder::TargetAfterNoise ? Matrix(ext * herm_expm(h, s))
                                                : Matrix(herm_expm(h, s) * ext);

        Rng rng3(231);
        const auto rho = random_density(4, rng3);
        Matrix bath0 = Matrix::Zero(4, 4);
        bath0(0, 0) = 1;
        const Matrix dilated = u_tot * kron(rho.rho, bath0) * u_tot.adjoint();
        const Matrix reduced = partial_trace(dilated, 4, 4, Subsystem::A);
        CHECK(max_abs(apply(ch, rho).rho - reduced) < 1e-12);
    }
}

TEST_CASE("random_dynamical_map converges to the target gate as scale -> 0") {
    const auto target = target_cnot();
    const Matrix target_choi = choi_matrix(QuantumChannel::unitary(target.matrix));
    double prev = std::numeric_limits<double>::infinity();
    for (const double s : {0.3, 0.1, 0.03, 0.01, 0.003, 0.001}) {
        Rng rng(233);  // same noise draw, shrinking scale
        const auto ch = random_dynamical_map(target, s, rng);
        Eigen::JacobiSVD<Matrix> svd(choi_matrix(ch) - target_choi);
        const double dist = svd.singularValues()(0);
        CHECK(dist < prev);
        prev = dist;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("channels preserve trace, hermiticity, positivity, and unitary purity") {
    Rng rng(239);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto rho = random_density(4, rng);
        QuantumChannel ch = (trial % 2 == 0)
                                ? random_dynamical_map(target_cnot(), 0.5, rng)
                                : randomized_unitary(4, 1.0, rng);
        const auto out = apply(ch, rho);
        CHECK(std::abs(real_trace(out.rho) - 1.0) < 1e-10);
        CHECK(hermiticity_defect(out.rho) < 1e-10);
        Eigen::SelfAdjointEigenSolver<Matrix> es(out.rho, Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() > -1e-8);
        if (ch.rep == ChannelRep::Unitary) {
            CHECK(std::abs(purity(out.rho) - purity(rho.rho)) < 1e-10);
        }
    }
}

TEST_CASE("channel constructors validate their invariants") {
    Rng rng(241);
    CHECK_THROWS_AS(QuantumChannel::unitary(ginibre(3, rng)), std::invalid_argument);
    std::vector<Matrix> bad{Matrix::Identity(2, 2) * 0.5};
    CHECK_THROWS_WITH_AS(QuantumChannel::kraus_list(bad), doctest::Contains("trace"),
                         std::invalid_argument);
}
