#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "specedge/assembly.hpp"
#include "specedge/errors.hpp"

using namespace specedge;

namespace {
constexpr double pi = std::numbers::pi;

PeriodicOperatorSpec free_laplacian(double L = 1.0) {
    PeriodicOperatorSpec op(1, L, 1.0);
    op.set_coefficient(1, 1, PeriodicFunction::constant(L, 1.0));
    return op;
}

PeriodicOperatorSpec free_bilaplacian(double L = 1.0) {
    PeriodicOperatorSpec op(2, L, 1.0);
    op.set_coefficient(2, 2, PeriodicFunction::constant(L, 1.0));
    return op;
}

/// Analytic Bloch eigenvalues of the free operator: (theta + 2 pi k/L)^{2m}
/// over the N retained modes, sorted ascending.
std::vector<double> free_op_eigs(int N, double L, double theta, int m) {
    std::vector<double> e;
    for (int k = 0; k < N; ++k) {
        const int kt = (2 * k <= N) ? k : k - N;
        const double mu = theta + 2.0 * pi * kt / L;
        e.push_back(m == 1 ? mu * mu : mu * mu * mu * mu);
    }
    std::sort(e.begin(), e.end());
    return e;
}
} // namespace

TEST_CASE("assemble_bloch fourier: free operator exactly diagonalized") {
    const double L = 1.0;
    const auto op = free_laplacian(L);
    const auto d = build_grid(Scheme::fourier_spectral, 32, L);

    for (double theta : {0.0, 0.7, pi / L}) {
        const auto M = assemble_bloch(op, d, theta);
        CHECK(hermiticity_defect(M) < 1e-12);
        const auto ev = eigenvalues_hermitian(M);
        const auto expect = free_op_eigs(32, L, theta, 1);
        for (int i = 0; i < 32; ++i) {
            CHECK(std::abs(ev[i] - expect[i]) < 1e-10 * std::max(1.0, expect[i]));
        }
    }
}

TEST_CASE("assemble_bloch fourier: eigenvalue multiplicities at theta = 0") {
    // Lowest 31 eigenvalues are {(2 pi k)^2 : |k| <= 15}: zero once, others twice.
    const auto op = free_laplacian(1.0);
    const auto d = build_grid(Scheme::fourier_spectral, 32, 1.0);
    const auto ev = eigenvalues_hermitian(assemble_bloch(op, d, 0.0));

    CHECK(std::abs(ev[0]) < 1e-10);
    for (int k = 1; k <= 15; ++k) {
        const double want = std::pow(2.0 * pi * k, 2);
        CHECK(std::abs(ev[2 * k - 1] - want) < 1e-10 * want);
        CHECK(std::abs(ev[2 * k] - want) < 1e-10 * want);
    }
    CHECK(std::abs(ev[31] - std::pow(2.0 * pi * 16, 2)) < 1e-9 * ev[31]);
}

TEST_CASE("assemble_bloch fourier: m = 2 free operator") {
    const auto op = free_bilaplacian(2.0);
    const auto d = build_grid(Scheme::fourier_spectral, 16, 2.0);
    const auto ev = eigenvalues_hermitian(assemble_bloch(op, d, 0.4));
    const auto expect = free_op_eigs(16, 2.0, 0.4, 2);
    for (int i = 0; i < 16; ++i) {
        CHECK(std::abs(ev[i] - expect[i]) < 1e-10 * std::max(1.0, expect[i]));
    }
}

TEST_CASE("assemble_bloch: modulation by one dual-lattice step reindexes harmonics") {
    const auto op = free_laplacian(1.0);
    const auto d = build_grid(Scheme::fourier_spectral, 32, 1.0);
    const auto M0 = assemble_bloch(op, d, 0.0);

    // Conjugation by the exact grid harmonic diag(e^{i 2 pi x_j}) is unitary:
    // identical spectrum.
    Eigen::VectorXcd u(d.N);
    for (int j = 0; j < d.N; ++j) {
        const double ang = 2.0 * pi * d.node(j);
        u[j] = std::complex<double>(std::cos(ang), std::sin(ang));
    }
    const Eigen::MatrixXcd Mc = u.asDiagonal().inverse() * M0 * Eigen::MatrixXcd(u.asDiagonal());
    const auto ev0 = eigenvalues_hermitian(M0);
    const auto evc = eigenvalues_hermitian(0.5 * (Mc + Mc.adjoint().eval()));
    for (int i = 0; i < d.N; ++i) CHECK(std::abs(ev0[i] - evc[i]) < 1e-9 * std::max(1.0, ev0[i]));

    // Full dual-lattice shift of theta reproduces the same band values away
    // from the truncation edge (harmonic reindexing k -> k+1).
    const auto ev1 = eigenvalues_hermitian(assemble_bloch(op, d, 2.0 * pi));
    for (int i = 0; i < d.N - 3; ++i) CHECK(std::abs(ev1[i] - ev0[i]) < 1e-10 * std::max(1.0, ev0[i]));
}

TEST_CASE("assemble_bloch fd: free operator matches the discrete symbol") {
    const int N = 64;
    const auto op = free_laplacian(1.0);
    const auto d = build_grid(Scheme::finite_difference, N, 1.0, 2);
    const double h = d.h();

    for (double theta : {0.0, 1.1}) {
        const auto ev = eigenvalues_hermitian(assemble_bloch(op, d, theta));
        std::vector<double> expect;
        for (int k = 0; k < N; ++k) {
            const double xi = 2.0 * pi * k / N + theta * h;
            expect.push_back(4.0 * std::pow(std::sin(xi / 2.0), 2) / (h * h));
        }
        std::sort(expect.begin(), expect.end());
        for (int i = 0; i < N; ++i) CHECK(std::abs(ev[i] - expect[i]) < 1e-8 * std::max(1.0, expect[i]));
    }
}

TEST_CASE("assemble_bloch fd: no spurious low mode at the Nyquist frequency") {
    // The staggered principal stencil keeps the sawtooth mode at O(1/h^2);
    // a centered-difference composition would send it to zero.
    const auto op = free_laplacian(1.0);
    for (int p : {2, 4}) {
        const auto d = build_grid(Scheme::finite_difference, 64, 1.0, p);
        const auto ev = eigenvalues_hermitian(assemble_bloch(op, d, 0.0));
        CHECK(std::abs(ev[0]) < 1e-9);        // true ground state
        CHECK(ev[1] > 30.0);                  // next mode near (2 pi)^2, not 0
    }
}

TEST_CASE("assemble_bloch fd: 4th-order convergence on smooth coefficients") {
    PeriodicOperatorSpec op(1, 1.0, 0.5);
    op.set_coefficient(1, 1, PeriodicFunction(1.0, {{0, 1.0, 0.0}, {1, 0.3, 0.1}}));
    op.set_coefficient(0, 0, PeriodicFunction(1.0, {{0, 0.5, 0.0}, {1, 0.4, 0.0}, {2, 0.0, 0.1}}));

    const auto ref_d = build_grid(Scheme::fourier_spectral, 256, 1.0);
    const double theta = 0.9;
    const double ref = eigenvalues_hermitian(assemble_bloch(op, ref_d, theta))[0];

    double err[2];
    int idx = 0;
    for (int N : {64, 128}) {
        const auto d = build_grid(Scheme::finite_difference, N, 1.0, 4);
        err[idx++] = std::abs(eigenvalues_hermitian(assemble_bloch(op, d, theta))[0] - ref);
    }
    CHECK(err[1] < 1e-6);
    CHECK(err[0] / err[1] > 0.9 * 16.0); // halving the step divides the error by ~2^4
}

TEST_CASE("assemble_bloch fd: 2nd-order convergence") {
    PeriodicOperatorSpec op(1, 1.0, 0.5);
    op.set_coefficient(1, 1, PeriodicFunction(1.0, {{0, 1.0, 0.0}, {1, 0.3, 0.0}}));
    op.set_coefficient(0, 0, PeriodicFunction(1.0, {{1, 0.4, 0.2}}));

    const auto ref_d = build_grid(Scheme::fourier_spectral, 256, 1.0);
    const double ref = eigenvalues_hermitian(assemble_bloch(op, ref_d, 0.0))[0];

    double err[2];
    int idx = 0;
    for (int N : {64, 128}) {
        const auto d = build_grid(Scheme::finite_difference, N, 1.0, 2);
        err[idx++] = std::abs(eigenvalues_hermitian(assemble_bloch(op, d, 0.0))[0] - ref);
    }
    CHECK(err[0] / err[1] > 0.9 * 4.0);
}

TEST_CASE("assemble_bloch: ellipticity violation is rejected") {
    PeriodicOperatorSpec op(1, 1.0, 0.1);
    op.set_coefficient(1, 1, PeriodicFunction(1.0, {{0, 0.5, 0.0}, {1, 1.0, 0.0}})); // dips to -0.5
    const auto d = build_grid(Scheme::fourier_spectral, 32, 1.0);
    CHECK_THROWS_AS(assemble_bloch(op, d, 0.0), EllipticityViolated);
}

TEST_CASE("assemble_bloch: cell length mismatch is rejected") {
    const auto op = free_laplacian(2.0);
    const auto d = build_grid(Scheme::fourier_spectral, 32, 1.0);
    CHECK_THROWS_AS(assemble_bloch(op, d, 0.0), DiscretizationMismatch);
}

TEST_CASE("assemble_perturbation: multiplication is the diagonal of samples") {
    const auto d = build_grid(Scheme::fourier_spectral, 16, 1.0);
    const PerturbationOp p = MultiplicationOp{PeriodicFunction(1.0, {{1, 1.0, 0.0}})};
    for (double theta0 : {0.0, 0.6}) {
        const auto M = assemble_perturbation(p, d, theta0);
        for (int i = 0; i < d.N; ++i) {
            for (int j = 0; j < d.N; ++j) {
                const double want = (i == j) ? std::cos(2.0 * pi * d.node(i)) : 0.0;
                CHECK(std::abs(M(i, j) - want) < 1e-14);
            }
        }
    }
}

TEST_CASE("assemble_perturbation: integral kernel cos(2 pi (x-y))") {
    const auto d = build_grid(Scheme::fourier_spectral, 16, 1.0);
    IntegralKernelOp k;
    k.period = 1.0;
    k.terms = {{1, -1, {0.5, 0.0}}, {-1, 1, {0.5, 0.0}}}; // cos(2 pi (x-y))
    const auto M = assemble_perturbation(PerturbationOp{k}, d, 0.0);
    const double w = d.weight();
    for (int i = 0; i < d.N; ++i) {
        for (int j = 0; j < d.N; ++j) {
            CHECK(std::abs(M(i, j) - w * std::cos(2.0 * pi * (d.node(i) - d.node(j)))) < 1e-13);
        }
    }
    CHECK(hermiticity_defect(M) < 1e-13);

    // with momentum conjugation the phase factor e^{i theta (y-x)} appears
    const auto Mt = assemble_perturbation(PerturbationOp{k}, d, 0.8);
    const std::complex<double> ph(std::cos(0.8 * (d.node(2) - d.node(5))), std::sin(0.8 * (d.node(2) - d.node(5))));
    CHECK(std::abs(Mt(5, 2) - M(5, 2) * ph) < 1e-13);
    CHECK(hermiticity_defect(Mt) < 1e-13);
}

TEST_CASE("assemble_perturbation: non-Hermitian kernel is rejected") {
    const auto d = build_grid(Scheme::fourier_spectral, 16, 1.0);
    IntegralKernelOp k;
    k.period = 1.0;
    k.terms = {{1, 1, {1.0, 0.0}}}; // K(x,y) = e^{2 i pi (x+y)}: symmetric, not Hermitian
    CHECK_THROWS_AS(assemble_perturbation(PerturbationOp{k}, d, 0.0), NonSymmetricPerturbation);
}

TEST_CASE("assemble_perturbation: differential term B00 = 1 is the identity") {
    const auto d = build_grid(Scheme::fourier_spectral, 16, 1.0);
    DifferentialTermOp dt;
    dt.order = 1;
    dt.period = 1.0;
    dt.set_coefficient(0, 0, PeriodicFunction::constant(1.0, 1.0));
    const auto M = assemble_perturbation(PerturbationOp{dt}, d, 0.3);
    CHECK((M - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("assemble_perturbation: differential B11 = 1 equals the free Bloch fiber") {
    DifferentialTermOp dt;
    dt.order = 1;
    dt.period = 1.0;
    dt.set_coefficient(1, 1, PeriodicFunction::constant(1.0, 1.0));
    for (auto scheme : {Scheme::fourier_spectral, Scheme::finite_difference}) {
        const auto d = build_grid(scheme, 32, 1.0, 4);
        const auto Mp = assemble_perturbation(PerturbationOp{dt}, d, 0.7);
        const auto Mb = assemble_bloch(free_laplacian(1.0), d, 0.7);
        CHECK((Mp - Mb).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("assemble_family: polynomial combination and range check") {
    const auto d = build_grid(Scheme::fourier_spectral, 16, 1.0);
    PerturbationFamily fam = PerturbationFamily::multiplication_only(
        PeriodicFunction(1.0, {{1, 1.0, 0.0}}), 1.0);
    fam.L2 = MultiplicationOp{PeriodicFunction::constant(1.0, -1.0)};

    const double t = 0.25;
    const auto M = assemble_family(fam, d, 0.0, t);
    for (int i = 0; i < d.N; ++i) {
        const double want = t * std::cos(2.0 * pi * d.node(i)) - t * t;
        CHECK(std::abs(M(i, i) - want) < 1e-14);
    }
    CHECK_THROWS_AS(assemble_family(fam, d, 0.0, 1.5), EpsOutOfRange);
}

TEST_CASE("operator_norm_estimate: known norms") {
    const auto d = build_grid(Scheme::fourier_spectral, 64, 1.0);
    const auto fam = PerturbationFamily::multiplication_only(PeriodicFunction(1.0, {{1, 1.0, 0.0}}), 1.0);
    // || 0.5 cos(2 pi x) ||_op = 0.5 (attained at the x = 0 node)
    CHECK(std::abs(operator_norm_estimate(fam, d, 0.0, 0.5) - 0.5) < 1e-10);

    IntegralKernelOp k;
    k.period = 1.0;
    k.terms = {{1, -1, {0.5, 0.0}}, {-1, 1, {0.5, 0.0}}};
    PerturbationFamily fk = PerturbationFamily::multiplication_only(PeriodicFunction::zero(1.0), 1.0);
    fk.L1 = k;
    // rank-2 projector scaled by 1/2
    CHECK(std::abs(operator_norm_estimate(fk, d, 0.0, 1.0) - 0.5) < 1e-10);

    const auto zero = PerturbationFamily::multiplication_only(PeriodicFunction::zero(1.0), 1.0);
    CHECK(operator_norm_estimate(zero, d, 0.0, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("hermiticity holds across assembled matrix zoo") {
    PeriodicOperatorSpec op(2, 1.0, 0.25);
    op.set_coefficient(2, 2, PeriodicFunction(1.0, {{0, 1.0, 0.0}, {1, 0.5, 0.0}}));
    op.set_coefficient(1, 1, PeriodicFunction(1.0, {{0, 0.4, 0.0}, {2, 0.1, 0.2}}));
    op.set_coefficient(0, 1, PeriodicFunction(1.0, {{1, 0.3, -0.1}}));
    op.set_coefficient(0, 2, PeriodicFunction(1.0, {{1, 0.0, 0.25}}));
    op.set_coefficient(1, 2, PeriodicFunction(1.0, {{1, 0.2, 0.0}}));
    op.set_coefficient(0, 0, PeriodicFunction(1.0, {{0, 1.0, 0.0}, {3, 0.5, 0.5}}));

    for (auto scheme : {Scheme::fourier_spectral, Scheme::finite_difference}) {
        for (int p : {2, 4}) {
            const auto d = build_grid(scheme, 32, 1.0, p);
            for (double theta : {0.0, 0.37, 3.0}) {
                CHECK(hermiticity_defect(assemble_bloch(op, d, theta)) < 1e-12);
            }
        }
    }
}
