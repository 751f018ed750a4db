#include "specedge/assembly.hpp"

#include <cmath>
#include <complex>
#include <functional>

#include "specedge/errors.hpp"

namespace specedge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
using cplx = std::complex<double>;

double wrap_theta(double theta, double dual) {
    double t = std::fmod(theta, dual);
    if (t < 0.0) t += dual;
    return t;
}

int signed_mode(int k, int N) { return (2 * k <= N) ? k : k - N; }

/// Unitary DFT, F(k,j) = exp(-2 i pi k j / N)/sqrt(N).
Eigen::MatrixXcd dft_matrix(int N) {
    Eigen::MatrixXcd F(N, N);
    const double s = 1.0 / std::sqrt(double(N));
    for (int k = 0; k < N; ++k) {
        for (int j = 0; j < N; ++j) {
            const double ang = -kTwoPi * double(k) * double(j) / N;
            F(k, j) = s * cplx(std::cos(ang), std::sin(ang));
        }
    }
    return F;
}

using CoeffLookup = std::function<const PeriodicFunction*(int, int)>;

/// Galerkin matrix on the span of the N grid harmonics, mapped back to node
/// values by the unitary DFT.  Coefficients are finite Fourier series, so the
/// entries are exact integrals: no aliasing, and the free operator comes out
/// exactly diagonal in mode space.
Eigen::MatrixXcd assemble_fourier(const CoeffLookup& coeff, int order,
                                  const Discretization& disc, double theta) {
    const int N = disc.N;
    const double L = disc.length;
    Eigen::MatrixXcd Mhat = Eigen::MatrixXcd::Zero(N, N);

    std::vector<double> kappa(N);
    for (int k = 0; k < N; ++k) kappa[k] = kTwoPi * signed_mode(k, N) / L;

    for (int a = 0; a <= order; ++a) {
        for (int b = 0; b <= order; ++b) {
            const PeriodicFunction* f = coeff(a, b);
            if (!f || f->is_zero()) continue;

            std::vector<cplx> fc(2 * N + 1);
            for (int q = -N; q <= N; ++q) fc[q + N] = f->fourier_coefficient(q);

            std::vector<cplx> left(N), right(N);
            for (int k = 0; k < N; ++k) {
                const cplx ik(0.0, kappa[k] + theta);
                left[k] = std::conj(std::pow(ik, a));
                right[k] = std::pow(ik, b);
            }
            for (int k = 0; k < N; ++k) {
                const int km = signed_mode(k, N);
                for (int kp = 0; kp < N; ++kp) {
                    const int q = km - signed_mode(kp, N);
                    Mhat(k, kp) += left[k] * fc[q + N] * right[kp];
                }
            }
        }
    }

    const Eigen::MatrixXcd F = dft_matrix(N);
    return F.adjoint() * Mhat * F;
}

/// Adds a periodic stencil entry row j -> column j+r (cyclic); the Bloch
/// momentum enters as the displacement phase exp(i theta r h).
struct TwistedStencil {
    Eigen::MatrixXcd M;
    int N;
    double h;
    double theta;

    TwistedStencil(int n, double step, double th)
        : M(Eigen::MatrixXcd::Zero(n, n)), N(n), h(step), theta(th) {}

    void add(int j, int r, double v) {
        const double ang = theta * r * h;
        M(j, ((j + r) % N + N) % N) += v * cplx(std::cos(ang), std::sin(ang));
    }
};

/// Centered first-derivative matrix of the given order, twisted by theta.
Eigen::MatrixXcd fd_first_derivative(const Discretization& disc, double theta) {
    TwistedStencil S(disc.N, disc.h(), theta);
    const double h = disc.h();
    for (int j = 0; j < disc.N; ++j) {
        if (disc.fd_order == 2) {
            S.add(j, 1, 0.5 / h);
            S.add(j, -1, -0.5 / h);
        } else {
            S.add(j, 1, 2.0 / (3.0 * h));
            S.add(j, -1, -2.0 / (3.0 * h));
            S.add(j, 2, -1.0 / (12.0 * h));
            S.add(j, -2, 1.0 / (12.0 * h));
        }
    }
    return S.M;
}

/// Constant-coefficient negative second derivative (-d^2/dx^2) of the given
/// order, twisted by theta.
Eigen::MatrixXcd fd_neg_laplacian(const Discretization& disc, double theta) {
    TwistedStencil S(disc.N, disc.h(), theta);
    const double h2 = disc.h() * disc.h();
    for (int j = 0; j < disc.N; ++j) {
        if (disc.fd_order == 2) {
            S.add(j, 0, 2.0 / h2);
            S.add(j, 1, -1.0 / h2);
            S.add(j, -1, -1.0 / h2);
        } else {
            S.add(j, 0, 2.5 / h2);
            S.add(j, 1, -4.0 / (3.0 * h2));
            S.add(j, -1, -4.0 / (3.0 * h2));
            S.add(j, 2, 1.0 / (12.0 * h2));
            S.add(j, -2, 1.0 / (12.0 * h2));
        }
    }
    return S.M;
}

/// Divergence-form principal part -(d+i theta)^H a (d+i theta) via the
/// staggered midpoint scheme; 4th order via Richardson combination of the h
/// and 2h stencils.  Unlike a composition of centered first derivatives this
/// has no spurious Nyquist null mode.
Eigen::MatrixXcd fd_divergence_form(const PeriodicFunction& a, const Discretization& disc,
                                    double theta) {
    const int N = disc.N;
    const double h = disc.h();
    TwistedStencil S1(N, h, theta);
    for (int j = 0; j < N; ++j) {
        const double ap = a.value(disc.node(j) + 0.5 * h);
        const double am = a.value(disc.node(j) - 0.5 * h);
        S1.add(j, 0, (ap + am) / (h * h));
        S1.add(j, 1, -ap / (h * h));
        S1.add(j, -1, -am / (h * h));
    }
    if (disc.fd_order == 2) return S1.M;

    TwistedStencil S2(N, h, theta);
    const double h2 = 4.0 * h * h;
    for (int j = 0; j < N; ++j) {
        const double ap = a.value(disc.node(j) + h);
        const double am = a.value(disc.node(j) - h);
        S2.add(j, 0, (ap + am) / h2);
        S2.add(j, 2, -ap / h2);
        S2.add(j, -2, -am / h2);
    }
    return (4.0 * S1.M - S2.M) / 3.0;
}

Eigen::MatrixXcd diag_of(const PeriodicFunction& f, const Discretization& disc) {
    Eigen::VectorXcd d(disc.N);
    for (int j = 0; j < disc.N; ++j) d[j] = f.value(disc.node(j));
    return d.asDiagonal();
}

Eigen::MatrixXcd assemble_fd(const CoeffLookup& coeff, int order, const Discretization& disc,
                             double theta) {
    const int N = disc.N;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
    const Eigen::MatrixXcd D = fd_first_derivative(disc, theta);

    if (const PeriodicFunction* f = coeff(0, 0); f && !f->is_zero()) {
        M += diag_of(*f, disc);
    }
    if (const PeriodicFunction* f = coeff(0, 1); f && !f->is_zero()) {
        const Eigen::MatrixXcd A = diag_of(*f, disc);
        M += A * D - D * A; // A01 (d+i t) + (d+i t)^H A10, with D^H = -D
    }

    if (order == 1) {
        if (const PeriodicFunction* f = coeff(1, 1); f && !f->is_zero()) {
            M += fd_divergence_form(*f, disc, theta);
        }
        return M;
    }

    const Eigen::MatrixXcd S = fd_neg_laplacian(disc, theta);
    if (const PeriodicFunction* f = coeff(1, 1); f && !f->is_zero()) {
        M += -D * diag_of(*f, disc) * D; // D^H A D; subprincipal for order 2
    }
    if (const PeriodicFunction* f = coeff(0, 2); f && !f->is_zero()) {
        const Eigen::MatrixXcd A = diag_of(*f, disc);
        M += -(A * S + S * A);
    }
    if (const PeriodicFunction* f = coeff(1, 2); f && !f->is_zero()) {
        const Eigen::MatrixXcd A = diag_of(*f, disc);
        M += D * A * S - S * A * D;
    }
    if (const PeriodicFunction* f = coeff(2, 2); f && !f->is_zero()) {
        M += S * diag_of(*f, disc) * S;
    }
    return M;
}

Eigen::MatrixXcd assemble_table(const CoeffLookup& coeff, int order, const Discretization& disc,
                                double theta) {
    if (disc.scheme == Scheme::fourier_spectral) return assemble_fourier(coeff, order, disc, theta);
    return assemble_fd(coeff, order, disc, theta);
}

void check_ellipticity(const PeriodicOperatorSpec& op) {
    const PeriodicFunction& a = op.coefficient(op.order(), op.order());
    const int n = std::max(2048, 32 * (a.max_harmonic() + 1));
    double lo = a.is_zero() ? 0.0 : a.value(0.0);
    for (int j = 1; j < n; ++j) lo = std::min(lo, a.value(op.geometry().length * j / n));
    if (a.is_zero()) lo = 0.0;
    const double tol = 1e-12 * std::max(1.0, std::abs(op.c0()));
    if (lo < op.c0() - tol) {
        throw EllipticityViolated("principal coefficient dips to " + std::to_string(lo) +
                                  " below c0 = " + std::to_string(op.c0()));
    }
}

} // namespace

Eigen::MatrixXcd assemble_bloch(const PeriodicOperatorSpec& op, const Discretization& disc,
                                double theta) {
    if (op.geometry().length != disc.length) {
        throw DiscretizationMismatch("assemble_bloch: operator cell and grid cell differ");
    }
    check_ellipticity(op);
    const double th = wrap_theta(theta, op.geometry().dual());
    auto lookup = [&](int a, int b) -> const PeriodicFunction* {
        return op.has_coefficient(a, b) ? &op.coefficient(a, b) : nullptr;
    };
    return assemble_table(lookup, op.order(), disc, th);
}

Eigen::MatrixXcd assemble_perturbation(const PerturbationOp& p, const Discretization& disc,
                                       double theta0) {
    const int N = disc.N;

    if (const auto* m = std::get_if<MultiplicationOp>(&p)) {
        if (!m->v.is_zero() && m->v.period() != disc.length) {
            throw DiscretizationMismatch("assemble_perturbation: multiplier period differs from cell");
        }
        return diag_of(m->v, disc);
    }

    if (const auto* k = std::get_if<IntegralKernelOp>(&p)) {
        if (!k->terms.empty() && k->period != disc.length) {
            throw DiscretizationMismatch("assemble_perturbation: kernel period differs from cell");
        }
        Eigen::MatrixXcd B(N, N);
        const double w = disc.weight();
        for (int i = 0; i < N; ++i) {
            for (int j = 0; j < N; ++j) {
                const double ang = theta0 * (disc.node(j) - disc.node(i));
                B(i, j) = w * k->value(disc.node(i), disc.node(j)) * cplx(std::cos(ang), std::sin(ang));
            }
        }
        const double defect = hermiticity_defect(B);
        if (defect > 1e-10) {
            throw NonSymmetricPerturbation("integral kernel is not Hermitian (defect " +
                                           std::to_string(defect) + ")");
        }
        return 0.5 * (B + B.adjoint().eval()); // absorb rounding-level asymmetry
    }

    const auto& d = std::get<DifferentialTermOp>(p);
    if (d.order < 0 || d.order > 2) {
        throw UnsupportedOrder("assemble_perturbation: differential term order must be <= 2");
    }
    if (!d.table.empty() && d.period != disc.length) {
        throw DiscretizationMismatch("assemble_perturbation: coefficient period differs from cell");
    }
    auto lookup = [&](int a, int b) -> const PeriodicFunction* {
        if (d.table.empty()) return nullptr;
        const PeriodicFunction& f = d.coefficient(a, b);
        return f.is_zero() ? nullptr : &f;
    };
    return assemble_table(lookup, d.order, disc, theta0);
}

Eigen::MatrixXcd assemble_family(const PerturbationFamily& fam, const Discretization& disc,
                                 double theta0, double t) {
    if (std::abs(t) > fam.t_max * (1.0 + 1e-12)) {
        throw EpsOutOfRange("assemble_family: |t| = " + std::to_string(std::abs(t)) +
                            " exceeds t_max = " + std::to_string(fam.t_max));
    }
    const int N = disc.N;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
    if (!is_zero(fam.L1)) M += t * assemble_perturbation(fam.L1, disc, theta0);
    if (!is_zero(fam.L2)) M += (t * t) * assemble_perturbation(fam.L2, disc, theta0);
    if (!is_zero(fam.L3a)) M += (t * t * t) * assemble_perturbation(fam.L3a, disc, theta0);
    if (!is_zero(fam.L3b)) M += (t * t * t * t) * assemble_perturbation(fam.L3b, disc, theta0);
    return M;
}

double operator_norm_estimate(const PerturbationFamily& fam, const Discretization& disc,
                              double theta0, double t) {
    const Eigen::MatrixXcd M = assemble_family(fam, disc, theta0, t);
    const Eigen::VectorXd ev = eigenvalues_hermitian(M);
    if (ev.size() == 0) return 0.0;
    return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

double hermiticity_defect(const Eigen::MatrixXcd& M) {
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    return (M - M.adjoint().eval()).cwiseAbs().maxCoeff() / scale;
}

EigenSystem eigensolve_hermitian(const Eigen::MatrixXcd& M, bool with_vectors) {
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    const bool real_path = M.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale;
    const auto opts = with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;

    EigenSystem sys;
    if (real_path) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.real(), opts);
        if (es.info() != Eigen::Success) throw IllConditionedSolve("real eigensolve failed");
        sys.values = es.eigenvalues();
        if (with_vectors) sys.vectors = es.eigenvectors().cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, opts);
        if (es.info() != Eigen::Success) throw IllConditionedSolve("complex eigensolve failed");
        sys.values = es.eigenvalues();
        if (with_vectors) sys.vectors = es.eigenvectors();
    }
    return sys;
}

Eigen::VectorXd eigenvalues_hermitian(const Eigen::MatrixXcd& M) {
    return eigensolve_hermitian(M, false).values;
}

} // namespace specedge
