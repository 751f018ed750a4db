#include "specedge/discretization.hpp"

#include <cmath>

#include "specedge/errors.hpp"

namespace specedge {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Discretization build_grid(Scheme scheme, int N, double length, int fd_order) {
    if (!(length > 0.0)) throw ValidationError({"build_grid: cell length must be positive"});
    if (N < 8) throw GridTooSmall("build_grid: N must be >= 8, got " + std::to_string(N));
    if (scheme == Scheme::fourier_spectral && N % 2 != 0) {
        throw OddGridSize("build_grid: fourier_spectral requires even N, got " + std::to_string(N));
    }
    if (scheme == Scheme::finite_difference) {
        if (fd_order != 2 && fd_order != 4) {
            throw ValidationError({"build_grid: fd_order must be 2 or 4"});
        }
        if (fd_order == 4 && N % 2 != 0) {
            throw OddGridSize("build_grid: 4th-order finite differences require even N");
        }
    }
    Discretization d;
    d.scheme = scheme;
    d.N = N;
    d.length = length;
    d.fd_order = fd_order;
    return d;
}

GridFunction::GridFunction(Discretization d, Eigen::VectorXcd v) : disc(d), values(std::move(v)) {
    if (values.size() != disc.N) {
        throw DiscretizationMismatch("GridFunction: value count does not match grid size");
    }
}

std::complex<double> inner_product(const GridFunction& u, const GridFunction& v) {
    if (u.disc != v.disc) {
        throw DiscretizationMismatch("inner_product: grids differ");
    }
    return u.disc.weight() * v.values.dot(u.values); // Eigen dot conjugates its caller
}

double norm(const GridFunction& u) {
    return std::sqrt(u.disc.weight()) * u.values.norm();
}

TrigInterpolant::TrigInterpolant(const GridFunction& u)
    : length_(u.disc.length), N_(u.disc.N), coeff_(u.disc.N) {
    // Naive DFT: c_k = (1/N) sum_j u_j exp(-2 i pi k j / N).  Fine at cell sizes.
    for (int k = 0; k < N_; ++k) {
        std::complex<double> s(0.0, 0.0);
        for (int j = 0; j < N_; ++j) {
            const double ang = -kTwoPi * k * j / N_;
            s += u.values[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        coeff_[k] = s / static_cast<double>(N_);
    }
}

std::complex<double> TrigInterpolant::value(double x) const {
    const double w = kTwoPi / length_;
    std::complex<double> s(0.0, 0.0);
    for (int k = 0; k < N_; ++k) {
        const int kt = (2 * k <= N_) ? k : k - N_; // signed mode index
        if (N_ % 2 == 0 && kt == N_ / 2) {
            s += coeff_[k] * std::cos(w * kt * x);
        } else {
            const double ang = w * kt * x;
            s += coeff_[k] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
    }
    return s;
}

std::complex<double> TrigInterpolant::derivative(double x) const {
    const double w = kTwoPi / length_;
    std::complex<double> s(0.0, 0.0);
    for (int k = 0; k < N_; ++k) {
        const int kt = (2 * k <= N_) ? k : k - N_;
        if (kt == 0) continue;
        if (N_ % 2 == 0 && kt == N_ / 2) {
            s += coeff_[k] * (-w * kt * std::sin(w * kt * x));
        } else {
            const double ang = w * kt * x;
            s += coeff_[k] * std::complex<double>(0.0, w * kt) *
                 std::complex<double>(std::cos(ang), std::sin(ang));
        }
    }
    return s;
}

GridFunction resample(const GridFunction& u, const Discretization& target) {
    if (target.length != u.disc.length) {
        throw DiscretizationMismatch("resample: cell lengths differ");
    }
    if (target == u.disc) return u;
    TrigInterpolant interp(u);
    Eigen::VectorXcd out(target.N);
    for (int j = 0; j < target.N; ++j) out[j] = interp.value(target.node(j));
    return GridFunction(target, std::move(out));
}

} // namespace specedge
