#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace specedge {

/// Periodicity cell [0, L) of the 1D lattice L*Z.
struct CellGeometry {
    double length = 1.0;

    /// Dual lattice generator; the Brillouin zone is [0, dual()).
    double dual() const { return 2.0 * std::numbers::pi / length; }
};

enum class Scheme {
    fourier_spectral,
    finite_difference,
};

/// Uniform periodic grid x_j = j*L/N on one cell, plus the discretization
/// backend that operates on it.  Quadrature weight is the uniform w_j = L/N,
/// so the discrete L^2 pairing is (L/N) * sum_j u_j conj(v_j).
struct Discretization {
    Scheme scheme = Scheme::fourier_spectral;
    int N = 0;
    double length = 1.0;
    int fd_order = 2; // 2 or 4; meaningful for finite_difference only

    double h() const { return length / N; }
    double weight() const { return length / N; }
    double node(int j) const { return length * j / N; }

    std::vector<double> nodes() const {
        std::vector<double> x(N);
        for (int j = 0; j < N; ++j) x[j] = node(j);
        return x;
    }

    bool operator==(const Discretization& o) const {
        return scheme == o.scheme && N == o.N && length == o.length &&
               (scheme == Scheme::fourier_spectral || fd_order == o.fd_order);
    }
    bool operator!=(const Discretization& o) const { return !(*this == o); }
};

/// Validates grid-size constraints: N >= 8 always, N even for the Fourier
/// backend (mode pairing) and for 4th-order finite differences.
Discretization build_grid(Scheme scheme, int N, double length, int fd_order = 2);

/// Complex node values over one Discretization.
struct GridFunction {
    Discretization disc;
    Eigen::VectorXcd values;

    GridFunction() = default;
    GridFunction(Discretization d, Eigen::VectorXcd v);

    int size() const { return static_cast<int>(values.size()); }
};

/// Quadrature inner product (u, v) = (L/N) sum_j u_j conj(v_j).
/// Throws DiscretizationMismatch when the grids differ.
std::complex<double> inner_product(const GridFunction& u, const GridFunction& v);

double norm(const GridFunction& u);

/// Trigonometric interpolation of a periodic grid function at arbitrary x.
/// The Nyquist mode (even N) is represented as a pure cosine so real data
/// stay real.  Cost is O(N) per point after an O(N^2) coefficient pass.
class TrigInterpolant {
public:
    explicit TrigInterpolant(const GridFunction& u);

    std::complex<double> value(double x) const;
    std::complex<double> derivative(double x) const;

private:
    double length_;
    int N_;
    Eigen::VectorXcd coeff_; // indexed by FFT mode order k = 0..N-1
};

/// Resample onto another grid of the same cell via trigonometric interpolation.
GridFunction resample(const GridFunction& u, const Discretization& target);

} // namespace specedge
