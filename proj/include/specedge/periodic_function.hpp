#pragma once

#include <complex>
#include <vector>

namespace specedge {

/// One harmonic of a real L-periodic function: a*cos(2*pi*k*x/L) + b*sin(2*pi*k*x/L).
struct Harmonic {
    int k = 0;
    double a = 0.0;
    double b = 0.0;
};

/// Real-valued periodic function stored as a finite Fourier (cos/sin) series.
/// Finite series keep every resampling step exact: evaluation at arbitrary
/// points, differentiation, and tiling onto a supercell introduce no
/// interpolation error.
class PeriodicFunction {
public:
    PeriodicFunction() = default;
    PeriodicFunction(double period, std::vector<Harmonic> terms);

    static PeriodicFunction constant(double period, double c);
    static PeriodicFunction zero(double period) { return constant(period, 0.0); }

    double period() const { return period_; }
    const std::vector<Harmonic>& terms() const { return terms_; }

    double value(double x) const;

    /// Exact derivative (again a finite series).
    PeriodicFunction derivative() const;

    /// Same function viewed as periodic with period factor*period()
    /// (harmonic indices scale by factor).
    PeriodicFunction tile(int factor) const;

    /// Complex Fourier coefficient c_q with f(x) = sum_q c_q exp(2i*pi*q*x/L).
    std::complex<double> fourier_coefficient(int q) const;

    /// Largest harmonic index with a nonzero coefficient.
    int max_harmonic() const;

    /// sup |f| estimated on a fine grid (>= 32 samples per highest harmonic).
    double sup_norm_estimate() const;

    double mean() const;

    bool is_zero() const;

    PeriodicFunction& operator+=(const PeriodicFunction& other);
    PeriodicFunction operator*(double c) const;

private:
    double period_ = 1.0;
    std::vector<Harmonic> terms_;
};

} // namespace specedge
