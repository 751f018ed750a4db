#include "specedge/periodic_function.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "specedge/errors.hpp"

namespace specedge {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

PeriodicFunction::PeriodicFunction(double period, std::vector<Harmonic> terms)
    : period_(period), terms_(std::move(terms)) {
    if (!(period > 0.0)) throw ValidationError({"PeriodicFunction: period must be positive"});
    for (const auto& t : terms_) {
        if (t.k < 0) throw ValidationError({"PeriodicFunction: harmonic index must be >= 0"});
    }
}

PeriodicFunction PeriodicFunction::constant(double period, double c) {
    std::vector<Harmonic> t;
    if (c != 0.0) t.push_back({0, c, 0.0});
    return PeriodicFunction(period, std::move(t));
}

double PeriodicFunction::value(double x) const {
    const double w = kTwoPi / period_;
    double s = 0.0;
    for (const auto& t : terms_) {
        if (t.k == 0) {
            s += t.a;
        } else {
            s += t.a * std::cos(w * t.k * x) + t.b * std::sin(w * t.k * x);
        }
    }
    return s;
}

PeriodicFunction PeriodicFunction::derivative() const {
    const double w = kTwoPi / period_;
    std::vector<Harmonic> out;
    for (const auto& t : terms_) {
        if (t.k == 0) continue;
        // d/dx [a cos(wkx) + b sin(wkx)] = (b wk) cos(wkx) + (-a wk) sin(wkx)
        out.push_back({t.k, t.b * w * t.k, -t.a * w * t.k});
    }
    return PeriodicFunction(period_, std::move(out));
}

PeriodicFunction PeriodicFunction::tile(int factor) const {
    if (factor < 1) throw ValidationError({"PeriodicFunction::tile: factor must be >= 1"});
    std::vector<Harmonic> out = terms_;
    for (auto& t : out) t.k *= factor;
    return PeriodicFunction(period_ * factor, std::move(out));
}

std::complex<double> PeriodicFunction::fourier_coefficient(int q) const {
    std::complex<double> c(0.0, 0.0);
    for (const auto& t : terms_) {
        if (t.k == 0) {
            if (q == 0) c += t.a;
        } else if (q == t.k) {
            c += std::complex<double>(t.a / 2.0, -t.b / 2.0);
        } else if (q == -t.k) {
            c += std::complex<double>(t.a / 2.0, t.b / 2.0);
        }
    }
    return c;
}

int PeriodicFunction::max_harmonic() const {
    int m = 0;
    for (const auto& t : terms_) {
        if ((t.a != 0.0 || t.b != 0.0) && t.k > m) m = t.k;
    }
    return m;
}

double PeriodicFunction::sup_norm_estimate() const {
    const int n = std::max(2048, 32 * (max_harmonic() + 1));
    double m = 0.0;
    for (int j = 0; j < n; ++j) {
        m = std::max(m, std::abs(value(period_ * j / n)));
    }
    return m;
}

double PeriodicFunction::mean() const {
    double s = 0.0;
    for (const auto& t : terms_) {
        if (t.k == 0) s += t.a;
    }
    return s;
}

bool PeriodicFunction::is_zero() const {
    for (const auto& t : terms_) {
        if (t.a != 0.0 || t.b != 0.0) return false;
    }
    return true;
}

PeriodicFunction& PeriodicFunction::operator+=(const PeriodicFunction& other) {
    if (other.terms_.empty()) return *this;
    if (!terms_.empty() && period_ != other.period_) {
        throw DiscretizationMismatch("PeriodicFunction: adding functions with different periods");
    }
    if (terms_.empty()) period_ = other.period_;
    for (const auto& t : other.terms_) {
        auto it = std::find_if(terms_.begin(), terms_.end(),
                               [&](const Harmonic& h) { return h.k == t.k; });
        if (it == terms_.end()) {
            terms_.push_back(t);
        } else {
            it->a += t.a;
            it->b += t.b;
        }
    }
    return *this;
}

PeriodicFunction PeriodicFunction::operator*(double c) const {
    std::vector<Harmonic> out = terms_;
    for (auto& t : out) {
        t.a *= c;
        t.b *= c;
    }
    return PeriodicFunction(period_, std::move(out));
}

} // namespace specedge
