#include "specedge/minimize.hpp"

#include <algorithm>

#include "specedge/errors.hpp"

namespace specedge {

MinimizeResult golden_section_minimize(const std::function<double(double)>& f,
                                       double a, double b, double xtol) {
    if (!(b > a)) throw ValidationError({"golden section bracket must satisfy a < b"});
    if (!(xtol > 0.0)) throw ValidationError({"golden section tolerance must be positive"});

    constexpr double invphi = 0.6180339887498949;
    double h = b - a;
    double c = b - invphi * h;
    double d = a + invphi * h;
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 200 && h > xtol; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            h = b - a;
            c = b - invphi * h;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            h = b - a;
            d = a + invphi * h;
            fd = f(d);
        }
    }
    if (fc <= fd) return {c, fc};
    return {d, fd};
}

} // namespace specedge
