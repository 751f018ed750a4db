#pragma once

#include <functional>

namespace specedge {

struct MinimizeResult {
    double x = 0.0;
    double value = 0.0;
};

/// Golden-section search for a minimum of f on [a, b].  Stops once the
/// bracket is narrower than xtol (capped at 200 shrink steps).  Ties between
/// the two interior probes resolve to the left one, so plateaus yield the
/// smallest minimizer in the bracket.
MinimizeResult golden_section_minimize(const std::function<double(double)>& f,
                                       double a, double b, double xtol);

} // namespace specedge
