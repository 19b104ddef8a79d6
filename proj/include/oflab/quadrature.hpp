#pragma once

#include <functional>

namespace oflab {

/// Adaptive Simpson integration of f over [a, b]. Stops refining an
/// interval when the Richardson error estimate is below
/// max(abs_tol, rel_tol * |running estimate|) scaled to the interval.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12,
                        double abs_tol = 0.0, int max_depth = 50);

}  // namespace oflab
