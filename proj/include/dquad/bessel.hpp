#pragma once

#include <stdexcept>

namespace dquad::specfun {

// Power series for the modified Bessel function I0:
//   I0(z) = sum_{k>=0} (z^2/4)^k / (k!)^2
// summed with the term recurrence t_{k+1} = t_k * (z^2/4) / (k+1)^2.
// Defaults cover |z| <= 100 comfortably.
struct BesselSeriesConfig {
    int max_terms = 200;
    double term_tolerance = 1e-17;  // relative to the running sum
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeriesResult {
    double value = 0.0;
    int terms = 0;  // number of terms summed, including the leading 1
};

// Throws ArgumentError for non-finite z or invalid config, ConvergenceError
// if max_terms is exhausted before the term drops below the tolerance.
// I0 is even and >= 1 everywhere.
SeriesResult bessel_i0_series(double z, const BesselSeriesConfig& config = {});

double bessel_i0(double z, const BesselSeriesConfig& config = {});

}  // namespace dquad::specfun
