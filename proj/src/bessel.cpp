#include "dquad/bessel.hpp"

#include <cmath>
#include <string>

#include "dquad/errors.hpp"

namespace dquad::specfun {

SeriesResult bessel_i0_series(double z, const BesselSeriesConfig& config) {
    if (!std::isfinite(z)) {
        throw ArgumentError("bessel_i0: z must be finite");
    }
    if (config.max_terms < 1) {
        throw ArgumentError("bessel_i0: max_terms must be >= 1");
    }
    if (!(config.term_tolerance > 0.0)) {
        throw ArgumentError("bessel_i0: term_tolerance must be > 0");
    }

    const double q = z * z / 4.0;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < config.max_terms; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (!std::isfinite(sum)) {
            // Without this check an overflowed term would satisfy the
            // relative test (inf <= tol * inf) and return inf as converged.
            throw ConvergenceError(
                "bessel_i0: series overflowed after " + std::to_string(k) +
                " terms for z = " + std::to_string(z));
        }
        if (term <= config.term_tolerance * sum) {
            return {sum, k + 1};
        }
    }
    throw ConvergenceError(
        "bessel_i0: series did not converge within " +
        std::to_string(config.max_terms) + " terms for z = " +
        std::to_string(z));
}

double bessel_i0(double z, const BesselSeriesConfig& config) {
    return bessel_i0_series(z, config).value;
}

}  // namespace dquad::specfun
