#include "dquad/example.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dquad/bessel.hpp"
#include "dquad/errors.hpp"

namespace dquad::example {

namespace {

constexpr double kPi = std::numbers::pi;

void check_params(const ExampleParams& p) {
    if (!std::isfinite(p.cos_sum) || !std::isfinite(p.sin_sum) ||
        !std::isfinite(p.cos_diff) || !std::isfinite(p.sin_diff)) {
        throw ArgumentError("example: coefficients must be finite");
    }
}

quad::Fn2D direct_integrand(const ExampleParams& p) {
    return [p](double u, double v) {
        const double s = u + v;
        const double d = u - v;
        return std::exp(p.cos_sum * std::cos(s) + p.sin_sum * std::sin(s) +
                        p.cos_diff * std::cos(d) + p.sin_diff * std::sin(d));
    };
}

// The substituted integrand: a product of one factor in x and one in y,
// each invariant under x -> x +- pi (period pi in each variable).
quad::Fn2D separable_integrand(const ExampleParams& p) {
    const AmplitudePhase sum = canonical_amplitude_phase(p.cos_sum, p.sin_sum);
    const AmplitudePhase diff =
        canonical_amplitude_phase(p.cos_diff, p.sin_diff);
    return [sum, diff](double x, double y) {
        return std::exp(sum.amplitude * std::cos(2.0 * x - sum.phase)) *
               std::exp(diff.amplitude * std::cos(2.0 * y - diff.phase));
    };
}

[[noreturn]] void rethrow_with_route(const quad::NonConvergence& e,
                                     const char* route) {
    throw quad::NonConvergence(std::string(route) + ": " + e.what(),
                               e.partial);
}

}  // namespace

AmplitudePhase canonical_amplitude_phase(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw ArgumentError("canonical_amplitude_phase: arguments must be finite");
    }
    const double amplitude = std::hypot(a, b);
    if (amplitude == 0.0) return {0.0, 0.0};
    double phase = std::atan2(b, a);
    if (phase == -kPi) phase = kPi;
    return {amplitude, phase};
}

quad::IntegralResult integral_direct(const ExampleParams& params,
                                     const quad::QuadratureOptions& opts) {
    check_params(params);
    try {
        quad::IntegralResult r = quad::integrate_rectangle(
            direct_integrand(params), centered_square(kPi), opts);
        r.method = "direct";
        return r;
    } catch (const quad::NonConvergence& e) {
        rethrow_with_route(e, "direct");
    }
}

quad::IntegralResult integral_diamond(const ExampleParams& params,
                                      const quad::QuadratureOptions& opts) {
    check_params(params);
    try {
        quad::IntegralResult r = quad::integrate_diamond_direct(
            separable_integrand(params), kPi, opts);
        return {2.0 * r.value, 2.0 * r.error_estimate, r.evaluations,
                "diamond"};
    } catch (const quad::NonConvergence& e) {
        quad::IntegralResult partial{2.0 * e.partial.value,
                                     2.0 * e.partial.error_estimate,
                                     e.partial.evaluations, "diamond"};
        throw quad::NonConvergence(std::string("diamond: ") + e.what(),
                                   partial);
    }
}

quad::IntegralResult integral_reduced(const ExampleParams& params,
                                      const quad::QuadratureOptions& opts) {
    check_params(params);
    // Half the square integral of the separable integrand, doubled back,
    // is the square integral itself, and that splits into a product of two
    // 1D factors.
    const AmplitudePhase sum =
        canonical_amplitude_phase(params.cos_sum, params.sin_sum);
    const AmplitudePhase diff =
        canonical_amplitude_phase(params.cos_diff, params.sin_diff);
    auto factor = [](const AmplitudePhase& ap) {
        return [ap](double t) {
            return std::exp(ap.amplitude * std::cos(2.0 * t - ap.phase));
        };
    };
    try {
        quad::IntegralResult fx =
            quad::integrate_1d(factor(sum), -kPi, kPi, opts);
        quad::IntegralResult fy =
            quad::integrate_1d(factor(diff), -kPi, kPi, opts);
        const double value = fx.value * fy.value;
        const double error =
            std::fabs(fx.value) * fy.error_estimate +
            std::fabs(fy.value) * fx.error_estimate +
            fx.error_estimate * fy.error_estimate;
        return {value, error, fx.evaluations + fy.evaluations, "reduced"};
    } catch (const quad::NonConvergence& e) {
        rethrow_with_route(e, "reduced");
    }
}

quad::IntegralResult integral_closed_form(const ExampleParams& params) {
    check_params(params);
    const AmplitudePhase sum =
        canonical_amplitude_phase(params.cos_sum, params.sin_sum);
    const AmplitudePhase diff =
        canonical_amplitude_phase(params.cos_diff, params.sin_diff);
    const double i0_sum = specfun::bessel_i0(sum.amplitude);
    const double i0_diff = specfun::bessel_i0(diff.amplitude);
    const double value = 4.0 * kPi * kPi * i0_sum * i0_diff;
    // No quadrature involved; the uncertainty is series truncation plus
    // rounding, both at the last-bit level.
    const double error = 4.0 * std::numeric_limits<double>::epsilon() * value;
    return {value, error, 0, "closed_form"};
}

ExampleComparison evaluate_all(const ExampleParams& params,
                               const quad::QuadratureOptions& opts) {
    ExampleComparison cmp;
    cmp.direct = integral_direct(params, opts);
    cmp.diamond = integral_diamond(params, opts);
    cmp.reduced = integral_reduced(params, opts);
    cmp.closed_form = integral_closed_form(params);

    const double values[4] = {cmp.direct.value, cmp.diamond.value,
                              cmp.reduced.value, cmp.closed_form.value};
    double max_dev = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            max_dev = std::max(max_dev, std::fabs(values[i] - values[j]));
        }
    }
    cmp.max_pairwise_rel_dev = max_dev / cmp.closed_form.value;
    return cmp;
}

}  // namespace dquad::example
