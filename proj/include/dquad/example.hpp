#pragma once

#include "dquad/quadrature.hpp"

namespace dquad::example {

// Coefficients of the oscillatory exponent
//   exp(A*cos(u+v) + B*sin(u+v) + C*cos(u-v) + D*sin(u-v))
// integrated over [-pi, pi]^2. The sum-angle pair (A, B) and the
// difference-angle pair (C, D) enter only through their amplitude and
// phase, which is what makes the integral collapse to a product of two
// modified Bessel factors.
struct ExampleParams {
    double cos_sum = 0.0;   // A
    double sin_sum = 0.0;   // B
    double cos_diff = 0.0;  // C
    double sin_diff = 0.0;  // D
};

// a*cos(t) + b*sin(t) == amplitude * cos(t - phase), with the unique
// representative amplitude >= 0, phase in (-pi, pi], and phase = 0 when
// amplitude = 0.
struct AmplitudePhase {
    double amplitude = 0.0;
    double phase = 0.0;
};

AmplitudePhase canonical_amplitude_phase(double a, double b);

// Route 1, method "direct": tensor quadrature of the raw integrand over
// [-pi, pi]^2.
quad::IntegralResult integral_direct(const ExampleParams& params,
                                     const quad::QuadratureOptions& opts = {});

// Route 2, method "diamond": substituting x = (u+v)/2, y = (u-v)/2 turns
// the integral into 2 * integral over {|x|+|y| <= pi} of
// exp(R1*cos(2x - d1)) * exp(R2*cos(2y - d2)).
quad::IntegralResult integral_diamond(const ExampleParams& params,
                                      const quad::QuadratureOptions& opts = {});

// Route 3, method "reduced": the diamond integrand is invariant under the
// diagonal shifts by (+-pi, +-pi), so the diamond integral is half the
// square integral, which factorizes into two 1D integrals.
quad::IntegralResult integral_reduced(const ExampleParams& params,
                                      const quad::QuadratureOptions& opts = {});

// Route 4, method "closed_form": 4*pi^2 * I0(R1) * I0(R2).
quad::IntegralResult integral_closed_form(const ExampleParams& params);

struct ExampleComparison {
    quad::IntegralResult direct;
    quad::IntegralResult diamond;
    quad::IntegralResult reduced;
    quad::IntegralResult closed_form;
    // max over all route pairs of |v_i - v_j| / closed_form.value
    double max_pairwise_rel_dev = 0.0;
};

ExampleComparison evaluate_all(const ExampleParams& params,
                               const quad::QuadratureOptions& opts = {});

}  // namespace dquad::example
