#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dquad/errors.hpp"
#include "dquad/geometry.hpp"

namespace dquad::quad {

// Domain is empty or inverted (zero-area rectangle, collinear triangle, ...).
struct DegenerateDomain : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// n-point Gauss-Legendre rule on [-1, 1]. Nodes ascending and symmetric,
// weights positive and summing to 2; exact for polynomials of degree 2n-1.
struct Rule1D {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Supported orders: 1 <= n <= 128.
Rule1D gauss_legendre_rule(int n);

struct QuadratureOptions {
    int base_order = 32;
    bool adaptive = true;
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_depth = 30;
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;  // from the embedded (n, 2n) pair
    std::int64_t evaluations = 0;
    std::string method;
};

// Requested tolerance was not reached before hitting max_depth, the
// rounding floor, or the evaluation budget. `partial` holds the best
// result obtained, with an honest error estimate.
struct NonConvergence : std::runtime_error {
    NonConvergence(const std::string& message, IntegralResult partial_)
        : std::runtime_error(message), partial(std::move(partial_)) {}
    IntegralResult partial;
};

using Fn1D = std::function<double(double)>;
using Fn2D = std::function<double(double, double)>;

// method "gauss_1d"
IntegralResult integrate_1d(const Fn1D& f, double lo, double hi,
                            const QuadratureOptions& opts = {});

// method "rect_tensor"
IntegralResult integrate_rectangle(const Fn2D& f, const Rectangle& rect,
                                   const QuadratureOptions& opts = {});

// Duffy map onto the unit square with uniform refinement; method
// "triangle_duffy".
IntegralResult integrate_triangle(const Fn2D& f, const Triangle& tri,
                                  const QuadratureOptions& opts = {});

// Diamond {|x|+|y| <= h} split into its four axis quadrant triangles,
// integrated counterclockwise from the +x/+y quadrant; method
// "diamond_direct".
IntegralResult integrate_diamond_direct(const Fn2D& f, double half_diagonal,
                                        const QuadratureOptions& opts = {});

// Same diamond through the rotation u = x+y, v = x-y, which maps it onto
// the square [-h, h]^2 with Jacobian 1/2; method "diamond_rotated".
IntegralResult integrate_diamond_rotated(const Fn2D& f, double half_diagonal,
                                         const QuadratureOptions& opts = {});

}  // namespace dquad::quad
