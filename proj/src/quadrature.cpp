#include "dquad/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace dquad::quad {

namespace {

constexpr double kNewtonTol = 1e-15;
constexpr int kNewtonMaxIter = 100;
constexpr int kMaxRuleOrder = 128;

// Embedded pairs use orders (n, 2n), so the adaptive drivers accept
// base_order up to kMaxRuleOrder / 2.
constexpr int kMaxBaseOrder = kMaxRuleOrder / 2;

constexpr std::int64_t kEvalBudget = std::int64_t{1} << 26;
constexpr std::int64_t kTriangleEvalBudget = std::int64_t{1} << 24;

// Error estimates below this multiple of the accumulated |w*f| mass are
// rounding noise; refining further cannot improve the result.
constexpr double kRoundingFloorFactor =
    8.0 * std::numeric_limits<double>::epsilon();

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre_with_derivative(int n, double x) {
    double p_prev = 1.0;
    double p = x;
    for (int k = 2; k <= n; ++k) {
        double p_next =
            ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = p_next;
    }
    double dp = n * (x * p - p_prev) / (x * x - 1.0);
    return {p, dp};
}

void check_common_options(const QuadratureOptions& opts) {
    if (opts.base_order < 1 || opts.base_order > kMaxBaseOrder) {
        throw ArgumentError(
            "base_order must be between 1 and 64 (the embedded pair needs "
            "order 2n <= 128)");
    }
    if (!(opts.abs_tol >= 0.0) || !(opts.rel_tol >= 0.0)) {
        throw ArgumentError("tolerances must be non-negative");
    }
    if (opts.max_depth < 0) {
        throw ArgumentError("max_depth must be >= 0");
    }
}

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw ArgumentError(std::string(what) + " must be finite");
    }
}

struct PanelValue {
    double value = 0.0;
    double l1 = 0.0;  // sum of |w * f|, used for the rounding floor
};

template <typename F>
PanelValue apply_rule_1d(const Rule1D& rule, F&& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double sum = 0.0;
    double l1 = 0.0;
    for (int i = 0; i < rule.order; ++i) {
        double wf = rule.weights[i] * f(center + half * rule.nodes[i]);
        sum += wf;
        l1 += std::fabs(wf);
    }
    return {half * sum, half * l1};
}

template <typename F>
PanelValue apply_rule_tensor(const Rule1D& rule, F&& f, double x_lo,
                             double x_hi, double y_lo, double y_hi) {
    const double cx = 0.5 * (x_lo + x_hi);
    const double hx = 0.5 * (x_hi - x_lo);
    const double cy = 0.5 * (y_lo + y_hi);
    const double hy = 0.5 * (y_hi - y_lo);
    double sum = 0.0;
    double l1 = 0.0;
    for (int i = 0; i < rule.order; ++i) {
        const double x = cx + hx * rule.nodes[i];
        double row = 0.0;
        double row_l1 = 0.0;
        for (int j = 0; j < rule.order; ++j) {
            double wf = rule.weights[j] * f(x, cy + hy * rule.nodes[j]);
            row += wf;
            row_l1 += std::fabs(wf);
        }
        sum += rule.weights[i] * row;
        l1 += rule.weights[i] * row_l1;
    }
    return {hx * hy * sum, hx * hy * l1};
}

struct Accumulator {
    double value = 0.0;
    double error = 0.0;
    std::int64_t evals = 0;
    bool converged = true;
};

[[noreturn]] void throw_non_convergence(const Accumulator& acc,
                                        const std::string& method) {
    IntegralResult partial{acc.value, acc.error, acc.evals, method};
    throw NonConvergence(
        method + ": tolerance not reached (best error estimate " +
            std::to_string(acc.error) + " after " +
            std::to_string(acc.evals) + " evaluations)",
        std::move(partial));
}

IntegralResult finish(const Accumulator& acc, const std::string& method) {
    if (!acc.converged) throw_non_convergence(acc, method);
    return {acc.value, acc.error, acc.evals, method};
}

}  // namespace

Rule1D gauss_legendre_rule(int n) {
    if (n < 1 || n > kMaxRuleOrder) {
        throw ArgumentError("gauss_legendre_rule: order must be in [1, 128]");
    }
    Rule1D rule;
    rule.order = n;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
        return rule;
    }
    // Positive roots in descending order from the Chebyshev guess; mirrored
    // into an ascending, exactly symmetric table.
    for (int i = 1; i <= n / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < kNewtonMaxIter; ++iter) {
            auto [p, dp_cur] = legendre_with_derivative(n, x);
            dp = dp_cur;
            double dx = p / dp;
            x -= dx;
            if (std::fabs(dx) <= kNewtonTol) {
                dp = legendre_with_derivative(n, x).second;
                break;
            }
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[n - i] = x;
        rule.nodes[i - 1] = -x;
        rule.weights[n - i] = w;
        rule.weights[i - 1] = w;
    }
    if (n % 2 == 1) {
        double dp = legendre_with_derivative(n, 0.0).second;
        rule.nodes[n / 2] = 0.0;
        rule.weights[n / 2] = 2.0 / (dp * dp);
    }
    return rule;
}

IntegralResult integrate_1d(const Fn1D& f, double lo, double hi,
                            const QuadratureOptions& opts) {
    check_common_options(opts);
    check_finite(lo, "lo");
    check_finite(hi, "hi");
    if (!(lo < hi)) {
        throw DegenerateDomain("integrate_1d: requires lo < hi");
    }

    const Rule1D rule_n = gauss_legendre_rule(opts.base_order);
    const Rule1D rule_2n = gauss_legendre_rule(2 * opts.base_order);
    const std::string method = "gauss_1d";

    Accumulator acc;
    auto counted = [&](double t) {
        ++acc.evals;
        return f(t);
    };

    if (!opts.adaptive) {
        PanelValue coarse = apply_rule_1d(rule_n, counted, lo, hi);
        PanelValue fine = apply_rule_1d(rule_2n, counted, lo, hi);
        return {coarse.value, std::fabs(coarse.value - fine.value), acc.evals,
                method};
    }

    const double total_width = hi - lo;
    // Depth-first, left to right, so the traversal (and every accumulated
    // double) is deterministic.
    auto refine = [&](auto&& self, double a, double b, int depth) -> void {
        PanelValue coarse = apply_rule_1d(rule_n, counted, a, b);
        PanelValue fine = apply_rule_1d(rule_2n, counted, a, b);
        double err = std::fabs(coarse.value - fine.value);
        double fraction = (b - a) / total_width;
        double running = std::fabs(acc.value + fine.value);
        double tol =
            std::max(opts.abs_tol, opts.rel_tol * running) * fraction;
        bool at_limit = depth >= opts.max_depth ||
                        err <= kRoundingFloorFactor * fine.l1 ||
                        acc.evals >= kEvalBudget;
        if (err <= tol || at_limit) {
            acc.value += fine.value;
            acc.error += err;
            if (err > tol) acc.converged = false;
            return;
        }
        double mid = a + 0.5 * (b - a);
        self(self, a, mid, depth + 1);
        self(self, mid, b, depth + 1);
    };
    refine(refine, lo, hi, 0);
    return finish(acc, method);
}

IntegralResult integrate_rectangle(const Fn2D& f, const Rectangle& rect,
                                   const QuadratureOptions& opts) {
    check_common_options(opts);
    check_finite(rect.x_lo, "x_lo");
    check_finite(rect.x_hi, "x_hi");
    check_finite(rect.y_lo, "y_lo");
    check_finite(rect.y_hi, "y_hi");
    if (!(rect.x_lo < rect.x_hi) || !(rect.y_lo < rect.y_hi)) {
        throw DegenerateDomain("integrate_rectangle: empty rectangle");
    }

    const Rule1D rule_n = gauss_legendre_rule(opts.base_order);
    const Rule1D rule_2n = gauss_legendre_rule(2 * opts.base_order);
    const std::string method = "rect_tensor";

    Accumulator acc;
    auto counted = [&](double x, double y) {
        ++acc.evals;
        return f(x, y);
    };

    if (!opts.adaptive) {
        PanelValue coarse = apply_rule_tensor(rule_n, counted, rect.x_lo,
                                              rect.x_hi, rect.y_lo, rect.y_hi);
        PanelValue fine = apply_rule_tensor(rule_2n, counted, rect.x_lo,
                                            rect.x_hi, rect.y_lo, rect.y_hi);
        return {coarse.value, std::fabs(coarse.value - fine.value), acc.evals,
                method};
    }

    const double total_area = rect.area();
    // Quadrant order SW, SE, NW, NE; same determinism contract as 1D.
    auto refine = [&](auto&& self, double x_lo, double x_hi, double y_lo,
                      double y_hi, int depth) -> void {
        PanelValue coarse =
            apply_rule_tensor(rule_n, counted, x_lo, x_hi, y_lo, y_hi);
        PanelValue fine =
            apply_rule_tensor(rule_2n, counted, x_lo, x_hi, y_lo, y_hi);
        double err = std::fabs(coarse.value - fine.value);
        double fraction = (x_hi - x_lo) * (y_hi - y_lo) / total_area;
        double running = std::fabs(acc.value + fine.value);
        double tol =
            std::max(opts.abs_tol, opts.rel_tol * running) * fraction;
        bool at_limit = depth >= opts.max_depth ||
                        err <= kRoundingFloorFactor * fine.l1 ||
                        acc.evals >= kEvalBudget;
        if (err <= tol || at_limit) {
            acc.value += fine.value;
            acc.error += err;
            if (err > tol) acc.converged = false;
            return;
        }
        double xm = x_lo + 0.5 * (x_hi - x_lo);
        double ym = y_lo + 0.5 * (y_hi - y_lo);
        self(self, x_lo, xm, y_lo, ym, depth + 1);
        self(self, xm, x_hi, y_lo, ym, depth + 1);
        self(self, x_lo, xm, ym, y_hi, depth + 1);
        self(self, xm, x_hi, ym, y_hi, depth + 1);
    };
    refine(refine, rect.x_lo, rect.x_hi, rect.y_lo, rect.y_hi, 0);
    return finish(acc, method);
}

IntegralResult integrate_triangle(const Fn2D& f, const Triangle& tri,
                                  const QuadratureOptions& opts) {
    check_common_options(opts);
    for (const Point* p : {&tri.a, &tri.b, &tri.c}) {
        check_finite(p->x, "vertex");
        check_finite(p->y, "vertex");
    }
    const double tsa = tri.twice_signed_area();
    if (tsa == 0.0) {
        throw DegenerateDomain("integrate_triangle: collinear vertices");
    }
    const double jacobian = std::fabs(tsa);

    const Rule1D rule_n = gauss_legendre_rule(opts.base_order);
    const Rule1D rule_2n = gauss_legendre_rule(2 * opts.base_order);
    const std::string method = "triangle_duffy";

    Accumulator acc;
    // Duffy map: (s, t) in [0,1]^2 -> barycentric (s, t*(1-s)) with density
    // (1-s), collapsing the square onto the unit triangle.
    auto duffy = [&](double s, double t) {
        ++acc.evals;
        const double u = s;
        const double v = t * (1.0 - s);
        const double x = tri.a.x + u * (tri.b.x - tri.a.x) +
                         v * (tri.c.x - tri.a.x);
        const double y = tri.a.y + u * (tri.b.y - tri.a.y) +
                         v * (tri.c.y - tri.a.y);
        return f(x, y) * (1.0 - s);
    };

    if (!opts.adaptive) {
        PanelValue coarse = apply_rule_tensor(rule_n, duffy, 0.0, 1.0, 0.0,
                                              1.0);
        PanelValue fine = apply_rule_tensor(rule_2n, duffy, 0.0, 1.0, 0.0,
                                            1.0);
        return {jacobian * coarse.value,
                jacobian * std::fabs(coarse.value - fine.value), acc.evals,
                method};
    }

    // Uniform 2^level x 2^level refinement of the Duffy square with a global
    // error test per level.
    const std::int64_t per_cell =
        5ll * opts.base_order * opts.base_order;
    for (int level = 0;; ++level) {
        const int cells = 1 << level;
        const double step = 1.0 / cells;
        double value = 0.0;
        double error = 0.0;
        double l1 = 0.0;
        for (int j = 0; j < cells; ++j) {
            for (int i = 0; i < cells; ++i) {
                double s0 = i * step;
                double s1 = (i + 1) * step;
                double t0 = j * step;
                double t1 = (j + 1) * step;
                PanelValue coarse =
                    apply_rule_tensor(rule_n, duffy, s0, s1, t0, t1);
                PanelValue fine =
                    apply_rule_tensor(rule_2n, duffy, s0, s1, t0, t1);
                value += fine.value;
                error += std::fabs(coarse.value - fine.value);
                l1 += fine.l1;
            }
        }
        acc.value = jacobian * value;
        acc.error = jacobian * error;
        double tol = std::max(opts.abs_tol,
                              opts.rel_tol * std::fabs(acc.value));
        if (acc.error <= tol) {
            acc.converged = true;
            break;
        }
        std::int64_t next_cost =
            per_cell * (std::int64_t{cells} * 2) * (std::int64_t{cells} * 2);
        bool at_limit = level >= opts.max_depth ||
                        error <= kRoundingFloorFactor * l1 ||
                        acc.evals + next_cost > kTriangleEvalBudget;
        if (at_limit) {
            acc.converged = false;
            break;
        }
    }
    return finish(acc, method);
}

IntegralResult integrate_diamond_direct(const Fn2D& f, double half_diagonal,
                                        const QuadratureOptions& opts) {
    check_common_options(opts);
    check_finite(half_diagonal, "half_diagonal");
    if (!(half_diagonal > 0.0)) {
        throw DegenerateDomain("integrate_diamond_direct: half_diagonal must be > 0");
    }
    const double h = half_diagonal;
    const Triangle quadrants[4] = {
        {{0.0, 0.0}, {h, 0.0}, {0.0, h}},
        {{0.0, 0.0}, {0.0, h}, {-h, 0.0}},
        {{0.0, 0.0}, {-h, 0.0}, {0.0, -h}},
        {{0.0, 0.0}, {0.0, -h}, {h, 0.0}},
    };

    IntegralResult total{0.0, 0.0, 0, "diamond_direct"};
    bool converged = true;
    for (const Triangle& tri : quadrants) {
        IntegralResult part;
        try {
            part = integrate_triangle(f, tri, opts);
        } catch (const NonConvergence& e) {
            part = e.partial;
            converged = false;
        }
        total.value += part.value;
        total.error_estimate += part.error_estimate;
        total.evaluations += part.evaluations;
    }
    if (!converged) {
        throw NonConvergence(
            "diamond_direct: at least one quadrant triangle did not reach "
            "tolerance",
            std::move(total));
    }
    return total;
}

IntegralResult integrate_diamond_rotated(const Fn2D& f, double half_diagonal,
                                         const QuadratureOptions& opts) {
    check_common_options(opts);
    check_finite(half_diagonal, "half_diagonal");
    if (!(half_diagonal > 0.0)) {
        throw DegenerateDomain("integrate_diamond_rotated: half_diagonal must be > 0");
    }
    // u = x+y, v = x-y maps {|x|+|y| <= h} onto [-h,h]^2; dx dy = du dv / 2.
    auto rotated = [&f](double u, double v) {
        return f(0.5 * (u + v), 0.5 * (u - v));
    };
    const std::string method = "diamond_rotated";
    try {
        IntegralResult r =
            integrate_rectangle(rotated, centered_square(half_diagonal), opts);
        return {0.5 * r.value, 0.5 * r.error_estimate, r.evaluations, method};
    } catch (const NonConvergence& e) {
        IntegralResult partial{0.5 * e.partial.value,
                               0.5 * e.partial.error_estimate,
                               e.partial.evaluations, method};
        throw NonConvergence(
            "diamond_rotated: tolerance not reached on the rotated square",
            std::move(partial));
    }
}

}  // namespace dquad::quad
