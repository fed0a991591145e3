#pragma once

// Independent 512-point Gauss-Legendre reference used only by tests. Written
// separately from the library so the two can disagree if either is wrong.

#include <cmath>
#include <vector>

namespace test_oracle {

struct OracleRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline const OracleRule& rule512() {
    static const OracleRule rule = [] {
        constexpr int n = 512;
        OracleRule r;
        r.nodes.resize(n);
        r.weights.resize(n);
        for (int i = 1; i <= n / 2; ++i) {
            double x = std::cos(M_PI * (i - 0.25) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 200; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::fabs(dx) < 1e-15) break;
            }
            double w = 2.0 / ((1.0 - x * x) * dp * dp);
            r.nodes[n - i] = x;
            r.nodes[i - 1] = -x;
            r.weights[n - i] = w;
            r.weights[i - 1] = w;
        }
        return r;
    }();
    return rule;
}

template <typename F>
double integrate_1d(F&& f, double lo, double hi) {
    const OracleRule& r = rule512();
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        sum += r.weights[i] * f(c + h * r.nodes[i]);
    }
    return h * sum;
}

template <typename F>
double integrate_2d(F&& f, double x_lo, double x_hi, double y_lo,
                    double y_hi) {
    const OracleRule& r = rule512();
    const double cx = 0.5 * (x_lo + x_hi);
    const double hx = 0.5 * (x_hi - x_lo);
    const double cy = 0.5 * (y_lo + y_hi);
    const double hy = 0.5 * (y_hi - y_lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        const double x = cx + hx * r.nodes[i];
        double row = 0.0;
        for (std::size_t j = 0; j < r.nodes.size(); ++j) {
            row += r.weights[j] * f(x, cy + hy * r.nodes[j]);
        }
        sum += r.weights[i] * row;
    }
    return hx * hy * sum;
}

}  // namespace test_oracle
