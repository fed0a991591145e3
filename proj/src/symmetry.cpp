#include "dquad/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "dquad/errors.hpp"

namespace dquad::symmetry {

namespace {

// Quadrant triangle k of the diamond, identified by its open-quadrant sign
// pattern, in the same counterclockwise order used by
// integrate_diamond_direct: (+,+), (-,+), (-,-), (+,-).
constexpr double kQuadrantSign[4][2] = {
    {1.0, 1.0},
    {-1.0, 1.0},
    {-1.0, -1.0},
    {1.0, -1.0},
};

// Shift paired with quadrant k: the inverse of that shift carries the
// far corner region of the square onto quadrant triangle k.
constexpr TranslationId kQuadrantShift[4] = {
    TranslationId::DownLeft,
    TranslationId::DownRight,
    TranslationId::UpRight,
    TranslationId::UpLeft,
};

bool strictly_inside_quadrant(Point q, int k, double h, double margin) {
    return kQuadrantSign[k][0] * q.x > margin &&
           kQuadrantSign[k][1] * q.y > margin &&
           std::fabs(q.x) + std::fabs(q.y) < h - margin;
}

// mt19937 raw draws scaled by 2^-32: bit-identical on every platform,
// unlike uniform_real_distribution.
double next_unit(std::mt19937& rng) {
    return static_cast<double>(rng()) * 0x1p-32;
}

}  // namespace

Point apply_translation(Point p, TranslationId t, double h) {
    switch (t) {
        case TranslationId::DownLeft: return {p.x - h, p.y - h};
        case TranslationId::DownRight: return {p.x + h, p.y - h};
        case TranslationId::UpRight: return {p.x + h, p.y + h};
        case TranslationId::UpLeft: return {p.x - h, p.y + h};
    }
    return p;
}

TranslationId inverse(TranslationId t) {
    switch (t) {
        case TranslationId::DownLeft: return TranslationId::UpRight;
        case TranslationId::DownRight: return TranslationId::UpLeft;
        case TranslationId::UpRight: return TranslationId::DownLeft;
        case TranslationId::UpLeft: return TranslationId::DownRight;
    }
    return t;
}

InvarianceReport check_invariance(const quad::Fn2D& f, double h,
                                  std::int64_t samples, double tolerance,
                                  std::uint32_t seed) {
    if (!std::isfinite(h) || !(h > 0.0)) {
        throw ArgumentError("check_invariance: h must be finite and > 0");
    }
    if (samples < 1) {
        throw ArgumentError("check_invariance: samples must be >= 1");
    }
    if (!(tolerance > 0.0)) {
        throw ArgumentError("check_invariance: tolerance must be > 0");
    }

    InvarianceReport report;
    report.max_deviation = 0.0;
    report.worst_point = {0.0, 0.0};

    auto probe = [&](Point p) {
        const double f0 = f(p.x, p.y);
        const double scale = 1.0 + std::fabs(f0);
        const Point shifts[2] = {{h, h}, {h, -h}};
        for (const Point& d : shifts) {
            double dev = std::fabs(f0 - f(p.x + d.x, p.y + d.y)) / scale;
            if (dev > report.max_deviation) {
                report.max_deviation = dev;
                report.worst_point = p;
            }
        }
        ++report.samples_used;
    };

    const auto grid =
        static_cast<std::int64_t>(std::ceil(std::sqrt(
            static_cast<double>(samples))));
    const double step = 2.0 * h / static_cast<double>(grid);
    for (std::int64_t iy = 0; iy < grid; ++iy) {
        const double y = -h + (static_cast<double>(iy) + 0.5) * step;
        for (std::int64_t ix = 0; ix < grid; ++ix) {
            probe({-h + (static_cast<double>(ix) + 0.5) * step, y});
        }
    }

    std::mt19937 rng(seed);
    for (std::int64_t i = 0; i < samples; ++i) {
        const double x = -h + 2.0 * h * next_unit(rng);
        const double y = -h + 2.0 * h * next_unit(rng);
        probe({x, y});
    }

    report.pass = report.max_deviation <= tolerance;
    return report;
}

quad::IntegralResult reduce_diamond_to_square(
    const quad::Fn2D& f, double h, const quad::QuadratureOptions& opts) {
    if (!std::isfinite(h) || !(h > 0.0)) {
        throw ArgumentError(
            "reduce_diamond_to_square: h must be finite and > 0");
    }
    const std::string method = "reduced";
    try {
        quad::IntegralResult r =
            quad::integrate_rectangle(f, centered_square(h), opts);
        return {0.5 * r.value, 0.5 * r.error_estimate, r.evaluations, method};
    } catch (const quad::NonConvergence& e) {
        quad::IntegralResult partial{0.5 * e.partial.value,
                                     0.5 * e.partial.error_estimate,
                                     e.partial.evaluations, method};
        throw quad::NonConvergence(
            "reduced: tolerance not reached on the square", std::move(partial));
    }
}

IdentityReport verify_identity(const quad::Fn2D& f, double h,
                               const quad::QuadratureOptions& opts) {
    IdentityReport report;
    report.diamond = quad::integrate_diamond_direct(f, h, opts);
    report.square_half = reduce_diamond_to_square(f, h, opts);
    report.difference =
        std::fabs(report.diamond.value - report.square_half.value);
    report.tolerance = std::max(
        10.0 * (report.diamond.error_estimate +
                report.square_half.error_estimate),
        1e-10 * (1.0 + std::fabs(report.square_half.value)));
    report.pass = report.difference <= report.tolerance;
    return report;
}

int tiling_cover_count(Point p, double h, double margin) {
    int count = 0;
    for (int k = 0; k < 4; ++k) {
        Point q = apply_translation(p, inverse(kQuadrantShift[k]), h);
        if (strictly_inside_quadrant(q, k, h, margin)) ++count;
    }
    return count;
}

TilingReport verify_tiling(double h, int grid_resolution, double margin) {
    if (!std::isfinite(h) || !(h > 0.0)) {
        throw ArgumentError("verify_tiling: h must be finite and > 0");
    }
    if (grid_resolution < 8) {
        throw ArgumentError("verify_tiling: grid_resolution must be >= 8");
    }
    if (!(margin > 0.0) || !(margin < h / 10.0)) {
        throw ArgumentError("verify_tiling: margin must be in (0, h/10)");
    }

    TilingReport report;
    report.h = h;
    report.grid_resolution = grid_resolution;
    report.margin = margin;

    const double step = 2.0 * h / grid_resolution;
    for (int iy = 0; iy < grid_resolution; ++iy) {
        const double y = -h + (iy + 0.5) * step;
        for (int ix = 0; ix < grid_resolution; ++ix) {
            const double x = -h + (ix + 0.5) * step;
            const double r = std::fabs(x) + std::fabs(y);
            // Skip the ambiguous strip near the square boundary, the
            // diamond boundary, and the axes.
            if (h - std::fabs(x) <= margin || h - std::fabs(y) <= margin ||
                std::fabs(r - h) <= margin || std::fabs(x) <= margin ||
                std::fabs(y) <= margin) {
                continue;
            }
            const int expected = r < h ? 0 : 1;
            const int actual = tiling_cover_count({x, y}, h, margin);
            ++report.points_checked;
            if (actual != expected) {
                report.violations.push_back({x, y});
            }
        }
    }
    report.pass = report.violations.empty();
    return report;
}

}  // namespace dquad::symmetry
