#pragma once

#include <cstdint>
#include <vector>

#include "dquad/geometry.hpp"
#include "dquad/quadrature.hpp"

namespace dquad::symmetry {

// The four diagonal shifts by (+-h, +-h). A function invariant under all of
// them satisfies f(x, y) = f(x+h, y+h) = f(x+h, y-h) = f(x-h, y-h) =
// f(x-h, y+h); UpRight and DownRight generate the group.
enum class TranslationId { DownLeft, DownRight, UpRight, UpLeft };

inline constexpr TranslationId kAllTranslations[4] = {
    TranslationId::DownLeft,
    TranslationId::DownRight,
    TranslationId::UpRight,
    TranslationId::UpLeft,
};

Point apply_translation(Point p, TranslationId t, double h);

TranslationId inverse(TranslationId t);

struct InvarianceReport {
    double max_deviation = 0.0;
    Point worst_point;
    std::int64_t samples_used = 0;
    bool pass = false;
};

// Samples |f(p) - f(p + d)| / (1 + |f(p)|) for the two generator shifts
// d = (+h,+h) and (+h,-h) over a ceil(sqrt(samples))^2 half-cell-offset grid
// in (-h, h)^2 plus `samples` points from a seeded generator. Deterministic
// for a fixed seed on every platform.
InvarianceReport check_invariance(const quad::Fn2D& f, double h,
                                  std::int64_t samples, double tolerance,
                                  std::uint32_t seed);

// 1/2 * integral of f over the square [-h, h]^2; equals the diamond
// integral when f has the diagonal shift invariance. Method "reduced".
quad::IntegralResult reduce_diamond_to_square(
    const quad::Fn2D& f, double h, const quad::QuadratureOptions& opts = {});

struct IdentityReport {
    quad::IntegralResult diamond;      // lhs, integrated directly
    quad::IntegralResult square_half;  // rhs, reduced from the square
    double difference = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Checks |lhs - rhs| <= max(10 * (sum of error estimates),
// 1e-10 * (1 + |rhs|)). Does not itself test invariance; a non-invariant f
// simply fails.
IdentityReport verify_identity(const quad::Fn2D& f, double h,
                               const quad::QuadratureOptions& opts = {});

// Number of quadrant triangles of the diamond {|x|+|y| <= h} whose paired
// inverse shift carries p strictly (by `margin`) into the triangle's
// interior: 1 when p lies in the square minus the diamond, 0 when p lies in
// the diamond.
int tiling_cover_count(Point p, double h, double margin);

struct TilingReport {
    double h = 0.0;
    int grid_resolution = 0;
    double margin = 0.0;
    std::int64_t points_checked = 0;
    std::vector<Point> violations;
    bool pass = false;
};

// Sweeps a cell-centered grid over [-h, h]^2, skipping points within
// `margin` of the square boundary, the diamond boundary, or the axes, and
// records every point whose cover count disagrees with its region.
// Requires grid_resolution >= 8 and 0 < margin < h / 10.
TilingReport verify_tiling(double h, int grid_resolution, double margin);

}  // namespace dquad::symmetry
