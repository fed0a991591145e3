#pragma once

namespace dquad {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline bool operator==(const Point& a, const Point& b) {
    return a.x == b.x && a.y == b.y;
}

// Axis-aligned rectangle [x_lo, x_hi] x [y_lo, y_hi].
struct Rectangle {
    double x_lo = 0.0;
    double x_hi = 0.0;
    double y_lo = 0.0;
    double y_hi = 0.0;

    double width() const { return x_hi - x_lo; }
    double height() const { return y_hi - y_lo; }
    double area() const { return width() * height(); }
};

// Square [-h, h]^2 as a rectangle.
inline Rectangle centered_square(double h) {
    return Rectangle{-h, h, -h, h};
}

struct Triangle {
    Point a;
    Point b;
    Point c;

    // Cross product (b-a) x (c-a); zero iff the vertices are collinear.
    double twice_signed_area() const {
        return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    }
};

}  // namespace dquad
