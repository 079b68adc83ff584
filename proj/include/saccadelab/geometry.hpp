#pragma once

#include <cmath>

namespace saccadelab {

/// A point or displacement in degrees of visual angle. Origin is the top-left
/// image corner, x grows rightward, y grows downward.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Axis-aligned rectangle in dva, inclusive of its edges.
struct RectDva {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    bool contains(Vec2 p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
};

/// Discrete working grid covering an image extent given in dva. Attention
/// maps live on this grid; fixations are reported at cell centers.
struct GridSpec {
    int rows = 0;
    int cols = 0;
    double width_dva = 0.0;
    double height_dva = 0.0;

    double cell_width() const { return width_dva / cols; }
    double cell_height() const { return height_dva / rows; }

    Vec2 cell_center(int row, int col) const {
        return {(col + 0.5) * cell_width(), (row + 0.5) * cell_height()};
    }

    bool contains(Vec2 p) const {
        return p.x >= 0.0 && p.x <= width_dva && p.y >= 0.0 && p.y <= height_dva;
    }
};

} // namespace saccadelab
