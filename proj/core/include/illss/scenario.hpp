#pragma once

#include <cstddef>

#include "illss/curve.hpp"

namespace illss {

// Raw analytic shapes, counterclockwise, markers uniform in the shape's own
// parameter (not in arc length).

Curve circle_curve(double radius, std::size_t markers, Vec2 center = {});
Curve ellipse_curve(double a, double b, std::size_t markers, Vec2 center = {});

/// r(theta) = R (1 + eps cos(k theta)).
Curve star_curve(double radius, double amplitude, int mode, std::size_t markers);

struct DumbbellShape {
    double radius = 1.0;
    double neck_width = 0.2;
    double neck_length = 4.0;  // straight neck between the two discs
    double fillet = 0.25;      // radius of the concave fillets at the junctions
    double smoothing = 0.05;   // Gaussian smoothing length applied to the outline
};

/// Two discs joined by a straight neck, with circular fillets and a final
/// Gaussian smoothing of the arc-length parametrized outline. Returned at
/// equal arc length.
Curve dumbbell_curve(const DumbbellShape& shape, std::size_t markers);

/// Largest side of the axis-aligned bounding box.
double extent(const Curve& curve);

/// Vertical width of the curve along the line x = centroid.x, from the
/// crossings nearest the centroid. NaN if the line misses the curve.
double neck_width(const Curve& curve);

}  // namespace illss
