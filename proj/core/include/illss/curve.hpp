#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "illss/vec2.hpp"

namespace illss {

enum class Orientation { CounterClockwise, Clockwise };

/// Closed, oriented marker curve bounding the phase domain. Markers are
/// samples of a periodic parametrization on a uniform parameter grid, so
/// marker N wraps to marker 0.
struct Curve {
    static constexpr std::size_t kMinMarkers = 8;

    std::vector<Vec2> points;
    Orientation orientation = Orientation::CounterClockwise;

    std::size_t size() const noexcept { return points.size(); }
};

/// Per-marker differential geometry of a Curve.
///
/// Normals point out of the enclosed domain and the curvature follows the
/// film convention: negative on convex, counterclockwise curves (a circle
/// of radius R has curvature -1/R).
struct CurveGeometry {
    std::vector<double> arc_weight;  // |X'(theta)| * 2pi/N
    std::vector<Vec2> tangent;
    std::vector<Vec2> normal;
    std::vector<double> curvature;
    double perimeter = 0.0;
    double area = 0.0;

    std::size_t size() const noexcept { return arc_weight.size(); }
};

/// Evaluates tangents, outward normals, curvature, arc weights, perimeter
/// and enclosed area by trigonometric differentiation in the marker index.
/// Throws GeometryError if the curve is too short or two markers coincide.
CurveGeometry geometry(const Curve& curve);

double perimeter(const Curve& curve);

/// Green's-theorem area with spectral derivatives; positive when counterclockwise.
double enclosed_area(const Curve& curve);

/// Directional derivative of the perimeter along marker displacements:
/// -sum kappa (n . V) ds.
double perimeter_first_variation(const CurveGeometry& geom, std::span<const Vec2> marker_values);

/// Per-marker line-tension density kappa * n (not yet weighted by ds).
std::vector<Vec2> line_tension_density(const CurveGeometry& geom);

/// Sum of kappa * ds over the curve (-2pi for a simple counterclockwise curve).
double total_turning(const CurveGeometry& geom);

/// Sum of kappa * n * ds over the curve (zero for any closed curve).
Vec2 total_line_force(const CurveGeometry& geom);

Vec2 centroid(const Curve& curve);
double isoperimetric_ratio(const Curve& curve);

/// Largest over smallest distance between consecutive markers.
double spacing_ratio(const Curve& curve);
double min_spacing(const Curve& curve);
double max_spacing(const Curve& curve);

/// First pair of non-adjacent polygon edges that intersect, if any.
struct Intersection {
    std::size_t edge_a;
    std::size_t edge_b;
};
std::optional<Intersection> find_self_intersection(const Curve& curve);

/// Throws GeometryError on a self-intersecting polygon.
void require_simple(const Curve& curve);

/// Trigonometric interpolant of a closed curve, evaluable at any parameter
/// theta in [0, 2pi). Built from the markers of `curve`.
class CurveInterpolant {
public:
    explicit CurveInterpolant(const Curve& curve);

    Vec2 position(double theta) const;
    Vec2 derivative(double theta) const;
    std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_;
    // Real Fourier coefficients a_k, b_k for x and y: f = a0 + sum a_k cos + b_k sin.
    std::vector<double> ax_, bx_, ay_, by_;
};

// Serialization: line 1 is a JSON header {"N":..,"orientation":..,"timestamp":..},
// line 2 is "index,x,y", then one row per marker with 17 significant digits.
void write_curve(std::ostream& os, const Curve& curve, double timestamp = 0.0);
void write_curve(const std::string& path, const Curve& curve, double timestamp = 0.0);

struct CurveFile {
    Curve curve;
    double timestamp = 0.0;
};
CurveFile read_curve(std::istream& is);
CurveFile read_curve(const std::string& path);

}  // namespace illss
