// Planar geometry primitives shared by every other module: points, circles,
// segments, arcs, the smallest enclosing circle and its brute-force oracle,
// tangent construction and arc stepping.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace swarm::geom {

// Single relative tolerance for all coincidence / on-circle / on-line
// predicates, applied relative to the SEC radius of the configuration at
// hand (callers in normalized frames use it as an absolute value, since
// there the SEC radius is 1).
inline constexpr double kTol = 1e-9;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }

double dot(Point a, Point b);
double cross(Point a, Point b);
double norm(Point p);
double dist(Point a, Point b);
// Unit vector along p; throws on the zero vector.
Point unit(Point p);
// p rotated by +90 degrees (counterclockwise).
Point perp(Point p);
Point from_angle(double theta);
bool finite(Point p);

struct Circle {
    Point center;
    double radius = 0.0;
};

struct Segment {
    Point a;
    Point b;
};

enum class Winding { CCW, CW };

inline Winding opposite(Winding w) {
    return w == Winding::CCW ? Winding::CW : Winding::CCW;
}

// Circular arc from `from_angle` to `to_angle` running in `direction`.
// Angles are radians in the circle's frame; endpoints are expected to lie
// on the circle within kTol (relative to the radius).
struct Arc {
    Circle circle;
    double from_angle = 0.0;
    double to_angle = 0.0;
    Winding direction = Winding::CCW;
};

// Wrap an angle into [0, 2*pi).
double wrap_angle(double theta);
// Signed smallest rotation from `a` to `b`, in (-pi, pi].
double angle_diff(double b, double a);

// Angular span of the arc in [0, 2*pi), measured along its direction.
double arc_span(const Arc& arc);
double arc_length(const Arc& arc);
Point arc_point_at(const Arc& arc, double traveled_angle);
Point arc_start(const Arc& arc);
Point arc_end(const Arc& arc);

// Distance from p to the closed segment s.
double point_segment_distance(Point p, const Segment& s);

// Smallest enclosing circle. Deterministic: the input is pre-sorted by
// (x, y) before the incremental pass, so equal point sets give bit-equal
// results regardless of input order. Throws on an empty input.
Circle sec(const std::vector<Point>& points);

// Exhaustive oracle for sec(): tries every pair as a diameter and every
// non-collinear triple's circumcircle, returns the smallest circle that
// contains all points. Intended for small inputs (n <= 20).
Circle sec_bruteforce(const std::vector<Point>& points);

// Both tangent touch points from p to circle c, counterclockwise side
// first. A point on the circle (within kTol) yields its own projection
// twice. Throws "interior point has no tangent" for strictly interior p.
std::pair<Point, Point> tangent_points(Point p, const Circle& c);

// True iff the closed segment passes through the open disc interior.
// Grazing tangency within kTol counts as non-intersecting.
bool segment_intersects_circle(const Segment& s, const Circle& c);

// Unsigned angle at `vertex` between rays toward a and b, in [0, pi].
// Throws "degenerate angle" if a or b coincides with the vertex.
double angle_at(Point vertex, Point a, Point b);

// Advance `current` along the shorter arc of `circle` toward `target` by
// min(max_step, remaining angular distance). Both points must lie on the
// circle within kTol relative to the radius.
Point point_on_arc_toward(Point current, Point target, const Circle& circle,
                          double max_step);

// Orientation-preserving similarity transform of the plane, with an
// optional reflection (y-flip applied before rotation and scaling).
struct Similarity {
    Point translation;
    double rotation = 0.0;
    bool reflected = false;
    double scale = 1.0;

    Point apply(Point p) const;
    Point invert(Point p) const;
};

}  // namespace swarm::geom
