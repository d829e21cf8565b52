#include "swarm/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace swarm::geom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Slack used while building the SEC; tighter than kTol so the published
// tolerance stays meaningful in tests.
constexpr double kBuildSlack = 1e-12;

bool contains(const Circle& c, Point p, double slack) {
    return dist(p, c.center) <= c.radius * (1.0 + slack);
}

Circle circle_from_diameter(Point a, Point b) {
    Point center{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    return {center, 0.5 * dist(a, b)};
}

// Circumcircle of a, b, c; radius < 0 marks a (near-)collinear triple.
// Works on offsets from `a` to limit cancellation for far-from-origin input.
Circle circumcircle(Point a, Point b, Point c) {
    const double bx = b.x - a.x, by = b.y - a.y;
    const double cx = c.x - a.x, cy = c.y - a.y;
    const double d = 2.0 * (bx * cy - by * cx);
    if (d == 0.0) return {Point{}, -1.0};
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    const double ux = (cy * b2 - by * c2) / d;
    const double uy = (bx * c2 - cx * b2) / d;
    Point center{a.x + ux, a.y + uy};
    double r = std::max({dist(center, a), dist(center, b), dist(center, c)});
    return {center, r};
}

Circle sec_two_fixed(const std::vector<Point>& pts, std::size_t end, Point p,
                     Point q) {
    Circle circ = circle_from_diameter(p, q);
    Circle left{Point{}, -1.0};
    Circle right{Point{}, -1.0};
    const Point pq = q - p;
    for (std::size_t i = 0; i < end; ++i) {
        if (contains(circ, pts[i], kBuildSlack)) continue;
        const double side = cross(pq, pts[i] - p);
        Circle c = circumcircle(p, q, pts[i]);
        if (c.radius < 0.0) continue;
        if (side > 0.0) {
            if (left.radius < 0.0 ||
                cross(pq, c.center - p) > cross(pq, left.center - p)) {
                left = c;
            }
        } else {
            if (right.radius < 0.0 ||
                cross(pq, c.center - p) < cross(pq, right.center - p)) {
                right = c;
            }
        }
    }
    if (left.radius < 0.0 && right.radius < 0.0) return circ;
    if (left.radius < 0.0) return right;
    if (right.radius < 0.0) return left;
    return left.radius <= right.radius ? left : right;
}

Circle sec_one_fixed(const std::vector<Point>& pts, std::size_t end, Point p) {
    Circle circ{p, 0.0};
    for (std::size_t i = 0; i < end; ++i) {
        if (contains(circ, pts[i], kBuildSlack)) continue;
        if (circ.radius == 0.0) {
            circ = circle_from_diameter(p, pts[i]);
        } else {
            circ = sec_two_fixed(pts, i, p, pts[i]);
        }
    }
    return circ;
}

}  // namespace

double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point p) { return std::hypot(p.x, p.y); }
double dist(Point a, Point b) { return norm(a - b); }

Point unit(Point p) {
    const double n = norm(p);
    if (n == 0.0) throw std::invalid_argument("unit of zero vector");
    return {p.x / n, p.y / n};
}

Point perp(Point p) { return {-p.y, p.x}; }
Point from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t;
}

double angle_diff(double b, double a) {
    double d = std::fmod(b - a, kTwoPi);
    if (d <= -kPi) d += kTwoPi;
    if (d > kPi) d -= kTwoPi;
    return d;
}

double arc_span(const Arc& arc) {
    return arc.direction == Winding::CCW
               ? wrap_angle(arc.to_angle - arc.from_angle)
               : wrap_angle(arc.from_angle - arc.to_angle);
}

double arc_length(const Arc& arc) { return arc.circle.radius * arc_span(arc); }

Point arc_point_at(const Arc& arc, double traveled_angle) {
    const double sign = arc.direction == Winding::CCW ? 1.0 : -1.0;
    const double theta = arc.from_angle + sign * traveled_angle;
    return arc.circle.center + arc.circle.radius * from_angle(theta);
}

Point arc_start(const Arc& arc) { return arc_point_at(arc, 0.0); }
Point arc_end(const Arc& arc) { return arc_point_at(arc, arc_span(arc)); }

double point_segment_distance(Point p, const Segment& s) {
    const Point ab = s.b - s.a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return dist(p, s.a);
    double t = dot(p - s.a, ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return dist(p, s.a + t * ab);
}

Circle sec(const std::vector<Point>& points) {
    if (points.empty()) throw std::invalid_argument("empty point set");
    for (Point p : points) {
        if (!finite(p)) throw std::invalid_argument("non-finite point");
    }
    std::vector<Point> pts = points;
    std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    Circle circ{pts[0], 0.0};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (!contains(circ, pts[i], kBuildSlack)) {
            circ = sec_one_fixed(pts, i, pts[i]);
        }
    }
    return circ;
}

Circle sec_bruteforce(const std::vector<Point>& points) {
    if (points.empty()) throw std::invalid_argument("empty point set");
    for (Point p : points) {
        if (!finite(p)) throw std::invalid_argument("non-finite point");
    }
    const std::size_t n = points.size();
    Circle best{points[0], 0.0};
    bool have = n == 1;
    auto consider = [&](const Circle& c) {
        if (c.radius < 0.0) return;
        for (Point p : points) {
            if (!contains(c, p, kTol)) return;
        }
        if (!have || c.radius < best.radius) {
            best = c;
            have = true;
        }
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            consider(circle_from_diameter(points[i], points[j]));
            for (std::size_t k = j + 1; k < n; ++k) {
                consider(circumcircle(points[i], points[j], points[k]));
            }
        }
    }
    return best;
}

std::pair<Point, Point> tangent_points(Point p, const Circle& c) {
    const double d = dist(p, c.center);
    const double r = c.radius;
    if (d < r * (1.0 - kTol)) {
        throw std::domain_error("interior point has no tangent");
    }
    if (d <= r * (1.0 + kTol) || r == 0.0) {
        // On the circle (or a degenerate circle): the touch point is p itself,
        // projected exactly onto the boundary.
        Point t = r == 0.0 ? c.center : c.center + r * unit(p - c.center);
        return {t, t};
    }
    const double alpha = std::atan2(p.y - c.center.y, p.x - c.center.x);
    const double beta = std::acos(std::clamp(r / d, -1.0, 1.0));
    return {c.center + r * from_angle(alpha + beta),
            c.center + r * from_angle(alpha - beta)};
}

bool segment_intersects_circle(const Segment& s, const Circle& c) {
    return point_segment_distance(c.center, s) <
           c.radius * (1.0 - kTol);
}

double angle_at(Point vertex, Point a, Point b) {
    const Point u = a - vertex;
    const Point v = b - vertex;
    if (norm(u) <= kTol || norm(v) <= kTol) {
        throw std::domain_error("degenerate angle");
    }
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
}

Point point_on_arc_toward(Point current, Point target, const Circle& circle,
                          double max_step) {
    const double r = circle.radius;
    const double tol = kTol * std::max(r, 1.0);
    if (std::abs(dist(current, circle.center) - r) > tol ||
        std::abs(dist(target, circle.center) - r) > tol) {
        throw std::domain_error("point off circle");
    }
    if (max_step <= 0.0) throw std::invalid_argument("max_step must be > 0");
    if (dist(current, target) <= tol) return current;
    const double tc = std::atan2(current.y - circle.center.y,
                                 current.x - circle.center.x);
    const double tt = std::atan2(target.y - circle.center.y,
                                 target.x - circle.center.x);
    const double d = angle_diff(tt, tc);
    const double step = std::min(max_step, std::abs(d));
    if (step >= std::abs(d)) return target;
    const double theta = tc + (d >= 0.0 ? step : -step);
    return circle.center + r * from_angle(theta);
}

Point Similarity::apply(Point p) const {
    if (reflected) p.y = -p.y;
    const double c = std::cos(rotation), s = std::sin(rotation);
    Point q{c * p.x - s * p.y, s * p.x + c * p.y};
    return translation + scale * q;
}

Point Similarity::invert(Point p) const {
    Point q = p - translation;
    q = {q.x / scale, q.y / scale};
    const double c = std::cos(rotation), s = std::sin(rotation);
    Point r{c * q.x + s * q.y, -s * q.x + c * q.y};
    if (reflected) r.y = -r.y;
    return r;
}

}  // namespace swarm::geom
