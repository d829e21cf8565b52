#include "swarm/canon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace swarm::canon {

namespace {

using geom::Point;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double boundary_tol(const geom::Circle& sec) {
    return geom::kTol * std::max(sec.radius, 1e-30);
}

// Reflect v across the direction (cos t, sin t).
Point reflect_dir(Point v, double axis_angle) {
    const Point u = geom::from_angle(axis_angle);
    const double d = geom::dot(v, u);
    return {2.0 * d * u.x - v.x, 2.0 * d * u.y - v.y};
}

Point rotate_vec(Point v, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// True iff `mapped` is a permutation of the original points within tol.
// Points are pairwise distinct beyond tol, so greedy matching is exact.
bool matches_configuration(const std::vector<Point>& original,
                           const std::vector<Point>& mapped, double tol) {
    std::vector<bool> used(original.size(), false);
    for (const Point& m : mapped) {
        bool found = false;
        for (std::size_t i = 0; i < original.size(); ++i) {
            if (!used[i] && geom::dist(m, original[i]) <= tol) {
                used[i] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace

void validate_configuration(const Configuration& c) {
    if (c.points.empty()) {
        throw std::invalid_argument("empty point set");
    }
    for (Point p : c.points) {
        if (!geom::finite(p)) {
            throw std::invalid_argument("non-finite point");
        }
    }
    const geom::Circle s = geom::sec(c.points);
    const double tol = boundary_tol(s);
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        for (std::size_t j = i + 1; j < c.points.size(); ++j) {
            if (geom::dist(c.points[i], c.points[j]) <= tol) {
                throw std::invalid_argument("coincident points");
            }
        }
    }
}

std::vector<std::size_t> boundary_indices(const Configuration& c,
                                          const geom::Circle& sec) {
    std::vector<std::size_t> out;
    const double tol = boundary_tol(sec);
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        if (std::abs(geom::dist(c.points[i], sec.center) - sec.radius) <= tol) {
            out.push_back(i);
        }
    }
    return out;
}

SymmetryReport symmetry_report(const Configuration& c) {
    validate_configuration(c);
    SymmetryReport report;
    const std::size_t n = c.points.size();
    if (n == 1) {
        // A single point is fixed by every line through it and every rotation
        // about it.
        report.has_mirror = true;
        report.mirror_axis_angle = 0.0;
        report.has_rotational = true;
        report.rotation_angle = std::numbers::pi;
        return report;
    }
    const geom::Circle s = geom::sec(c.points);
    const double tol = boundary_tol(s);

    // Mirror axes: any mirror line must pass through the SEC center and
    // either contain some point or be the perpendicular bisector of a
    // mirrored pair.
    std::vector<double> axis_angles;
    for (Point p : c.points) {
        const Point v = p - s.center;
        if (geom::norm(v) > tol) {
            axis_angles.push_back(std::atan2(v.y, v.x));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Point v = geom::perp(c.points[j] - c.points[i]);
            axis_angles.push_back(std::atan2(v.y, v.x));
        }
    }
    std::vector<Point> mapped(n);
    for (double axis : axis_angles) {
        for (std::size_t i = 0; i < n; ++i) {
            mapped[i] = s.center + reflect_dir(c.points[i] - s.center, axis);
        }
        if (matches_configuration(c.points, mapped, tol)) {
            report.has_mirror = true;
            report.mirror_axis_angle = axis;
            break;
        }
    }

    // Rotations: a rotational self-map sends the first boundary point onto
    // some other boundary point, so those relative angles exhaust the
    // candidates.
    const std::vector<std::size_t> boundary = boundary_indices(c, s);
    if (boundary.size() >= 2) {
        const Point v0 = c.points[boundary[0]] - s.center;
        const double a0 = std::atan2(v0.y, v0.x);
        for (std::size_t k = 1; k < boundary.size(); ++k) {
            const Point vk = c.points[boundary[k]] - s.center;
            const double theta =
                geom::wrap_angle(std::atan2(vk.y, vk.x) - a0);
            if (theta <= geom::kTol || theta >= kTwoPi - geom::kTol) continue;
            for (std::size_t i = 0; i < n; ++i) {
                mapped[i] = s.center + rotate_vec(c.points[i] - s.center, theta);
            }
            if (matches_configuration(c.points, mapped, tol)) {
                report.has_rotational = true;
                report.rotation_angle = theta;
                break;
            }
        }
    }
    return report;
}

PolarSignature polar_signature(const Configuration& c, std::size_t start,
                               geom::Winding chirality) {
    const geom::Circle s = geom::sec(c.points);
    const std::size_t n = c.points.size();
    if (start >= n) throw std::out_of_range("start index out of range");
    const double tol = boundary_tol(s);
    if (std::abs(geom::dist(c.points[start], s.center) - s.radius) > tol) {
        throw std::invalid_argument("start point not on SEC boundary");
    }

    PolarSignature sig;
    if (s.radius <= 0.0) {
        sig.entries.push_back({0.0, 0.0});
        sig.order.push_back(start);
        return sig;
    }

    const Point vs = c.points[start] - s.center;
    const double base = std::atan2(vs.y, vs.x);
    struct Keyed {
        double turn;
        double ratio;
        std::size_t index;
    };
    std::vector<Keyed> keyed(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point v = c.points[i] - s.center;
        const double ratio = geom::norm(v) / s.radius;
        double turn;
        if (i == start) {
            turn = 0.0;
        } else if (ratio <= geom::kTol) {
            // A point at the center has no bearing; pin it to the start ray.
            turn = 0.0;
        } else {
            const double raw = std::atan2(v.y, v.x);
            turn = geom::wrap_angle(chirality == geom::Winding::CCW
                                        ? raw - base
                                        : base - raw);
            if (turn >= kTwoPi) turn = 0.0;
        }
        keyed[i] = {turn, ratio, i};
    }
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        if (a.turn != b.turn) return a.turn < b.turn;
        if (a.ratio != b.ratio) return a.ratio > b.ratio;
        return a.index < b.index;
    });
    sig.entries.reserve(n);
    sig.order.reserve(n);
    for (const Keyed& k : keyed) {
        sig.entries.push_back({k.ratio, k.turn});
        sig.order.push_back(k.index);
    }
    // Two entries near-tied in both angle and radius are near-coincident
    // points in disguise; no observer-stable order exists for them.
    for (std::size_t i = 1; i < n; ++i) {
        const auto& prev = sig.entries[i - 1];
        const auto& cur = sig.entries[i];
        if (cur.radius_ratio <= geom::kTol || prev.radius_ratio <= geom::kTol) {
            continue;
        }
        if (std::abs(cur.turn_angle - prev.turn_angle) <= geom::kTol &&
            std::abs(cur.radius_ratio - prev.radius_ratio) <= geom::kTol) {
            throw std::domain_error("configuration too close to symmetric");
        }
    }
    return sig;
}

int compare_signatures(const PolarSignature& a, const PolarSignature& b,
                       double tol) {
    const std::size_t n = std::min(a.entries.size(), b.entries.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = a.entries[i].turn_angle - b.entries[i].turn_angle;
        if (std::abs(dt) > tol) return dt < 0.0 ? -1 : 1;
        const double dr = a.entries[i].radius_ratio - b.entries[i].radius_ratio;
        if (std::abs(dr) > tol) return dr > 0.0 ? -1 : 1;  // higher ratio first
    }
    if (a.entries.size() != b.entries.size()) {
        return a.entries.size() < b.entries.size() ? -1 : 1;
    }
    return 0;
}

CanonicalOrder canonical_order(const Configuration& c) {
    validate_configuration(c);
    const SymmetryReport report = symmetry_report(c);
    if (report.has_mirror || report.has_rotational) {
        throw std::domain_error("configuration not orderable");
    }
    const geom::Circle s = geom::sec(c.points);
    const std::vector<std::size_t> boundary = boundary_indices(c, s);

    bool have = false;
    bool ambiguous = false;
    PolarSignature best;
    CanonicalOrder order;
    for (std::size_t b : boundary) {
        for (geom::Winding w : {geom::Winding::CCW, geom::Winding::CW}) {
            PolarSignature sig = polar_signature(c, b, w);
            if (!have) {
                best = sig;
                order = {sig.order, b, w};
                have = true;
                continue;
            }
            const int cmp = compare_signatures(sig, best, geom::kTol);
            if (cmp < 0) {
                best = sig;
                order = {sig.order, b, w};
                ambiguous = false;
            } else if (cmp == 0) {
                ambiguous = true;
            }
        }
    }
    if (!have) throw std::domain_error("configuration not orderable");
    if (ambiguous) {
        throw std::domain_error("configuration too close to symmetric");
    }
    order.permutation = best.order;
    return order;
}

std::size_t elect_leader(const Configuration& c) {
    return canonical_order(c).start_point_index;
}

namespace {

std::size_t second_reference_impl(const Configuration& c,
                                  const CanonicalOrder& order,
                                  std::size_t leader) {
    if (c.points.size() < 2) {
        throw std::invalid_argument("need at least two points");
    }
    const geom::Circle s = geom::sec(c.points);
    const Point axis = geom::unit(c.points[leader] - s.center);
    const double tol = boundary_tol(s);
    const std::size_t n = order.permutation.size();
    std::size_t pos = 0;
    while (pos < n && order.permutation[pos] != leader) ++pos;
    for (std::size_t k = 1; k < n; ++k) {
        const std::size_t idx = order.permutation[(pos + k) % n];
        const double off = std::abs(geom::cross(axis, c.points[idx] - s.center));
        if (off > tol) return idx;
    }
    throw std::domain_error("no off-axis reference");
}

}  // namespace

std::size_t second_reference(const Configuration& c,
                             const CanonicalOrder& order) {
    return second_reference_impl(c, order, order.start_point_index);
}

std::size_t second_reference(const Configuration& c, std::size_t leader) {
    if (leader >= c.points.size()) {
        throw std::out_of_range("leader index out of range");
    }
    return second_reference_impl(c, canonical_order(c), leader);
}

}  // namespace swarm::canon
