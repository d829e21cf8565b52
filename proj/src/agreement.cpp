#include "swarm/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace swarm::agreement {

namespace {

using geom::Point;

// Occupancy threshold in agreed-frame units (SEC radius 1).
constexpr double kOccupied = geom::kTol;

AgreedFrame make_frame(const geom::Circle& sec, Point leader_pos,
                       std::size_t leader_index, double y_sign) {
    AgreedFrame f;
    f.origin = sec.center;
    f.x_axis = geom::unit(leader_pos - sec.center);
    f.y_sign = y_sign;
    f.unit = sec.radius;
    f.leader_index = leader_index;
    return f;
}

}  // namespace

Point to_agreed(const AgreedFrame& f, Point p) {
    const Point v = p - f.origin;
    const Point y = geom::perp(f.x_axis);
    return {geom::dot(v, f.x_axis) / f.unit,
            f.y_sign * geom::dot(v, y) / f.unit};
}

Point from_agreed(const AgreedFrame& f, Point p) {
    const Point y = geom::perp(f.x_axis);
    return f.origin + f.unit * (p.x * f.x_axis) +
           (f.unit * p.y * f.y_sign) * y;
}

ProtectiveRadii protective_radii(const std::vector<double>& robot_radii,
                                 const std::vector<double>& pattern_radii) {
    double d_prime = std::numeric_limits<double>::infinity();
    for (double r : pattern_radii) {
        if (r > kOccupied && r < d_prime) d_prime = r;
    }
    double rho2 = std::numeric_limits<double>::infinity();
    for (double r : pattern_radii) {
        if (r > d_prime + geom::kTol && r < rho2) rho2 = r;
    }
    double r1 = std::numeric_limits<double>::infinity();
    for (double r : robot_radii) {
        if (r > kOccupied && r < r1) r1 = r;
    }
    if (!std::isfinite(d_prime) || !std::isfinite(r1)) {
        throw std::domain_error("no entity away from the origin");
    }
    ProtectiveRadii out;
    if (d_prime >= 1.0 - geom::kTol) {
        // Every pattern point lies on the SEC: there is no interior point
        // to protect, so no guard disc; everyone ends up on the circle.
        out.guard = 0.0;
        out.ring = 1.0;
        return out;
    }
    const double d = std::max(r1, d_prime);
    double eps_g = (1.0 - d_prime) / 4.0;
    if (std::isfinite(rho2)) eps_g = std::min(eps_g, (rho2 - d_prime) / 2.0);
    eps_g = std::max(eps_g, 0.0);
    out.guard = d_prime + eps_g;
    const double base = std::max(d, out.guard);
    out.ring = base + std::max(0.0, (1.0 - base) / 4.0);
    return out;
}

NormalizedPattern agreement_pattern(const PatternSpec& pattern) {
    if (pattern.points.points.size() < 2) {
        throw std::invalid_argument("pattern needs at least two points");
    }
    const canon::CanonicalOrder order = canon::canonical_order(pattern.points);
    const geom::Circle sec = geom::sec(pattern.points.points);
    const std::size_t leader = order.start_point_index;
    const std::size_t ref = canon::second_reference(pattern.points, order);

    AgreedFrame f =
        make_frame(sec, pattern.points.points[leader], leader, 1.0);
    // Fix handedness so the second reference lands in the upper half-plane.
    if (to_agreed(f, pattern.points.points[ref]).y < 0.0) {
        f.y_sign = -1.0;
    }
    NormalizedPattern out;
    out.points.reserve(pattern.points.points.size());
    for (Point p : pattern.points.points) {
        out.points.push_back(to_agreed(f, p));
    }
    out.order = order;
    return out;
}

std::pair<AgreedFrame, PlacedPattern> agreement_coordinate_system(
    const canon::Configuration& snapshot, const NormalizedPattern& pattern) {
    if (snapshot.points.size() != pattern.points.size()) {
        throw std::invalid_argument("pattern/robot cardinality mismatch");
    }
    canon::validate_configuration(snapshot);
    const geom::Circle sec = geom::sec(snapshot.points);
    if (sec.radius <= 0.0) {
        throw std::domain_error("unorderable configuration");
    }
    const std::vector<std::size_t> boundary =
        canon::boundary_indices(snapshot, sec);

    // Tie-break signature over the robots outside the evacuation ring.
    // Everything inside the ring is in motion during the early phases, but
    // every inside mover has a placement-independent destination, so an
    // election keyed on the outside robots stays constant while they move.
    std::vector<double> robot_radii, pattern_radii;
    robot_radii.reserve(snapshot.points.size());
    for (Point p : snapshot.points) {
        robot_radii.push_back(geom::dist(p, sec.center) / sec.radius);
    }
    for (Point p : pattern.points) pattern_radii.push_back(geom::norm(p));
    const ProtectiveRadii radii = protective_radii(robot_radii, pattern_radii);

    // The nearest robot is excluded by identity, not position: it is the
    // one robot whose placement-dependent walk happens while everyone else
    // stands still, so it must not influence the election it steers by.
    // Radius ties within tolerance exclude every tied candidate, since the
    // noise deciding between them differs across observer frames.
    double min_radius = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < snapshot.points.size(); ++i) {
        const double r = robot_radii[i];
        if (r > kOccupied && r < min_radius) min_radius = r;
    }
    auto is_nearest_candidate = [&](std::size_t i) {
        return robot_radii[i] > kOccupied &&
               robot_radii[i] <= min_radius + kOccupied;
    };
    // Tie-break configuration: boundary robots as they stand, every other
    // robot projected radially onto the evacuation ring. Evacuations and
    // the walk to the origin are radial, so the projection is unchanged by
    // all the motion that happens before the nearest robot claims the
    // innermost point; afterwards the occupancy score outweighs this
    // signature anyway.
    canon::Configuration reduced;
    std::vector<std::size_t> reduced_index(snapshot.points.size(),
                                           snapshot.points.size());
    for (std::size_t i = 0; i < snapshot.points.size(); ++i) {
        const double r = robot_radii[i];
        if (r <= kOccupied) continue;
        const bool on_boundary = std::abs(r - 1.0) <= geom::kTol;
        if (is_nearest_candidate(i) && !on_boundary) continue;
        Point entry;
        if (on_boundary) {
            entry = snapshot.points[i];
        } else {
            const Point dir = geom::unit(snapshot.points[i] - sec.center);
            entry = sec.center + (radii.ring * sec.radius) * dir;
        }
        // Robots sharing a bearing (a mover and the parked robot occupying
        // its radial projection, say) collapse to one projected point; the
        // duplicate adds nothing to the ordering.
        bool duplicate = false;
        for (const Point& q : reduced.points) {
            if (geom::dist(entry, q) <= geom::kTol * sec.radius) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        reduced_index[i] = reduced.points.size();
        reduced.points.push_back(entry);
    }

    // Candidate frames: each boundary robot as leader, either handedness.
    // Primary key: how many robots already sit on the points the candidate
    // placement would produce. A fresh configuration scores the same
    // everywhere; once the nearest robot has claimed the innermost point
    // only the placement the swarm has been building keeps the maximal
    // score, which pins the election for the rest of the run.
    struct Candidate {
        std::size_t leader;
        double y_sign;
        int score;
        canon::PolarSignature reduced_sig;
        canon::PolarSignature full_sig;
    };
    std::vector<Candidate> cands;
    cands.reserve(boundary.size() * 2);
    for (std::size_t b : boundary) {
        for (double y_sign : {1.0, -1.0}) {
            AgreedFrame f = make_frame(sec, snapshot.points[b], b, y_sign);
            int score = 0;
            for (Point target : pattern.points) {
                const Point placed = from_agreed(f, target);
                for (Point r : snapshot.points) {
                    if (geom::dist(placed, r) <= kOccupied * sec.radius) {
                        ++score;
                        break;
                    }
                }
            }
            const geom::Winding w =
                y_sign > 0.0 ? geom::Winding::CCW : geom::Winding::CW;
            cands.push_back({b, y_sign, score,
                             canon::polar_signature(reduced, reduced_index[b], w),
                             canon::polar_signature(snapshot, b, w)});
        }
    }
    if (cands.empty()) throw std::domain_error("unorderable configuration");

    auto compare = [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score ? -1 : 1;
        const int outer =
            canon::compare_signatures(a.reduced_sig, b.reduced_sig, geom::kTol);
        if (outer != 0) return outer;
        return canon::compare_signatures(a.full_sig, b.full_sig, geom::kTol);
    };
    const Candidate* best = &cands[0];
    bool ambiguous = false;
    for (std::size_t i = 1; i < cands.size(); ++i) {
        const int cmp = compare(cands[i], *best);
        if (cmp < 0) {
            best = &cands[i];
            ambiguous = false;
        } else if (cmp == 0) {
            ambiguous = true;
        }
    }
    if (ambiguous) throw std::domain_error("unorderable configuration");

    AgreedFrame frame =
        make_frame(sec, snapshot.points[best->leader], best->leader,
                   best->y_sign);
    PlacedPattern placed;
    placed.points.reserve(pattern.points.size());
    for (Point p : pattern.points) {
        placed.points.push_back(from_agreed(frame, p));
    }
    placed.order = pattern.order;
    return {frame, placed};
}

std::pair<AgreedFrame, PlacedPattern> agreement_coordinate_system(
    const canon::Configuration& snapshot, const PatternSpec& pattern) {
    return agreement_coordinate_system(snapshot, agreement_pattern(pattern));
}

PatternSpec parse_pattern_text(const std::string& text) {
    PatternSpec spec;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double x, y;
        if (ls >> x >> y) {
            spec.points.points.push_back({x, y});
            std::string rest;
            if (ls >> rest) {
                throw std::invalid_argument("pattern file: trailing tokens on line " +
                                            std::to_string(lineno));
            }
        } else {
            std::string token;
            std::istringstream probe(line);
            if (probe >> token) {
                throw std::invalid_argument("pattern file: bad line " +
                                            std::to_string(lineno));
            }
        }
    }
    if (spec.points.points.empty()) {
        throw std::invalid_argument("pattern file: no points");
    }
    return spec;
}

std::string format_pattern_text(const PatternSpec& pattern) {
    std::ostringstream out;
    out.precision(17);
    for (Point p : pattern.points.points) {
        out << p.x << ' ' << p.y << '\n';
    }
    return out.str();
}

}  // namespace swarm::agreement
