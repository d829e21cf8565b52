#include "swarm/motion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace swarm::motion {

namespace {

using geom::Point;

// Occupancy threshold in agreed-frame units (SEC radius 1).
constexpr double kOcc = geom::kTol;
// Deterministic angular scan increment for side-step and detour searches.
constexpr double kAngleStep = 2.0 * std::numbers::pi / 1.0e4;
constexpr double kHalfPi = std::numbers::pi / 2.0;

struct AgreedDecision {
    DecisionKind kind = DecisionKind::Stay;
    Point destination;
    std::optional<geom::Arc> arc;
};

AgreedDecision agreed_stay() { return {}; }

AgreedDecision agreed_segment(Point dest) {
    return {DecisionKind::MoveSegment, dest, std::nullopt};
}

AgreedDecision agreed_arc(double from, double to, geom::Winding dir) {
    geom::Arc arc{geom::Circle{Point{0.0, 0.0}, 1.0}, from, to, dir};
    return {DecisionKind::MoveArc, geom::arc_end(arc), arc};
}

bool on_unit_boundary(Point p) {
    return std::abs(geom::norm(p) - 1.0) <= geom::kTol;
}

double bearing(Point p) { return std::atan2(p.y, p.x); }

bool path_clear(const std::vector<Point>& robots, std::size_t mover,
                Point from, Point to, double tol) {
    const geom::Segment seg{from, to};
    for (std::size_t i = 0; i < robots.size(); ++i) {
        if (i == mover) continue;
        if (geom::point_segment_distance(robots[i], seg) <= tol) return false;
    }
    return true;
}

bool spot_free(const std::vector<Point>& robots, Point spot, double tol) {
    for (const Point& r : robots) {
        if (geom::dist(r, spot) <= tol) return false;
    }
    return true;
}

// Strictly between the origin and the evacuation ring. Robots parked on
// the ring land within rounding of it, so the ring edge carries the same
// tolerance band as occupancy; otherwise the classification would flip
// between observer frames.
bool inside_ring(const PhaseContext& ctx, Point r) {
    const double n = geom::norm(r);
    return n > kOcc && n < ctx.ring_radius - kOcc;
}

// Robots already standing on a pattern point are finished and invisible to
// the evacuation machinery; interior pattern points may well lie inside the
// ring and their occupants must never be pushed out again.
std::size_t punctured_count(const PhaseContext& ctx) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < ctx.robots.size(); ++i) {
        if (ctx.point_of_robot[i] < 0 && inside_ring(ctx, ctx.robots[i])) {
            ++count;
        }
    }
    return count;
}

bool r1_at_p1(const PhaseContext& ctx) {
    if (ctx.all_boundary) return true;  // nothing interior to secure
    return geom::dist(ctx.robots[ctx.r1], ctx.pattern[ctx.p1]) <= kOcc;
}

bool all_points_occupied(const PhaseContext& ctx) {
    return std::all_of(ctx.occupant_of_point.begin(),
                       ctx.occupant_of_point.end(),
                       [](int o) { return o >= 0; });
}

bool robot_is_free(const PhaseContext& ctx, std::size_t i) {
    return ctx.point_of_robot[i] < 0;
}

// ----- boundary machinery ------------------------------------------------

struct BoundaryView {
    std::vector<std::size_t> robots;       // on the SEC
    std::vector<std::size_t> points;       // pattern points on the SEC
    std::vector<std::size_t> filled;       // occupied boundary points
    std::vector<std::size_t> free_robots;  // boundary robots not placed
    std::vector<std::size_t> free_points;  // boundary points unoccupied
};

BoundaryView boundary_view(const PhaseContext& ctx) {
    BoundaryView v;
    for (std::size_t i = 0; i < ctx.robots.size(); ++i) {
        if (on_unit_boundary(ctx.robots[i])) {
            v.robots.push_back(i);
            if (robot_is_free(ctx, i)) v.free_robots.push_back(i);
        }
    }
    for (std::size_t j = 0; j < ctx.pattern.size(); ++j) {
        if (on_unit_boundary(ctx.pattern[j])) {
            v.points.push_back(j);
            if (ctx.occupant_of_point[j] >= 0) {
                v.filled.push_back(j);
            } else {
                v.free_points.push_back(j);
            }
        }
    }
    return v;
}

// Angular distance traveled from `from` to `to` going in `dir`.
double dir_span(double from, double to, geom::Winding dir) {
    return dir == geom::Winding::CCW ? geom::wrap_angle(to - from)
                                     : geom::wrap_angle(from - to);
}

bool angle_strictly_inside(double from, double angle, double span,
                           geom::Winding dir) {
    const double t = dir_span(from, angle, dir);
    return t > geom::kTol && t < span - geom::kTol;
}

// True iff no other boundary robot sits strictly inside the directed arc.
bool arc_robot_clear(const PhaseContext& ctx, const BoundaryView& v,
                     std::size_t mover, double from, double span,
                     geom::Winding dir) {
    for (std::size_t i : v.robots) {
        if (i == mover) continue;
        if (angle_strictly_inside(from, bearing(ctx.robots[i]), span, dir)) {
            return false;
        }
    }
    return true;
}

bool arc_filled_clear(const PhaseContext& ctx,
                      const std::vector<std::size_t>& filled, double from,
                      double span, geom::Winding dir) {
    for (std::size_t j : filled) {
        if (angle_strictly_inside(from, bearing(ctx.pattern[j]), span, dir)) {
            return false;
        }
    }
    return true;
}

// The SEC is held by the robots standing on it; a mover sliding along the
// circle must never leave the on-circle set inside an open half-circle, or
// the SEC itself would change under everyone's feet. The circle survives a
// position theta iff every circular gap of statics+theta is at most half a
// turn. With the mover removed at most one static gap exceeds half a turn;
// the mover's whole trajectory must stay inside the sub-interval of that
// gap that keeps both sides small enough.
bool arc_support_safe(const PhaseContext& ctx, const BoundaryView& v,
                      std::size_t mover, double from, double span,
                      geom::Winding dir) {
    constexpr double kPi = std::numbers::pi;
    std::vector<double> statics;
    for (std::size_t i : v.robots) {
        if (i != mover) statics.push_back(geom::wrap_angle(bearing(ctx.robots[i])));
    }
    if (statics.empty()) return false;
    std::sort(statics.begin(), statics.end());

    double big_gap = -1.0, gap_end = 0.0;
    if (statics.size() == 1) {
        big_gap = 2.0 * kPi;
        gap_end = statics[0];
    } else {
        for (std::size_t k = 0; k < statics.size(); ++k) {
            const double a = statics[k];
            const double b = statics[(k + 1) % statics.size()];
            const double gap =
                k + 1 == statics.size() ? geom::wrap_angle(b - a) : b - a;
            if (gap > big_gap) {
                big_gap = gap;
                gap_end = geom::wrap_angle(b);
            }
        }
    }
    if (big_gap <= kPi + geom::kTol) return true;  // statics span alone

    // Safe positions are [gap_end - pi, gap_start + pi], an interval of
    // width 2*pi - big_gap starting at lo. A mover exactly on the interval
    // edge (antipodal pairs produce this structurally) must not wrap to a
    // full turn under rounding.
    const double lo = gap_end - kPi;
    const double width = 2.0 * kPi - big_gap;
    double offset = geom::wrap_angle(from - lo);
    if (offset > 2.0 * kPi - geom::kTol) offset = 0.0;
    if (offset > width + geom::kTol) return false;
    if (dir == geom::Winding::CCW) {
        return offset + span <= width + geom::kTol;
    }
    return span <= offset + geom::kTol;
}

bool alternate_exists(const PhaseContext& ctx,
                      const std::vector<std::size_t>& free_robots,
                      const std::vector<std::size_t>& free_points,
                      const std::vector<std::size_t>& filled) {
    for (std::size_t r : free_robots) {
        const double a = bearing(ctx.robots[r]);
        for (std::size_t p : free_points) {
            const double b = bearing(ctx.pattern[p]);
            for (geom::Winding dir : {geom::Winding::CCW, geom::Winding::CW}) {
                if (arc_filled_clear(ctx, filled, a, dir_span(a, b, dir), dir)) {
                    return true;
                }
            }
        }
    }
    return false;
}

struct ArcChoice {
    std::size_t robot = 0;
    std::size_t point = 0;
    geom::Winding dir = geom::Winding::CCW;
    double span = 0.0;
};

// Minimal-span movement along the SEC among (free robot, free point) pairs
// whose directed arc passes no other robot. Optionally requires the
// post-move configuration to stay alternate. Ties break by the canonical
// sweep ranks, then by direction (counterclockwise first).
std::optional<ArcChoice> best_admissible_arc(
    const PhaseContext& ctx, const BoundaryView& v,
    const std::vector<std::size_t>& candidate_points,
    bool require_alternate_after) {
    std::optional<ArcChoice> best;
    auto better = [&](const ArcChoice& a, const ArcChoice& b) {
        if (a.span != b.span) return a.span < b.span;
        if (ctx.robot_rank[a.robot] != ctx.robot_rank[b.robot]) {
            return ctx.robot_rank[a.robot] < ctx.robot_rank[b.robot];
        }
        if (ctx.pattern_rank[a.point] != ctx.pattern_rank[b.point]) {
            return ctx.pattern_rank[a.point] < ctx.pattern_rank[b.point];
        }
        return a.dir == geom::Winding::CCW && b.dir == geom::Winding::CW;
    };
    for (std::size_t r : v.free_robots) {
        const double a = bearing(ctx.robots[r]);
        for (std::size_t p : candidate_points) {
            const double b = bearing(ctx.pattern[p]);
            for (geom::Winding dir : {geom::Winding::CCW, geom::Winding::CW}) {
                const double span = dir_span(a, b, dir);
                if (span <= geom::kTol) continue;
                if (!arc_robot_clear(ctx, v, r, a, span, dir)) continue;
                if (!arc_support_safe(ctx, v, r, a, span, dir)) continue;
                if (require_alternate_after) {
                    std::vector<std::size_t> free_r;
                    for (std::size_t fr : v.free_robots) {
                        if (fr != r) free_r.push_back(fr);
                    }
                    std::vector<std::size_t> free_p;
                    for (std::size_t fp : v.free_points) {
                        if (fp != p) free_p.push_back(fp);
                    }
                    std::vector<std::size_t> filled = v.filled;
                    filled.push_back(p);
                    if (!alternate_exists(ctx, free_r, free_p, filled)) {
                        continue;
                    }
                }
                const ArcChoice choice{r, p, dir, span};
                if (!best || better(choice, *best)) best = choice;
            }
        }
    }
    return best;
}

AgreedDecision arc_decision_for(const PhaseContext& ctx,
                                const ArcChoice& choice, std::size_t self) {
    if (choice.robot != self) return agreed_stay();
    const double from = bearing(ctx.robots[self]);
    const double to = bearing(ctx.pattern[choice.point]);
    AgreedDecision d = agreed_arc(from, to, choice.dir);
    // Land exactly on the pattern point.
    d.destination = ctx.pattern[choice.point];
    return d;
}

// ----- step rules ---------------------------------------------------------

AgreedDecision radial_rule(const PhaseContext& ctx, std::size_t self) {
    std::optional<std::size_t> mover;
    for (std::size_t i = 0; i < ctx.robots.size(); ++i) {
        if (!ctx.all_boundary && i == ctx.r1) continue;
        if (ctx.point_of_robot[i] >= 0) continue;
        if (!inside_ring(ctx, ctx.robots[i])) continue;
        const double n = geom::norm(ctx.robots[i]);
        if (!mover) {
            mover = i;
            continue;
        }
        const double bn = geom::norm(ctx.robots[*mover]);
        if (n > bn + kOcc ||
            (n >= bn - kOcc && ctx.robot_rank[i] < ctx.robot_rank[*mover])) {
            mover = i;
        }
    }
    if (!mover || *mover != self) return agreed_stay();

    const Point pos = ctx.robots[self];
    const Point h = ctx.ring_radius * geom::unit(pos);
    if (geom::dist(pos, h) <= kOcc) return agreed_segment(h);
    if (spot_free(ctx.robots, h, kOcc) &&
        path_clear(ctx.robots, self, pos, h, kOcc)) {
        return agreed_segment(h);
    }
    // h is taken: scan the ring to either side for the nearest free spot
    // that keeps the turn at the mover within 90 degrees.
    const double base = bearing(pos);
    for (int k = 1; k * kAngleStep < std::numbers::pi; ++k) {
        for (double sign : {1.0, -1.0}) {
            const Point g =
                ctx.ring_radius * geom::from_angle(base + sign * k * kAngleStep);
            if (geom::angle_at(pos, g, h) > kHalfPi + geom::kTol) continue;
            if (!spot_free(ctx.robots, g, kOcc)) continue;
            if (!path_clear(ctx.robots, self, pos, g, kOcc)) continue;
            return agreed_segment(g);
        }
    }
    throw std::domain_error("no free ring position");
}

AgreedDecision destination_rule(const PhaseContext& ctx, std::size_t self) {
    std::vector<std::size_t> free_points;
    for (std::size_t j = 0; j < ctx.pattern.size(); ++j) {
        if (ctx.occupant_of_point[j] < 0) free_points.push_back(j);
    }
    std::vector<std::size_t> free_robots;
    for (std::size_t i = 0; i < ctx.robots.size(); ++i) {
        if (robot_is_free(ctx, i)) free_robots.push_back(i);
    }
    if (free_points.empty() || free_robots.empty()) {
        throw std::domain_error("nothing to place");
    }

    // Lexicographic selection: interior robots strictly before boundary
    // robots (boundary robots hold the SEC until everyone inside is
    // placed), then the smallest central angle, then distance and the
    // canonical ranks. The chosen pair stays minimal while its robot moves,
    // so mid-move observers re-select the same mover.
    struct Key {
        int boundary;
        double angle;
        double radius;
        std::size_t rrank;
        std::size_t prank;
    };
    auto less = [](const Key& a, const Key& b) {
        if (a.boundary != b.boundary) return a.boundary < b.boundary;
        if (a.angle != b.angle) return a.angle < b.angle;
        if (a.radius != b.radius) return a.radius < b.radius;
        if (a.rrank != b.rrank) return a.rrank < b.rrank;
        return a.prank < b.prank;
    };
    std::optional<Key> best;
    std::size_t r0 = 0, p0 = 0;
    const Point origin{0.0, 0.0};
    for (std::size_t i : free_robots) {
        const int bnd = on_unit_boundary(ctx.robots[i]) ? 1 : 0;
        const double radius = geom::norm(ctx.robots[i]);
        for (std::size_t j : free_points) {
            const Key key{bnd,
                          geom::angle_at(origin, ctx.robots[i], ctx.pattern[j]),
                          radius, ctx.robot_rank[i], ctx.pattern_rank[j]};
            if (!best || less(key, *best)) {
                best = key;
                r0 = i;
                p0 = j;
            }
        }
    }
    if (r0 != self) return agreed_stay();

    const geom::Circle guard{origin, ctx.guard_radius};
    const RoutePlan plan =
        plan_route(ctx.robots[r0], ctx.pattern[p0], guard, 1.0, ctx.robots, r0);
    return agreed_segment(plan.destination);
}

AgreedDecision ensuring_rule(const PhaseContext& ctx, const BoundaryView& v,
                             std::size_t self) {
    const std::optional<ArcChoice> best =
        best_admissible_arc(ctx, v, v.free_points, true);
    if (!best) throw std::domain_error("alternate unreachable");
    return arc_decision_for(ctx, *best, self);
}

AgreedDecision generate_rule(const PhaseContext& ctx, const BoundaryView& v,
                             std::size_t self) {
    // Pick the filled robot (never the leader) with the smallest central
    // angle to a free boundary point and nudge it toward that point by half
    // the gap to the next boundary feature. This frees exactly one boundary
    // position and the vacated point makes the configuration alternate.
    std::optional<std::size_t> rx;
    std::size_t target = 0;
    double best_angle = 0.0;
    for (std::size_t j : v.filled) {
        const std::size_t occ = static_cast<std::size_t>(ctx.occupant_of_point[j]);
        if (occ == ctx.frame.leader_index) continue;
        const double a = bearing(ctx.robots[occ]);
        for (std::size_t p : v.free_points) {
            const double ang = std::abs(geom::angle_diff(bearing(ctx.pattern[p]), a));
            const bool wins =
                !rx || ang < best_angle ||
                (ang == best_angle &&
                 (ctx.robot_rank[occ] < ctx.robot_rank[*rx] ||
                  (occ == *rx && ctx.pattern_rank[p] < ctx.pattern_rank[target])));
            if (wins) {
                rx = occ;
                target = p;
                best_angle = ang;
            }
        }
    }
    if (!rx) throw std::domain_error("generate alternate: no movable robot");

    const double from = bearing(ctx.robots[*rx]);
    const double to = bearing(ctx.pattern[target]);
    const geom::Winding dir =
        geom::angle_diff(to, from) >= 0.0 ? geom::Winding::CCW : geom::Winding::CW;

    // Nearest boundary feature ahead of rx in the travel direction; the
    // mover's own spot (robot and the point it vacates) is skipped.
    double gap = std::numeric_limits<double>::infinity();
    auto feed = [&](double angle) {
        const double t = dir_span(from, angle, dir);
        if (t > geom::kTol && t < gap) gap = t;
    };
    for (std::size_t i : v.robots) {
        if (i != *rx) feed(bearing(ctx.robots[i]));
    }
    for (std::size_t j : v.points) feed(bearing(ctx.pattern[j]));
    if (!std::isfinite(gap)) gap = 2.0 * std::numbers::pi;

    const double step = gap / 2.0;
    if (!arc_support_safe(ctx, v, *rx, from, step, dir)) {
        throw std::domain_error("no support-safe boundary move");
    }
    if (*rx != self) return agreed_stay();
    const double sign = dir == geom::Winding::CCW ? 1.0 : -1.0;
    return agreed_arc(from, from + sign * step, dir);
}

AgreedDecision boundary_rule(const PhaseContext& ctx, std::size_t self) {
    const BoundaryView v = boundary_view(ctx);
    switch (v.filled.size()) {
        case 0: {
            const std::optional<ArcChoice> best =
                best_admissible_arc(ctx, v, v.free_points, false);
            if (!best) throw std::domain_error("no admissible boundary move");
            return arc_decision_for(ctx, *best, self);
        }
        case 1: {
            const double fa = bearing(ctx.pattern[v.filled[0]]);
            std::optional<std::size_t> diametral;
            for (std::size_t p : v.free_points) {
                const double off = std::abs(
                    geom::angle_diff(bearing(ctx.pattern[p]), fa + std::numbers::pi));
                if (off <= geom::kTol) {
                    if (!diametral ||
                        ctx.pattern_rank[p] < ctx.pattern_rank[*diametral]) {
                        diametral = p;
                    }
                }
            }
            if (diametral) {
                const std::vector<std::size_t> only{*diametral};
                const std::optional<ArcChoice> best =
                    best_admissible_arc(ctx, v, only, false);
                // No support-safe approach to the opposite point right now:
                // fill some other boundary point first.
                if (best) return arc_decision_for(ctx, *best, self);
            }
            return ensuring_rule(ctx, v, self);
        }
        case 2: {
            const double a0 = bearing(ctx.pattern[v.filled[0]]);
            const double a1 = bearing(ctx.pattern[v.filled[1]]);
            const bool diametral =
                std::abs(geom::angle_diff(a1, a0 + std::numbers::pi)) <= geom::kTol;
            if (diametral) return destination_rule(ctx, self);
            if (alternate_exists(ctx, v.free_robots, v.free_points, v.filled)) {
                const std::optional<ArcChoice> best =
                    best_admissible_arc(ctx, v, v.free_points, false);
                if (!best) throw std::domain_error("no admissible boundary move");
                return arc_decision_for(ctx, *best, self);
            }
            return generate_rule(ctx, v, self);
        }
        default:
            return destination_rule(ctx, self);
    }
}

AgreedDecision decide(const PhaseContext& ctx, std::size_t self) {
    if (all_points_occupied(ctx)) return agreed_stay();

    // Robot standing on the origin.
    if (ctx.robot_at_origin && *ctx.robot_at_origin == self) {
        if (ctx.origin_point) return agreed_stay();
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < ctx.robots.size(); ++i) {
            if (i != self) nearest = std::min(nearest, geom::dist(ctx.robots[i], ctx.robots[self]));
        }
        return agreed_segment({nearest / 2.0, 0.0});
    }

    const bool origin_unsettled =
        (!ctx.origin_point && ctx.robot_at_origin.has_value()) ||
        (ctx.origin_point && !ctx.robot_at_origin.has_value());
    const std::size_t punctured = punctured_count(ctx);
    const bool settled_r1 = r1_at_p1(ctx);
    // With every pattern point on the SEC there is no reserved inner robot;
    // any insider (including the nominal r1) simply evacuates.
    const std::size_t evacuation_threshold = ctx.all_boundary ? 0 : 1;

    if (self == ctx.r1 && !ctx.all_boundary) {
        if (ctx.origin_point && !ctx.robot_at_origin) {
            return agreed_segment({0.0, 0.0});
        }
        if (!ctx.origin_point && ctx.robot_at_origin) return agreed_stay();
        // The walk starts once r1 is alone inside the ring. When r1 itself
        // stands on the boundary (every robot started on the SEC), "alone"
        // means an empty ring.
        const std::size_t expected_inside =
            robot_is_free(ctx, ctx.r1) && inside_ring(ctx, ctx.robots[ctx.r1])
                ? 1
                : 0;
        if (!settled_r1 && punctured == expected_inside &&
            ctx.occupant_of_point[ctx.p1] < 0) {
            return agreed_segment(ctx.pattern[ctx.p1]);
        }
        return agreed_stay();
    }

    if (on_unit_boundary(ctx.robots[self])) {
        if (origin_unsettled || punctured > evacuation_threshold ||
            !settled_r1) {
            return agreed_stay();
        }
        bool free_boundary_point = false;
        for (std::size_t j = 0; j < ctx.pattern.size(); ++j) {
            if (ctx.occupant_of_point[j] < 0 && on_unit_boundary(ctx.pattern[j])) {
                free_boundary_point = true;
                break;
            }
        }
        bool free_inside = false;
        for (std::size_t i = 0; i < ctx.robots.size(); ++i) {
            if (robot_is_free(ctx, i) &&
                geom::norm(ctx.robots[i]) < 1.0 - geom::kTol) {
                free_inside = true;
                break;
            }
        }
        if (free_boundary_point && !free_inside) return boundary_rule(ctx, self);
        return destination_rule(ctx, self);
    }

    // Interior robot, not at the origin (and not a reserved r1).
    if (origin_unsettled) return agreed_stay();
    if (punctured > evacuation_threshold) return radial_rule(ctx, self);
    if (!settled_r1) return agreed_stay();
    return destination_rule(ctx, self);
}

Decision map_back(const agreement::AgreedFrame& frame,
                  const AgreedDecision& d) {
    Decision out;
    out.kind = d.kind;
    if (d.kind == DecisionKind::Stay) return out;
    out.destination = agreement::from_agreed(frame, d.destination);
    if (d.kind == DecisionKind::MoveArc) {
        const geom::Arc& a = *d.arc;
        const Point start = agreement::from_agreed(frame, geom::arc_start(a));
        const Point end = agreement::from_agreed(frame, geom::arc_end(a));
        geom::Arc mapped;
        mapped.circle = {frame.origin, frame.unit * a.circle.radius};
        mapped.from_angle = std::atan2(start.y - frame.origin.y,
                                       start.x - frame.origin.x);
        mapped.to_angle = std::atan2(end.y - frame.origin.y,
                                     end.x - frame.origin.x);
        mapped.direction = frame.y_sign > 0.0 ? a.direction
                                              : geom::opposite(a.direction);
        out.arc = mapped;
    }
    return out;
}

}  // namespace

Decision stay() { return {}; }

bool operator==(const Decision& a, const Decision& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == DecisionKind::Stay) return true;
    if (!(a.destination == b.destination)) return false;
    if (a.kind == DecisionKind::MoveArc) {
        if (!a.arc || !b.arc) return false;
        return a.arc->circle.center == b.arc->circle.center &&
               a.arc->circle.radius == b.arc->circle.radius &&
               a.arc->from_angle == b.arc->from_angle &&
               a.arc->to_angle == b.arc->to_angle &&
               a.arc->direction == b.arc->direction;
    }
    return true;
}

PhaseContext build_phase_context(const Snapshot& snapshot,
                                 const agreement::NormalizedPattern& pattern) {
    if (snapshot.self_index >= snapshot.robots.points.size()) {
        throw std::out_of_range("self index out of range");
    }
    PhaseContext ctx;
    auto [frame, placed] =
        agreement::agreement_coordinate_system(snapshot.robots, pattern);
    (void)placed;
    ctx.frame = frame;
    const std::size_t n = snapshot.robots.points.size();
    ctx.robots.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        ctx.robots[i] = agreement::to_agreed(frame, snapshot.robots.points[i]);
    }
    ctx.pattern = pattern.points;
    ctx.pattern_order = pattern.order;

    // Sweep ranks: angle from the leader ray counterclockwise in the agreed
    // frame, outermost first on angular ties, matching the polar signature.
    {
        struct K {
            double turn;
            double radius;
            std::size_t idx;
        };
        std::vector<K> keys(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = geom::norm(ctx.robots[i]);
            const double turn =
                r <= kOcc ? 0.0 : geom::wrap_angle(bearing(ctx.robots[i]));
            keys[i] = {turn, r, i};
        }
        std::sort(keys.begin(), keys.end(), [](const K& a, const K& b) {
            if (a.turn != b.turn) return a.turn < b.turn;
            if (a.radius != b.radius) return a.radius > b.radius;
            return a.idx < b.idx;
        });
        ctx.robot_rank.assign(n, 0);
        for (std::size_t pos = 0; pos < n; ++pos) {
            ctx.robot_rank[keys[pos].idx] = pos;
        }
    }
    ctx.pattern_rank.assign(ctx.pattern.size(), 0);
    for (std::size_t pos = 0; pos < ctx.pattern_order.permutation.size(); ++pos) {
        ctx.pattern_rank[ctx.pattern_order.permutation[pos]] = pos;
    }

    // Occupancy: greedy nearest assignment among (point, robot) pairs within
    // the threshold; pairs are far sparser than the threshold in any valid
    // configuration, so this is effectively exact.
    ctx.occupant_of_point.assign(ctx.pattern.size(), -1);
    ctx.point_of_robot.assign(n, -1);
    {
        struct Pair {
            double dist;
            std::size_t point;
            std::size_t robot;
        };
        std::vector<Pair> pairs;
        for (std::size_t j = 0; j < ctx.pattern.size(); ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                const double d = geom::dist(ctx.pattern[j], ctx.robots[i]);
                if (d <= kOcc) pairs.push_back({d, j, i});
            }
        }
        std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
            if (a.dist != b.dist) return a.dist < b.dist;
            if (a.point != b.point) return a.point < b.point;
            return a.robot < b.robot;
        });
        for (const Pair& p : pairs) {
            if (ctx.occupant_of_point[p.point] < 0 &&
                ctx.point_of_robot[p.robot] < 0) {
                ctx.occupant_of_point[p.point] = static_cast<int>(p.robot);
                ctx.point_of_robot[p.robot] = static_cast<int>(p.point);
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (geom::norm(ctx.robots[i]) <= kOcc) {
            ctx.robot_at_origin = i;
            break;
        }
    }
    for (std::size_t j = 0; j < ctx.pattern.size(); ++j) {
        if (geom::norm(ctx.pattern[j]) <= kOcc) {
            ctx.origin_point = j;
            break;
        }
    }

    // Nearest robot / pattern point, excluding anything at the origin
    // itself (the origin is handled by its own rules). Radius comparisons
    // carry a tolerance band: robots tied on the SEC measure fractionally
    // different radii in different observer frames, and the selection must
    // not depend on that noise.
    {
        bool have = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = geom::norm(ctx.robots[i]);
            if (r <= kOcc) continue;
            if (!have) {
                ctx.r1 = i;
                have = true;
                continue;
            }
            const double cur = geom::norm(ctx.robots[ctx.r1]);
            if (r < cur - kOcc ||
                (r <= cur + kOcc &&
                 ctx.robot_rank[i] < ctx.robot_rank[ctx.r1])) {
                ctx.r1 = i;
            }
        }
        if (!have) throw std::domain_error("no robot away from the origin");
    }
    {
        bool have = false;
        for (std::size_t j = 0; j < ctx.pattern.size(); ++j) {
            const double r = geom::norm(ctx.pattern[j]);
            if (r <= kOcc) continue;
            if (!have) {
                ctx.p1 = j;
                have = true;
                continue;
            }
            const double cur = geom::norm(ctx.pattern[ctx.p1]);
            if (r < cur ||
                (r == cur && ctx.pattern_rank[j] < ctx.pattern_rank[ctx.p1])) {
                ctx.p1 = j;
            }
        }
        if (!have) throw std::domain_error("no pattern point away from the origin");
    }

    ctx.d_prime = geom::norm(ctx.pattern[ctx.p1]);
    ctx.d = std::max(geom::norm(ctx.robots[ctx.r1]), ctx.d_prime);

    std::vector<double> robot_radii, pattern_radii;
    robot_radii.reserve(n);
    for (const Point& r : ctx.robots) robot_radii.push_back(geom::norm(r));
    pattern_radii.reserve(ctx.pattern.size());
    for (const Point& p : ctx.pattern) pattern_radii.push_back(geom::norm(p));
    const agreement::ProtectiveRadii radii =
        agreement::protective_radii(robot_radii, pattern_radii);
    ctx.guard_radius = radii.guard;
    ctx.ring_radius = radii.ring;
    ctx.all_boundary = ctx.d_prime >= 1.0 - geom::kTol;
    return ctx;
}

Milestone classify_milestone(const PhaseContext& ctx) {
    if (all_points_occupied(ctx)) return Milestone::Done;
    if (!r1_at_p1(ctx)) return Milestone::I0Pre;
    for (std::size_t j = 0; j < ctx.pattern.size(); ++j) {
        if (on_unit_boundary(ctx.pattern[j]) && ctx.occupant_of_point[j] < 0) {
            return Milestone::I1Reached;
        }
    }
    return Milestone::I2Reached;
}

Milestone classify_milestone(const Snapshot& snapshot,
                             const agreement::NormalizedPattern& pattern) {
    return classify_milestone(build_phase_context(snapshot, pattern));
}

Decision pattern_formation(const Snapshot& snapshot,
                           const agreement::NormalizedPattern& pattern) {
    const PhaseContext ctx = build_phase_context(snapshot, pattern);
    return map_back(ctx.frame, decide(ctx, snapshot.self_index));
}

Decision pattern_formation(const Snapshot& snapshot,
                           const agreement::PatternSpec& pattern) {
    return pattern_formation(snapshot, agreement::agreement_pattern(pattern));
}

Decision move_radially_out(const Snapshot& snapshot,
                           const agreement::NormalizedPattern& pattern) {
    const PhaseContext ctx = build_phase_context(snapshot, pattern);
    return map_back(ctx.frame, radial_rule(ctx, snapshot.self_index));
}

Decision move_to_destination(const Snapshot& snapshot,
                             const agreement::NormalizedPattern& pattern) {
    const PhaseContext ctx = build_phase_context(snapshot, pattern);
    return map_back(ctx.frame, destination_rule(ctx, snapshot.self_index));
}

Decision move_on_boundary(const Snapshot& snapshot,
                          const agreement::NormalizedPattern& pattern) {
    const PhaseContext ctx = build_phase_context(snapshot, pattern);
    return map_back(ctx.frame, boundary_rule(ctx, snapshot.self_index));
}

Decision move_ensuring_alternate(const Snapshot& snapshot,
                                 const agreement::NormalizedPattern& pattern) {
    const PhaseContext ctx = build_phase_context(snapshot, pattern);
    const BoundaryView v = boundary_view(ctx);
    return map_back(ctx.frame, ensuring_rule(ctx, v, snapshot.self_index));
}

Decision generate_alternate(const Snapshot& snapshot,
                            const agreement::NormalizedPattern& pattern) {
    const PhaseContext ctx = build_phase_context(snapshot, pattern);
    const BoundaryView v = boundary_view(ctx);
    return map_back(ctx.frame, generate_rule(ctx, v, snapshot.self_index));
}

bool is_alternate(const PhaseContext& ctx) {
    const BoundaryView v = boundary_view(ctx);
    return alternate_exists(ctx, v.free_robots, v.free_points, v.filled);
}

bool is_alternate(const Snapshot& snapshot,
                  const agreement::NormalizedPattern& pattern) {
    return is_alternate(build_phase_context(snapshot, pattern));
}

RoutePlan plan_route(geom::Point mover_pos, geom::Point target,
                     const geom::Circle& guard, double sec_radius,
                     const std::vector<geom::Point>& robots,
                     std::size_t mover) {
    RoutePlan plan;
    const double tol = kOcc * std::max(sec_radius, 1e-30);
    auto clear = [&](Point a, Point b) {
        return path_clear(robots, mover, a, b, tol);
    };

    const bool crosses =
        geom::segment_intersects_circle({mover_pos, target}, guard);
    std::optional<Point> vis_target;
    if (!crosses) {
        if (clear(mover_pos, target)) {
            plan.kind = RoutePlan::Kind::Direct;
            plan.destination = target;
            return plan;
        }
        vis_target = target;
    } else {
        const auto [tr1, tr2] = geom::tangent_points(mover_pos, guard);
        const auto [tp1, tp2] = geom::tangent_points(target, guard);
        auto line_dir = [&](Point from, Point touch) {
            // From a point on the guard the tangent line runs perpendicular
            // to the radius.
            if (geom::dist(from, touch) <= tol) {
                return geom::perp(touch - guard.center);
            }
            return touch - from;
        };
        struct Corner {
            Point k;
            double cost;
        };
        std::optional<Corner> best;
        for (Point tr : {tr1, tr2}) {
            for (Point tp : {tp1, tp2}) {
                const Point d1 = line_dir(mover_pos, tr);
                const Point d2 = line_dir(target, tp);
                const double den = geom::cross(d1, d2);
                const double scale =
                    std::max(geom::norm(d1) * geom::norm(d2), 1e-300);
                if (std::abs(den) <= 1e-12 * scale) continue;
                const double t = geom::cross(tp - tr, d2) / den;
                const Point k = tr + t * d1;
                plan.corners.push_back(k);
                if (geom::dist(k, guard.center) > sec_radius * (1.0 + geom::kTol)) {
                    continue;
                }
                const double cost = geom::dist(mover_pos, tr) + geom::dist(target, tp);
                const bool wins =
                    !best || cost < best->cost ||
                    (cost == best->cost &&
                     (k.x < best->k.x || (k.x == best->k.x && k.y < best->k.y)));
                if (wins) best = {k, cost};
            }
        }
        if (best) {
            if (clear(mover_pos, best->k)) {
                plan.kind = RoutePlan::Kind::Corner;
                plan.chosen_corner = best->k;
                plan.destination = best->k;
                return plan;
            }
            plan.chosen_corner = best->k;
            vis_target = best->k;
        } else {
            vis_target = target;
        }
    }

    // Detour into the safe region: candidate points sit at mid radius
    // between the guard and the SEC, on bearings inside the wedge between
    // the mover and the target. Scanned from the target's bearing back
    // toward the mover, taking the farthest point whose straight approach
    // stays outside the guard and meets nobody; the onward view to the
    // routing target must be robot-free as well.
    const double a0 = std::atan2(mover_pos.y - guard.center.y,
                                 mover_pos.x - guard.center.x);
    const double a1 = std::atan2(target.y - guard.center.y,
                                 target.x - guard.center.x);
    const double delta = geom::angle_diff(a1, a0);
    const double sgn = delta >= 0.0 ? 1.0 : -1.0;
    const double radius = (guard.radius + sec_radius) / 2.0;
    const int steps = static_cast<int>(std::abs(delta) / kAngleStep);
    for (int k = steps; k >= 0; --k) {
        const double ang = a0 + sgn * std::min(k * kAngleStep, std::abs(delta));
        const Point d0 = guard.center + radius * geom::from_angle(ang);
        if (geom::dist(d0, mover_pos) <= tol) continue;  // no null hops
        if (geom::segment_intersects_circle({mover_pos, d0}, guard)) continue;
        if (!clear(mover_pos, d0)) continue;
        if (!clear(d0, *vis_target)) continue;
        plan.kind = RoutePlan::Kind::Detour;
        plan.detour = d0;
        plan.destination = d0;
        return plan;
    }
    throw std::domain_error("no safe detour");
}

}  // namespace swarm::motion
