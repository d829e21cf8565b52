#include "swarm/sim.hpp"

#include <algorithm>
#include <cmath>

namespace swarm::sim {

namespace {

using geom::Point;

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

canon::Configuration world_configuration(const World& world) {
    canon::Configuration c;
    c.points.reserve(world.robots.size());
    for (const RobotState& r : world.robots) {
        c.points.push_back(r.world_position);
    }
    return c;
}

motion::Milestone classify_world(const World& world) {
    motion::Snapshot snap{world_configuration(world), 0};
    return motion::classify_milestone(snap, world.normalized);
}

motion::Decision decision_to_world(const LocalFrame& f,
                                   const motion::Decision& local) {
    motion::Decision out;
    out.kind = local.kind;
    if (local.kind == motion::DecisionKind::Stay) return out;
    out.destination = f.invert(local.destination);
    if (local.kind == motion::DecisionKind::MoveArc) {
        const geom::Arc& a = *local.arc;
        const Point center = f.invert(a.circle.center);
        const Point start = f.invert(geom::arc_start(a));
        const Point end = f.invert(geom::arc_end(a));
        geom::Arc w;
        w.circle = {center, a.circle.radius / f.scale};
        w.from_angle = std::atan2(start.y - center.y, start.x - center.x);
        w.to_angle = std::atan2(end.y - center.y, end.x - center.x);
        w.direction = f.reflected ? geom::opposite(a.direction) : a.direction;
        out.arc = w;
    }
    return out;
}

// Exact distance from p to a directed arc portion.
double point_arc_distance(Point p, const geom::Arc& arc, double span) {
    const Point c = arc.circle.center;
    const double r = arc.circle.radius;
    const double ap = std::atan2(p.y - c.y, p.x - c.x);
    const double t = arc.direction == geom::Winding::CCW
                         ? geom::wrap_angle(ap - arc.from_angle)
                         : geom::wrap_angle(arc.from_angle - ap);
    if (t <= span) return std::abs(geom::dist(p, c) - r);
    return std::min(geom::dist(p, geom::arc_point_at(arc, 0.0)),
                    geom::dist(p, geom::arc_point_at(arc, span)));
}

struct MovedPath {
    bool is_arc = false;
    geom::Segment seg;
    geom::Arc arc;    // sub-arc actually traveled this event
    double span = 0.0;

    Point at(double t) const {  // t in [0, 1]
        if (!is_arc) return seg.a + t * (seg.b - seg.a);
        return geom::arc_point_at(arc, t * span);
    }
    double distance_to(Point p) const {
        if (!is_arc) return geom::point_segment_distance(p, seg);
        return point_arc_distance(p, arc, span);
    }
};

MovedPath path_of(const Event& ev) {
    MovedPath path;
    if (!ev.arc_move) {
        path.seg = {ev.from, ev.to};
        return path;
    }
    path.is_arc = true;
    path.arc = ev.arc;
    const Point c = ev.arc.circle.center;
    path.arc.from_angle = std::atan2(ev.from.y - c.y, ev.from.x - c.x);
    path.arc.to_angle = std::atan2(ev.to.y - c.y, ev.to.x - c.x);
    path.span = geom::arc_span(path.arc);
    return path;
}

void note_pairwise(const World& world, std::size_t mover,
                   const MovedPath& path, Outcome& outcome) {
    for (const RobotState& r : world.robots) {
        if (r.id == mover) continue;
        outcome.min_pairwise_distance = std::min(
            outcome.min_pairwise_distance, path.distance_to(r.world_position));
    }
}

std::size_t pick_robot(const World& world, AdversaryState& adv) {
    const std::size_t n = world.robots.size();
    std::vector<std::size_t> candidates;
    candidates.reserve(n);
    if (!adv.config.mid_move_snapshots) {
        for (std::size_t i = 0; i < n; ++i) {
            if (world.robots[i].phase == Phase::Move) candidates.push_back(i);
        }
    }
    if (candidates.empty()) {
        for (std::size_t i = 0; i < n; ++i) candidates.push_back(i);
    }

    const std::uint64_t bound =
        static_cast<std::uint64_t>(n) *
        static_cast<std::uint64_t>(adv.config.fairness_factor);
    std::size_t starving = n;
    std::uint64_t worst = 0;
    for (std::size_t i : candidates) {
        const std::uint64_t wait = world.tick - adv.last_activation[i];
        if (wait >= bound && wait > worst) {
            starving = i;
            worst = wait;
        }
    }
    if (starving < n) return starving;

    switch (adv.config.policy) {
        case ActivationPolicy::RoundRobin: {
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t i = (adv.round_robin_next + k) % n;
                if (std::find(candidates.begin(), candidates.end(), i) !=
                    candidates.end()) {
                    adv.round_robin_next = (i + 1) % n;
                    return i;
                }
            }
            return candidates[0];
        }
        case ActivationPolicy::RandomFair: {
            const std::uint64_t r = rng_next(adv.rng_state);
            return candidates[static_cast<std::size_t>(r % candidates.size())];
        }
        case ActivationPolicy::StarveOne: {
            std::vector<std::size_t> others;
            for (std::size_t i : candidates) {
                if (i != adv.config.starve_index) others.push_back(i);
            }
            if (others.empty()) return candidates[0];
            for (std::size_t k = 0; k < n; ++k) {
                const std::size_t i = (adv.round_robin_next + k) % n;
                if (std::find(others.begin(), others.end(), i) != others.end()) {
                    adv.round_robin_next = (i + 1) % n;
                    return i;
                }
            }
            return others[0];
        }
    }
    return candidates[0];
}

void emit_milestone_progress(World& world, Trace& trace, Outcome& outcome) {
    const motion::Milestone m = classify_world(world);
    if (static_cast<int>(m) > static_cast<int>(world.reached)) {
        world.reached = m;
        Event ev;
        ev.tick = world.tick;
        ev.kind = EventKind::MilestoneReached;
        ev.milestone = m;
        trace.events.push_back(ev);
        if (m >= motion::Milestone::I1Reached && !world.sec_at_i1) {
            canon::Configuration c = world_configuration(world);
            world.sec_at_i1 = geom::sec(c.points);
        }
    }
    if (world.sec_at_i1) {
        canon::Configuration c = world_configuration(world);
        const geom::Circle now = geom::sec(c.points);
        const geom::Circle ref = *world.sec_at_i1;
        const double rel = 1.0 / ref.radius;
        outcome.max_sec_drift_after_i1 = std::max(
            {outcome.max_sec_drift_after_i1,
             geom::dist(now.center, ref.center) * rel,
             std::abs(now.radius - ref.radius) * rel});
    }
}

}  // namespace

std::uint64_t rng_next(std::uint64_t& state) { return splitmix64(state); }

double rng_uniform(std::uint64_t& state) {
    return static_cast<double>(rng_next(state) >> 11) * 0x1.0p-53;
}

World make_world(const Scenario& scenario) {
    if (scenario.robots.size() != scenario.pattern.size()) {
        throw std::invalid_argument("pattern/robot cardinality mismatch");
    }
    if (scenario.frames.size() != scenario.robots.size()) {
        throw std::invalid_argument("one local frame per robot required");
    }
    for (const LocalFrame& f : scenario.frames) {
        if (!(f.scale > 0.0) || !std::isfinite(f.scale)) {
            throw std::invalid_argument("frame scale must be positive");
        }
    }
    const AdversaryConfig& a = scenario.adversary;
    if (!(a.move_fraction_lo > 0.0) || a.move_fraction_lo > a.move_fraction_hi ||
        a.move_fraction_hi > 1.0) {
        throw std::invalid_argument("move fraction range must be in (0, 1]");
    }
    if (!(a.min_progress > 0.0)) {
        throw std::invalid_argument("min progress must be positive");
    }
    if (a.fairness_factor < 1) {
        throw std::invalid_argument("fairness factor must be at least 1");
    }
    if (a.policy == ActivationPolicy::StarveOne &&
        a.starve_index >= scenario.robots.size()) {
        throw std::invalid_argument("starve index out of range");
    }

    // Symmetric inputs are rejected before the run starts.
    canon::Configuration robots{scenario.robots};
    canon::canonical_order(robots);
    agreement::PatternSpec spec{canon::Configuration{scenario.pattern}};

    World world;
    world.normalized = agreement::agreement_pattern(spec);
    auto [frame, placed] =
        agreement::agreement_coordinate_system(robots, world.normalized);
    (void)frame;
    world.placed_world = placed.points;
    world.initial_sec_radius = geom::sec(scenario.robots).radius;
    world.robots.resize(scenario.robots.size());
    for (std::size_t i = 0; i < scenario.robots.size(); ++i) {
        world.robots[i].id = i;
        world.robots[i].world_position = scenario.robots[i];
        world.robots[i].frame = scenario.frames[i];
    }
    world.reached = classify_world(world);
    return world;
}

AdversaryState make_adversary(const Scenario& scenario) {
    AdversaryState adv;
    adv.config = scenario.adversary;
    adv.rng_state = scenario.adversary.seed;
    adv.last_activation.assign(scenario.robots.size(), 0);
    return adv;
}

bool step(World& world, AdversaryState& adv, Trace& trace, Outcome& outcome) {
    const std::size_t i = pick_robot(world, adv);
    adv.last_activation[i] = world.tick;
    RobotState& r = world.robots[i];
    ++world.tick;
    outcome.activations_used = world.tick;

    auto activated = [&](Phase entered) {
        Event ev;
        ev.tick = world.tick;
        ev.kind = EventKind::Activated;
        ev.robot = i;
        ev.phase = entered;
        trace.events.push_back(ev);
    };

    try {
        switch (r.phase) {
            case Phase::Wait: {
                r.phase = Phase::Look;
                activated(Phase::Look);
                std::vector<Point> local;
                local.reserve(world.robots.size());
                for (const RobotState& other : world.robots) {
                    local.push_back(r.frame.apply(other.world_position));
                }
                r.observed = local;
                Event ev;
                ev.tick = world.tick;
                ev.kind = EventKind::SnapshotTaken;
                ev.robot = i;
                ev.positions = std::move(local);
                trace.events.push_back(ev);
                break;
            }
            case Phase::Look: {
                motion::Snapshot snap{canon::Configuration{*r.observed}, i};
                const motion::Decision local =
                    motion::pattern_formation(snap, world.normalized);
                r.observed.reset();
                const motion::Decision world_decision =
                    decision_to_world(r.frame, local);
                r.pending = world_decision;
                r.phase = Phase::Compute;
                activated(Phase::Compute);
                Event ev;
                ev.tick = world.tick;
                ev.kind = EventKind::Decided;
                ev.robot = i;
                ev.decision = world_decision;
                trace.events.push_back(ev);
                break;
            }
            case Phase::Compute: {
                if (r.pending->kind == motion::DecisionKind::Stay) {
                    r.pending.reset();
                    r.phase = Phase::Wait;
                    activated(Phase::Wait);
                } else {
                    r.phase = Phase::Move;
                    r.arc_traveled = 0.0;
                    activated(Phase::Move);
                }
                break;
            }
            case Phase::Move: {
                activated(Phase::Move);
                const motion::Decision& d = *r.pending;
                const bool as_arc = d.kind == motion::DecisionKind::MoveArc &&
                                    !adv.config.chord_mode;
                const Point from = r.world_position;
                const double delta =
                    adv.config.min_progress * world.initial_sec_radius;
                const double f =
                    adv.config.move_fraction_lo +
                    rng_uniform(adv.rng_state) *
                        (adv.config.move_fraction_hi - adv.config.move_fraction_lo);

                bool arrived = false;
                Point to;
                Event moved;
                moved.kind = EventKind::Moved;
                moved.robot = i;
                moved.from = from;
                if (as_arc) {
                    const geom::Arc& arc = *d.arc;
                    const double span = geom::arc_span(arc);
                    const double remaining =
                        arc.circle.radius * (span - r.arc_traveled);
                    const double advance =
                        std::min(remaining, std::max(f * remaining, delta));
                    if (advance >= remaining) {
                        to = d.destination;
                        arrived = true;
                    } else {
                        r.arc_traveled += advance / arc.circle.radius;
                        to = geom::arc_point_at(arc, r.arc_traveled);
                    }
                    moved.arc_move = true;
                    moved.arc = arc;
                } else {
                    const double remaining = geom::dist(from, d.destination);
                    const double advance =
                        std::min(remaining, std::max(f * remaining, delta));
                    if (advance >= remaining || remaining == 0.0) {
                        to = d.destination;
                        arrived = true;
                    } else {
                        to = from + (advance / remaining) * (d.destination - from);
                    }
                }
                r.world_position = to;
                moved.to = to;
                moved.tick = world.tick;
                trace.events.push_back(moved);
                note_pairwise(world, i, path_of(moved), outcome);

                if (arrived) {
                    r.pending.reset();
                    r.phase = Phase::Wait;
                } else if (rng_uniform(adv.rng_state) <
                           adv.config.stop_probability) {
                    // Stopped short by the adversary; the rest of the path is
                    // forgotten with the cycle.
                    r.pending.reset();
                    r.phase = Phase::Wait;
                }
                emit_milestone_progress(world, trace, outcome);
                if (world.reached == motion::Milestone::Done) {
                    outcome.status = RunStatus::Formed;
                    return false;
                }
                break;
            }
        }
    } catch (const std::exception& ex) {
        Event ev;
        ev.tick = world.tick;
        ev.kind = EventKind::Error;
        ev.robot = i;
        ev.reason = ex.what();
        trace.events.push_back(ev);
        outcome.status = RunStatus::ProtocolError;
        outcome.error = ex.what();
        return false;
    }
    return true;
}

std::pair<Trace, Outcome> run(const Scenario& scenario) {
    World world = make_world(scenario);
    AdversaryState adv = make_adversary(scenario);
    Trace trace;
    Outcome outcome;
    outcome.status = RunStatus::ActivationBudgetExceeded;

    // Baseline pairwise distance and the starting milestone.
    for (std::size_t a = 0; a < world.robots.size(); ++a) {
        for (std::size_t b = a + 1; b < world.robots.size(); ++b) {
            outcome.min_pairwise_distance =
                std::min(outcome.min_pairwise_distance,
                         geom::dist(world.robots[a].world_position,
                                    world.robots[b].world_position));
        }
    }
    Event start;
    start.tick = 0;
    start.kind = EventKind::MilestoneReached;
    start.milestone = world.reached;
    trace.events.push_back(start);
    if (world.reached == motion::Milestone::Done) {
        outcome.status = RunStatus::Formed;
        return {std::move(trace), outcome};
    }
    if (world.reached >= motion::Milestone::I1Reached) {
        canon::Configuration c = world_configuration(world);
        world.sec_at_i1 = geom::sec(c.points);
    }

    while (world.tick < scenario.budget) {
        if (!step(world, adv, trace, outcome)) {
            return {std::move(trace), outcome};
        }
    }
    outcome.status = RunStatus::ActivationBudgetExceeded;
    return {std::move(trace), outcome};
}

CollisionReport check_collisions(const Scenario& scenario, const Trace& trace,
                                 int samples) {
    CollisionReport report;
    std::vector<Point> pos = scenario.robots;
    const double r0 = geom::sec(scenario.robots).radius;
    const double threshold = scenario.tolerances.collide * r0;

    auto note = [&](double d, std::uint64_t tick, std::size_t a, std::size_t b) {
        if (d < report.min_distance) report.min_distance = d;
        if (d <= threshold && !report.violation) {
            report.violation = true;
            report.first_violation_tick = tick;
            report.robot_a = a;
            report.robot_b = b;
        }
    };

    for (std::size_t a = 0; a < pos.size(); ++a) {
        for (std::size_t b = a + 1; b < pos.size(); ++b) {
            note(geom::dist(pos[a], pos[b]), 0, a, b);
        }
    }
    for (const Event& ev : trace.events) {
        if (ev.kind != EventKind::Moved) continue;
        const MovedPath path = path_of(ev);
        for (std::size_t j = 0; j < pos.size(); ++j) {
            if (j == ev.robot) continue;
            note(path.distance_to(pos[j]), ev.tick, ev.robot, j);
            for (int s = 0; s <= samples; ++s) {
                const double t = static_cast<double>(s) / samples;
                note(geom::dist(path.at(t), pos[j]), ev.tick, ev.robot, j);
            }
        }
        pos[ev.robot] = ev.to;
    }
    return report;
}

SecDriftReport check_sec_invariance(const Scenario& scenario,
                                    const Trace& trace) {
    SecDriftReport report;
    std::vector<Point> pos = scenario.robots;
    std::optional<geom::Circle> ref;
    for (const Event& ev : trace.events) {
        if (ev.kind == EventKind::MilestoneReached && !ref &&
            ev.milestone >= motion::Milestone::I1Reached) {
            ref = geom::sec(pos);
            report.saw_i1 = true;
            continue;
        }
        if (ev.kind != EventKind::Moved) continue;
        const MovedPath path = path_of(ev);
        if (ref) {
            constexpr int kPathSamples = 16;
            for (int s = 0; s <= kPathSamples; ++s) {
                const double t = static_cast<double>(s) / kPathSamples;
                const double excess =
                    (geom::dist(path.at(t), ref->center) - ref->radius) /
                    ref->radius;
                report.max_path_excursion =
                    std::max(report.max_path_excursion, excess);
            }
        }
        pos[ev.robot] = ev.to;
        if (ref) {
            const geom::Circle now = geom::sec(pos);
            report.max_center_drift =
                std::max(report.max_center_drift,
                         geom::dist(now.center, ref->center) / ref->radius);
            report.max_radius_drift =
                std::max(report.max_radius_drift,
                         std::abs(now.radius - ref->radius) / ref->radius);
        }
    }
    return report;
}

bool match_pattern(const std::vector<Point>& final_positions,
                   const std::vector<Point>& placed, double tol_match) {
    if (final_positions.size() != placed.size()) {
        throw std::invalid_argument("pattern/robot cardinality mismatch");
    }
    const double radius = geom::sec(placed).radius;
    const double tol = tol_match * radius;
    double min_spacing = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < placed.size(); ++a) {
        for (std::size_t b = a + 1; b < placed.size(); ++b) {
            min_spacing = std::min(min_spacing, geom::dist(placed[a], placed[b]));
        }
    }
    if (placed.size() > 1 && tol >= 0.5 * min_spacing) {
        throw std::invalid_argument("tolerance too coarse");
    }
    struct Pair {
        double d;
        std::size_t robot;
        std::size_t point;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < final_positions.size(); ++i) {
        for (std::size_t j = 0; j < placed.size(); ++j) {
            const double d = geom::dist(final_positions[i], placed[j]);
            if (d <= tol) pairs.push_back({d, i, j});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        if (a.d != b.d) return a.d < b.d;
        if (a.robot != b.robot) return a.robot < b.robot;
        return a.point < b.point;
    });
    std::vector<bool> robot_used(final_positions.size(), false);
    std::vector<bool> point_used(placed.size(), false);
    std::size_t matched = 0;
    for (const Pair& p : pairs) {
        if (robot_used[p.robot] || point_used[p.point]) continue;
        robot_used[p.robot] = true;
        point_used[p.point] = true;
        ++matched;
    }
    return matched == final_positions.size();
}

}  // namespace swarm::sim
