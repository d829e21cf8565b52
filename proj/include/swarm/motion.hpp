// The per-robot Compute step: given only the current snapshot and the
// pattern, emit a decision. Covers vacating the origin, filling the origin,
// radial evacuation of the inner disc, the nearest-robot walk to the
// innermost pattern point, boundary filling along the SEC (with the
// alternate-configuration machinery), and guarded routing for everyone else.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "swarm/agreement.hpp"
#include "swarm/canon.hpp"
#include "swarm/geom.hpp"

namespace swarm::motion {

// One robot's view of the world: every robot position in the observer's
// own coordinate frame, plus which entry is the observer.
struct Snapshot {
    canon::Configuration robots;
    std::size_t self_index = 0;
};

enum class DecisionKind { Stay, MoveSegment, MoveArc };

// Output of one Compute. Destinations are expressed in the same frame as
// the snapshot that produced them. MoveArc is only ever issued to robots on
// the SEC boundary and keeps them on it.
struct Decision {
    DecisionKind kind = DecisionKind::Stay;
    geom::Point destination;
    std::optional<geom::Arc> arc;
};

Decision stay();
bool operator==(const Decision& a, const Decision& b);

enum class Milestone { I0Pre, I1Reached, I2Reached, Done };

// Everything the step rules need, all expressed in the agreed frame where
// the SEC is the unit circle at the origin. Rebuilt from scratch for every
// snapshot; nothing here survives between cycles.
struct PhaseContext {
    agreement::AgreedFrame frame;
    std::vector<geom::Point> robots;   // agreed frame
    std::vector<geom::Point> pattern;  // agreed frame
    canon::CanonicalOrder pattern_order;
    std::vector<std::size_t> robot_rank;    // robot index -> sweep position
    std::vector<std::size_t> pattern_rank;  // pattern index -> order position
    std::vector<int> occupant_of_point;     // robot index or -1
    std::vector<int> point_of_robot;        // pattern index or -1
    std::optional<std::size_t> robot_at_origin;
    std::optional<std::size_t> origin_point;  // pattern point at the origin
    std::size_t r1 = 0;  // nearest robot to the origin (excluding one at it)
    std::size_t p1 = 0;  // nearest pattern point (excluding one at the origin)
    double d = 0.0;        // max(|O r1|, |O p1|)
    double d_prime = 0.0;  // |O p1|
    // Protective circle around the innermost pattern point: free robots
    // route around it so the nearest-robot claim on p1 is never disturbed.
    // Its margin is capped by the next pattern radius so every other
    // pattern point stays reachable from outside.
    double guard_radius = 0.0;
    // Evacuation ring: robots inside it (other than r1) are pushed out onto
    // it before r1 walks to p1. Strictly inside the SEC, never below the
    // guard.
    double ring_radius = 0.0;
    // Every pattern point sits on the SEC: the inner-point machinery (r1,
    // p1, guard) is vacuous and the boundary rules do all the work.
    bool all_boundary = false;
};

PhaseContext build_phase_context(const Snapshot& snapshot,
                                 const agreement::NormalizedPattern& pattern);

Milestone classify_milestone(const PhaseContext& ctx);
Milestone classify_milestone(const Snapshot& snapshot,
                             const agreement::NormalizedPattern& pattern);

// The full decision switch (PatternFormation). Pure function of its
// arguments; identical snapshots give identical decisions.
Decision pattern_formation(const Snapshot& snapshot,
                           const agreement::NormalizedPattern& pattern);
Decision pattern_formation(const Snapshot& snapshot,
                           const agreement::PatternSpec& pattern);

// Individual step rules, exposed for direct testing. Each returns the
// decision for snapshot.self_index only; non-selected robots get Stay.
Decision move_radially_out(const Snapshot& snapshot,
                           const agreement::NormalizedPattern& pattern);
Decision move_to_destination(const Snapshot& snapshot,
                             const agreement::NormalizedPattern& pattern);
Decision move_on_boundary(const Snapshot& snapshot,
                          const agreement::NormalizedPattern& pattern);
Decision move_ensuring_alternate(const Snapshot& snapshot,
                                 const agreement::NormalizedPattern& pattern);
Decision generate_alternate(const Snapshot& snapshot,
                            const agreement::NormalizedPattern& pattern);

// Definition of an alternate configuration: some free robot on the SEC can
// reach some free boundary pattern point along an arc that passes no
// occupied final position.
bool is_alternate(const Snapshot& snapshot,
                  const agreement::NormalizedPattern& pattern);
bool is_alternate(const PhaseContext& ctx);

// Routing around the guard circle, exposed for geometric tests. Plans in
// whatever frame the inputs share; `robots` are treated as obstacles, with
// `mover` skipped.
struct RoutePlan {
    enum class Kind { Direct, Corner, Detour };
    Kind kind = Kind::Direct;
    geom::Point destination;
    std::vector<geom::Point> corners;        // tangent-line intersections
    std::optional<geom::Point> chosen_corner;
    std::optional<geom::Point> detour;
};

RoutePlan plan_route(geom::Point mover_pos, geom::Point target,
                     const geom::Circle& guard, double sec_radius,
                     const std::vector<geom::Point>& robots,
                     std::size_t mover);

}  // namespace swarm::motion
