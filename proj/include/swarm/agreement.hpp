// Derivation of the common origin, axes, unit and the placed pattern that
// every robot computes identically from its own local snapshot.
#pragma once

#include <utility>
#include <vector>

#include "swarm/canon.hpp"
#include "swarm/geom.hpp"

namespace swarm::agreement {

// The raw input pattern in its author's arbitrary frame. Must be asymmetric
// (trivial symmetry group) and have at least two points.
struct PatternSpec {
    canon::Configuration points;
};

// Pattern expressed in its own agreed frame: SEC is the unit circle at the
// origin, the leader point sits at (1, 0), and the second reference lies in
// the upper half-plane.
struct NormalizedPattern {
    std::vector<geom::Point> points;
    canon::CanonicalOrder order;
};

// The frame every robot derives from a snapshot: origin at the robot SEC
// center, +X toward the leader robot, unit equal to the SEC radius, and the
// +Y side given by y_sign relative to the counterclockwise perpendicular
// of x_axis (in snapshot coordinates).
struct AgreedFrame {
    geom::Point origin;
    geom::Point x_axis;   // unit vector
    double y_sign = 1.0;  // +1 or -1
    double unit = 1.0;
    std::size_t leader_index = 0;  // robot whose position anchors +X
};

// Pattern points expressed in snapshot coordinates, plus the pattern's own
// canonical order carried along for tie-breaking.
struct PlacedPattern {
    std::vector<geom::Point> points;
    canon::CanonicalOrder order;
};

// Map between snapshot coordinates and the agreed frame (unit-SEC frame).
geom::Point to_agreed(const AgreedFrame& f, geom::Point snapshot_point);
geom::Point from_agreed(const AgreedFrame& f, geom::Point agreed_point);

// Protective radii in units of the SEC radius, derived from the robot and
// pattern distances to the center alone (no placement involved, so every
// observer and every election candidate computes the same values).
//   guard: circle around the innermost pattern point that routed paths
//          avoid; capped below the next pattern radius so the other points
//          stay reachable from outside.
//   ring:  evacuation ring strictly inside the SEC and never below the
//          guard; robots inside it (bar the nearest one) are pushed out
//          onto it before the nearest robot claims the innermost point.
struct ProtectiveRadii {
    double guard = 0.0;
    double ring = 0.0;
};
ProtectiveRadii protective_radii(const std::vector<double>& robot_radii,
                                 const std::vector<double>& pattern_radii);

// Normalizes the pattern: computes its SEC, elects the leader and second
// reference via the canonical order, and maps the points so the SEC becomes
// the unit circle with the leader at (1, 0). Throws on symmetric patterns
// and on patterns with fewer than two points.
NormalizedPattern agreement_pattern(const PatternSpec& pattern);

// Derives the agreed frame from the snapshot and plots the pattern into it
// (pattern leader onto the robot leader, pattern SEC onto the robot SEC).
// The election maximizes the number of robots already sitting on placed
// pattern points before falling back to the canonical signature minimum, so
// a partially formed pattern keeps its placement as robots move. Throws
// "unorderable configuration" when no unambiguous frame exists and
// "pattern/robot cardinality mismatch" when sizes differ.
std::pair<AgreedFrame, PlacedPattern> agreement_coordinate_system(
    const canon::Configuration& snapshot, const PatternSpec& pattern);
std::pair<AgreedFrame, PlacedPattern> agreement_coordinate_system(
    const canon::Configuration& snapshot, const NormalizedPattern& pattern);

// Parses the pattern file format: one point per line, two reals separated
// by whitespace, '#' starts a comment.
PatternSpec parse_pattern_text(const std::string& text);
std::string format_pattern_text(const PatternSpec& pattern);

}  // namespace swarm::agreement
