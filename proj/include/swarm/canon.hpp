// Symmetry classification and the similarity-invariant canonical ordering of
// point configurations. The ordering is what makes an asymmetric set
// "orderable": every observer, regardless of origin, rotation, scale or
// handedness, derives the same total order, the same leader on the SEC
// boundary and the same off-axis reference point.
#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "swarm/geom.hpp"

namespace swarm::canon {

// A set of distinct planar positions. Points must be finite and pairwise
// distinct beyond kTol relative to the set's SEC radius.
struct Configuration {
    std::vector<geom::Point> points;
};

// Throws std::invalid_argument if the configuration violates its invariants.
void validate_configuration(const Configuration& c);

struct SignatureEntry {
    double radius_ratio = 0.0;  // distance from SEC center / SEC radius
    double turn_angle = 0.0;    // swept from the start ray, in [0, 2*pi)
};

// Points read off in sweep order from a boundary start point: sorted by
// (turn_angle ascending, radius_ratio descending). The first entry is the
// start point itself at angle 0.
struct PolarSignature {
    std::vector<SignatureEntry> entries;
    std::vector<std::size_t> order;  // original indices in sweep order
};

struct CanonicalOrder {
    std::vector<std::size_t> permutation;  // indices into Configuration.points
    std::size_t start_point_index = 0;     // lies on the SEC boundary
    geom::Winding chirality = geom::Winding::CCW;
};

struct SymmetryReport {
    bool has_mirror = false;
    bool has_rotational = false;
    // Direction angle of a mirror axis through the SEC center, if any.
    std::optional<double> mirror_axis_angle;
    // A nontrivial rotation angle about the SEC center mapping the set to
    // itself, if any.
    std::optional<double> rotation_angle;
};

// Detects mirror lines through the SEC center and nontrivial rotations
// about it. Candidate axes pass through each point and along each pair's
// perpendicular-bisector direction; candidate rotations map the first
// boundary point onto each other boundary point.
SymmetryReport symmetry_report(const Configuration& c);

// Sweep signature from the given SEC-boundary start point. Throws if the
// start point is not on the boundary within kTol.
PolarSignature polar_signature(const Configuration& c, std::size_t start,
                               geom::Winding chirality);

// The lexicographically minimal signature over all (boundary start,
// chirality) candidates, which exists and is unique exactly when the
// configuration's symmetry group is trivial. Throws
// "configuration not orderable" on symmetric input and
// "configuration too close to symmetric" when the minimum is ambiguous
// within tolerance.
CanonicalOrder canonical_order(const Configuration& c);

// First point of the canonical order on the SEC boundary; by construction
// this is the order's start point.
std::size_t elect_leader(const Configuration& c);

// First point after the leader in canonical order that does not lie on the
// line through the SEC center and the leader. Throws "no off-axis
// reference" if every other point is on that line.
std::size_t second_reference(const Configuration& c, std::size_t leader);
std::size_t second_reference(const Configuration& c,
                             const CanonicalOrder& order);

// Indices of points on the SEC boundary within kTol, ascending.
std::vector<std::size_t> boundary_indices(const Configuration& c,
                                          const geom::Circle& sec);

// Three-way comparison with a tolerance band treated as equality on each
// entry. Returns <0, 0, >0.
int compare_signatures(const PolarSignature& a, const PolarSignature& b,
                       double tol);

}  // namespace swarm::canon
