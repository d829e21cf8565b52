// CORDA-model world: per-robot local frames, the Wait-Look-Compute-Move
// lifecycle, an adversarial scheduler with mid-move observation and early
// stops, plus the trace checkers (collisions, SEC invariance, final match).
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "swarm/agreement.hpp"
#include "swarm/geom.hpp"
#include "swarm/motion.hpp"

namespace swarm::sim {

// A robot's private coordinate system: local = frame.apply(world). Sampled
// per scenario with arbitrary origin, rotation, handedness and scale.
using LocalFrame = geom::Similarity;

enum class Phase { Wait, Look, Compute, Move };

enum class ActivationPolicy { RoundRobin, RandomFair, StarveOne };

struct AdversaryConfig {
    std::uint64_t seed = 1;
    ActivationPolicy policy = ActivationPolicy::RoundRobin;
    std::size_t starve_index = 0;  // StarveOne victim
    // Each Move grant advances by an adversary-chosen fraction of the
    // remaining distance, floored at min_progress * initial SEC radius.
    double move_fraction_lo = 0.25;
    double move_fraction_hi = 1.0;
    double min_progress = 1e-3;
    // Chance that a move is cut short after a grant (robot re-enters Wait
    // with the rest of the path abandoned).
    double stop_probability = 0.25;
    // When false the scheduler lets a running move finish before anyone
    // else gets to observe.
    bool mid_move_snapshots = true;
    // Fairness: no robot waits more than n * fairness_factor activations.
    int fairness_factor = 8;
    // Execute arcs as straight chords. Demonstrates how chord-discretized
    // boundary moves break the SEC invariance the arc rules preserve.
    bool chord_mode = false;
};

struct Tolerances {
    double match = 1e-6;     // final pattern match, relative to SEC radius
    double collide = 1e-7;   // collision threshold, relative to SEC radius
    double sec_drift = 1e-9; // allowed SEC drift after I1, relative
};

struct Scenario {
    std::vector<geom::Point> robots;   // world frame, initial
    std::vector<geom::Point> pattern;  // author frame
    std::vector<LocalFrame> frames;    // one per robot
    AdversaryConfig adversary;
    Tolerances tolerances;
    std::uint64_t budget = 1'000'000;
};

enum class EventKind {
    Activated,
    SnapshotTaken,
    Decided,
    Moved,
    MilestoneReached,
    Error
};

struct Event {
    std::uint64_t tick = 0;
    EventKind kind = EventKind::Activated;
    std::size_t robot = 0;
    Phase phase = Phase::Wait;           // Activated: phase entered
    std::vector<geom::Point> positions;  // SnapshotTaken: world positions
    motion::Decision decision;           // Decided: world frame
    geom::Point from, to;                // Moved
    bool arc_move = false;               // Moved: path kind
    geom::Arc arc;                       // Moved: world-frame arc when arc_move
    motion::Milestone milestone = motion::Milestone::I0Pre;  // MilestoneReached
    std::string reason;                  // Error
};

struct Trace {
    std::vector<Event> events;
};

enum class RunStatus { Formed, ActivationBudgetExceeded, ProtocolError };

struct Outcome {
    RunStatus status = RunStatus::ProtocolError;
    std::uint64_t activations_used = 0;
    double min_pairwise_distance = std::numeric_limits<double>::infinity();
    double max_sec_drift_after_i1 = 0.0;
    std::string error;
};

struct RobotState {
    std::size_t id = 0;
    geom::Point world_position;
    LocalFrame frame;
    Phase phase = Phase::Wait;
    // Pending world-frame move while in the Move phase. The Look buffer
    // lives only between Look and Compute of one cycle; nothing here
    // carries information across cycles.
    std::optional<motion::Decision> pending;
    double arc_traveled = 0.0;
    std::optional<std::vector<geom::Point>> observed;
};

struct World {
    std::vector<RobotState> robots;
    agreement::NormalizedPattern normalized;
    std::vector<geom::Point> placed_world;  // expected placement at t=0
    double initial_sec_radius = 0.0;
    std::uint64_t tick = 0;
    motion::Milestone reached = motion::Milestone::I0Pre;
    std::optional<geom::Circle> sec_at_i1;
};

struct AdversaryState {
    AdversaryConfig config;
    std::uint64_t rng_state = 0;
    std::vector<std::uint64_t> last_activation;
    std::size_t round_robin_next = 0;
};

// Validates the scenario (asymmetric robots and pattern, equal
// cardinalities, sane adversary parameters) and builds the initial world.
World make_world(const Scenario& scenario);
AdversaryState make_adversary(const Scenario& scenario);

// Advances exactly one robot one phase and appends the resulting events.
// Returns false once the run is over (Done classified or Error emitted).
bool step(World& world, AdversaryState& adv, Trace& trace,
          Outcome& outcome);

std::pair<Trace, Outcome> run(const Scenario& scenario);

struct CollisionReport {
    double min_distance = std::numeric_limits<double>::infinity();
    bool violation = false;
    std::uint64_t first_violation_tick = 0;
    std::size_t robot_a = 0, robot_b = 0;
};

// Replays the trace, sampling every moved path at `samples` points and
// refining with the exact point-to-path distance against every stationary
// robot. Distances are absolute (world units).
CollisionReport check_collisions(const Scenario& scenario, const Trace& trace,
                                 int samples);

struct SecDriftReport {
    bool saw_i1 = false;
    double max_center_drift = 0.0;  // relative to the SEC radius at I1
    double max_radius_drift = 0.0;  // relative
    double max_path_excursion = 0.0;  // how far any sampled path point
                                      // leaves the I1 disc, relative
};

SecDriftReport check_sec_invariance(const Scenario& scenario,
                                    const Trace& trace);

// True iff a bijection robots -> pattern points exists with every pair
// within tol_match (relative to the pattern SEC radius). Throws
// "tolerance too coarse" if tol_match is not well below the minimum
// pattern spacing.
bool match_pattern(const std::vector<geom::Point>& final_positions,
                   const std::vector<geom::Point>& placed, double tol_match);

// Deterministic 64-bit generator used by the adversary and the scenario
// generator (splitmix64).
std::uint64_t rng_next(std::uint64_t& state);
double rng_uniform(std::uint64_t& state);  // in [0, 1)

}  // namespace swarm::sim
