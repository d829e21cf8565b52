// Scenario and trace serialization plus the rejection-sampling scenario
// generator. Scenario files are versioned JSON; traces are JSON Lines with
// a header record carrying the scenario for self-contained verification.
#pragma once

#include <iosfwd>
#include <string>

#include "swarm/sim.hpp"

namespace swarm::io {

std::string scenario_to_json(const sim::Scenario& scenario);
sim::Scenario scenario_from_json(const std::string& text);

void save_scenario(const std::string& path, const sim::Scenario& scenario);
sim::Scenario load_scenario(const std::string& path);

struct TraceFile {
    sim::Scenario scenario;
    sim::Trace trace;
};

void write_trace(std::ostream& out, const sim::Scenario& scenario,
                 const sim::Trace& trace);
void save_trace(const std::string& path, const sim::Scenario& scenario,
                const sim::Trace& trace);
TraceFile read_trace(std::istream& in);
TraceFile load_trace(const std::string& path);

// Rejection-samples robot and pattern sets until both are orderable with
// minimum spacing >= 1e-2 of their SEC radius, then attaches per-robot
// random frames (rotation, fair-coin reflection, log-uniform scale in
// [0.1, 10], translation) and default adversary settings derived from the
// seed. Throws after 10^4 rejections.
sim::Scenario generate_scenario(std::size_t n, std::uint64_t seed);

// As above but with a fixed pattern instead of a sampled one.
sim::Scenario generate_scenario_with_pattern(
    std::size_t n, std::uint64_t seed,
    const std::vector<geom::Point>& pattern);

}  // namespace swarm::io
