// Static SVG rendering of traces: one frame every k activations plus the
// final state. Robots are dots, pattern points crosses, with the SEC and
// guard circles and the active robot's path highlighted.
#pragma once

#include <cstdint>
#include <string>

#include "swarm/io.hpp"

namespace swarm::render {

// Writes frame_NNNNNN.svg files into out_dir; returns the frame count.
std::size_t render_trace(const io::TraceFile& tf, const std::string& out_dir,
                         std::uint64_t every);

}  // namespace swarm::render
