#include "swarm/render.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

namespace swarm::render {

namespace {

using geom::Point;

struct FrameState {
    std::vector<Point> positions;
    std::optional<sim::Event> active_move;
};

void write_frame(const std::string& path, const FrameState& state,
                 const std::vector<Point>& pattern_world,
                 const geom::Circle& sec,
                 const std::optional<geom::Circle>& guard) {
    const double pad = 1.3 * sec.radius;
    const double x0 = sec.center.x - pad, y0 = sec.center.y - pad;
    const double side = 2.0 * pad;
    const double dot = 0.012 * sec.radius;

    std::ostringstream svg;
    svg << std::setprecision(10);
    // SVG y grows downward; flip so the world reads with +Y up.
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
        << "viewBox=\"" << x0 << " " << y0 << " " << side << " " << side
        << "\">\n";
    svg << "<g transform=\"translate(0," << (2.0 * sec.center.y)
        << ") scale(1,-1)\">\n";
    svg << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << side
        << "\" height=\"" << side << "\" fill=\"white\"/>\n";
    svg << "<circle cx=\"" << sec.center.x << "\" cy=\"" << sec.center.y
        << "\" r=\"" << sec.radius
        << "\" fill=\"none\" stroke=\"#888\" stroke-width=\""
        << 0.004 * sec.radius << "\"/>\n";
    if (guard) {
        svg << "<circle cx=\"" << guard->center.x << "\" cy=\""
            << guard->center.y << "\" r=\"" << guard->radius
            << "\" fill=\"none\" stroke=\"#bbb\" stroke-dasharray=\""
            << 0.02 * sec.radius << "\" stroke-width=\"" << 0.003 * sec.radius
            << "\"/>\n";
    }
    for (Point p : pattern_world) {
        const double c = 1.6 * dot;
        svg << "<path d=\"M" << (p.x - c) << " " << (p.y - c) << " L"
            << (p.x + c) << " " << (p.y + c) << " M" << (p.x - c) << " "
            << (p.y + c) << " L" << (p.x + c) << " " << (p.y - c)
            << "\" stroke=\"#c33\" stroke-width=\"" << 0.004 * sec.radius
            << "\"/>\n";
    }
    if (state.active_move) {
        const sim::Event& ev = *state.active_move;
        if (ev.arc_move) {
            const geom::Circle& c = ev.arc.circle;
            const double a0 = std::atan2(ev.from.y - c.center.y,
                                         ev.from.x - c.center.x);
            const double a1 =
                std::atan2(ev.to.y - c.center.y, ev.to.x - c.center.x);
            const double span = ev.arc.direction == geom::Winding::CCW
                                    ? geom::wrap_angle(a1 - a0)
                                    : geom::wrap_angle(a0 - a1);
            const int large = span > 3.14159265358979323846 ? 1 : 0;
            const int sweep = ev.arc.direction == geom::Winding::CCW ? 1 : 0;
            svg << "<path d=\"M" << ev.from.x << " " << ev.from.y << " A"
                << c.radius << " " << c.radius << " 0 " << large << " "
                << sweep << " " << ev.to.x << " " << ev.to.y
                << "\" fill=\"none\" stroke=\"#38f\" stroke-width=\""
                << 0.006 * sec.radius << "\"/>\n";
        } else {
            svg << "<line x1=\"" << ev.from.x << "\" y1=\"" << ev.from.y
                << "\" x2=\"" << ev.to.x << "\" y2=\"" << ev.to.y
                << "\" stroke=\"#38f\" stroke-width=\"" << 0.006 * sec.radius
                << "\"/>\n";
        }
    }
    for (std::size_t i = 0; i < state.positions.size(); ++i) {
        const Point p = state.positions[i];
        const bool active =
            state.active_move && state.active_move->robot == i;
        svg << "<circle cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"" << dot
            << "\" fill=\"" << (active ? "#38f" : "#222") << "\"/>\n";
    }
    svg << "</g>\n</svg>\n";

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << svg.str();
}

}  // namespace

std::size_t render_trace(const io::TraceFile& tf, const std::string& out_dir,
                         std::uint64_t every) {
    if (every == 0) throw std::invalid_argument("frame interval must be > 0");
    std::filesystem::create_directories(out_dir);

    const geom::Circle sec = geom::sec(tf.scenario.robots);
    std::vector<Point> placed;
    std::optional<geom::Circle> guard;
    try {
        canon::Configuration robots{tf.scenario.robots};
        agreement::PatternSpec spec{canon::Configuration{tf.scenario.pattern}};
        const agreement::NormalizedPattern norm =
            agreement::agreement_pattern(spec);
        auto [frame, pp] = agreement::agreement_coordinate_system(robots, norm);
        placed = pp.points;
        motion::Snapshot snap{robots, 0};
        const motion::PhaseContext ctx = motion::build_phase_context(snap, norm);
        guard = geom::Circle{frame.origin, ctx.guard_radius * frame.unit};
    } catch (const std::exception&) {
        placed = tf.scenario.pattern;
    }

    FrameState state;
    state.positions = tf.scenario.robots;
    std::uint64_t max_tick = 0;
    for (const sim::Event& ev : tf.trace.events) {
        max_tick = std::max(max_tick, ev.tick);
    }

    std::size_t frame_index = 0;
    auto emit = [&]() {
        std::ostringstream name;
        name << out_dir << "/frame_" << std::setfill('0') << std::setw(6)
             << frame_index << ".svg";
        write_frame(name.str(), state, placed, sec, guard);
        ++frame_index;
    };

    std::uint64_t next_boundary = every;
    emit();  // initial state
    for (const sim::Event& ev : tf.trace.events) {
        while (ev.tick > next_boundary) {
            emit();
            next_boundary += every;
        }
        if (ev.kind == sim::EventKind::Moved) {
            state.positions[ev.robot] = ev.to;
            state.active_move = ev;
        }
    }
    if (max_tick > 0) emit();  // final state
    return frame_index;
}

}  // namespace swarm::render
