#include "swarm/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace swarm::io {

namespace {

using geom::Point;
using nlohmann::json;

json point_to_json(Point p) { return json::array({p.x, p.y}); }

Point point_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw std::invalid_argument("expected [x, y]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json points_to_json(const std::vector<Point>& pts) {
    json arr = json::array();
    for (Point p : pts) arr.push_back(point_to_json(p));
    return arr;
}

std::vector<Point> points_from_json(const json& j) {
    std::vector<Point> out;
    for (const json& e : j) out.push_back(point_from_json(e));
    return out;
}

std::string policy_name(sim::ActivationPolicy p) {
    switch (p) {
        case sim::ActivationPolicy::RoundRobin: return "round_robin";
        case sim::ActivationPolicy::RandomFair: return "random_fair";
        case sim::ActivationPolicy::StarveOne: return "starve_one";
    }
    return "round_robin";
}

sim::ActivationPolicy policy_from_name(const std::string& name) {
    if (name == "round_robin") return sim::ActivationPolicy::RoundRobin;
    if (name == "random_fair") return sim::ActivationPolicy::RandomFair;
    if (name == "starve_one") return sim::ActivationPolicy::StarveOne;
    throw std::invalid_argument("unknown adversary policy: " + name);
}

json adversary_to_json(const sim::AdversaryConfig& a) {
    return json{{"chord_mode", a.chord_mode},
                {"fairness_factor", a.fairness_factor},
                {"mid_move_snapshots", a.mid_move_snapshots},
                {"min_progress", a.min_progress},
                {"move_fraction", json::array({a.move_fraction_lo, a.move_fraction_hi})},
                {"policy", policy_name(a.policy)},
                {"seed", a.seed},
                {"starve_index", a.starve_index},
                {"stop_probability", a.stop_probability}};
}

sim::AdversaryConfig adversary_from_json(const json& j) {
    sim::AdversaryConfig a;
    a.chord_mode = j.at("chord_mode").get<bool>();
    a.fairness_factor = j.at("fairness_factor").get<int>();
    a.mid_move_snapshots = j.at("mid_move_snapshots").get<bool>();
    a.min_progress = j.at("min_progress").get<double>();
    a.move_fraction_lo = j.at("move_fraction")[0].get<double>();
    a.move_fraction_hi = j.at("move_fraction")[1].get<double>();
    a.policy = policy_from_name(j.at("policy").get<std::string>());
    a.seed = j.at("seed").get<std::uint64_t>();
    a.starve_index = j.at("starve_index").get<std::size_t>();
    a.stop_probability = j.at("stop_probability").get<double>();
    return a;
}

json frame_to_json(const sim::LocalFrame& f) {
    return json{{"reflected", f.reflected},
                {"rotation", f.rotation},
                {"scale", f.scale},
                {"translation", point_to_json(f.translation)}};
}

sim::LocalFrame frame_from_json(const json& j) {
    sim::LocalFrame f;
    f.reflected = j.at("reflected").get<bool>();
    f.rotation = j.at("rotation").get<double>();
    f.scale = j.at("scale").get<double>();
    f.translation = point_from_json(j.at("translation"));
    return f;
}

json scenario_to_json_object(const sim::Scenario& s) {
    json frames = json::array();
    for (const sim::LocalFrame& f : s.frames) frames.push_back(frame_to_json(f));
    return json{{"adversary", adversary_to_json(s.adversary)},
                {"budget", s.budget},
                {"frames", frames},
                {"pattern", points_to_json(s.pattern)},
                {"robots", points_to_json(s.robots)},
                {"tolerances",
                 json{{"collide", s.tolerances.collide},
                      {"match", s.tolerances.match},
                      {"sec_drift", s.tolerances.sec_drift}}},
                {"version", 1}};
}

sim::Scenario scenario_from_json_object(const json& j) {
    if (j.at("version").get<int>() != 1) {
        throw std::invalid_argument("unsupported scenario version");
    }
    sim::Scenario s;
    s.adversary = adversary_from_json(j.at("adversary"));
    s.budget = j.at("budget").get<std::uint64_t>();
    for (const json& f : j.at("frames")) s.frames.push_back(frame_from_json(f));
    s.pattern = points_from_json(j.at("pattern"));
    s.robots = points_from_json(j.at("robots"));
    const json& tol = j.at("tolerances");
    s.tolerances.collide = tol.at("collide").get<double>();
    s.tolerances.match = tol.at("match").get<double>();
    s.tolerances.sec_drift = tol.at("sec_drift").get<double>();
    return s;
}

const char* milestone_name(motion::Milestone m) {
    switch (m) {
        case motion::Milestone::I0Pre: return "i0";
        case motion::Milestone::I1Reached: return "i1";
        case motion::Milestone::I2Reached: return "i2";
        case motion::Milestone::Done: return "done";
    }
    return "i0";
}

motion::Milestone milestone_from_name(const std::string& s) {
    if (s == "i0") return motion::Milestone::I0Pre;
    if (s == "i1") return motion::Milestone::I1Reached;
    if (s == "i2") return motion::Milestone::I2Reached;
    if (s == "done") return motion::Milestone::Done;
    throw std::invalid_argument("unknown milestone: " + s);
}

const char* phase_name(sim::Phase p) {
    switch (p) {
        case sim::Phase::Wait: return "wait";
        case sim::Phase::Look: return "look";
        case sim::Phase::Compute: return "compute";
        case sim::Phase::Move: return "move";
    }
    return "wait";
}

sim::Phase phase_from_name(const std::string& s) {
    if (s == "wait") return sim::Phase::Wait;
    if (s == "look") return sim::Phase::Look;
    if (s == "compute") return sim::Phase::Compute;
    if (s == "move") return sim::Phase::Move;
    throw std::invalid_argument("unknown phase: " + s);
}

json arc_to_json(const geom::Arc& a) {
    return json{{"center", point_to_json(a.circle.center)},
                {"dir", a.direction == geom::Winding::CCW ? "ccw" : "cw"},
                {"from", a.from_angle},
                {"radius", a.circle.radius},
                {"to", a.to_angle}};
}

geom::Arc arc_from_json(const json& j) {
    geom::Arc a;
    a.circle.center = point_from_json(j.at("center"));
    a.circle.radius = j.at("radius").get<double>();
    a.from_angle = j.at("from").get<double>();
    a.to_angle = j.at("to").get<double>();
    a.direction = j.at("dir").get<std::string>() == "ccw" ? geom::Winding::CCW
                                                          : geom::Winding::CW;
    return a;
}

json decision_to_json(const motion::Decision& d) {
    switch (d.kind) {
        case motion::DecisionKind::Stay:
            return json{{"kind", "stay"}};
        case motion::DecisionKind::MoveSegment:
            return json{{"dest", point_to_json(d.destination)},
                        {"kind", "segment"}};
        case motion::DecisionKind::MoveArc:
            return json{{"arc", arc_to_json(*d.arc)},
                        {"dest", point_to_json(d.destination)},
                        {"kind", "arc"}};
    }
    return json{{"kind", "stay"}};
}

motion::Decision decision_from_json(const json& j) {
    motion::Decision d;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "stay") {
        d.kind = motion::DecisionKind::Stay;
    } else if (kind == "segment") {
        d.kind = motion::DecisionKind::MoveSegment;
        d.destination = point_from_json(j.at("dest"));
    } else if (kind == "arc") {
        d.kind = motion::DecisionKind::MoveArc;
        d.destination = point_from_json(j.at("dest"));
        d.arc = arc_from_json(j.at("arc"));
    } else {
        throw std::invalid_argument("unknown decision kind: " + kind);
    }
    return d;
}

json event_to_json(const sim::Event& ev) {
    json j{{"tick", ev.tick}};
    switch (ev.kind) {
        case sim::EventKind::Activated:
            j["kind"] = "activated";
            j["phase"] = phase_name(ev.phase);
            j["robot"] = ev.robot;
            break;
        case sim::EventKind::SnapshotTaken:
            j["kind"] = "snapshot";
            j["positions"] = points_to_json(ev.positions);
            j["robot"] = ev.robot;
            break;
        case sim::EventKind::Decided:
            j["decision"] = decision_to_json(ev.decision);
            j["kind"] = "decided";
            j["robot"] = ev.robot;
            break;
        case sim::EventKind::Moved:
            j["from"] = point_to_json(ev.from);
            j["kind"] = "moved";
            j["path"] = ev.arc_move ? "arc" : "segment";
            if (ev.arc_move) j["arc"] = arc_to_json(ev.arc);
            j["robot"] = ev.robot;
            j["to"] = point_to_json(ev.to);
            break;
        case sim::EventKind::MilestoneReached:
            j["kind"] = "milestone";
            j["which"] = milestone_name(ev.milestone);
            break;
        case sim::EventKind::Error:
            j["kind"] = "error";
            j["reason"] = ev.reason;
            j["robot"] = ev.robot;
            break;
    }
    return j;
}

sim::Event event_from_json(const json& j) {
    sim::Event ev;
    ev.tick = j.at("tick").get<std::uint64_t>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "activated") {
        ev.kind = sim::EventKind::Activated;
        ev.phase = phase_from_name(j.at("phase").get<std::string>());
        ev.robot = j.at("robot").get<std::size_t>();
    } else if (kind == "snapshot") {
        ev.kind = sim::EventKind::SnapshotTaken;
        ev.positions = points_from_json(j.at("positions"));
        ev.robot = j.at("robot").get<std::size_t>();
    } else if (kind == "decided") {
        ev.kind = sim::EventKind::Decided;
        ev.decision = decision_from_json(j.at("decision"));
        ev.robot = j.at("robot").get<std::size_t>();
    } else if (kind == "moved") {
        ev.kind = sim::EventKind::Moved;
        ev.from = point_from_json(j.at("from"));
        ev.to = point_from_json(j.at("to"));
        ev.arc_move = j.at("path").get<std::string>() == "arc";
        if (ev.arc_move) ev.arc = arc_from_json(j.at("arc"));
        ev.robot = j.at("robot").get<std::size_t>();
    } else if (kind == "milestone") {
        ev.kind = sim::EventKind::MilestoneReached;
        ev.milestone = milestone_from_name(j.at("which").get<std::string>());
    } else if (kind == "error") {
        ev.kind = sim::EventKind::Error;
        ev.reason = j.at("reason").get<std::string>();
        ev.robot = j.at("robot").get<std::size_t>();
    } else {
        throw std::invalid_argument("unknown event kind: " + kind);
    }
    return ev;
}

}  // namespace

std::string scenario_to_json(const sim::Scenario& scenario) {
    return scenario_to_json_object(scenario).dump(2) + "\n";
}

sim::Scenario scenario_from_json(const std::string& text) {
    return scenario_from_json_object(json::parse(text));
}

void save_scenario(const std::string& path, const sim::Scenario& scenario) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << scenario_to_json(scenario);
}

sim::Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

void write_trace(std::ostream& out, const sim::Scenario& scenario,
                 const sim::Trace& trace) {
    json header{{"kind", "header"},
                {"scenario", scenario_to_json_object(scenario)},
                {"version", 1}};
    out << header.dump() << '\n';
    for (const sim::Event& ev : trace.events) {
        out << event_to_json(ev).dump() << '\n';
    }
}

void save_trace(const std::string& path, const sim::Scenario& scenario,
                const sim::Trace& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_trace(out, scenario, trace);
}

TraceFile read_trace(std::istream& in) {
    TraceFile tf;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("empty trace file");
    }
    const json header = json::parse(line);
    if (header.at("kind").get<std::string>() != "header" ||
        header.at("version").get<int>() != 1) {
        throw std::invalid_argument("bad trace header");
    }
    tf.scenario = scenario_from_json_object(header.at("scenario"));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        tf.trace.events.push_back(event_from_json(json::parse(line)));
    }
    return tf;
}

TraceFile load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return read_trace(in);
}

namespace {

std::vector<Point> sample_orderable_set(std::size_t n, std::uint64_t& rng,
                                        int max_rejections) {
    for (int attempt = 0; attempt < max_rejections; ++attempt) {
        std::vector<Point> pts(n);
        for (Point& p : pts) {
            p.x = 2.0 * sim::rng_uniform(rng) - 1.0;
            p.y = 2.0 * sim::rng_uniform(rng) - 1.0;
        }
        const geom::Circle s = geom::sec(pts);
        bool spaced = true;
        for (std::size_t a = 0; a < n && spaced; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if (geom::dist(pts[a], pts[b]) < 1e-2 * s.radius) {
                    spaced = false;
                    break;
                }
            }
        }
        if (!spaced) continue;
        try {
            canon::canonical_order(canon::Configuration{pts});
        } catch (const std::exception&) {
            continue;
        }
        return pts;
    }
    throw std::runtime_error("rejection sampling exhausted");
}

sim::LocalFrame sample_frame(std::uint64_t& rng) {
    sim::LocalFrame f;
    f.rotation = 2.0 * 3.14159265358979323846 * sim::rng_uniform(rng);
    f.reflected = sim::rng_uniform(rng) < 0.5;
    f.scale = std::exp(std::log(0.1) +
                       sim::rng_uniform(rng) * (std::log(10.0) - std::log(0.1)));
    f.translation = {10.0 * sim::rng_uniform(rng) - 5.0,
                     10.0 * sim::rng_uniform(rng) - 5.0};
    return f;
}

}  // namespace

sim::Scenario generate_scenario(std::size_t n, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("need at least 3 robots");
    std::uint64_t rng = seed;
    sim::Scenario s;
    s.robots = sample_orderable_set(n, rng, 10000);
    s.pattern = sample_orderable_set(n, rng, 10000);
    s.frames.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.frames.push_back(sample_frame(rng));
    s.adversary.seed = seed;
    return s;
}

sim::Scenario generate_scenario_with_pattern(
    std::size_t n, std::uint64_t seed, const std::vector<geom::Point>& pattern) {
    if (pattern.size() != n) {
        throw std::invalid_argument("pattern/robot cardinality mismatch");
    }
    agreement::agreement_pattern(
        agreement::PatternSpec{canon::Configuration{pattern}});
    std::uint64_t rng = seed;
    sim::Scenario s;
    s.robots = sample_orderable_set(n, rng, 10000);
    s.pattern = pattern;
    s.frames.reserve(n);
    for (std::size_t i = 0; i < n; ++i) s.frames.push_back(sample_frame(rng));
    s.adversary.seed = seed;
    return s;
}

}  // namespace swarm::io
