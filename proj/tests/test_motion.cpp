#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "swarm/motion.hpp"

using namespace swarm;
using geom::Point;
using testsupport::Rng;

namespace {

constexpr double kPi = 3.14159265358979323846;

Point at_angle(double deg, double radius = 1.0) {
    return radius * geom::from_angle(deg * kPi / 180.0);
}

struct Fixture {
    std::vector<Point> robots;
    std::vector<Point> pattern;
    agreement::NormalizedPattern norm;
};

// Builds a fixture whose drawn coordinates ARE the elected placement: the
// snapshot must already carry enough exact robot/point coincidences that
// the occupancy score locks the drawn frame. Verified here so the tests
// below can reason in drawn coordinates.
Fixture make_fixture(std::vector<Point> robots, std::vector<Point> pattern) {
    Fixture f;
    f.robots = std::move(robots);
    f.pattern = std::move(pattern);
    f.norm = agreement::agreement_pattern(
        {canon::Configuration{f.pattern}});
    auto [frame, placed] = agreement::agreement_coordinate_system(
        canon::Configuration{f.robots}, f.norm);
    (void)frame;
    REQUIRE(placed.points.size() == f.pattern.size());
    for (std::size_t i = 0; i < placed.points.size(); ++i) {
        REQUIRE_MESSAGE(
            geom::dist(placed.points[i], f.pattern[i]) < 1e-9,
            "fixture placement drifted at point ", i);
    }
    return f;
}

motion::Snapshot snap(const Fixture& f, std::size_t self) {
    return {canon::Configuration{f.robots}, self};
}

// Interior point angularly just ahead of the drawn leader at angle 0: it
// makes the 0-degree boundary point the canonical leader of the pattern
// (the sweep starting there sees the smallest first gap), so the drawn
// coordinates survive normalization. Fixtures park a robot on it.
const Point kAnchor = 0.3 * geom::from_angle(3.0 * kPi / 180.0);

std::vector<motion::Decision> all_decisions(const Fixture& f) {
    std::vector<motion::Decision> out;
    for (std::size_t i = 0; i < f.robots.size(); ++i) {
        out.push_back(motion::pattern_formation(snap(f, i), f.norm));
    }
    return out;
}

std::size_t count_movers(const std::vector<motion::Decision>& ds) {
    std::size_t n = 0;
    for (const auto& d : ds) {
        if (d.kind != motion::DecisionKind::Stay) ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("formed configuration: everyone stays") {
    Rng rng(3);
    const auto pat = testsupport::random_orderable(rng, 6);
    const auto norm = agreement::agreement_pattern({canon::Configuration{pat}});
    motion::Snapshot s{canon::Configuration{norm.points}, 0};
    CHECK(motion::classify_milestone(s, norm) == motion::Milestone::Done);
    for (std::size_t i = 0; i < norm.points.size(); ++i) {
        motion::Snapshot si{canon::Configuration{norm.points}, i};
        CHECK(motion::pattern_formation(si, norm).kind ==
              motion::DecisionKind::Stay);
    }
}

TEST_CASE("fresh random scenario classifies as I0") {
    Rng rng(11);
    const auto robots = testsupport::random_orderable(rng, 7);
    const auto pat = testsupport::random_orderable(rng, 7);
    const auto norm = agreement::agreement_pattern({canon::Configuration{pat}});
    motion::Snapshot s{canon::Configuration{robots}, 0};
    // The placement anchors the pattern leader on the leader robot (and,
    // when both SECs rest on a diametral pair, the opposite support point
    // lands on the opposite support robot); nothing else coincides in a
    // fresh random scenario.
    const auto ctx = motion::build_phase_context(s, norm);
    std::size_t occupied = 0;
    for (int occ : ctx.occupant_of_point) occupied += occ >= 0 ? 1 : 0;
    CHECK(occupied >= 1);
    CHECK(occupied <= 2);
    const int leader_host = ctx.point_of_robot[ctx.frame.leader_index];
    CHECK(leader_host >= 0);
    CHECK(motion::classify_milestone(ctx) == motion::Milestone::I0Pre);
}

TEST_CASE("robot at the origin vacates along +X by half the nearest gap") {
    // Origin is not a pattern point; the robot standing there must step
    // aside before anything else happens.
    Fixture f = make_fixture(
        {at_angle(0), at_angle(130), at_angle(240), {0.0, 0.0}, {0.3, 0.2}},
        {at_angle(0), at_angle(130), at_angle(240), {0.3, 0.2}, {0.5, -0.3}});
    const auto ds = all_decisions(f);
    CHECK(count_movers(ds) == 1);
    const auto& d = ds[3];
    REQUIRE(d.kind == motion::DecisionKind::MoveSegment);
    const double d0 = geom::dist({0.0, 0.0}, {0.3, 0.2});
    // +X in the agreed frame points at the leader robot on the boundary.
    const auto ctx = motion::build_phase_context(snap(f, 3), f.norm);
    const Point expected =
        agreement::from_agreed(ctx.frame, {d0 / 2.0 / ctx.frame.unit, 0.0});
    CHECK(testsupport::close(d.destination, expected, 1e-9));
    // No other robot sits within the vacating step.
    for (std::size_t i = 0; i < f.robots.size(); ++i) {
        if (i != 3) CHECK(geom::dist(f.robots[i], {0, 0}) >= d0);
    }
}

TEST_CASE("occupied origin that is a pattern point: occupant stays") {
    Fixture f = make_fixture(
        {at_angle(0), at_angle(130), at_angle(240), {0.0, 0.0}, {0.3, 0.2}},
        {at_angle(0), at_angle(130), at_angle(240), {0.0, 0.0}, {0.3, 0.2}});
    const auto ds = all_decisions(f);
    CHECK(ds[3].kind == motion::DecisionKind::Stay);
}

TEST_CASE("origin in the pattern and empty: nearest robot moves to it") {
    Fixture f = make_fixture(
        {at_angle(0), at_angle(130), at_angle(240), {0.25, 0.1}, {0.3, 0.2}},
        {at_angle(0), at_angle(130), at_angle(240), {0.0, 0.0}, {0.3, 0.2}});
    const auto ds = all_decisions(f);
    CHECK(count_movers(ds) == 1);
    REQUIRE(ds[3].kind == motion::DecisionKind::MoveSegment);
    CHECK(testsupport::close(ds[3].destination, {0, 0}, 1e-9));
}

TEST_CASE("radial evacuation selects the robot nearest the ring") {
    Fixture f = make_fixture(
        {at_angle(0), at_angle(110), at_angle(240), {0.45, 0.0}, {0.3, 0.4}},
        {at_angle(0), at_angle(110), at_angle(240), {0.2, 0.1}, {-0.4, 0.3}});
    const auto ctx = motion::build_phase_context(snap(f, 0), f.norm);
    CHECK(ctx.r1 == 3);  // 0.45 < 0.5
    CHECK(ctx.d == doctest::Approx(0.45));
    CHECK(ctx.d_prime == doctest::Approx(std::hypot(0.2, 0.1)));
    const double ring = ctx.ring_radius;
    CHECK(ring > ctx.d);
    CHECK(ring < 1.0);

    const auto ds = all_decisions(f);
    CHECK(count_movers(ds) == 1);
    // Robot 4 (radius 0.5) is nearest to the ring and not r1.
    REQUIRE(ds[4].kind == motion::DecisionKind::MoveSegment);
    const Point expected = ring * geom::unit({0.3, 0.4});
    CHECK(testsupport::close(ds[4].destination, expected, 1e-9));
    // r1 waits until the disc is clear.
    CHECK(ds[3].kind == motion::DecisionKind::Stay);

    // Direct call agrees with the dispatcher.
    const auto direct = motion::move_radially_out(snap(f, 4), f.norm);
    CHECK(direct == ds[4]);
}

TEST_CASE("radial evacuation sidesteps an occupied ring spot") {
    // First build the baseline to learn the ring radius, then park a robot
    // exactly on the mover's radial projection.
    Fixture base = make_fixture(
        {at_angle(0), at_angle(110), at_angle(240), {0.45, 0.0}, {0.3, 0.4}},
        {at_angle(0), at_angle(110), at_angle(240), {0.2, 0.1}, {-0.4, 0.3}});
    const auto base_ctx = motion::build_phase_context(snap(base, 0), base.norm);
    const Point h = base_ctx.ring_radius * geom::unit({0.3, 0.4});

    Fixture f = make_fixture(
        {at_angle(0), at_angle(110), at_angle(240), {0.45, 0.0}, {0.3, 0.4}, h},
        {at_angle(0), at_angle(110), at_angle(240), {0.2, 0.1}, {-0.4, 0.3},
         {0.55, -0.35}});
    const auto ctx = motion::build_phase_context(snap(f, 0), f.norm);
    const auto ds = all_decisions(f);
    CHECK(count_movers(ds) == 1);
    REQUIRE(ds[4].kind == motion::DecisionKind::MoveSegment);
    const Point g = ds[4].destination;
    CHECK(geom::dist(g, h) > geom::kTol);  // not the occupied spot
    CHECK(std::abs(geom::norm(g) - ctx.ring_radius) < 1e-9);
    CHECK(geom::angle_at(f.robots[4], g, h) <= kPi / 2 + 1e-9);
    // The parked robot on the ring is not selected to move.
    CHECK(ds[5].kind == motion::DecisionKind::Stay);
}

TEST_CASE("plan_route goes direct when the guard is missed") {
    const geom::Circle guard{{0, 0}, 1.0};
    const std::vector<Point> robots{{3, 0}};
    const auto plan = motion::plan_route({3, 0}, {3, 2}, guard, 4.0, robots, 0);
    CHECK(plan.kind == motion::RoutePlan::Kind::Direct);
    CHECK(plan.destination == Point{3, 2});
}

TEST_CASE("plan_route routes via the cheapest tangent corner") {
    const geom::Circle guard{{0, 0}, 1.0};
    const std::vector<Point> robots{{-2, 0}};
    const auto plan = motion::plan_route({-2, 0}, {2, 0}, guard, 3.0, robots, 0);
    REQUIRE(plan.kind == motion::RoutePlan::Kind::Corner);
    REQUIRE(plan.chosen_corner.has_value());
    // Two symmetric corners at (0, +-2/sqrt(3)) where the tangent lines
    // from either endpoint cross; the parallel opposite-side pairs drop out.
    const double cy = 2.0 / std::sqrt(3.0);
    const Point k = *plan.chosen_corner;
    CHECK(std::abs(k.x) < 1e-9);
    CHECK(std::abs(std::abs(k.y) - cy) < 1e-9);
    bool upper = false, lower = false;
    for (Point c : plan.corners) {
        if (testsupport::close(c, {0.0, cy}, 1e-9)) upper = true;
        if (testsupport::close(c, {0.0, -cy}, 1e-9)) lower = true;
    }
    CHECK(upper);
    CHECK(lower);
    // The corner stays outside the guard and reachable by a tangent leg.
    CHECK(geom::norm(k) >= guard.radius - 1e-12);
    CHECK_FALSE(geom::segment_intersects_circle({{-2, 0}, k}, guard));
    CHECK_FALSE(geom::segment_intersects_circle({k, {2, 0}}, guard));
}

TEST_CASE("plan_route detours around a robot sitting on the direct path") {
    const geom::Circle guard{{0, 0}, 0.3};
    // Mover at angle 0, target at angle 60 on radius 2; blocker exactly on
    // the straight segment between them.
    const Point mover{2, 0};
    const Point target = at_angle(60, 2.0);
    const Point blocker = mover + 0.5 * (target - mover);
    const std::vector<Point> robots{mover, blocker};
    const auto plan = motion::plan_route(mover, target, guard, 2.5, robots, 0);
    REQUIRE(plan.kind == motion::RoutePlan::Kind::Detour);
    REQUIRE(plan.detour.has_value());
    const Point d0 = *plan.detour;
    // In the safe region: inside the SEC, outside the guard, within the wedge.
    CHECK(geom::norm(d0) < 2.5);
    CHECK(geom::norm(d0) > 0.3);
    // Visibility: no robot on mover->d0 nor d0->target.
    CHECK(geom::point_segment_distance(blocker, {mover, d0}) > geom::kTol);
    CHECK(geom::point_segment_distance(blocker, {d0, target}) > geom::kTol);
}

TEST_CASE("plan_route falls back to a detour when corners leave the SEC") {
    // Fat guard relative to the SEC: the chord between two boundary points
    // 120 degrees apart dips inside the guard, but the tangent corners land
    // outside the disc and must be rejected.
    const geom::Circle guard{{0, 0}, 0.9};
    const std::vector<Point> robots{{-1, 0}};
    const Point target = at_angle(60);
    CHECK(geom::segment_intersects_circle({{-1, 0}, target}, guard));
    const auto plan = motion::plan_route({-1, 0}, target, guard, 1.0, robots, 0);
    CHECK(plan.kind == motion::RoutePlan::Kind::Detour);
    REQUIRE(plan.detour.has_value());
    CHECK(geom::norm(*plan.detour) <= 1.0 + 1e-12);
    CHECK(geom::norm(*plan.detour) >= 0.9 - 1e-12);
    for (const Point& k : plan.corners) {
        CHECK(geom::norm(k) > 1.0);
    }
}

TEST_CASE("move_to_destination picks the smallest-angle free pair") {
    // Post-I2 state: boundary filled, two interior robots left, two free
    // interior points. Robot 4 at a tiny central angle from point 4 moves
    // first; everyone else stays.
    Fixture f = make_fixture(
        {at_angle(0), at_angle(130), at_angle(240), {0.30, 0.02}, {-0.1, -0.5},
         {0.62, 0.09}},
        {at_angle(0), at_angle(130), at_angle(240), {0.30, 0.02}, {0.6, 0.1},
         {-0.5, -0.2}});
    const auto ctx = motion::build_phase_context(snap(f, 0), f.norm);
    REQUIRE(motion::classify_milestone(ctx) == motion::Milestone::I2Reached);
    const auto ds = all_decisions(f);
    CHECK(count_movers(ds) == 1);
    REQUIRE(ds[5].kind == motion::DecisionKind::MoveSegment);
    CHECK(testsupport::close(ds[5].destination, {0.6, 0.1}, 1e-9));
    const auto direct = motion::move_to_destination(snap(f, 5), f.norm);
    CHECK(direct == ds[5]);
}

TEST_CASE("is_alternate on hand-built boundary states") {
    // Boundary order robot, free point, filled point: the adjacent pair has
    // an unobstructed arc.
    Fixture open = make_fixture(
        {at_angle(0), at_angle(100), at_angle(250), {0.3, 0.1}, kAnchor},
        {at_angle(0), at_angle(150), at_angle(250), {0.3, 0.1}, kAnchor});
    // filled: leader point at 0 and the point at 250; free robot at 100,
    // free point at 150.
    CHECK(motion::is_alternate(snap(open, 0), open.norm));

    // Enclose the free robot and free point on opposite sides of the two
    // filled positions (a diametral pair, so both sets keep the unit SEC):
    // every arc between them crosses a filled spot.
    Fixture closed = make_fixture(
        {at_angle(0), at_angle(180), at_angle(60), {0.3, 0.1}, kAnchor},
        {at_angle(0), at_angle(180), at_angle(260), {0.3, 0.1}, kAnchor});
    // filled {0, 180}; free robot at 60 on one side; free point at 260 on
    // the other.
    CHECK_FALSE(motion::is_alternate(snap(closed, 0), closed.norm));
}

TEST_CASE("is_alternate matches an exhaustive arc-scan oracle") {
    Rng rng(2718);
    int checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        // Random boundary layout: a few filled positions, free robots and
        // free points at distinct angles, plus interior anchor pairs.
        const std::size_t filled_n = 1 + rng.index(3);
        const std::size_t free_n = 1 + rng.index(3);
        std::vector<double> angles;
        const std::size_t total = filled_n * 2 + free_n * 2;
        for (std::size_t i = 0; i < total; ++i) {
            angles.push_back(rng.range(0.0, 360.0));
        }
        std::vector<Point> robots, pattern;
        std::size_t a = 0;
        for (std::size_t i = 0; i < filled_n; ++i, ++a) {
            robots.push_back(at_angle(angles[a]));
            pattern.push_back(at_angle(angles[a]));
        }
        std::vector<double> free_robot_angles, free_point_angles;
        for (std::size_t i = 0; i < free_n; ++i, ++a) {
            robots.push_back(at_angle(angles[a]));
            free_robot_angles.push_back(angles[a] * kPi / 180.0);
        }
        for (std::size_t i = 0; i < free_n; ++i, ++a) {
            pattern.push_back(at_angle(angles[a]));
            free_point_angles.push_back(angles[a] * kPi / 180.0);
        }
        // Interior anchors lock the placement score.
        robots.push_back({0.31, 0.17});
        pattern.push_back({0.31, 0.17});
        robots.push_back({-0.22, -0.41});
        pattern.push_back({-0.22, -0.41});

        motion::Snapshot s{canon::Configuration{robots}, 0};
        agreement::NormalizedPattern norm;
        try {
            // The oracle reasons in drawn angles, which is only valid when
            // the drawn unit circle really is the SEC of both sets.
            const geom::Circle rsec = geom::sec(robots);
            const geom::Circle psec = geom::sec(pattern);
            if (geom::norm(rsec.center) > 1e-9 ||
                std::abs(rsec.radius - 1.0) > 1e-9 ||
                geom::norm(psec.center) > 1e-9 ||
                std::abs(psec.radius - 1.0) > 1e-9) {
                continue;
            }
            norm = agreement::agreement_pattern({canon::Configuration{pattern}});
            // Only trials whose elected placement reproduces the drawn
            // coordinates exactly are comparable against the drawn-angle
            // oracle; random draws without spanning boundary sets or with a
            // free canonical leader re-frame and are skipped.
            const auto [frame, placed] = agreement::agreement_coordinate_system(
                canon::Configuration{robots}, norm);
            (void)frame;
            bool locked = true;
            for (std::size_t i = 0; i < pattern.size(); ++i) {
                if (geom::dist(placed.points[i], pattern[i]) > 1e-9) {
                    locked = false;
                    break;
                }
            }
            if (!locked) continue;
            const auto ctx = motion::build_phase_context(s, norm);
            const bool got = motion::is_alternate(ctx);
            // Oracle: try every free pair and both arcs against the filled
            // angles.
            bool expect = false;
            for (double ra : free_robot_angles) {
                for (double pa : free_point_angles) {
                    for (int dir = 0; dir < 2; ++dir) {
                        const double span =
                            dir == 0 ? geom::wrap_angle(pa - ra)
                                     : geom::wrap_angle(ra - pa);
                        bool blocked = false;
                        for (std::size_t i = 0; i < filled_n; ++i) {
                            const double fa = angles[i] * kPi / 180.0;
                            const double t = dir == 0
                                                 ? geom::wrap_angle(fa - ra)
                                                 : geom::wrap_angle(ra - fa);
                            if (t > geom::kTol && t < span - geom::kTol) {
                                blocked = true;
                            }
                        }
                        if (!blocked) expect = true;
                    }
                }
            }
            if (got != expect) {
                MESSAGE("trial ", trial, " filled_n ", filled_n, " free_n ",
                        free_n);
                for (double a : angles) MESSAGE("angle ", a);
            }
            REQUIRE(got == expect);
            ++checked;
        } catch (const std::exception&) {
            continue;  // symmetric or coincident draw, skip
        }
    }
    CHECK(checked > 25);
}

TEST_CASE("boundary case: one filled, diametral free point gets filled") {
    Fixture f = make_fixture(
        {at_angle(0), at_angle(150), at_angle(250), {0.3, 0.1}},
        {at_angle(0), at_angle(180), at_angle(250, 0.996), {0.3, 0.1}});
    // Leader point at angle 0 filled; free boundary point exactly opposite
    // at 180; nearest free boundary robot is at 150.
    const auto ctx = motion::build_phase_context(snap(f, 0), f.norm);
    REQUIRE(motion::classify_milestone(ctx) == motion::Milestone::I1Reached);
    const auto ds = all_decisions(f);
    CHECK(count_movers(ds) == 1);
    REQUIRE(ds[1].kind == motion::DecisionKind::MoveArc);
    CHECK(testsupport::close(ds[1].destination, at_angle(180), 1e-9));
    // The arc stays on the SEC.
    CHECK(ds[1].arc->circle.radius ==
          doctest::Approx(ctx.frame.unit).epsilon(1e-9));
    const auto direct = motion::move_on_boundary(snap(f, 1), f.norm);
    CHECK(direct == ds[1]);
}

TEST_CASE("move_ensuring_alternate skips the nearest pair when it would "
          "break alternation") {
    // Filled leader at 0. Free points at 140 and 280, free robots at 70 and
    // 185. The globally nearest admissible move (185 -> 140, 45 degrees)
    // would strand the last pair (70, 280) on opposite sides of the filled
    // positions; the rule must take (70 -> 140, 70 degrees) instead.
    Fixture f = make_fixture(
        {at_angle(0), at_angle(70), at_angle(185), {0.3, 0.15}, {-0.2, -0.35},
         kAnchor},
        {at_angle(0), at_angle(140), at_angle(280), {0.3, 0.15},
         {-0.2, -0.35}, kAnchor});
    const auto ctx = motion::build_phase_context(snap(f, 0), f.norm);
    REQUIRE(motion::classify_milestone(ctx) == motion::Milestone::I1Reached);

    const auto ds = all_decisions(f);
    CHECK(count_movers(ds) == 1);
    REQUIRE_MESSAGE(ds[1].kind == motion::DecisionKind::MoveArc,
                    "robot at 70 degrees should be the mover");
    CHECK(ds[2].kind == motion::DecisionKind::Stay);
    CHECK(testsupport::close(ds[1].destination, at_angle(140), 1e-9));

    // Post-move state is alternate again; the rejected nearest move is not.
    Fixture after = make_fixture(
        {at_angle(0), at_angle(140), at_angle(185), {0.3, 0.15}, {-0.2, -0.35},
         kAnchor},
        {at_angle(0), at_angle(140), at_angle(280), {0.3, 0.15},
         {-0.2, -0.35}, kAnchor});
    CHECK(motion::is_alternate(snap(after, 0), after.norm));
    // The rejected move (185 -> 140) would leave filled {0, 140} with the
    // last free robot at 70 and the last free point at 280 on opposite
    // sides: both connecting arcs cross a filled position. (That state also
    // collapses the SEC support, so it cannot be built as a snapshot.)
    const bool ccw_blocked = 140.0 > 70.0 && 140.0 < 280.0;  // 140 in (70,280)
    const bool cw_blocked = 0.0 < 70.0;  // 0 in (280,360)+(0,70)
    CHECK(ccw_blocked);
    CHECK(cw_blocked);

    const auto direct = motion::move_ensuring_alternate(snap(f, 1), f.norm);
    CHECK(direct == ds[1]);
}

TEST_CASE("generate_alternate nudges the non-leader filled robot") {
    // Two filled positions (leader at 0, second at 120), free point at 180.
    // The non-leader filled robot arcs toward the free point by half the
    // gap to the next boundary feature (60 degrees to the point at 180).
    Fixture f = make_fixture(
        {at_angle(0), at_angle(120), at_angle(60), at_angle(250),
         {0.3, 0.15}, kAnchor},
        {at_angle(0), at_angle(120), at_angle(180), {0.3, 0.15},
         {-0.25, -0.3}, kAnchor});
    const auto d = motion::generate_alternate(snap(f, 1), f.norm);
    REQUIRE(d.kind == motion::DecisionKind::MoveArc);
    CHECK(testsupport::close(d.destination, at_angle(150), 1e-9));
    const bool arc_lands_on_dest =
        testsupport::close(geom::arc_end(*d.arc), at_angle(150), 1e-9);
    CHECK(arc_lands_on_dest);
    // Everyone else stays under the same rule.
    for (std::size_t i = 0; i < f.robots.size(); ++i) {
        if (i == 1) continue;
        CHECK(motion::generate_alternate(snap(f, i), f.norm).kind ==
              motion::DecisionKind::Stay);
    }
    // The vacated position makes the configuration alternate.
    Fixture after = make_fixture(
        {at_angle(0), at_angle(150), at_angle(60), at_angle(250),
         {0.3, 0.15}, kAnchor},
        {at_angle(0), at_angle(120), at_angle(180), {0.3, 0.15},
         {-0.25, -0.3}, kAnchor});
    CHECK(motion::is_alternate(snap(after, 0), after.norm));
}

TEST_CASE("generate_alternate never selects the leader") {
    // The leader (angle 0) is angularly nearest to the free point at 40;
    // the other filled robot must move instead.
    Fixture f = make_fixture(
        {at_angle(0), at_angle(190), at_angle(100), at_angle(280),
         {0.3, 0.15}, kAnchor},
        {at_angle(0), at_angle(190), at_angle(40), {0.3, 0.15},
         {-0.25, -0.3}, kAnchor});
    const auto ds_leader = motion::generate_alternate(snap(f, 0), f.norm);
    CHECK(ds_leader.kind == motion::DecisionKind::Stay);
    const auto d = motion::generate_alternate(snap(f, 1), f.norm);
    REQUIRE(d.kind == motion::DecisionKind::MoveArc);
    // Half the clockwise gap from 190 to the robot at 100: 45 degrees.
    CHECK(testsupport::close(d.destination, at_angle(145), 1e-9));
}

TEST_CASE("every elected placement keeps its leader point filled") {
    // The placement anchors the pattern leader on the leader robot, so no
    // reachable state has zero filled boundary positions.
    Rng rng(555);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 4 + rng.index(6);
        const auto robots = testsupport::random_orderable(rng, n);
        const auto pat = testsupport::random_orderable(rng, n);
        const auto norm =
            agreement::agreement_pattern({canon::Configuration{pat}});
        motion::Snapshot s{canon::Configuration{robots}, 0};
        const auto ctx = motion::build_phase_context(s, norm);
        std::size_t filled_boundary = 0;
        for (std::size_t j = 0; j < ctx.pattern.size(); ++j) {
            if (ctx.occupant_of_point[j] >= 0 &&
                std::abs(geom::norm(ctx.pattern[j]) - 1.0) <= geom::kTol) {
                ++filled_boundary;
            }
        }
        CHECK(filled_boundary >= 1);
    }
}

TEST_CASE("decisions are pure functions of the snapshot") {
    Rng rng(808);
    const auto robots = testsupport::random_orderable(rng, 6);
    const auto pat = testsupport::random_orderable(rng, 6);
    const auto norm = agreement::agreement_pattern({canon::Configuration{pat}});
    for (std::size_t i = 0; i < robots.size(); ++i) {
        motion::Snapshot s{canon::Configuration{robots}, i};
        const auto first = motion::pattern_formation(s, norm);
        for (int rep = 0; rep < 5; ++rep) {
            CHECK(motion::pattern_formation(s, norm) == first);
        }
    }
}

TEST_CASE("at most one robot moves in any world state") {
    Rng rng(909);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 4 + rng.index(7);
        const auto robots = testsupport::random_orderable(rng, n);
        const auto pat = testsupport::random_orderable(rng, n);
        const auto norm =
            agreement::agreement_pattern({canon::Configuration{pat}});
        std::size_t movers = 0;
        for (std::size_t i = 0; i < n; ++i) {
            motion::Snapshot s{canon::Configuration{robots}, i};
            if (motion::pattern_formation(s, norm).kind !=
                motion::DecisionKind::Stay) {
                ++movers;
            }
        }
        CHECK(movers <= 1);
    }
}

TEST_CASE("decisions are equivariant across observer frames") {
    Rng rng(616);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 4 + rng.index(5);
        const auto robots = testsupport::random_orderable(rng, n);
        const auto pat = testsupport::random_orderable(rng, n);
        const auto norm =
            agreement::agreement_pattern({canon::Configuration{pat}});
        const double radius = geom::sec(robots).radius;
        for (std::size_t i = 0; i < n; ++i) {
            motion::Snapshot world{canon::Configuration{robots}, i};
            const auto base = motion::pattern_formation(world, norm);
            for (int t = 0; t < 3; ++t) {
                const auto frame = testsupport::random_similarity(rng);
                motion::Snapshot local{
                    canon::Configuration{testsupport::apply_all(frame, robots)},
                    i};
                const auto d = motion::pattern_formation(local, norm);
                REQUIRE(d.kind == base.kind);
                if (d.kind != motion::DecisionKind::Stay) {
                    REQUIRE(geom::dist(frame.invert(d.destination),
                                       base.destination) <= 1e-8 * radius);
                }
            }
        }
    }
}
