// Shared helpers for the test suites: seeded generators for points,
// configurations and similarity transforms, plus tolerance checks.
#pragma once

#include <cmath>
#include <vector>

#include "swarm/canon.hpp"
#include "swarm/geom.hpp"
#include "swarm/sim.hpp"

namespace testsupport {

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    double uniform() { return swarm::sim::rng_uniform(state); }
    double range(double lo, double hi) { return lo + uniform() * (hi - lo); }
    std::uint64_t bits() { return swarm::sim::rng_next(state); }
    bool coin() { return uniform() < 0.5; }
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(bits() % n);
    }
};

inline swarm::geom::Point random_point(Rng& rng, double extent = 1.0) {
    return {rng.range(-extent, extent), rng.range(-extent, extent)};
}

inline std::vector<swarm::geom::Point> random_points(Rng& rng, std::size_t n,
                                                     double extent = 1.0) {
    std::vector<swarm::geom::Point> pts(n);
    for (auto& p : pts) p = random_point(rng, extent);
    return pts;
}

// Random point set that passes canonical ordering (trivial symmetry group)
// with healthy spacing.
inline std::vector<swarm::geom::Point> random_orderable(Rng& rng,
                                                        std::size_t n) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<swarm::geom::Point> pts = random_points(rng, n);
        const swarm::geom::Circle s = swarm::geom::sec(pts);
        bool ok = true;
        for (std::size_t a = 0; a < n && ok; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if (swarm::geom::dist(pts[a], pts[b]) < 1e-2 * s.radius) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) continue;
        try {
            swarm::canon::canonical_order(swarm::canon::Configuration{pts});
            return pts;
        } catch (const std::exception&) {
        }
    }
    throw std::runtime_error("could not sample an orderable set");
}

inline swarm::geom::Similarity random_similarity(Rng& rng,
                                                 bool allow_reflection = true) {
    swarm::geom::Similarity t;
    t.rotation = rng.range(0.0, 2.0 * 3.14159265358979323846);
    t.reflected = allow_reflection && rng.coin();
    t.scale = std::exp(rng.range(std::log(0.1), std::log(10.0)));
    t.translation = {rng.range(-5.0, 5.0), rng.range(-5.0, 5.0)};
    return t;
}

inline std::vector<swarm::geom::Point> apply_all(
    const swarm::geom::Similarity& t, const std::vector<swarm::geom::Point>& pts) {
    std::vector<swarm::geom::Point> out;
    out.reserve(pts.size());
    for (auto p : pts) out.push_back(t.apply(p));
    return out;
}

inline bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol;
}

inline bool close(swarm::geom::Point a, swarm::geom::Point b, double tol) {
    return swarm::geom::dist(a, b) <= tol;
}

// Multiset equality of point clouds within tol.
inline bool same_points(const std::vector<swarm::geom::Point>& a,
                        const std::vector<swarm::geom::Point>& b, double tol) {
    if (a.size() != b.size()) return false;
    std::vector<bool> used(b.size(), false);
    for (const auto& p : a) {
        bool found = false;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (!used[j] && swarm::geom::dist(p, b[j]) <= tol) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace testsupport
