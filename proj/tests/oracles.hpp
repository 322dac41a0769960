#pragma once

// Brute-force reference implementations shared by the unit tests and the
// acceptance runner.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "klein/lattice.hpp"
#include "klein/sail2d.hpp"

namespace oracle {

using klein::Integer;
using klein::IntVec3;

struct RationalCone {
    std::array<IntVec3, 3> generators;
};

// Cramer coefficients: det(G) * lambda_i, sign-normalized so membership is
// "all nonnegative".
inline bool in_cone(const RationalCone& c, const IntVec3& p) {
    const auto& g = c.generators;
    const Integer d = klein::det(g[0], g[1], g[2]);
    const std::array<Integer, 3> l{klein::det(p, g[1], g[2]), klein::det(g[0], p, g[2]), klein::det(g[0], g[1], p)};
    for (const auto& v : l)
        if (sgn(v) * sgn(d) < 0) return false;
    return true;
}

// Nonzero lattice points of the cone with 0 < normal . x <= depth, by scanning
// the bounding box of the truncated simplex.
inline std::vector<IntVec3> box_scan(const RationalCone& c, const IntVec3& normal, long depth) {
    std::array<double, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (const auto& g : c.generators) {
        const double s = depth / klein::dot(normal, g).get_d();
        const std::array<double, 3> v{s * g.x.get_d(), s * g.y.get_d(), s * g.z.get_d()};
        for (int k = 0; k < 3; ++k) {
            lo[k] = std::min(lo[k], v[k]);
            hi[k] = std::max(hi[k], v[k]);
        }
    }
    std::vector<IntVec3> out;
    for (long x = static_cast<long>(std::floor(lo[0])) - 1; x <= static_cast<long>(std::ceil(hi[0])) + 1; ++x)
        for (long y = static_cast<long>(std::floor(lo[1])) - 1; y <= static_cast<long>(std::ceil(hi[1])) + 1; ++y)
            for (long z = static_cast<long>(std::floor(lo[2])) - 1; z <= static_cast<long>(std::ceil(hi[2])) + 1;
                 ++z) {
                const IntVec3 p{x, y, z};
                const Integer level = klein::dot(normal, p);
                if (level <= 0 || level > depth) continue;
                if (in_cone(c, p)) out.push_back(p);
            }
    std::sort(out.begin(), out.end());
    return out;
}

// Random cone with nonnegative generators of small height along (1,1,1).
inline RationalCone random_cone(std::mt19937_64& rng, long max_coord = 4) {
    std::uniform_int_distribution<long> c(0, max_coord);
    while (true) {
        RationalCone cone;
        for (auto& g : cone.generators) {
            g = {c(rng), c(rng), c(rng)};
            if (g == IntVec3{}) g.z = 1;
        }
        if (klein::det(cone.generators[0], cone.generators[1], cone.generators[2]) != 0) return cone;
    }
}

// Product of random elementary integer matrices.
inline klein::UnimodularMap3 random_unimodular(std::mt19937_64& rng, int max_coef = 2, int steps = 6) {
    klein::UnimodularMap3 m;
    std::uniform_int_distribution<int> pick(0, 2), coef(-max_coef, max_coef);
    for (int s = 0; s < steps; ++s) {
        const int i = pick(rng);
        int j = pick(rng);
        if (i == j) j = (j + 1) % 3;
        klein::UnimodularMap3::Entries e{};
        for (int k = 0; k < 3; ++k) e[k][k] = 1;
        e[i][j] = coef(rng);
        m = klein::UnimodularMap3(e) * m;
    }
    return m;
}

struct SailCheck {
    int faces_checked = 0;
    int candidates_checked = 0;
    int mismatches = 0;
};

// Compares the face oracle with the local sail: every reliable local-sail
// face must be accepted, and every triangle of enumerated points accepted by
// the oracle must be a local-sail face.
inline SailCheck compare_oracle_with_sail(const RationalCone& c, long depth) {
    SailCheck out;
    const IntVec3 normal{1, 1, 1};
    const klein::TruncatedConeRegion region{klein::Cone3::rational(c.generators), normal, Integer(depth)};
    const klein::SailFaceSet sail = klein::local_sail(region);
    for (const auto& f : sail.faces) {
        if (!f.reliable) continue;
        ++out.faces_checked;
        if (klein::is_face(f.face, region.cone).verdict != klein::FaceVerdict::face) ++out.mismatches;
    }
    const auto pts = klein::cone_lattice_points(region).points;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            for (std::size_t k = j + 1; k < pts.size(); ++k) {
                std::optional<klein::LatticeFace> t;
                try {
                    t.emplace(std::vector<IntVec3>{pts[i], pts[j], pts[k]});
                } catch (const klein::FaceError&) {
                    continue;
                }
                ++out.candidates_checked;
                if (klein::is_face(*t, region.cone).verdict != klein::FaceVerdict::face) continue;
                const bool listed = std::any_of(sail.faces.begin(), sail.faces.end(),
                                                [&](const klein::SailFace& s) { return same_polygon(s.face, *t); });
                if (!listed) ++out.mismatches;
            }
    return out;
}

}  // namespace oracle
