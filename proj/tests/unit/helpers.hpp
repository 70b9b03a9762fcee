#ifndef TRANSQUAD_TEST_HELPERS_HPP
#define TRANSQUAD_TEST_HELPERS_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "transquad/family.hpp"

namespace tq_test {

using namespace transquad;

// Independent summation oracle: walks the index set across blocks in plain
// (bijective) order rather than through the transfinite machinery, with
// per-layer truncation. Only meaningful for families whose blocks converge
// absolutely or alternate; callers pass the truncation depths.
inline VectorValue diagonal_sum_oracle(const Family& f, std::uint64_t outer,
                                       std::uint64_t inner) {
    VectorValue acc = f.zero();
    std::size_t depth = f.index.depth();
    if (depth == 1) {
        for (std::uint64_t n = 0; n < outer; ++n) acc = add(acc, f.value(Address({n})));
        return acc;
    }
    // Cantor-style traversal of the first two layers (deeper layers exact).
    for (std::uint64_t diag = 0; diag < outer + inner; ++diag) {
        for (std::uint64_t n0 = 0; n0 <= diag && n0 < outer; ++n0) {
            std::uint64_t n1 = diag - n0;
            if (n1 >= inner) continue;
            acc = add(acc, f.value(Address({n0, n1})));
        }
    }
    return acc;
}

// Central finite difference of a vector curve.
inline VectorValue central_fd(const std::function<VectorValue(double)>& f, double t, double h) {
    return scale(1.0 / (2 * h), sub(f(t + h), f(t - h)));
}

// Dense-pair sampled oscillation over the open interval (x, y).
inline double sampled_osc(const std::function<VectorValue(double)>& f, double x, double y,
                          int points, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> lo, hi;
    bool started = false;
    for (int i = 0; i < points; ++i) {
        double u = (i + dist(rng)) / points;
        double t = x + u * (y - x);
        if (!(t > x && t < y)) continue;
        VectorValue v = f(t);
        if (!started) {
            lo = v.coords();
            hi = v.coords();
            started = true;
        } else {
            for (std::size_t j = 0; j < lo.size(); ++j) {
                lo[j] = std::min(lo[j], v.coords()[j]);
                hi[j] = std::max(hi[j], v.coords()[j]);
            }
        }
    }
    double d = 0.0;
    for (std::size_t j = 0; j < lo.size(); ++j) d = std::max(d, hi[j] - lo[j]);
    return started ? d : 0.0;
}

} // namespace tq_test

#endif
