#ifndef TRANSQUAD_GALLERY_HPP
#define TRANSQUAD_GALLERY_HPP

#include <map>
#include <string>
#include <vector>

#include "transquad/impulsive.hpp"

namespace transquad::gallery {

// ----- families over well-ordered index sets -------------------------------

/// 2^-n e on the dyadic knots of [0, 1); certified geometric tails.
Family geometric_family(const VectorValue& e);

/// (-1)^n e / (n+1); certified alternating tails, norms not summable.
Family alt_harmonic_family(const VectorValue& e);

/// Constant e; bounded, increments never vanish at the limit.
Family constant_family(const VectorValue& e);

/// 2^n e; blows past any threshold.
Family doubling_family(const VectorValue& e);

/// 2^-(n0+n1) e on the depth-2 dyadic set; fully certified tails.
Family nested_geometric_family(const VectorValue& e);

/// (-1)^{n1} 2^-n0 e / (n1+1) on the depth-2 dyadic set.
Family nested_alt_geometric_family(const VectorValue& e);

// ----- step mappings --------------------------------------------------------

/// y_n on [n, n+1) over [0, inf]; width-1 steps.
StepMapping unit_step_mapping(std::function<VectorValue(std::uint64_t)> y, SpaceKind kind,
                              std::size_t dim);

/// y_k on [1 - 2^-k, 1 - 2^-(k+1)) over [0, 1]; width 2^-(k+1) steps.
StepMapping dyadic_step_mapping(std::function<VectorValue(std::uint64_t)> y, SpaceKind kind,
                                std::size_t dim);

/// Constant value on the depth-d dyadic refinement of [0, 1); hooks from the
/// gap geometry.
StepMapping nested_constant_step(const VectorValue& e, std::size_t depth);

StepMapping step_geometric_tail();   // y_n = 2^-n e on unit steps, e = 1
StepMapping step_alt_harmonic();     // y_n = (-2)^n e/(n+1), n >= 1, dyadic steps
StepMapping step_bounded_alt();      // y_n = (-1)^n e, dyadic steps

// ----- oscillatory c0-valued mappings ---------------------------------------

struct OscParams {
    std::size_t coords = 64;  // tracked c0 coordinates
    int series_terms = 512;   // series truncation of the evaluator
};

double upper_floor(double x); // the integer m with m-1 < x <= m

/// Scalar coordinate-1 internals, exposed for independent test oracles.
double osc_base_coord1(double t, int terms);
double osc_base_primitive_coord1(double t, int terms);

/// Bounded right-regulated map into c0 oscillating at every rational.
RegulatedMapping osc_base(const OscParams& p = {});
std::function<VectorValue(double)> osc_base_primitive(const OscParams& p = {});

/// osc_base plus m reciprocal-amplitude oscillators: gauge integrable only.
RegulatedMapping osc_conditional(int m, const OscParams& p = {});
std::function<VectorValue(double)> osc_conditional_primitive(int m, const OscParams& p = {});

/// osc_base plus m inverse-square-root spikes: absolutely integrable, unbounded.
RegulatedMapping osc_root_singular(int m, const OscParams& p = {});
std::function<VectorValue(double)> osc_root_singular_primitive(int m, const OscParams& p = {});

/// t -> exp(-t) g(t) on [0, inf).
RegulatedMapping exp_weighted(const RegulatedMapping& g);

// ----- impulsive example -----------------------------------------------------

/// Increasing coupling coordinates built from arctan series (monotone tables).
double coupling_coordinate(std::size_t i, double s); // i is 1-based
double coupling_coordinate_max(std::size_t i);

/// Impulsive problem on [0, inf): base = osc_base, coupling from the arctan
/// coordinates applied to prefix sums of the state, impulses 2^-(n+k) at the
/// times n + 1 - 2^-k (state-independent), envelopes attached.
ImpulsiveProblem impulsive_example(std::size_t coords, double z_scale = 1.0);

// ----- catalog ----------------------------------------------------------------

struct GalleryEntry {
    std::string id;
    std::string kind; // "family" | "step" | "regulated" | "function"
    std::optional<Family> family;
    std::optional<StepMapping> step;
    std::optional<RegulatedMapping> mapping;
    std::function<VectorValue(double)> primitive; // analytic, when known
    std::function<VectorValue(double)> plain;     // plain function entries
    std::map<std::string, Tri> expected;          // verdict expectations
};

GalleryEntry get(const std::string& id);
GalleryEntry weighted_variant(const std::string& id, const std::string& weight);
std::vector<std::string> ids();

} // namespace transquad::gallery

#endif
