#ifndef TRANSQUAD_IMPULSIVE_HPP
#define TRANSQUAD_IMPULSIVE_HPP

#include <memory>

#include "transquad/regulated.hpp"

namespace transquad {

/// Initial value problem with impulses: u' = f(t, u) a.e., with prescribed
/// jumps u(lambda+) - u(lambda) = D(lambda, u(lambda)) at a well-ordered set
/// of impulse times. The right-hand side splits as
///   f(t, u) = base(t) + coupling(t, u(t)),
/// where `base` carries the right-regulated, state-independent part and the
/// coupling is continuous and increasing in u between the declared constant
/// bounds. This is the computable form of the order-interval hypotheses.
struct ImpulsiveProblem {
    double a = 0.0;
    double c = std::numeric_limits<double>::infinity();

    RegulatedMapping base;
    std::function<VectorValue(double, const VectorValue&)> coupling; // may be empty
    VectorValue coupling_lower; // coupling_lower <= coupling(t,u) <= coupling_upper
    VectorValue coupling_upper;

    WellOrderedSet impulses;
    std::function<VectorValue(const Address&, const VectorValue&)> impulse; // D
    Family z_lower; // envelope impulse families, locally summable
    Family z_upper;

    bool coupling_increasing = true;
    bool impulse_increasing = true;
};

struct ImpulsiveConfig {
    double tol = 1e-6;
    int max_iter = 60;
    std::uint64_t grid_per_unit = 512;
    std::uint64_t impulse_per_layer = 48;
    double order_slack = 1e-10;
    int threads = 1;
    SumConfig sum;
    RegConfig reg;
};

/// Right-continuous trajectory on [a, T]: values on an adaptive grid that
/// contains every enumerated impulse time, the state-independent integral
/// through a cached primitive, and the coupling integral interpolated
/// between grid points.
class Trajectory {
public:
    VectorValue eval(double t) const;
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<VectorValue>& grid_values() const { return u_; }
    const std::vector<VectorValue>& grid_jumps() const { return jump_; }
    double residual() const { return residual_; }

private:
    friend struct TrajectoryBuilder;
    std::vector<double> grid_;
    std::vector<VectorValue> u_;     // u(t_k), left value at impulse times
    std::vector<VectorValue> jump_;  // jump paid at t_k
    std::vector<VectorValue> dq_;    // coupling-integral increment over cell k
    std::shared_ptr<RegPrimitive> base_prim_; // null when base is absent
    double residual_ = 0.0;
};

/// u(t) for fixed data: transfinite sum of the impulses below t plus the
/// integral of g from a to t, each certified to half the tolerance.
std::pair<VectorValue, double> solve_fixed(const RegulatedMapping& g, const Family& z,
                                           double t, double tol, const SumConfig& scfg = {},
                                           const RegConfig& rcfg = {});

/// Sum of the impulse family strictly below t.
std::pair<VectorValue, double> staircase_at(const Family& z, double t, const SumConfig& cfg);

/// Numerically estimated jump u(lambda+) - u(lambda).
VectorValue jump_check(const Trajectory& u, double lambda, double eta = 1e-9);

enum class IterationStatus { converged, max_iter_exceeded, monotonicity_violation };

struct ExtremalOutcome {
    Trajectory lower;  // ascending chain limit (smallest solution candidate)
    Trajectory upper;  // descending chain limit (greatest solution candidate)
    int iterations = 0;
    double bracket_gap = 0.0;          // grid sup distance between the chains
    double fixed_point_residual = 0.0; // grid sup distance of the last update
    IterationStatus status = IterationStatus::converged;
};

/// Monotone iteration between the envelope solutions on [a, T]: ascending
/// from the lower envelope and descending from the upper one, stopping when
/// successive iterates agree within tol in the grid sup norm.
ExtremalOutcome extremal_solutions(const ImpulsiveProblem& p, double T,
                                   const ImpulsiveConfig& cfg = {});

} // namespace transquad

#endif
