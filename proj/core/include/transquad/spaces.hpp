#ifndef TRANSQUAD_SPACES_HPP
#define TRANSQUAD_SPACES_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "transquad/errors.hpp"

namespace transquad {

enum class SpaceKind { real, real_vec, trunc_c0 };

enum class Tri { yes, no, unknown };

struct NormInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Element of one of the three supported normed, partially ordered spaces:
///  - real: scalars, |.|,
///  - real_vec: fixed-length vectors with the sup norm, componentwise order,
///  - trunc_c0: a finite prefix of a null sequence plus a certified bound
///    tail >= |x_i| for every coordinate beyond the prefix.
/// Values are immutable; all operations return new values.
class VectorValue {
public:
    VectorValue() : kind_(SpaceKind::real), coords_(1, 0.0) {}

    static VectorValue real(double x) { return VectorValue(SpaceKind::real, {x}, 0.0); }
    static VectorValue vec(std::vector<double> coords);
    static VectorValue c0(std::vector<double> prefix, double tail_bound);
    static VectorValue zero(SpaceKind kind, std::size_t dim);

    SpaceKind kind() const { return kind_; }
    std::size_t dim() const { return coords_.size(); }
    const std::vector<double>& coords() const { return coords_; }
    double scalar() const;
    double tail_bound() const { return tail_; }

    /// Same value with a larger certified tail bound (trunc_c0 only).
    VectorValue with_tail(double tail) const;

    nlohmann::json to_json() const;
    static VectorValue from_json(const nlohmann::json& j);
    std::string str() const;

private:
    VectorValue(SpaceKind k, std::vector<double> c, double t)
        : kind_(k), coords_(std::move(c)), tail_(t) {}

    SpaceKind kind_;
    std::vector<double> coords_;
    double tail_ = 0.0; // trunc_c0 only
};

VectorValue add(const VectorValue& x, const VectorValue& y);
VectorValue sub(const VectorValue& x, const VectorValue& y);
VectorValue scale(double c, const VectorValue& x);

/// Interval enclosing the true norm; exact for real/real_vec, the tail bound
/// widens it for trunc_c0.
NormInterval norm(const VectorValue& x);

/// Componentwise partial order; unknown when overlapping tail bounds make the
/// comparison undecidable. `slack` relaxes every comparison to x <= y + slack.
Tri leq(const VectorValue& x, const VectorValue& y, double slack = 0.0);

/// Largest |x_i - y_i| over tracked coordinates (ignores tail bounds).
double sup_diff_tracked(const VectorValue& x, const VectorValue& y);

/// Componentwise min/max (tail bounds take the max).
VectorValue component_min(const VectorValue& x, const VectorValue& y);
VectorValue component_max(const VectorValue& x, const VectorValue& y);

const char* space_kind_name(SpaceKind k);

} // namespace transquad

#endif
