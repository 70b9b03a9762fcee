#ifndef TRANSQUAD_ORDINAL_HPP
#define TRANSQUAD_ORDINAL_HPP

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "transquad/errors.hpp"

namespace transquad {

/// Position in a well-ordered set of order type at most omega^D, written as a
/// tuple of naturals. The canonical form strips trailing zeros (but keeps at
/// least one digit); two tuples denote the same position exactly when their
/// zero-padded forms are equal. Comparison is lexicographic on padded tuples.
class Address {
public:
    Address() : digits_{0} {}
    explicit Address(std::vector<std::uint64_t> digits);

    static Address first() { return Address(); }

    const std::vector<std::uint64_t>& digits() const { return digits_; }
    std::size_t length() const { return digits_.size(); }
    bool is_first() const { return digits_.size() == 1 && digits_[0] == 0; }

    /// Digits zero-padded to `depth` entries.
    std::vector<std::uint64_t> padded(std::size_t depth) const;

    std::strong_ordering operator<=>(const Address& other) const;
    bool operator==(const Address& other) const;

    /// Dotted rendering, e.g. "2.0.5".
    std::string str() const;
    static Address parse(const std::string& dotted);

private:
    std::vector<std::uint64_t> digits_; // canonical: no trailing zeros beyond digit 0
};

/// An address of the set, or the supremum marker (the position just past the
/// whole set; coincides with the largest element only for finite chains).
class Position {
public:
    Position() : addr_(Address::first()) {}
    Position(Address a) : addr_(std::move(a)) {}
    static Position sup() { Position p; p.is_sup_ = true; return p; }

    bool at_sup() const { return is_sup_; }
    const Address& address() const;
    std::string str() const { return is_sup_ ? "sup" : addr_.str(); }

    bool operator==(const Position& o) const;
    std::strong_ordering operator<=>(const Position& o) const;

private:
    Address addr_;
    bool is_sup_ = false;
};

/// One refinement layer: how a half-open gap [lo, hi) is filled by a strictly
/// increasing sequence with limit hi. `dyadic` is hi - 2^-n (hi - lo);
/// `arith` is lo + n*step and is only legal when hi is +infinity.
struct LayerGen {
    enum class Kind { dyadic, arith };
    Kind kind = Kind::dyadic;
    double step = 1.0;
};

struct Cursor {
    Address addr;
    double value = 0.0;
    bool is_limit = false;
};

/// A well-ordered subset of the extended reals, represented as a lazily
/// evaluated refinement tree: layer 0 enumerates points of [min, sup) with
/// limit sup, and each deeper layer refines the gap between consecutive
/// points of the layer above. Finite chains are stored explicitly and contain
/// their maximum. Immutable after construction.
class WellOrderedSet {
public:
    /// Defaults to the dyadic knots of [0, 1) at depth 1.
    WellOrderedSet() : layers_(1, LayerGen{LayerGen::Kind::dyadic, 1.0}) {}

    static WellOrderedSet dyadic(double min, double sup, std::size_t depth = 3);
    static WellOrderedSet finite_chain(std::vector<double> values);
    static WellOrderedSet custom(double min, double sup, std::vector<LayerGen> layers);

    static WellOrderedSet from_config(const nlohmann::json& spec);
    nlohmann::json to_config() const;

    std::size_t depth() const { return finite_ ? 1 : layers_.size(); }
    double min() const { return min_; }
    double sup_value() const;
    bool contains_sup() const;
    bool is_finite() const { return finite_; }
    std::size_t finite_size() const { return values_.size(); }

    /// Strictly order-preserving embedding into the reals.
    double value(const Address& a) const;

    /// Least element strictly above `a`; throws AddressAtSup at the top.
    Address successor(const Address& a) const;

    /// Interval [value(a), value(successor(a))) — the step this element owns.
    std::pair<double, double> step_interval(const Address& a) const;

    /// Exact width of the owned step, computed multiplicatively so that it
    /// does not cancel to zero at the fp resolution of the supremum.
    double step_width(const Address& a) const;

    /// True when the element is approached from below by deeper elements.
    bool is_limit(const Address& a) const;

    /// Elements strictly below `gamma`, preserving order and limits.
    WellOrderedSet restrict_below(const Position& gamma) const;

    /// Largest element, when the set has one (finite chains, or restrictions
    /// below a successor).
    std::optional<Address> max_element() const;

    std::optional<Cursor> first() const;
    std::optional<Cursor> next(const Cursor& c) const;

    /// First `budget` elements in increasing order.
    std::vector<Cursor> enumerate(std::uint64_t budget) const;

    /// Elements with value below `t_max`, in increasing order, visiting at
    /// most `per_layer` children per refinement block. Reaches past limit
    /// points (unlike plain enumeration, which stays inside the first block).
    std::vector<Cursor> enumerate_until(double t_max, std::uint64_t per_layer,
                                        std::uint64_t total_budget = 100000) const;

    /// Leaf element whose step interval contains t (min <= t < sup).
    Address locate(double t) const;

    /// Number of children of the block below `prefix`; unbounded when the
    /// layer is infinite (always, except for finite chains).
    std::optional<std::uint64_t> child_count(const std::vector<std::uint64_t>& prefix) const;

    /// Upper cutoff, when this set is a strict initial segment of another.
    const std::optional<Position>& cutoff() const { return cutoff_; }

    bool same_structure(const WellOrderedSet& o) const;

private:
    void check_address(const Address& a) const;
    double value_unchecked(const std::vector<std::uint64_t>& padded) const;

    bool finite_ = false;
    std::vector<double> values_; // finite chain only, strictly increasing
    double min_ = 0.0;
    double sup_ = 1.0;
    std::vector<LayerGen> layers_;
    std::optional<Position> cutoff_;
};

/// True when the position is the successor of some element (never the case
/// for the sup marker, the minimum, or a limit address).
bool is_successor_position(const WellOrderedSet& set, const Position& p);

} // namespace transquad

#endif
