#ifndef TRANSQUAD_FAMILY_HPP
#define TRANSQUAD_FAMILY_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include "transquad/ordinal.hpp"
#include "transquad/spaces.hpp"

namespace transquad {

/// Certified analytic tail information for one refinement block.
/// `block` is the digit prefix naming the block (empty = top level) and
/// `from_child` the first child index not yet summed. The returned value
/// bounds the norm of the sum of everything from that child on, including all
/// deeper elements.
using TailHook =
    std::function<std::optional<double>(const std::vector<std::uint64_t>& block,
                                        std::uint64_t from_child)>;

/// A value assignment over a well-ordered index set, together with optional
/// analytic declarations that let the summation engine certify its answers.
/// Without declarations everything still runs, but limits are detected
/// heuristically and the results are flagged as uncertified.
struct Family {
    WellOrderedSet index;
    SpaceKind kind = SpaceKind::real;
    std::size_t dim = 1;
    std::function<VectorValue(const Address&)> value;

    TailHook tail_bound;          // bound on the norm of a block tail
    TailHook abs_tail_bound;      // bound on the sum of norms over a block tail

    /// Norm of infinitely many terms in every infinite block tail stays
    /// at or above this floor (rules out summability at the closing limit).
    std::optional<double> term_norm_floor;

    /// Declared sup of all term norms.
    std::optional<double> sup_norm_bound;

    /// The norms family is known analytically not to be summable.
    bool abs_divergent_declared = false;

    VectorValue zero() const { return VectorValue::zero(kind, dim); }
};

/// The same index set with every value replaced by an upper bound on its
/// norm; the absolute tail declarations become plain ones.
Family norms_family(const Family& f);

} // namespace transquad

#endif
