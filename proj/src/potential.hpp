#ifndef ANYVA_POTENTIAL_HPP
#define ANYVA_POTENTIAL_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "clock.hpp"
#include "semiring.hpp"

namespace anyva {

// A discrete variable with a named, ordered frame. The frame order is the
// total order used for lexicographic configuration comparison.
class Variable {
public:
    Variable(std::string name, std::vector<std::string> frame);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& frame() const { return frame_; }
    size_t frame_size() const { return frame_.size(); }
    int label_index(std::string_view label) const; // -1 if absent

private:
    std::string name_;
    std::vector<std::string> frame_;
};

using VariablePtr = std::shared_ptr<const Variable>;

// A set of variables held in the canonical global order (ascending name).
class Domain {
public:
    Domain() = default;
    explicit Domain(std::vector<VariablePtr> vars); // sorts, rejects duplicates

    size_t size() const { return vars_.size(); }
    bool empty() const { return vars_.empty(); }
    const VariablePtr& operator[](size_t i) const { return vars_[i]; }
    const std::vector<VariablePtr>& variables() const { return vars_; }

    bool contains(std::string_view name) const { return position(name) >= 0; }
    int position(std::string_view name) const; // -1 if absent
    bool subset_of(const Domain& other) const;

    // Product of frame sizes, saturating at uint64 max.
    uint64_t configuration_count() const;

    bool operator==(const Domain& other) const;
    bool operator!=(const Domain& other) const { return !(*this == other); }

    std::string to_string() const; // "{a,b,c}"

private:
    std::vector<VariablePtr> vars_;
};

Domain domain_union(const Domain& a, const Domain& b);
Domain domain_difference(const Domain& a, const Domain& b);
Domain domain_intersection(const Domain& a, const Domain& b);

// One joint assignment: frame indices aligned with the domain's canonical
// variable order. The empty configuration (diamond) has no components.
struct Configuration {
    std::vector<uint8_t> ix;

    bool operator==(const Configuration& o) const { return ix == o.ix; }
    bool operator<(const Configuration& o) const { return ix < o.ix; }
};

struct Entry {
    Configuration config;
    Value value;
};

// Storage order of a potential's entry list. "lex" potentials are kept
// sorted by configuration; "discovery" potentials keep production order,
// which is what the engine caches rely on (truncation of a cache must be
// stable under later extension).
enum class OrderTag : uint8_t { lex, discovery };

// A semiring-induced valuation: a domain plus a sparse entry list. Entries
// with the semiring zero are never stored; the empty list is the zero
// element n_D of its domain.
class Potential {
public:
    Potential() = default;

    static Potential zero(Domain d, SemiringId s);

    // Validating constructor: checks arity, index bounds, distinctness and
    // zero-freeness; sorts when tag == lex.
    Potential(Domain d, SemiringId s, std::vector<Entry> entries, OrderTag tag);

    // Trusted fast path for internal operations whose outputs satisfy the
    // invariants by construction.
    static Potential from_op(Domain d, SemiringId s, std::vector<Entry> entries, OrderTag tag);

    const Domain& domain() const { return domain_; }
    SemiringId semiring_id() const { return semiring_; }
    const Semiring& sr() const { return semiring(semiring_); }
    OrderTag order_tag() const { return tag_; }
    const std::vector<Entry>& entries() const { return entries_; }
    size_t size() const { return entries_.size(); }
    bool is_zero() const { return entries_.empty(); }

    const Value* find(const Configuration& c) const;
    Value value_at(const Configuration& c) const; // zero if absent

    Value total_mass() const; // semiring sum over entries

    // Algebraic equality: same domain, same instance, same configuration ->
    // value map. Entry order and tag are representation details.
    bool operator==(const Potential& other) const;
    bool operator!=(const Potential& other) const { return !(*this == other); }

private:
    Domain domain_;
    std::vector<Entry> entries_;
    SemiringId semiring_ = SemiringId::arith_rational;
    OrderTag tag_ = OrderTag::lex;
};

// --- operations -------------------------------------------------------

inline const Domain& label(const Potential& p) { return p.domain(); }

// Exact combination: pointwise semiring product over the union domain.
Potential combine(const Potential& a, const Potential& b);

// Exact projection by semiring summation; target must be a subset of the
// domain. eliminate() is sugar for projecting away a variable set.
Potential project(const Potential& p, const Domain& target);
Potential eliminate(const Potential& p, const Domain& delta);

// The enumeration a potential is truncated along: production order for
// discovery potentials; decreasing weight (configuration-lexicographic
// tie-break) for lex potentials of totally ordered semirings.
std::vector<uint32_t> enumeration_order(const Potential& p);

// rho / rho-bar: prefix and suffix of the enumeration at split k.
Potential truncate(const Potential& p, size_t k);
Potential complement(const Potential& p, size_t k);

// oplus: pointwise semiring addition of two same-domain valuations. When
// either side is discovery-tagged the result keeps the left enumeration and
// appends unseen configurations, merging known ones in place.
Potential compose(const Potential& a, const Potential& b);

struct BudgetedProduct {
    Potential result;   // discovery order (traversal order)
    size_t k1 = 0;      // reached enumeration prefixes of the two inputs
    size_t k2 = 0;
    uint64_t attempts = 0;
};

// Time-bounded combination (the paper's COMBINE): alternating column/row
// extension of the combined block, sweeping the remainder once one side is
// exhausted. Every visited cell costs one clock unit; a step interrupted
// mid-way is rolled back so that the returned (k1, k2) always satisfies
// result == combine(truncate(a, k1), truncate(b, k2)).
BudgetedProduct combine_budgeted(const Potential& a, const Potential& b, BudgetClock& clock);

// Approximate combination: same traversal, stopping at the last step
// boundary with at most k landed entries (or when the inputs are
// exhausted).
BudgetedProduct combine_k_indexed(const Potential& a, const Potential& b, size_t k);
Potential combine_k(const Potential& a, const Potential& b, size_t k);

// Budgeted refinement cross-term: given the combined prefixes tau1, tau2
// and pending complements tbar1, tbar2 of two messages, computes
//   (tau1 x rho(tbar2, k2)) (+) (rho(tbar1, k1) x tau2)
//                         (+) (rho(tbar1, k1) x rho(tbar2, k2))
// by extending the product grid from block (|tau1|, |tau2|). Returned
// (k1, k2) are the consumed complement prefixes.
BudgetedProduct refine_cross(const Potential& tau1, const Potential& tbar1,
                             const Potential& tau2, const Potential& tbar2,
                             BudgetClock& clock);

// Pointwise information order: lo <= hi iff lo(x) <= hi(x) for every
// configuration (domains must match).
bool pointwise_leq(const Potential& lo, const Potential& hi);

// Canonical text form: header "<semiring> <var...>" then one
// "l1,l2,... : value" line per entry in enumeration order. The empty
// configuration prints as "<>". normalize divides arithmetic values by the
// total mass for display.
std::string serialize(const Potential& p, bool normalize = false);

} // namespace anyva

#endif
