#ifndef ANYVA_ENGINE_HPP
#define ANYVA_ENGINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "jointree.hpp"
#include "potential.hpp"

namespace anyva {

struct Budget {
    bool unlimited = false;
    uint64_t amount = 0;

    static Budget units(uint64_t n) { return Budget{false, n}; }
    static Budget inf() { return Budget{true, 0}; }
    std::string to_string() const { return unlimited ? "unlimited" : std::to_string(amount); }
};

// Per-node cache of partial valuations. tau_*/tbar_* describe how much of
// each child's message this node has combined; tbar_self accumulates the
// complement this node's own refinements publish for its parent, consumed
// and reset when the parent is processed.
struct NodeCache {
    std::optional<Potential> phi;    // phi(n)
    std::optional<Potential> phi_s;  // message to the parent
    std::optional<Potential> tau_L, tau_R;
    std::optional<Potential> tbar_L, tbar_R;
    std::optional<Potential> tbar_self;
    bool processed = false;
};

enum class CallKind : uint8_t { inward, refine, inward_approx };

struct StepRecord {
    CallKind kind;
    Budget budget;          // for inward_approx: k
    uint64_t attempts;      // INSERT attempts used by this call
    size_t root_entries;
    std::string root_text;  // canonical serialization of the root marginal
};

// One inference run over one binary join tree. Single-writer: inward and
// refine mutate the node caches sequentially; snapshots handed out are
// copies.
class InferenceSession {
public:
    InferenceSession(std::vector<Potential> knowledgebase, Domain query);

    void set_wall_clock(bool enable) { wall_clock_ = enable; }
    bool wall_clock() const { return wall_clock_; }

    // The paper's INWARD: leaves project exactly, each selected node runs a
    // budgeted combination with the timer()/s share, caches the (tau, tbar)
    // split of both child messages, and sends the exact elimination of its
    // partial product.
    const Potential& inward(Budget t);

    // The paper's REFINE: bottom-up over the recorded order, compute the
    // budgeted refinement cross-term, advance the caches, compose it into
    // phi(n) and publish its projection to the parent. Messages are
    // refreshed from phi(n) so the returned root marginal reflects the
    // refinement.
    const Potential& refine(Budget t);

    // INWARD-APPROX: inward with the k-bounded combination; every
    // intermediate product has at most k entries.
    const Potential& inward_approx(uint64_t k);

    bool started() const { return started_; }
    const Potential& root_marginal() const;

    const BinaryJoinTree& tree() const { return tree_; }
    const NodeCache& cache(uint32_t id) const { return caches_[id]; }

    uint64_t attempts_total() const { return attempts_total_; }
    uint64_t last_attempts() const { return last_attempts_; }

    const std::vector<StepRecord>& step_log() const { return log_; }
    std::string trace_text() const;

    // Largest cache list currently held; useful for sizing budgets.
    size_t max_cache_entries() const;

private:
    BudgetClock make_clock(Budget t) const;
    const Potential& message(uint32_t id) const;
    void record(CallKind kind, Budget b, uint64_t attempts);

    std::vector<Potential> kb_;
    Domain query_;
    BinaryJoinTree tree_;
    std::vector<NodeCache> caches_;
    bool wall_clock_ = false;
    bool started_ = false;
    uint64_t attempts_total_ = 0;
    uint64_t last_attempts_ = 0;
    std::vector<StepRecord> log_;
};

// Reference answer by tree propagation with an unlimited budget.
Potential solve_exact(const std::vector<Potential>& knowledgebase, const Domain& query);

// Independent flat route: combine everything, then project. Used by the
// built-in validation suites as the second route of the dual check.
Potential solve_flat(const std::vector<Potential>& knowledgebase, const Domain& query);

} // namespace anyva

#endif
