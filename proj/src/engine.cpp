#include "engine.hpp"

#include <algorithm>
#include <sstream>

namespace anyva {

InferenceSession::InferenceSession(std::vector<Potential> knowledgebase, Domain query)
    : kb_(std::move(knowledgebase)), query_(std::move(query)),
      tree_(BinaryJoinTree::build(kb_, query_)) {
    if (!kb_.empty()) {
        SemiringId s = kb_[0].semiring_id();
        for (const auto& f : kb_)
            if (f.semiring_id() != s)
                fail_usage("knowledgebase mixes semiring instances");
    }
    caches_.resize(tree_.node_count());
}

BudgetClock InferenceSession::make_clock(Budget t) const {
    if (t.unlimited) return BudgetClock::unlimited();
    if (wall_clock_) return BudgetClock::wall_micros(t.amount * 1000); // budget in ms
    return BudgetClock::units(t.amount);
}

const Potential& InferenceSession::message(uint32_t id) const {
    return *caches_[id].phi_s;
}

const Potential& InferenceSession::inward(Budget t) {
    if (started_)
        fail_state("inward requires a fresh session");
    started_ = true;

    BudgetClock clock = make_clock(t);

    for (uint32_t id = 0; id < tree_.leaf_count(); ++id) {
        NodeCache& c = caches_[id];
        c.phi = kb_[tree_.node(id).factor_index];
        c.phi_s = eliminate(*c.phi, tree_.delta(id)); // exact, costs nothing on the clock
        c.tbar_self = Potential::zero(c.phi_s->domain(), c.phi_s->semiring_id());
        c.processed = true;
    }

    uint64_t s = tree_.leaf_count() - 1;
    for (uint32_t id : tree_.bottom_up_order()) {
        const BJTNode& n = tree_.node(id);
        NodeCache& c = caches_[id];
        const Potential& msgL = message(uint32_t(n.left));
        const Potential& msgR = message(uint32_t(n.right));

        BudgetClock sub = clock.carve(s);
        BudgetedProduct bp = combine_budgeted(msgL, msgR, sub);
        clock.absorb(sub);

        c.tau_L = truncate(msgL, bp.k1);
        c.tbar_L = complement(msgL, bp.k1);
        c.tau_R = truncate(msgR, bp.k2);
        c.tbar_R = complement(msgR, bp.k2);
        c.phi = std::move(bp.result);
        c.phi_s = eliminate(*c.phi, tree_.delta(id));
        c.tbar_self = Potential::zero(c.phi_s->domain(), c.phi_s->semiring_id());
        c.processed = true;
        s -= 1;
    }

    record(CallKind::inward, t, clock.attempts());
    return *caches_[tree_.root()].phi_s;
}

const Potential& InferenceSession::refine(Budget t) {
    if (!started_)
        fail_state("refine called before inward");

    BudgetClock clock = make_clock(t);

    uint64_t s = tree_.leaf_count() - 1;
    for (uint32_t id : tree_.bottom_up_order()) {
        const BJTNode& n = tree_.node(id);
        NodeCache& c = caches_[id];

        // consume complements the children published since we last ran
        for (int side = 0; side < 2; ++side) {
            uint32_t child = uint32_t(side == 0 ? n.left : n.right);
            NodeCache& cc = caches_[child];
            if (cc.tbar_self && !cc.tbar_self->is_zero()) {
                auto& tbar = side == 0 ? c.tbar_L : c.tbar_R;
                tbar = compose(*tbar, *cc.tbar_self);
                cc.tbar_self = Potential::zero(cc.tbar_self->domain(), cc.tbar_self->semiring_id());
            }
        }

        BudgetClock sub = clock.carve(s);
        BudgetedProduct nu = refine_cross(*c.tau_L, *c.tbar_L, *c.tau_R, *c.tbar_R, sub);
        clock.absorb(sub);

        c.tau_L = compose(*c.tau_L, truncate(*c.tbar_L, nu.k1));
        c.tbar_L = complement(*c.tbar_L, nu.k1);
        c.tau_R = compose(*c.tau_R, truncate(*c.tbar_R, nu.k2));
        c.tbar_R = complement(*c.tbar_R, nu.k2);

        if (!nu.result.is_zero()) {
            c.phi = compose(*c.phi, nu.result);
            c.tbar_self = compose(*c.tbar_self, eliminate(nu.result, tree_.delta(id)));
            c.phi_s = eliminate(*c.phi, tree_.delta(id));
        }
        s -= 1;
    }

    record(CallKind::refine, t, clock.attempts());
    return *caches_[tree_.root()].phi_s;
}

const Potential& InferenceSession::inward_approx(uint64_t k) {
    if (started_)
        fail_state("inward_approx requires a fresh session");
    started_ = true;

    uint64_t attempts = 0;

    for (uint32_t id = 0; id < tree_.leaf_count(); ++id) {
        NodeCache& c = caches_[id];
        c.phi = kb_[tree_.node(id).factor_index];
        c.phi_s = eliminate(*c.phi, tree_.delta(id));
        c.tbar_self = Potential::zero(c.phi_s->domain(), c.phi_s->semiring_id());
        c.processed = true;
    }

    for (uint32_t id : tree_.bottom_up_order()) {
        const BJTNode& n = tree_.node(id);
        NodeCache& c = caches_[id];
        const Potential& msgL = message(uint32_t(n.left));
        const Potential& msgR = message(uint32_t(n.right));

        BudgetedProduct bp = combine_k_indexed(msgL, msgR, k);
        attempts += bp.attempts;

        c.tau_L = truncate(msgL, bp.k1);
        c.tbar_L = complement(msgL, bp.k1);
        c.tau_R = truncate(msgR, bp.k2);
        c.tbar_R = complement(msgR, bp.k2);
        c.phi = std::move(bp.result);
        c.phi_s = eliminate(*c.phi, tree_.delta(id));
        c.tbar_self = Potential::zero(c.phi_s->domain(), c.phi_s->semiring_id());
        c.processed = true;
    }

    record(CallKind::inward_approx, Budget::units(k), attempts);
    return *caches_[tree_.root()].phi_s;
}

const Potential& InferenceSession::root_marginal() const {
    if (!started_)
        fail_state("no inference call has run yet");
    return *caches_[tree_.root()].phi_s;
}

void InferenceSession::record(CallKind kind, Budget b, uint64_t attempts) {
    attempts_total_ += attempts;
    last_attempts_ = attempts;
    const Potential& root = *caches_[tree_.root()].phi_s;
    StepRecord rec{kind, b, attempts, root.size(), serialize(root)};
    log_.push_back(std::move(rec));
}

std::string InferenceSession::trace_text() const {
    std::ostringstream os;
    for (const auto& r : log_) {
        const char* kind = r.kind == CallKind::inward ? "inward"
                           : r.kind == CallKind::refine ? "refine"
                                                        : "inward-approx";
        std::string marginal = r.root_text;
        std::replace(marginal.begin(), marginal.end(), '\n', '|');
        os << "call=" << kind << " budget=" << r.budget.to_string() << " attempts=" << r.attempts
           << " entries=" << r.root_entries << " marginal=" << marginal << '\n';
    }
    return os.str();
}

size_t InferenceSession::max_cache_entries() const {
    size_t m = 0;
    for (const auto& c : caches_) {
        for (const auto* p : {&c.phi, &c.phi_s, &c.tau_L, &c.tau_R, &c.tbar_L, &c.tbar_R, &c.tbar_self})
            if (*p) m = std::max(m, (*p)->size());
    }
    return m;
}

Potential solve_exact(const std::vector<Potential>& knowledgebase, const Domain& query) {
    InferenceSession session(knowledgebase, query);
    return session.inward(Budget::inf());
}

Potential solve_flat(const std::vector<Potential>& knowledgebase, const Domain& query) {
    if (knowledgebase.empty())
        fail_usage("knowledgebase must contain at least one valuation");
    Potential acc = knowledgebase[0];
    for (size_t i = 1; i < knowledgebase.size(); ++i) acc = combine(acc, knowledgebase[i]);
    for (const auto& qv : query.variables())
        if (!acc.domain().contains(qv->name()))
            fail_usage("unknown query variable '" + qv->name() + "'");
    return project(acc, query);
}

} // namespace anyva
