#include "potential.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace anyva {

// --- Variable / Domain --------------------------------------------------

Variable::Variable(std::string name, std::vector<std::string> frame)
    : name_(std::move(name)), frame_(std::move(frame)) {
    if (name_.empty())
        fail_usage("variable name must be nonempty");
    if (frame_.empty())
        fail_usage("variable '" + name_ + "' must have a nonempty frame");
    if (frame_.size() > 255)
        fail_usage("variable '" + name_ + "' frame too large (max 255 labels)");
    std::set<std::string> seen;
    for (const auto& l : frame_)
        if (!seen.insert(l).second)
            fail_usage("variable '" + name_ + "' has duplicate frame label '" + l + "'");
}

int Variable::label_index(std::string_view label) const {
    for (size_t i = 0; i < frame_.size(); ++i)
        if (frame_[i] == label) return int(i);
    return -1;
}

namespace {

void check_frame_consistency(const VariablePtr& a, const VariablePtr& b) {
    if (a.get() == b.get()) return;
    if (a->frame() != b->frame())
        fail_usage("variable '" + a->name() + "' used with two different frames");
}

} // namespace

Domain::Domain(std::vector<VariablePtr> vars) : vars_(std::move(vars)) {
    std::sort(vars_.begin(), vars_.end(),
              [](const VariablePtr& a, const VariablePtr& b) { return a->name() < b->name(); });
    for (size_t i = 0; i + 1 < vars_.size(); ++i)
        if (vars_[i]->name() == vars_[i + 1]->name())
            fail_usage("duplicate variable '" + vars_[i]->name() + "' in domain");
}

int Domain::position(std::string_view name) const {
    size_t lo = 0, hi = vars_.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (vars_[mid]->name() < name)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo < vars_.size() && vars_[lo]->name() == name) return int(lo);
    return -1;
}

bool Domain::subset_of(const Domain& other) const {
    for (const auto& v : vars_) {
        int p = other.position(v->name());
        if (p < 0) return false;
        check_frame_consistency(v, other[size_t(p)]);
    }
    return true;
}

uint64_t Domain::configuration_count() const {
    uint64_t n = 1;
    for (const auto& v : vars_) {
        uint64_t f = v->frame_size();
        if (n > UINT64_MAX / f) return UINT64_MAX;
        n *= f;
    }
    return n;
}

bool Domain::operator==(const Domain& other) const {
    if (vars_.size() != other.vars_.size()) return false;
    for (size_t i = 0; i < vars_.size(); ++i) {
        if (vars_[i]->name() != other.vars_[i]->name()) return false;
        check_frame_consistency(vars_[i], other.vars_[i]);
    }
    return true;
}

std::string Domain::to_string() const {
    std::string s = "{";
    for (size_t i = 0; i < vars_.size(); ++i) {
        if (i) s += ",";
        s += vars_[i]->name();
    }
    return s + "}";
}

Domain domain_union(const Domain& a, const Domain& b) {
    std::vector<VariablePtr> vars = a.variables();
    for (const auto& v : b.variables()) {
        int p = a.position(v->name());
        if (p < 0)
            vars.push_back(v);
        else
            check_frame_consistency(a[size_t(p)], v);
    }
    return Domain(std::move(vars));
}

Domain domain_difference(const Domain& a, const Domain& b) {
    std::vector<VariablePtr> vars;
    for (const auto& v : a.variables())
        if (!b.contains(v->name())) vars.push_back(v);
    return Domain(std::move(vars));
}

Domain domain_intersection(const Domain& a, const Domain& b) {
    std::vector<VariablePtr> vars;
    for (const auto& v : a.variables())
        if (b.contains(v->name())) vars.push_back(v);
    return Domain(std::move(vars));
}

// --- Potential ----------------------------------------------------------

Potential Potential::zero(Domain d, SemiringId s) {
    Potential p;
    p.domain_ = std::move(d);
    p.semiring_ = s;
    p.tag_ = OrderTag::lex;
    return p;
}

Potential Potential::from_op(Domain d, SemiringId s, std::vector<Entry> entries, OrderTag tag) {
    Potential p;
    p.domain_ = std::move(d);
    p.semiring_ = s;
    p.entries_ = std::move(entries);
    p.tag_ = tag;
    return p;
}

Potential::Potential(Domain d, SemiringId s, std::vector<Entry> entries, OrderTag tag)
    : domain_(std::move(d)), entries_(std::move(entries)), semiring_(s), tag_(tag) {
    const Semiring& ring = semiring(s);
    std::set<Configuration> seen;
    for (const auto& e : entries_) {
        if (e.config.ix.size() != domain_.size())
            fail_usage("configuration arity does not match domain " + domain_.to_string());
        for (size_t i = 0; i < e.config.ix.size(); ++i)
            if (e.config.ix[i] >= domain_[i]->frame_size())
                fail_usage("configuration index out of frame bounds for variable '" +
                           domain_[i]->name() + "'");
        ring.check_operand(e.value);
        if (ring.is_zero(e.value))
            fail_usage("potentials never store the semiring zero");
        if (!seen.insert(e.config).second)
            fail_usage("duplicate configuration in potential over " + domain_.to_string());
    }
    if (tag_ == OrderTag::lex)
        std::sort(entries_.begin(), entries_.end(),
                  [](const Entry& a, const Entry& b) { return a.config < b.config; });
}

const Value* Potential::find(const Configuration& c) const {
    if (tag_ == OrderTag::lex) {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), c,
                                   [](const Entry& e, const Configuration& k) { return e.config < k; });
        if (it != entries_.end() && it->config == c) return &it->value;
        return nullptr;
    }
    for (const auto& e : entries_)
        if (e.config == c) return &e.value;
    return nullptr;
}

Value Potential::value_at(const Configuration& c) const {
    if (const Value* v = find(c)) return *v;
    return sr().zero();
}

Value Potential::total_mass() const {
    const Semiring& ring = sr();
    Value acc = ring.zero();
    for (const auto& e : entries_) acc = ring.add(acc, e.value);
    return acc;
}

bool Potential::operator==(const Potential& other) const {
    if (semiring_ != other.semiring_ || !(domain_ == other.domain_)) return false;
    if (entries_.size() != other.entries_.size()) return false;
    for (const auto& e : entries_) {
        const Value* v = other.find(e.config);
        if (!v || !(*v == e.value)) return false;
    }
    return true;
}

// --- shared machinery for products ---------------------------------------

namespace {

struct PairLayout {
    Domain uni;
    std::vector<uint32_t> pos1, pos2;                   // var position in uni
    std::vector<std::pair<uint32_t, uint32_t>> shared;  // (pos in d1, pos in d2)
};

PairLayout make_pair_layout(const Domain& d1, const Domain& d2) {
    PairLayout L;
    L.uni = domain_union(d1, d2);
    L.pos1.resize(d1.size());
    L.pos2.resize(d2.size());
    for (size_t i = 0; i < d1.size(); ++i)
        L.pos1[i] = uint32_t(L.uni.position(d1[i]->name()));
    for (size_t j = 0; j < d2.size(); ++j) {
        L.pos2[j] = uint32_t(L.uni.position(d2[j]->name()));
        int p = d1.position(d2[j]->name());
        if (p >= 0) L.shared.emplace_back(uint32_t(p), uint32_t(j));
    }
    return L;
}

bool common_support(const PairLayout& L, const Configuration& x, const Configuration& y) {
    for (auto [p1, p2] : L.shared)
        if (x.ix[p1] != y.ix[p2]) return false;
    return true;
}

Configuration join_configs(const PairLayout& L, const Configuration& x, const Configuration& y) {
    Configuration c;
    c.ix.resize(L.uni.size());
    for (size_t i = 0; i < L.pos1.size(); ++i) c.ix[L.pos1[i]] = x.ix[i];
    for (size_t j = 0; j < L.pos2.size(); ++j) c.ix[L.pos2[j]] = y.ix[j];
    return c;
}

// One INSERT attempt: admits the pair only on common support, and drops
// products equal to the semiring zero (the attempt still costs a unit; the
// caller has already ticked the clock).
void insert_cell(const Semiring& ring, const PairLayout& L, const Entry& x, const Entry& y,
                 std::vector<Entry>& out) {
    if (!common_support(L, x.config, y.config)) return;
    Value v = ring.mul(x.value, y.value);
    if (ring.is_zero(v)) return;
    out.push_back(Entry{join_configs(L, x.config, y.config), std::move(v)});
}

std::vector<const Entry*> enumerated_view(const Potential& p) {
    std::vector<const Entry*> v;
    v.reserve(p.size());
    for (uint32_t ix : enumeration_order(p)) v.push_back(&p.entries()[ix]);
    return v;
}

// The staircase traversal shared by the budgeted, k-bounded and refinement
// products. State (i, j) always describes a consistent combined block:
// cells == all supported nonzero products of rows[0..i) x cols[0..j) minus
// the initial block (i0, j0). A step that cannot finish (clock) or that
// overruns the landed cap is rolled back, so callers can rely on the
// boundary invariant.
class GridExtender {
public:
    GridExtender(const Semiring& ring, const PairLayout& layout,
                 std::vector<const Entry*> rows, std::vector<const Entry*> cols,
                 size_t i0, size_t j0)
        : ring_(ring), layout_(layout), rows_(std::move(rows)), cols_(std::move(cols)),
          i_(i0), j_(j0) {}

    void run(BudgetClock& clock, std::optional<size_t> landed_cap) {
        if (clock.exhausted()) return;
        if (landed_cap && *landed_cap == 0) return;
        const size_t n1 = rows_.size(), n2 = cols_.size();
        while (i_ < n1 && j_ < n2) {
            if (!col_step(clock, landed_cap)) return;
            if (at_cap(landed_cap)) return;
            if (i_ < n1) {
                if (!row_step(clock, landed_cap)) return;
                if (at_cap(landed_cap)) return;
            }
        }
        while (j_ < n2) {
            if (!col_step(clock, landed_cap)) return;
            if (at_cap(landed_cap)) return;
        }
        while (i_ < n1) {
            if (!row_step(clock, landed_cap)) return;
            if (at_cap(landed_cap)) return;
        }
    }

    size_t i() const { return i_; }
    size_t j() const { return j_; }
    std::vector<Entry> take_cells() { return std::move(cells_); }

private:
    bool at_cap(const std::optional<size_t>& cap) const { return cap && cells_.size() >= *cap; }

    bool col_step(BudgetClock& clock, const std::optional<size_t>& cap) {
        size_t mark = cells_.size();
        for (size_t k = 0; k < i_; ++k) {
            if (!clock.try_consume()) {
                cells_.resize(mark);
                return false;
            }
            insert_cell(ring_, layout_, *rows_[k], *cols_[j_], cells_);
        }
        if (cap && cells_.size() > *cap) {
            cells_.resize(mark);
            return false;
        }
        ++j_;
        return true;
    }

    bool row_step(BudgetClock& clock, const std::optional<size_t>& cap) {
        size_t mark = cells_.size();
        for (size_t m = 0; m < j_; ++m) {
            if (!clock.try_consume()) {
                cells_.resize(mark);
                return false;
            }
            insert_cell(ring_, layout_, *rows_[i_], *cols_[m], cells_);
        }
        if (cap && cells_.size() > *cap) {
            cells_.resize(mark);
            return false;
        }
        ++i_;
        return true;
    }

    const Semiring& ring_;
    const PairLayout& layout_;
    std::vector<const Entry*> rows_, cols_;
    size_t i_, j_;
    std::vector<Entry> cells_;
};

void require_same_semiring(const Potential& a, const Potential& b) {
    if (a.semiring_id() != b.semiring_id())
        fail_usage("semiring mismatch: '" + std::string(a.sr().name()) + "' vs '" +
                   std::string(b.sr().name()) + "'");
}

} // namespace

// --- exact operations -----------------------------------------------------

Potential combine(const Potential& a, const Potential& b) {
    require_same_semiring(a, b);
    PairLayout L = make_pair_layout(a.domain(), b.domain());
    if (a.is_zero() || b.is_zero())
        return Potential::zero(L.uni, a.semiring_id());
    const Semiring& ring = a.sr();
    std::vector<Entry> cells;
    cells.reserve(a.size() * b.size() / (L.shared.empty() ? 1 : 2));
    for (const auto& x : a.entries())
        for (const auto& y : b.entries())
            insert_cell(ring, L, x, y, cells);
    std::sort(cells.begin(), cells.end(),
              [](const Entry& l, const Entry& r) { return l.config < r.config; });
    return Potential::from_op(L.uni, a.semiring_id(), std::move(cells), OrderTag::lex);
}

Potential project(const Potential& p, const Domain& target) {
    if (!target.subset_of(p.domain()))
        fail_usage("projection target " + target.to_string() + " is not a subset of " +
                   p.domain().to_string());
    const Semiring& ring = p.sr();
    std::vector<uint32_t> keep;
    keep.reserve(target.size());
    for (const auto& v : target.variables())
        keep.push_back(uint32_t(p.domain().position(v->name())));

    std::map<Configuration, Value> acc;
    for (const auto& e : p.entries()) {
        Configuration sub;
        sub.ix.reserve(keep.size());
        for (uint32_t k : keep) sub.ix.push_back(e.config.ix[k]);
        auto it = acc.find(sub);
        if (it == acc.end())
            acc.emplace(std::move(sub), e.value);
        else
            it->second = ring.add(it->second, e.value);
    }
    std::vector<Entry> out;
    out.reserve(acc.size());
    for (auto& [c, v] : acc)
        if (!ring.is_zero(v)) out.push_back(Entry{c, v});
    return Potential::from_op(target, p.semiring_id(), std::move(out), OrderTag::lex);
}

Potential eliminate(const Potential& p, const Domain& delta) {
    return project(p, domain_difference(p.domain(), delta));
}

// --- enumeration, truncation, composition ---------------------------------

std::vector<uint32_t> enumeration_order(const Potential& p) {
    std::vector<uint32_t> ord(p.size());
    for (uint32_t i = 0; i < ord.size(); ++i) ord[i] = i;
    if (p.order_tag() == OrderTag::lex && p.sr().flags().totally_ordered) {
        const Semiring& ring = p.sr();
        const auto& es = p.entries();
        // decreasing weight; stable keeps the lexicographic tie-break
        std::stable_sort(ord.begin(), ord.end(), [&](uint32_t x, uint32_t y) {
            return ring.less(es[y].value, es[x].value);
        });
    }
    return ord;
}

Potential truncate(const Potential& p, size_t k) {
    auto ord = enumeration_order(p);
    k = std::min(k, ord.size());
    std::vector<Entry> es;
    es.reserve(k);
    for (size_t t = 0; t < k; ++t) es.push_back(p.entries()[ord[t]]);
    if (p.order_tag() == OrderTag::lex)
        std::sort(es.begin(), es.end(),
                  [](const Entry& a, const Entry& b) { return a.config < b.config; });
    return Potential::from_op(p.domain(), p.semiring_id(), std::move(es), p.order_tag());
}

Potential complement(const Potential& p, size_t k) {
    auto ord = enumeration_order(p);
    k = std::min(k, ord.size());
    std::vector<Entry> es;
    es.reserve(ord.size() - k);
    for (size_t t = k; t < ord.size(); ++t) es.push_back(p.entries()[ord[t]]);
    if (p.order_tag() == OrderTag::lex)
        std::sort(es.begin(), es.end(),
                  [](const Entry& a, const Entry& b) { return a.config < b.config; });
    return Potential::from_op(p.domain(), p.semiring_id(), std::move(es), p.order_tag());
}

Potential compose(const Potential& a, const Potential& b) {
    require_same_semiring(a, b);
    if (a.domain() != b.domain())
        fail_usage("compose requires equal domains, got " + a.domain().to_string() + " and " +
                   b.domain().to_string());
    const Semiring& ring = a.sr();

    if (a.order_tag() == OrderTag::lex && b.order_tag() == OrderTag::lex) {
        // sorted two-pointer merge
        std::vector<Entry> out;
        out.reserve(a.size() + b.size());
        const auto& ea = a.entries();
        const auto& eb = b.entries();
        size_t i = 0, j = 0;
        while (i < ea.size() && j < eb.size()) {
            if (ea[i].config < eb[j].config)
                out.push_back(ea[i++]);
            else if (eb[j].config < ea[i].config)
                out.push_back(eb[j++]);
            else {
                Value v = ring.add(ea[i].value, eb[j].value);
                if (!ring.is_zero(v)) out.push_back(Entry{ea[i].config, std::move(v)});
                ++i;
                ++j;
            }
        }
        for (; i < ea.size(); ++i) out.push_back(ea[i]);
        for (; j < eb.size(); ++j) out.push_back(eb[j]);
        return Potential::from_op(a.domain(), a.semiring_id(), std::move(out), OrderTag::lex);
    }

    // Discovery result: keep the left enumeration, merge known
    // configurations in place and append unseen ones in the right
    // enumeration order. The engine caches depend on this append-only
    // behaviour.
    std::vector<Entry> out;
    out.reserve(a.size() + b.size());
    for (uint32_t ix : enumeration_order(a)) out.push_back(a.entries()[ix]);
    std::map<Configuration, size_t> slot;
    for (size_t i = 0; i < out.size(); ++i) slot[out[i].config] = i;
    for (uint32_t ix : enumeration_order(b)) {
        const Entry& e = b.entries()[ix];
        auto it = slot.find(e.config);
        if (it == slot.end()) {
            slot[e.config] = out.size();
            out.push_back(e);
        } else {
            out[it->second].value = ring.add(out[it->second].value, e.value);
        }
    }
    return Potential::from_op(a.domain(), a.semiring_id(), std::move(out), OrderTag::discovery);
}

// --- budgeted products ------------------------------------------------------

BudgetedProduct combine_budgeted(const Potential& a, const Potential& b, BudgetClock& clock) {
    require_same_semiring(a, b);
    PairLayout L = make_pair_layout(a.domain(), b.domain());
    BudgetedProduct out;
    if (a.is_zero() || b.is_zero()) {
        // absorbing rule, no traversal and no cost
        out.result = Potential::zero(L.uni, a.semiring_id());
        return out;
    }
    uint64_t before = clock.attempts();
    GridExtender g(a.sr(), L, enumerated_view(a), enumerated_view(b), 0, 0);
    g.run(clock, std::nullopt);
    out.k1 = g.i();
    out.k2 = g.j();
    out.attempts = clock.attempts() - before;
    out.result = Potential::from_op(L.uni, a.semiring_id(), g.take_cells(), OrderTag::discovery);
    return out;
}

BudgetedProduct combine_k_indexed(const Potential& a, const Potential& b, size_t k) {
    require_same_semiring(a, b);
    PairLayout L = make_pair_layout(a.domain(), b.domain());
    BudgetedProduct out;
    if (a.is_zero() || b.is_zero() || k == 0) {
        out.result = Potential::zero(L.uni, a.semiring_id());
        return out;
    }
    BudgetClock clock = BudgetClock::unlimited();
    GridExtender g(a.sr(), L, enumerated_view(a), enumerated_view(b), 0, 0);
    g.run(clock, k);
    out.k1 = g.i();
    out.k2 = g.j();
    out.attempts = clock.attempts();
    out.result = Potential::from_op(L.uni, a.semiring_id(), g.take_cells(), OrderTag::discovery);
    return out;
}

Potential combine_k(const Potential& a, const Potential& b, size_t k) {
    return combine_k_indexed(a, b, k).result;
}

BudgetedProduct refine_cross(const Potential& tau1, const Potential& tbar1,
                             const Potential& tau2, const Potential& tbar2,
                             BudgetClock& clock) {
    require_same_semiring(tau1, tau2);
    require_same_semiring(tau1, tbar1);
    require_same_semiring(tau2, tbar2);
    if (tau1.domain() != tbar1.domain() || tau2.domain() != tbar2.domain())
        fail_usage("refine_cross requires matching prefix/complement domains");

    PairLayout L = make_pair_layout(tau1.domain(), tau2.domain());
    BudgetedProduct out;
    const size_t n1 = tau1.size() + tbar1.size();
    const size_t n2 = tau2.size() + tbar2.size();
    if (n1 == 0 || n2 == 0) {
        out.result = Potential::zero(L.uni, tau1.semiring_id());
        return out;
    }

    std::vector<const Entry*> rows = enumerated_view(tau1);
    for (const Entry* e : enumerated_view(tbar1)) rows.push_back(e);
    std::vector<const Entry*> cols = enumerated_view(tau2);
    for (const Entry* e : enumerated_view(tbar2)) cols.push_back(e);

    uint64_t before = clock.attempts();
    GridExtender g(tau1.sr(), L, std::move(rows), std::move(cols), tau1.size(), tau2.size());
    g.run(clock, std::nullopt);
    out.k1 = g.i() - tau1.size();
    out.k2 = g.j() - tau2.size();
    out.attempts = clock.attempts() - before;
    out.result = Potential::from_op(L.uni, tau1.semiring_id(), g.take_cells(), OrderTag::discovery);
    return out;
}

// --- order and serialization -------------------------------------------------

bool pointwise_leq(const Potential& lo, const Potential& hi) {
    require_same_semiring(lo, hi);
    if (lo.domain() != hi.domain())
        fail_usage("pointwise order is only defined on equal domains");
    const Semiring& ring = lo.sr();
    for (const auto& e : lo.entries())
        if (!ring.leq(e.value, hi.value_at(e.config))) return false;
    return true;
}

std::string serialize(const Potential& p, bool normalize) {
    const Semiring& ring = p.sr();
    std::ostringstream os;
    os << ring.name();
    for (const auto& v : p.domain().variables()) os << ' ' << v->name();
    os << '\n';

    Value total = p.total_mass();
    bool scale = normalize && p.semiring_id() != SemiringId::bool_maxmin && !ring.is_zero(total);

    for (uint32_t ix : enumeration_order(p)) {
        const Entry& e = p.entries()[ix];
        if (e.config.ix.empty()) {
            os << "<>";
        } else {
            for (size_t i = 0; i < e.config.ix.size(); ++i) {
                if (i) os << ',';
                os << p.domain()[i]->frame()[e.config.ix[i]];
            }
        }
        os << " : ";
        if (!scale) {
            os << ring.format(e.value);
        } else if (p.semiring_id() == SemiringId::arith_rational) {
            os << format_rational(e.value.rational() / total.rational());
        } else {
            Value v(e.value.real() / total.real());
            os << ring.format(v);
        }
        os << '\n';
    }
    return os.str();
}

} // namespace anyva
