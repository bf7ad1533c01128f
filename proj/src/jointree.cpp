#include "jointree.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace anyva {

namespace {

// Pool entry during fusion: a built subtree plus the domain of the message
// it will send upward (its node domain minus variables already eliminated).
struct PoolEntry {
    uint32_t node;
    Domain msg;
};

using AdjacencyGraph = std::map<std::string, std::set<std::string>>;

size_t fill_count(const AdjacencyGraph& g, const std::string& v) {
    const auto& nb = g.at(v);
    size_t missing = 0;
    for (auto it = nb.begin(); it != nb.end(); ++it) {
        auto jt = it;
        for (++jt; jt != nb.end(); ++jt)
            if (!g.at(*it).count(*jt)) ++missing;
    }
    return missing;
}

void eliminate_from_graph(AdjacencyGraph& g, const std::string& v) {
    const auto nb = g.at(v);
    for (const auto& a : nb)
        for (const auto& b : nb)
            if (a != b) g.at(a).insert(b);
    for (const auto& a : nb) g.at(a).erase(v);
    g.erase(v);
}

} // namespace

BinaryJoinTree BinaryJoinTree::build(const std::vector<Potential>& knowledgebase,
                                     const Domain& query) {
    if (knowledgebase.empty())
        fail_usage("knowledgebase must contain at least one valuation");

    BinaryJoinTree tree;
    tree.query_ = query;
    tree.leaf_count_ = knowledgebase.size();

    Domain all;
    for (const auto& f : knowledgebase) all = domain_union(all, f.domain());
    for (const auto& qv : query.variables())
        if (!all.contains(qv->name()))
            fail_usage("unknown query variable '" + qv->name() + "'");

    for (uint32_t i = 0; i < knowledgebase.size(); ++i) {
        BJTNode n;
        n.id = i;
        n.kind = BJTNode::Kind::leaf;
        n.dom = knowledgebase[i].domain();
        n.factor_index = i;
        tree.nodes_.push_back(std::move(n));
    }

    // moral graph and min-fill ordering over the non-query variables
    AdjacencyGraph graph;
    for (const auto& v : all.variables()) graph[v->name()];
    for (const auto& f : knowledgebase) {
        const auto& vars = f.domain().variables();
        for (size_t a = 0; a < vars.size(); ++a)
            for (size_t b = 0; b < vars.size(); ++b)
                if (a != b) graph[vars[a]->name()].insert(vars[b]->name());
    }
    std::set<std::string> eligible;
    for (const auto& v : all.variables())
        if (!query.contains(v->name())) eligible.insert(v->name());

    std::vector<std::string> elim_order;
    while (!eligible.empty()) {
        std::string best;
        size_t best_fill = SIZE_MAX;
        for (const auto& v : eligible) { // set iterates name-ascending: ties by name
            size_t f = fill_count(graph, v);
            if (f < best_fill) {
                best_fill = f;
                best = v;
            }
        }
        elim_order.push_back(best);
        eliminate_from_graph(graph, best);
        eligible.erase(best);
    }

    std::vector<PoolEntry> pool;
    pool.reserve(knowledgebase.size());
    for (uint32_t i = 0; i < knowledgebase.size(); ++i)
        pool.push_back(PoolEntry{i, knowledgebase[i].domain()});

    auto join = [&tree](const PoolEntry& a, const PoolEntry& b) -> PoolEntry {
        BJTNode n;
        n.id = uint32_t(tree.nodes_.size());
        n.kind = BJTNode::Kind::internal;
        n.dom = domain_union(a.msg, b.msg);
        n.left = int32_t(a.node);
        n.right = int32_t(b.node);
        tree.nodes_.push_back(n);
        tree.nodes_[a.node].parent = int32_t(n.id);
        tree.nodes_[b.node].parent = int32_t(n.id);
        tree.bottom_up_.push_back(n.id);
        return PoolEntry{n.id, tree.nodes_[n.id].dom};
    };

    for (const auto& v : elim_order) {
        std::vector<size_t> group;
        for (size_t i = 0; i < pool.size(); ++i)
            if (pool[i].msg.contains(v)) group.push_back(i);
        if (group.empty()) continue;

        PoolEntry acc = pool[group[0]];
        for (size_t g = 1; g < group.size(); ++g) acc = join(acc, pool[group[g]]);

        Domain drop;
        for (const auto& var : acc.msg.variables())
            if (var->name() == v) drop = Domain({var});
        acc.msg = domain_difference(acc.msg, drop);

        std::vector<PoolEntry> rest;
        rest.reserve(pool.size() - group.size() + 1);
        for (size_t i = 0; i < pool.size(); ++i) {
            if (i == group[0])
                rest.push_back(acc);
            else if (!std::binary_search(group.begin(), group.end(), i))
                rest.push_back(pool[i]);
        }
        pool = std::move(rest);
    }

    // combine the remaining factors toward the root
    PoolEntry acc = pool[0];
    for (size_t i = 1; i < pool.size(); ++i) acc = join(acc, pool[i]);
    tree.root_ = acc.node;
    return tree;
}

Domain BinaryJoinTree::delta(uint32_t id) const {
    const BJTNode& n = nodes_[id];
    if (n.parent < 0) return domain_difference(n.dom, query_);
    return domain_difference(n.dom, nodes_[size_t(n.parent)].dom);
}

std::vector<uint32_t> BinaryJoinTree::next(const std::vector<bool>& processed) const {
    std::vector<uint32_t> ready;
    for (const auto& n : nodes_) {
        if (n.kind != BJTNode::Kind::internal || processed[n.id]) continue;
        if (processed[size_t(n.left)] && processed[size_t(n.right)]) ready.push_back(n.id);
    }
    return ready; // nodes_ is id-ascending already
}

std::string BinaryJoinTree::outline() const {
    std::ostringstream os;
    for (const auto& n : nodes_) {
        os << n.id << ' ' << (n.kind == BJTNode::Kind::leaf ? "leaf" : "internal") << ' '
           << n.dom.to_string();
        if (n.kind == BJTNode::Kind::internal) os << " children=" << n.left << ',' << n.right;
        if (int32_t(n.id) == int32_t(root_)) os << " root";
        os << '\n';
    }
    return os.str();
}

uint64_t BinaryJoinTree::structural_hash() const {
    // FNV-1a over the outline
    uint64_t h = 1469598103934665603ull;
    for (char c : outline()) {
        h ^= uint8_t(c);
        h *= 1099511628211ull;
    }
    return h;
}

size_t BinaryJoinTree::width() const {
    size_t w = 0;
    for (const auto& n : nodes_) w = std::max(w, n.dom.size());
    return w;
}

size_t BinaryJoinTree::max_frame_size() const {
    size_t m = 1;
    for (const auto& n : nodes_)
        for (const auto& v : n.dom.variables()) m = std::max(m, v->frame_size());
    return m;
}

} // namespace anyva
