#ifndef ANYVA_JOINTREE_HPP
#define ANYVA_JOINTREE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "potential.hpp"

namespace anyva {

struct BJTNode {
    enum class Kind : uint8_t { leaf, internal };

    uint32_t id = 0;
    Kind kind = Kind::leaf;
    Domain dom;
    int32_t left = -1;   // internal only
    int32_t right = -1;  // internal only
    int32_t parent = -1; // -1 for the root
    uint32_t factor_index = 0; // leaf only: index into the knowledgebase
};

// Covering binary join tree for a knowledgebase and query. Leaves carry the
// knowledgebase valuations in input order; internal nodes are appended in
// construction order, which is also a valid bottom-up processing order.
class BinaryJoinTree {
public:
    // min-fill elimination ordering (ties by variable name), then fusion:
    // factors mentioning the eliminated variable are combined in a
    // left-leaning binary comb. Query variables are never eliminated.
    static BinaryJoinTree build(const std::vector<Potential>& knowledgebase, const Domain& query);

    size_t node_count() const { return nodes_.size(); }
    size_t leaf_count() const { return leaf_count_; }
    const BJTNode& node(uint32_t id) const { return nodes_[id]; }
    uint32_t root() const { return root_; }
    const Domain& query() const { return query_; }
    const std::vector<uint32_t>& bottom_up_order() const { return bottom_up_; }

    // Variables eliminated when n sends its message: d(n)\d(P(n)), and
    // d(root)\X at the root.
    Domain delta(uint32_t id) const;

    // Unprocessed internal nodes whose children are both processed,
    // ascending by node id.
    std::vector<uint32_t> next(const std::vector<bool>& processed) const;

    // One node per line: id, kind, domain, children. Used by golden tests.
    std::string outline() const;
    uint64_t structural_hash() const;

    // Width measure used for the m^omega configuration-space bound: the
    // largest node domain size.
    size_t width() const;
    size_t max_frame_size() const;

private:
    std::vector<BJTNode> nodes_;
    uint32_t root_ = 0;
    Domain query_;
    size_t leaf_count_ = 0;
    std::vector<uint32_t> bottom_up_;
};

} // namespace anyva

#endif
