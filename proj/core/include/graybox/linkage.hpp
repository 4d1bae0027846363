#pragma once

// Linkage forests: single-linkage hierarchical clustering of variables under a
// weighted interaction graph, and the two mask-extraction strategies used by
// the mixing operators.

#include <limits>
#include <vector>

#include "rng.hpp"
#include "structure.hpp"
#include "walsh.hpp"

namespace graybox {

struct LinkageNode {
    std::vector<int> variables;  // ascending, 0-based
    int left = -1;               // child node ids; -1,-1 for leaves
    int right = -1;
    double merge_strength = std::numeric_limits<double>::infinity();

    bool is_leaf() const { return left < 0; }
    size_t size() const { return variables.size(); }
};

class LinkageForest {
public:
    LinkageForest() = default;
    LinkageForest(std::vector<LinkageNode> nodes, std::vector<int> roots, std::vector<int> universe)
        : nodes_(std::move(nodes)), roots_(std::move(roots)), universe_(std::move(universe)) {}

    const std::vector<LinkageNode>& nodes() const { return nodes_; }
    const LinkageNode& node(int id) const { return nodes_[static_cast<size_t>(id)]; }
    // Root node ids, ordered by each tree's smallest variable.
    const std::vector<int>& roots() const { return roots_; }
    const std::vector<int>& universe() const { return universe_; }
    int tree_count() const { return static_cast<int>(roots_.size()); }

private:
    std::vector<LinkageNode> nodes_;
    std::vector<int> roots_;
    std::vector<int> universe_;
};

// Single-linkage agglomerative clustering of `universe` under the positive
// weights of `weights`: repeatedly merge the two clusters joined by the
// strongest remaining edge (ties: smallest (g,h)); clusters never merge
// through zero-weight pairs, so the forest has one tree per connected
// component of the positive-weight subgraph. Realized as descending-weight
// Kruskal, which produces exactly the single-linkage merge sequence.
LinkageForest build_forest(const InteractionGraph& weights, const std::vector<int>& universe);

// Convenience: cluster all n variables.
LinkageForest build_forest(const InteractionGraph& weights);

// Top-of-tree masks: every child of every root, plus the roots themselves when
// the forest has more than one tree; masks of size 1 and masks equal to the
// whole universe are discarded. Order: per tree (in root order), children
// before the root, larger child first.
std::vector<Mask> masks_lttop(const LinkageForest& forest);

// Bottom-up masks: every node except size-1 nodes and nodes equal to the whole
// universe, in ascending size order with equal-size runs shuffled by `rng`.
std::vector<Mask> masks_lbot(const LinkageForest& forest, Rng& rng);

}  // namespace graybox
