#include "graybox/linkage.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace graybox {

namespace {

struct Edge {
    double w;
    int g, h;
};

int find_root(std::vector<int>& up, int v) {
    while (up[static_cast<size_t>(v)] != v) {
        up[static_cast<size_t>(v)] = up[static_cast<size_t>(up[static_cast<size_t>(v)])];
        v = up[static_cast<size_t>(v)];
    }
    return v;
}

}  // namespace

LinkageForest build_forest(const InteractionGraph& weights, const std::vector<int>& universe) {
    std::vector<int> uni = universe;
    std::sort(uni.begin(), uni.end());
    uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
    for (int v : uni)
        if (v < 0 || v >= weights.n()) throw std::invalid_argument("build_forest: variable out of range");

    std::vector<LinkageNode> nodes;
    nodes.reserve(uni.size() * 2);
    // cluster[i]: current node id of the cluster containing uni[i].
    std::vector<int> up(uni.size());
    std::vector<int> cluster(uni.size());
    std::iota(up.begin(), up.end(), 0);
    for (size_t i = 0; i < uni.size(); ++i) {
        cluster[i] = static_cast<int>(nodes.size());
        nodes.push_back(LinkageNode{{uni[i]}, -1, -1, std::numeric_limits<double>::infinity()});
    }

    std::vector<Edge> edges;
    for (size_t i = 0; i < uni.size(); ++i)
        for (size_t j = i + 1; j < uni.size(); ++j) {
            double w = weights.at(uni[i], uni[j]);
            if (w > 0.0) edges.push_back({w, static_cast<int>(i), static_cast<int>(j)});
        }
    std::sort(edges.begin(), edges.end(), [&](const Edge& a, const Edge& b) {
        if (a.w != b.w) return a.w > b.w;
        if (uni[static_cast<size_t>(a.g)] != uni[static_cast<size_t>(b.g)])
            return uni[static_cast<size_t>(a.g)] < uni[static_cast<size_t>(b.g)];
        return uni[static_cast<size_t>(a.h)] < uni[static_cast<size_t>(b.h)];
    });

    for (const Edge& e : edges) {
        int rg = find_root(up, e.g);
        int rh = find_root(up, e.h);
        if (rg == rh) continue;
        int cg = cluster[static_cast<size_t>(rg)];
        int ch = cluster[static_cast<size_t>(rh)];
        LinkageNode merged;
        merged.variables.resize(nodes[static_cast<size_t>(cg)].variables.size() +
                                nodes[static_cast<size_t>(ch)].variables.size());
        std::merge(nodes[static_cast<size_t>(cg)].variables.begin(),
                   nodes[static_cast<size_t>(cg)].variables.end(),
                   nodes[static_cast<size_t>(ch)].variables.begin(),
                   nodes[static_cast<size_t>(ch)].variables.end(), merged.variables.begin());
        merged.left = cg;
        merged.right = ch;
        merged.merge_strength = e.w;
        up[static_cast<size_t>(rh)] = rg;
        cluster[static_cast<size_t>(rg)] = static_cast<int>(nodes.size());
        nodes.push_back(std::move(merged));
    }

    std::vector<int> roots;
    for (size_t i = 0; i < uni.size(); ++i)
        if (find_root(up, static_cast<int>(i)) == static_cast<int>(i))
            roots.push_back(cluster[i]);
    std::sort(roots.begin(), roots.end(), [&](int a, int b) {
        return nodes[static_cast<size_t>(a)].variables.front() <
               nodes[static_cast<size_t>(b)].variables.front();
    });
    return LinkageForest(std::move(nodes), std::move(roots), std::move(uni));
}

LinkageForest build_forest(const InteractionGraph& weights) {
    std::vector<int> uni(static_cast<size_t>(weights.n()));
    std::iota(uni.begin(), uni.end(), 0);
    return build_forest(weights, uni);
}

namespace {

Mask to_mask(const LinkageNode& node) {
    Mask m;
    m.reserve(node.variables.size());
    for (int v : node.variables) m.push_back(static_cast<uint16_t>(v));
    return m;
}

}  // namespace

std::vector<Mask> masks_lttop(const LinkageForest& forest) {
    size_t universe_size = forest.universe().size();
    bool multiple_trees = forest.tree_count() > 1;
    std::vector<Mask> out;
    for (int rid : forest.roots()) {
        const LinkageNode& root = forest.node(rid);
        if (!root.is_leaf()) {
            const LinkageNode& a = forest.node(root.left);
            const LinkageNode& b = forest.node(root.right);
            const LinkageNode* first = &a;
            const LinkageNode* second = &b;
            if (b.size() > a.size()) std::swap(first, second);
            for (const LinkageNode* child : {first, second})
                if (child->size() >= 2 && child->size() < universe_size) out.push_back(to_mask(*child));
        }
        if (multiple_trees && root.size() >= 2 && root.size() < universe_size)
            out.push_back(to_mask(root));
    }
    return out;
}

std::vector<Mask> masks_lbot(const LinkageForest& forest, Rng& rng) {
    std::vector<int> ids;
    for (size_t i = 0; i < forest.nodes().size(); ++i) {
        const LinkageNode& node = forest.node(static_cast<int>(i));
        if (node.size() < 2 || node.size() >= forest.universe().size()) continue;
        ids.push_back(static_cast<int>(i));
    }
    rng.shuffle(ids);
    std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
        return forest.node(a).size() < forest.node(b).size();
    });
    std::vector<Mask> out;
    out.reserve(ids.size());
    for (int id : ids) out.push_back(to_mask(forest.node(id)));
    return out;
}

}  // namespace graybox
