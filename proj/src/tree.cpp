// SPDX-License-Identifier: Apache-2.0
#include "andlab/tree.hpp"

#include <algorithm>

namespace andlab {

void TreeParams::validate() const {
    if (K < 2) throw std::invalid_argument("TreeParams: K must be >= 2");
    if (m0 < 0) throw std::invalid_argument("TreeParams: m0 must be >= 0");
    if (L < 0) throw std::invalid_argument("TreeParams: L must be >= 0");
}

std::int64_t TreeParams::block_rank() const {
    std::int64_t r = 0, p = 1;
    for (int i = 0; i <= m0; ++i) {
        r += p;
        p *= K;
    }
    return r;
}

void TreeIndex::check_vertex(int v) const {
    if (v < 0 || v >= n_vertices) throw std::out_of_range("vertex id out of range");
}

namespace {

// Builds the level-order arrays for a rooted tree where the root has
// `root_children` children and every other internal vertex has K, down
// to `levels` levels below the root.
TreeIndex build_regular(int K, int root_children, int levels) {
    TreeIndex t;
    t.K = K;
    std::int64_t n = 1, layer = root_children;
    for (int d = 1; d <= levels; ++d) {
        n += layer;
        layer *= K;
    }
    if (n > (std::int64_t{1} << 31) - 1)
        throw std::invalid_argument("tree too large");
    t.n_vertices = static_cast<int>(n);
    t.parent.assign(static_cast<std::size_t>(n), -1);
    t.first_child.assign(static_cast<std::size_t>(n), t.n_vertices);
    t.child_count.assign(static_cast<std::size_t>(n), 0);
    t.depth.assign(static_cast<std::size_t>(n), 0);

    int next = 1;
    // level-order: assign children of v immediately in id order
    for (int v = 0; v < t.n_vertices; ++v) {
        int d = t.depth[v];
        if (d == levels) continue;
        int c = (v == 0) ? root_children : K;
        t.first_child[v] = next;
        t.child_count[v] = c;
        for (int i = 0; i < c; ++i) {
            t.parent[static_cast<std::size_t>(next)] = v;
            t.depth[static_cast<std::size_t>(next)] = d + 1;
            ++next;
        }
    }
    return t;
}

}  // namespace

TreeIndex build_bethe_truncation(const TreeParams& params) {
    params.validate();
    TreeIndex t = build_regular(params.K, params.K + 1, params.L);
    t.kind = TreeKind::BetheTruncation;
    t.truncation_depth = params.L;
    return t;
}

TreeIndex build_canopy_truncation(const TreeParams& params, int depth_D) {
    params.validate();
    if (depth_D < 0) throw std::invalid_argument("canopy depth must be >= 0");
    TreeIndex t = build_regular(params.K, depth_D > 0 ? params.K : 0, depth_D);
    t.kind = TreeKind::CanopyTruncation;
    t.truncation_depth = depth_D;
    // depth = distance to the boundary layer
    for (auto& d : t.depth) d = depth_D - d;
    return t;
}

int dist(const TreeIndex& tree, int x, int y) {
    tree.check_vertex(x);
    tree.check_vertex(y);
    int lx = tree.level(x), ly = tree.level(y), d = 0;
    while (lx > ly) { x = tree.parent[static_cast<std::size_t>(x)]; --lx; ++d; }
    while (ly > lx) { y = tree.parent[static_cast<std::size_t>(y)]; --ly; ++d; }
    while (x != y) {
        x = tree.parent[static_cast<std::size_t>(x)];
        y = tree.parent[static_cast<std::size_t>(y)];
        d += 2;
    }
    return d;
}

bool is_forward(const TreeIndex& tree, int y, int x) {
    if (tree.kind != TreeKind::BetheTruncation)
        throw std::invalid_argument("is_forward is defined on Bethe truncations");
    tree.check_vertex(x);
    tree.check_vertex(y);
    int lx = tree.level(x), ly = tree.level(y);
    while (lx > ly) { x = tree.parent[static_cast<std::size_t>(x)]; --lx; }
    return x == y;
}

BlockTiling block_tiling(const TreeIndex& tree, int m0, bool strict) {
    if (m0 < 0) throw std::invalid_argument("block_tiling: m0 must be >= 0");
    const int period = m0 + 1;
    BlockTiling tiling;
    tiling.m0 = m0;
    tiling.strict = strict;

    auto is_head = [&](int v) {
        if (tree.kind == TreeKind::BetheTruncation)
            return tree.depth[v] % period == 0;
        return tree.depth[v] % period == m0 % period;
    };
    if (strict) {
        const int D = tree.truncation_depth;
        bool ok = tree.kind == TreeKind::BetheTruncation ? (D % period == m0 % period)
                                                         : (D % period == m0 % period);
        if (!ok)
            throw std::invalid_argument(
                "block_tiling: strict mode requires depth == m0 (mod m0+1)");
    }

    tiling.block_of.assign(static_cast<std::size_t>(tree.n_vertices), -1);
    // Every non-head vertex joins the block of its nearest head ancestor;
    // level order guarantees the ancestor is already assigned.  In
    // non-strict mode a canopy top segment with no head above it becomes
    // a clipped block headed by the top vertex.
    for (int v = 0; v < tree.n_vertices; ++v) {
        const auto sv = static_cast<std::size_t>(v);
        const int p = tree.parent[sv];
        if (is_head(v) || p < 0) {
            tiling.heads.push_back(v);
            tiling.members.emplace_back();
            tiling.members.back().push_back(v);
            tiling.block_of[sv] = tiling.n_blocks() - 1;
        } else {
            const int b = tiling.block_of[static_cast<std::size_t>(p)];
            tiling.block_of[sv] = b;
            tiling.members[static_cast<std::size_t>(b)].push_back(v);
        }
    }
    for (auto& m : tiling.members) std::sort(m.begin(), m.end());
    return tiling;
}

std::vector<int> outside_neighbors(const TreeIndex& tree, const BlockTiling& tiling, int y) {
    tree.check_vertex(y);
    std::vector<int> out;
    const int b = tiling.block_of[static_cast<std::size_t>(y)];
    if (y != 0 && tiling.block_of[static_cast<std::size_t>(tree.parent[static_cast<std::size_t>(y)])] != b)
        out.push_back(tree.parent[static_cast<std::size_t>(y)]);
    for (int c = tree.first_child[static_cast<std::size_t>(y)],
             e = c + tree.child_count[static_cast<std::size_t>(y)];
         c < e; ++c)
        if (tiling.block_of[static_cast<std::size_t>(c)] != b) out.push_back(c);
    return out;
}

nlohmann::ordered_json geometry_json(const TreeIndex& tree, const BlockTiling* tiling) {
    nlohmann::ordered_json j;
    j["kind"] = tree.kind == TreeKind::BetheTruncation ? "bethe" : "canopy";
    j["K"] = tree.K;
    j["depth"] = tree.truncation_depth;
    j["n_vertices"] = tree.n_vertices;
    j["parent"] = tree.parent;
    j["vertex_depth"] = tree.depth;
    if (tiling) {
        j["m0"] = tiling->m0;
        j["strict"] = tiling->strict;
        j["n_blocks"] = tiling->n_blocks();
        j["heads"] = tiling->heads;
        std::vector<int> sizes;
        sizes.reserve(tiling->members.size());
        for (const auto& m : tiling->members) sizes.push_back(static_cast<int>(m.size()));
        j["block_sizes"] = sizes;
    }
    return j;
}

}  // namespace andlab
