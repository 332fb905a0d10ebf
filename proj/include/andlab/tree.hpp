// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace andlab {

enum class TreeKind { BetheTruncation, CanopyTruncation };

/// Branching number K, block radius m0, truncation depth L.
struct TreeParams {
    int K = 2;
    int m0 = 1;
    int L = 1;

    void validate() const;
    /// Strict tiling on the Bethe truncation needs L == m0 (mod m0+1).
    bool strict_bethe_depth() const { return L % (m0 + 1) == m0 % (m0 + 1); }
    /// rank of a non-root block projection, M0 = (K^{m0+1}-1)/(K-1)
    std::int64_t block_rank() const;
};

/// Level-order index of a finite rooted tree.  Vertex 0 is the root
/// (the tree root for Bethe truncations, the top vertex for canopy
/// truncations); children of every vertex are contiguous ids.
///
/// `depth` follows the convention of the model: distance from the root
/// for Bethe truncations, distance from the boundary layer for canopy
/// truncations.
struct TreeIndex {
    TreeKind kind = TreeKind::BetheTruncation;
    int K = 2;
    int truncation_depth = 0;  // L (Bethe) or D (canopy)
    int n_vertices = 0;
    std::vector<int> parent;       // -1 for the root
    std::vector<int> first_child;  // first child id, or n_vertices if leaf
    std::vector<int> child_count;
    std::vector<int> depth;

    /// children of v are the contiguous ids [child_begin(v), child_end(v))
    int child_begin(int v) const { return first_child[static_cast<std::size_t>(v)]; }
    int child_end(int v) const {
        return first_child[static_cast<std::size_t>(v)] + child_count[static_cast<std::size_t>(v)];
    }
    /// distance from vertex 0 (equals depth for Bethe truncations)
    int level(int v) const {
        return kind == TreeKind::BetheTruncation ? depth[v]
                                                 : truncation_depth - depth[v];
    }
    int degree(int v) const { return child_count[v] + (v == 0 ? 0 : 1); }
    void check_vertex(int v) const;
};

TreeIndex build_bethe_truncation(const TreeParams& params);
TreeIndex build_canopy_truncation(const TreeParams& params, int depth_D);

/// Graph distance (edge count of the unique path).
int dist(const TreeIndex& tree, int x, int y);

/// True iff y is an ancestor-or-equal of x, i.e. dist(0,x) = dist(0,y) + dist(y,x).
bool is_forward(const TreeIndex& tree, int y, int x);

/// Partition of the vertex set into blocks headed by the index set J
/// (Bethe) or J_C (canopy).  Block members are forward balls of radius
/// m0 off the head (backward balls toward the boundary on the canopy),
/// intersected with the truncation.
struct BlockTiling {
    int m0 = 0;
    bool strict = true;
    std::vector<int> heads;                 // ascending vertex ids
    std::vector<int> block_of;              // per-vertex block index
    std::vector<std::vector<int>> members;  // per-block sorted ids, members[b][0] == head

    int n_blocks() const { return static_cast<int>(heads.size()); }
    int head_of(int vertex) const { return heads[block_of[vertex]]; }
};

BlockTiling block_tiling(const TreeIndex& tree, int m0, bool strict = true);

/// N_y: neighbours of y lying outside y's block.
std::vector<int> outside_neighbors(const TreeIndex& tree, const BlockTiling& tiling, int y);

nlohmann::ordered_json geometry_json(const TreeIndex& tree, const BlockTiling* tiling = nullptr);

}  // namespace andlab
