#pragma once

#include <vector>

#include "polygrid/linalg.hpp"

namespace polygrid {

using NodeId = Index;

/// Node sets are plain id lists; operations treat them as sets (order and
/// duplicates are validated at the call boundary).
using NodeSet = std::vector<NodeId>;
using EdgeIndexSet = std::vector<Index>;

/// Directed edge between two distinct polyphase nodes. The edge index is its
/// position in the owning graph's edge list.
struct DirectedEdge {
  NodeId from = 0;
  NodeId to = 0;

  bool operator==(const DirectedEdge&) const = default;
};

/**
 * Directed multigraph of the polyphase branches. Ground is deliberately not
 * a vertex; shunt elements live on the grid model, so the audit constructions
 * can introduce ground as an ordinary node when they need it. Parallel edges
 * are allowed and keep separate incidence rows. The edge order is fixed at
 * construction and defines the row order of the incidence matrix.
 */
class BranchGraph {
 public:
  BranchGraph(Index node_count, std::vector<DirectedEdge> edges);

  Index node_count() const noexcept { return node_count_; }
  const std::vector<DirectedEdge>& edges() const noexcept { return edges_; }
  Index edge_count() const noexcept { return static_cast<Index>(edges_.size()); }

  /// Edge-to-vertex incidence matrix: |L| x |N| with +1 at (i, from(e_i)) and
  /// -1 at (i, to(e_i)). A graph without edges yields a 0 x |N| matrix.
  ComplexMatrix incidence_matrix() const;

  /// True iff the undirected version of the graph is a single component.
  bool is_weakly_connected() const;

  /// Number of weakly connected components.
  Index weak_component_count() const;

  /// Indices of edges with both endpoints in w, ascending.
  EdgeIndexSet internal_edges(const NodeSet& w) const;

  /// Indices of edges leaving w into its complement (directed). The reverse
  /// cut is obtained by calling with the complement set. w must be a proper
  /// non-empty subset (InvalidCut otherwise).
  EdgeIndexSet cut_set(const NodeSet& w) const;

  /// Partition of m into parts that are weakly connected within the subgraph
  /// induced by m and mutually disconnected there. Parts are ordered by their
  /// smallest member; members ascend within each part.
  std::vector<NodeSet> induced_components(const NodeSet& m) const;

  bool operator==(const BranchGraph&) const = default;

 private:
  std::vector<char> membership(const NodeSet& w, bool allow_empty, const char* what) const;

  Index node_count_ = 0;
  std::vector<DirectedEdge> edges_;
};

}  // namespace polygrid
