#include "polygrid/graph.hpp"

#include <algorithm>
#include <queue>

namespace polygrid {

BranchGraph::BranchGraph(Index node_count, std::vector<DirectedEdge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ < 1) {
    throw Error(ErrorCode::InvalidArgument, "graph needs at least one node");
  }
  for (const DirectedEdge& e : edges_) {
    if (e.from < 0 || e.from >= node_count_ || e.to < 0 || e.to >= node_count_) {
      throw Error(ErrorCode::UnknownNode, "edge endpoint out of range");
    }
    if (e.from == e.to) {
      throw Error(ErrorCode::InvalidArgument, "self-loops are not representable; use a shunt");
    }
  }
}

ComplexMatrix BranchGraph::incidence_matrix() const {
  ComplexMatrix a = ComplexMatrix::Zero(edge_count(), node_count_);
  for (Index i = 0; i < edge_count(); ++i) {
    a(i, edges_[static_cast<std::size_t>(i)].from) = Complex(1.0, 0.0);
    a(i, edges_[static_cast<std::size_t>(i)].to) = Complex(-1.0, 0.0);
  }
  return a;
}

namespace {

// Undirected adjacency restricted to the given edge subset.
std::vector<std::vector<NodeId>> undirected_adjacency(Index node_count,
                                                      const std::vector<DirectedEdge>& edges) {
  std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(node_count));
  for (const DirectedEdge& e : edges) {
    adj[static_cast<std::size_t>(e.from)].push_back(e.to);
    adj[static_cast<std::size_t>(e.to)].push_back(e.from);
  }
  return adj;
}

Index count_components(Index node_count, const std::vector<std::vector<NodeId>>& adj) {
  std::vector<char> visited(static_cast<std::size_t>(node_count), 0);
  Index components = 0;
  for (NodeId start = 0; start < node_count; ++start) {
    if (visited[static_cast<std::size_t>(start)]) continue;
    ++components;
    std::queue<NodeId> frontier;
    frontier.push(start);
    visited[static_cast<std::size_t>(start)] = 1;
    while (!frontier.empty()) {
      NodeId v = frontier.front();
      frontier.pop();
      for (NodeId w : adj[static_cast<std::size_t>(v)]) {
        if (!visited[static_cast<std::size_t>(w)]) {
          visited[static_cast<std::size_t>(w)] = 1;
          frontier.push(w);
        }
      }
    }
  }
  return components;
}

}  // namespace

bool BranchGraph::is_weakly_connected() const { return weak_component_count() == 1; }

Index BranchGraph::weak_component_count() const {
  return count_components(node_count_, undirected_adjacency(node_count_, edges_));
}

std::vector<char> BranchGraph::membership(const NodeSet& w, bool allow_empty,
                                          const char* what) const {
  std::vector<char> member(static_cast<std::size_t>(node_count_), 0);
  for (NodeId n : w) {
    if (n < 0 || n >= node_count_) {
      throw Error(ErrorCode::UnknownNode, std::string(what) + ": node id out of range");
    }
    if (member[static_cast<std::size_t>(n)]) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + ": duplicate node id");
    }
    member[static_cast<std::size_t>(n)] = 1;
  }
  if (!allow_empty && w.empty()) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + ": empty node set");
  }
  return member;
}

EdgeIndexSet BranchGraph::internal_edges(const NodeSet& w) const {
  const std::vector<char> member = membership(w, true, "internal_edges");
  EdgeIndexSet result;
  for (Index i = 0; i < edge_count(); ++i) {
    const DirectedEdge& e = edges_[static_cast<std::size_t>(i)];
    if (member[static_cast<std::size_t>(e.from)] && member[static_cast<std::size_t>(e.to)]) {
      result.push_back(i);
    }
  }
  return result;
}

EdgeIndexSet BranchGraph::cut_set(const NodeSet& w) const {
  const std::vector<char> member = membership(w, true, "cut_set");
  if (w.empty() || static_cast<Index>(w.size()) == node_count_) {
    throw Error(ErrorCode::InvalidCut, "cut requires a proper non-empty node subset");
  }
  EdgeIndexSet result;
  for (Index i = 0; i < edge_count(); ++i) {
    const DirectedEdge& e = edges_[static_cast<std::size_t>(i)];
    if (member[static_cast<std::size_t>(e.from)] && !member[static_cast<std::size_t>(e.to)]) {
      result.push_back(i);
    }
  }
  return result;
}

std::vector<NodeSet> BranchGraph::induced_components(const NodeSet& m) const {
  const std::vector<char> member = membership(m, false, "induced_components");

  std::vector<DirectedEdge> internal;
  for (Index i : internal_edges(m)) {
    internal.push_back(edges_[static_cast<std::size_t>(i)]);
  }
  const auto adj = undirected_adjacency(node_count_, internal);

  NodeSet sorted = m;
  std::sort(sorted.begin(), sorted.end());

  std::vector<char> visited(static_cast<std::size_t>(node_count_), 0);
  std::vector<NodeSet> parts;
  for (NodeId seed : sorted) {
    if (visited[static_cast<std::size_t>(seed)]) continue;
    NodeSet part;
    std::queue<NodeId> frontier;
    frontier.push(seed);
    visited[static_cast<std::size_t>(seed)] = 1;
    while (!frontier.empty()) {
      NodeId v = frontier.front();
      frontier.pop();
      part.push_back(v);
      for (NodeId w : adj[static_cast<std::size_t>(v)]) {
        if (!visited[static_cast<std::size_t>(w)]) {
          visited[static_cast<std::size_t>(w)] = 1;
          frontier.push(w);
        }
      }
    }
    std::sort(part.begin(), part.end());
    parts.push_back(std::move(part));
  }
  return parts;
}

}  // namespace polygrid
