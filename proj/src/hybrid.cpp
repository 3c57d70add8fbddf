#include "polygrid/hybrid.hpp"

#include <algorithm>

namespace polygrid {

namespace {

IndexList expand_block_indices(const NodeSet& nodes, Index block_size) {
  IndexList indices;
  indices.reserve(nodes.size() * static_cast<std::size_t>(block_size));
  for (NodeId n : nodes) {
    for (Index k = 0; k < block_size; ++k) indices.push_back(n * block_size + k);
  }
  return indices;
}

}  // namespace

HybridMatrix hybrid_matrix(const BlockMatrix& y, const NodeSet& m, double rel_tol) {
  const Index p = y.block_size();
  if (m.empty() || static_cast<Index>(m.size()) >= y.node_count()) {
    throw Error(ErrorCode::InvalidSubset,
                "hybrid parameters require a proper non-empty node subset");
  }

  NodeSet m_sorted = m;
  std::sort(m_sorted.begin(), m_sorted.end());
  if (m_sorted.front() < 0 || m_sorted.back() >= y.node_count()) {
    throw Error(ErrorCode::UnknownNode, "hybrid subset: node id out of range");
  }
  if (std::adjacent_find(m_sorted.begin(), m_sorted.end()) != m_sorted.end()) {
    throw Error(ErrorCode::InvalidArgument, "hybrid subset: duplicate node id");
  }

  NodeSet complement;
  complement.reserve(static_cast<std::size_t>(y.node_count()) - m_sorted.size());
  auto it = m_sorted.begin();
  for (NodeId n = 0; n < y.node_count(); ++n) {
    if (it != m_sorted.end() && *it == n) {
      ++it;
    } else {
      complement.push_back(n);
    }
  }

  const IndexList mi = expand_block_indices(m_sorted, p);
  const IndexList ci = expand_block_indices(complement, p);

  Eigen::FullPivLU<ComplexMatrix> lu(y.data()(mi, mi));
  if (!factorization_invertible(lu, rel_tol)) {
    throw Error(ErrorCode::InfeasibleHybrid,
                "the diagonal subblock of the chosen subset is numerically singular");
  }

  HybridMatrix h;
  h.m_set = std::move(m_sorted);
  h.complement = std::move(complement);
  h.block_size = p;
  h.h_mm = lu.inverse();
  h.h_mmc = -lu.solve(y.data()(mi, ci));
  // Right division X = B A^{-1} through the materialized inverse.
  h.h_mcm = y.data()(ci, mi) * h.h_mm;
  h.h_mcmc = y.data()(ci, ci) + y.data()(ci, mi) * h.h_mmc;
  return h;
}

HybridResponse apply_hybrid(const HybridMatrix& h, const NodalVector& v_complement,
                            const NodalVector& i_m) {
  const Index p = h.block_size;
  if (v_complement.block_size != p ||
      v_complement.values.size() != static_cast<Index>(h.complement.size()) * p) {
    throw Error(ErrorCode::ShapeMismatch, "complement voltage vector has the wrong length");
  }
  if (i_m.block_size != p || i_m.values.size() != static_cast<Index>(h.m_set.size()) * p) {
    throw Error(ErrorCode::ShapeMismatch, "subset current vector has the wrong length");
  }
  HybridResponse out;
  out.i_complement = NodalVector{p, static_cast<Index>(h.complement.size()),
                                 h.h_mcm * i_m.values + h.h_mcmc * v_complement.values};
  out.v_m = NodalVector{p, static_cast<Index>(h.m_set.size()),
                        h.h_mm * i_m.values + h.h_mmc * v_complement.values};
  return out;
}

}  // namespace polygrid
