#pragma once

#include <cstdint>

#include "polygrid/admittance.hpp"

namespace polygrid {

/**
 * Result of eliminating a set of zero-injection nodes: the Schur-complement
 * reduced matrix over the retained nodes plus the linear map that recovers
 * the eliminated voltages from the retained ones.
 */
class ReducedGrid {
 public:
  ReducedGrid(NodeSet retained, NodeSet eliminated, BlockMatrix reduced,
              ComplexMatrix elimination_map);

  /// Retained node ids (ascending, in the original numbering).
  const NodeSet& retained_nodes() const noexcept { return retained_; }
  /// Eliminated node ids (ascending); rows of the elimination map.
  const NodeSet& eliminated_nodes() const noexcept { return eliminated_; }
  const BlockMatrix& reduced_matrix() const noexcept { return reduced_; }
  /// (|Z||P|) x (|retained||P|) map: V_Z = map * V_retained.
  const ComplexMatrix& elimination_map() const noexcept { return map_; }

 private:
  NodeSet retained_;
  NodeSet eliminated_;
  BlockMatrix reduced_;
  ComplexMatrix map_;
};

/**
 * Kron reduction of the nodes in z: the reduced matrix is the Schur
 * complement of the z-diagonal subblock, computed by factor-and-solve (no
 * explicit inverse). A numerically singular subblock raises
 * InfeasibleReduction; eliminating every node raises InvalidSubset.
 */
ReducedGrid kron_reduce(const BlockMatrix& y, const NodeSet& z,
                        double rel_tol = kDefaultRankRelTol);

/// V_Z = elimination_map * V_retained.
NodalVector recover_voltages(const ReducedGrid& rg, const NodalVector& v_retained);

/**
 * Reduces the parts one after another, each stage applying kron_reduce to
 * the output of the previous one. Parts must be disjoint and their union a
 * proper subset of the nodes. Stage failures rethrow the underlying error
 * tagged with the stage index. The final elimination map covers the union of
 * all parts (rows ascending) and is composed by back-substitution through
 * the stages.
 */
ReducedGrid sequential_reduce(const BlockMatrix& y, const std::vector<NodeSet>& parts,
                              double rel_tol = kDefaultRankRelTol);

/// Residuals from replaying the reduction against the full system.
struct ReductionCheck {
  Index trials = 0;
  double max_eliminated_current = 0.0;
  double max_retained_mismatch = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/**
 * Draws random retained voltages, recovers the eliminated ones, and pushes
 * the full vector through the unreduced matrix: the eliminated nodes must
 * see (numerically) zero injected current and the retained currents must
 * match the reduced matrix times the retained voltages. Residuals are
 * relative to the problem scale.
 */
ReductionCheck verify_reduction(const GridModel& model, const ReducedGrid& rg, Index trials,
                                double tol, std::uint64_t seed = 0);

}  // namespace polygrid
