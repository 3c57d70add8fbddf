#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "polygrid/graph.hpp"
#include "polygrid/params.hpp"

namespace polygrid {

class GridModelBuilder;

/**
 * Immutable polyphase grid model: the branch graph over all polyphase nodes
 * (physical first, then the virtual center nodes of installed T-sections),
 * one compound branch impedance per edge, and one compound shunt admittance
 * per node (possibly zero). Construction through GridModelBuilder enforces
 * the parameter requirements, so a GridModel in hand is always conformant.
 */
class GridModel {
 public:
  Index phase_count() const noexcept { return phase_count_; }
  Index node_count() const noexcept { return graph_.node_count(); }
  const std::vector<std::string>& node_names() const noexcept { return node_names_; }
  const std::string& node_name(NodeId n) const;
  bool is_virtual(NodeId n) const;
  Index virtual_node_count() const;

  /// Resolves a node name; throws UnknownNode when absent.
  NodeId node_index(std::string_view name) const;
  std::optional<NodeId> find_node(std::string_view name) const;

  const BranchGraph& branch_graph() const noexcept { return graph_; }
  const std::vector<CompoundBranchImpedance>& branch_impedances() const noexcept {
    return branch_impedances_;
  }
  const std::vector<CompoundShuntAdmittance>& shunt_admittances() const noexcept {
    return shunt_admittances_;
  }

  bool all_shunts_zero() const;
  bool all_branches_strictly_passive() const;

  bool operator==(const GridModel& other) const;

 private:
  friend class GridModelBuilder;
  GridModel() : graph_(1, {}) {}

  Index phase_count_ = 1;
  std::vector<std::string> node_names_;
  std::vector<char> virtual_flags_;
  BranchGraph graph_;
  std::vector<CompoundBranchImpedance> branch_impedances_;
  std::vector<CompoundShuntAdmittance> shunt_admittances_;
  std::unordered_map<std::string, NodeId> name_index_;
};

/**
 * Incremental construction of a GridModel. Nodes added explicitly are
 * physical; every installed T-section contributes one virtual center node,
 * and all virtual nodes are appended after the physical ones when build()
 * runs, so the node ordering is physical-then-virtual regardless of the
 * call sequence. T-section center nodes are named "<from>__<to>__T<k>" with
 * k counting installed T-sections from zero.
 */
class GridModelBuilder {
 public:
  explicit GridModelBuilder(Index phase_count);

  NodeId add_node(std::string name);
  NodeId add_node(std::string name, CompoundShuntAdmittance shunt);

  /// Adds a node carrying an explicit virtual marker, as found in emitted
  /// documents whose T-sections were already expanded.
  NodeId add_node(std::string name, CompoundShuntAdmittance shunt, bool virtual_node);

  Index add_branch(NodeId from, NodeId to, CompoundBranchImpedance impedance);
  Index add_branch(std::string_view from, std::string_view to,
                   CompoundBranchImpedance impedance);

  /// Installs a T-section between two existing nodes: one virtual node plus
  /// two branches plus the center shunt. Returns the generated center name.
  std::string add_tee(std::string_view from, std::string_view to, TeeSection section);

  GridModel build() &&;

 private:
  NodeId lookup(std::string_view name) const;
  void check_phase_count(Index got, const char* what) const;

  struct PendingBranch {
    NodeId from;
    NodeId to;
    CompoundBranchImpedance impedance;
  };
  struct PendingTee {
    NodeId from;
    NodeId to;
    std::string center_name;
    TeeSection section;
  };

  Index phase_count_;
  std::vector<std::string> names_;
  std::vector<char> virtual_flags_;
  std::vector<CompoundShuntAdmittance> shunts_;
  std::vector<PendingBranch> branches_;
  std::vector<PendingTee> tees_;
  std::unordered_map<std::string, NodeId> name_index_;
};

/**
 * Complex matrix partitioned into |P| x |P| blocks indexed by polyphase node
 * pairs; block (m, n) occupies rows m|P|..(m+1)|P| and columns n|P|..(n+1)|P|.
 */
class BlockMatrix {
 public:
  BlockMatrix(Index block_size, Index node_count, ComplexMatrix data);

  Index block_size() const noexcept { return block_size_; }
  Index node_count() const noexcept { return node_count_; }
  const ComplexMatrix& data() const noexcept { return data_; }

  /// Copy of the (m, n) block; UnknownNode when out of range.
  ComplexMatrix block(NodeId m, NodeId n) const;

  /// Blocks gathered in ascending node order: (|rows||P|) x (|cols||P|).
  ComplexMatrix subblock(const NodeSet& rows, const NodeSet& cols) const;

 private:
  Index block_size_;
  Index node_count_;
  ComplexMatrix data_;
};

/// Stacked per-node polyphase quantities (voltages or currents).
struct NodalVector {
  Index block_size = 1;
  Index node_count = 0;
  ComplexVector values;

  Eigen::VectorBlock<const ComplexVector> block(NodeId n) const {
    return values.segment(n * block_size, block_size);
  }
};

/// Block-diagonal matrix of the branch admittances, one inverted compound
/// impedance per edge in edge order. A numerically singular impedance raises
/// SingularBranch.
ComplexMatrix primitive_branch_admittance(const GridModel& model);

/**
 * Compound nodal admittance matrix: the polyphase incidence quadratic form
 * over the primitive branch admittances plus the block-diagonal shunt terms.
 * Complex-symmetric whenever all parameters are.
 */
BlockMatrix assemble(const GridModel& model);

/// I = Y V.
NodalVector apply_ohm(const BlockMatrix& y, const NodalVector& v);

/// Per-node residuals of the row/column block-sum identity: summing the
/// blocks of one block row (or column) of Y must reproduce that node's shunt
/// admittance.
struct ShuntSumReport {
  std::vector<double> row_residuals;
  std::vector<double> col_residuals;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

ShuntSumReport check_shunt_sum_lemma(const GridModel& model, const BlockMatrix& y,
                                     double tol);

/// Predicted-versus-measured rank comparison.
struct RankReport {
  Index predicted_rank = 0;
  Index measured_rank = 0;
  bool agrees = false;
  double tolerance_used = 0.0;
  bool forced = false;
};

/**
 * Whole-matrix rank check: a weakly connected conformant grid has rank
 * (|N|-1)|P| when every shunt is zero and full rank |N||P| otherwise. The
 * prediction is conditional on weak connectivity, so a disconnected graph is
 * refused with PreconditionViolated unless `force` is set (the measured rank
 * is then still reported and `agrees` may be false).
 */
RankReport rank_report(const GridModel& model, double rel_tol = kDefaultRankRelTol,
                       bool force = false);

/**
 * Diagonal-subblock rank check for a proper non-empty node subset: with a
 * weakly connected graph and strictly passive branches the subblock has full
 * rank |M||P|. Violated preconditions refuse with PreconditionViolated
 * ("not_weakly_connected" / "not_strictly_passive") unless forced; m equal
 * to the whole node set raises InvalidSubset.
 */
RankReport block_rank_report(const GridModel& model, const NodeSet& m,
                             double rel_tol = kDefaultRankRelTol, bool force = false);

}  // namespace polygrid
