#include "polygrid/admittance.hpp"

#include <algorithm>
#include <utility>

namespace polygrid {

const std::string& GridModel::node_name(NodeId n) const {
  if (n < 0 || n >= node_count()) {
    throw Error(ErrorCode::UnknownNode, "node id out of range");
  }
  return node_names_[static_cast<std::size_t>(n)];
}

bool GridModel::is_virtual(NodeId n) const {
  if (n < 0 || n >= node_count()) {
    throw Error(ErrorCode::UnknownNode, "node id out of range");
  }
  return virtual_flags_[static_cast<std::size_t>(n)] != 0;
}

Index GridModel::virtual_node_count() const {
  return std::count(virtual_flags_.begin(), virtual_flags_.end(), 1);
}

NodeId GridModel::node_index(std::string_view name) const {
  if (auto found = find_node(name)) return *found;
  throw Error(ErrorCode::UnknownNode, "no node named '" + std::string(name) + "'");
}

std::optional<NodeId> GridModel::find_node(std::string_view name) const {
  auto it = name_index_.find(std::string(name));
  if (it == name_index_.end()) return std::nullopt;
  return it->second;
}

bool GridModel::all_shunts_zero() const {
  return std::all_of(shunt_admittances_.begin(), shunt_admittances_.end(),
                     [](const CompoundShuntAdmittance& y) { return y.is_zero(); });
}

bool GridModel::all_branches_strictly_passive() const {
  return std::all_of(branch_impedances_.begin(), branch_impedances_.end(),
                     [](const CompoundBranchImpedance& z) { return z.strictly_passive(); });
}

bool GridModel::operator==(const GridModel& other) const {
  return phase_count_ == other.phase_count_ && node_names_ == other.node_names_ &&
         virtual_flags_ == other.virtual_flags_ && graph_ == other.graph_ &&
         branch_impedances_ == other.branch_impedances_ &&
         shunt_admittances_ == other.shunt_admittances_;
}

GridModelBuilder::GridModelBuilder(Index phase_count) : phase_count_(phase_count) {
  if (phase_count_ < 1) {
    throw Error(ErrorCode::InvalidPhaseCount, "phase count must be at least 1");
  }
}

void GridModelBuilder::check_phase_count(Index got, const char* what) const {
  if (got != phase_count_) {
    throw Error(ErrorCode::ShapeMismatch,
                std::string(what) + " must be " + std::to_string(phase_count_) + "-phase");
  }
}

NodeId GridModelBuilder::add_node(std::string name) {
  return add_node(std::move(name), CompoundShuntAdmittance::zero(phase_count_), false);
}

NodeId GridModelBuilder::add_node(std::string name, CompoundShuntAdmittance shunt) {
  return add_node(std::move(name), std::move(shunt), false);
}

NodeId GridModelBuilder::add_node(std::string name, CompoundShuntAdmittance shunt,
                                  bool virtual_node) {
  check_phase_count(shunt.phase_count(), "node shunt");
  if (name_index_.contains(name)) {
    throw Error(ErrorCode::InvalidArgument, "duplicate node name '" + name + "'");
  }
  const NodeId id = static_cast<NodeId>(names_.size());
  name_index_.emplace(name, id);
  names_.push_back(std::move(name));
  virtual_flags_.push_back(virtual_node ? 1 : 0);
  shunts_.push_back(std::move(shunt));
  return id;
}

NodeId GridModelBuilder::lookup(std::string_view name) const {
  auto it = name_index_.find(std::string(name));
  if (it == name_index_.end()) {
    throw Error(ErrorCode::UnknownNode, "no node named '" + std::string(name) + "'");
  }
  return it->second;
}

Index GridModelBuilder::add_branch(NodeId from, NodeId to, CompoundBranchImpedance impedance) {
  check_phase_count(impedance.phase_count(), "branch impedance");
  const NodeId limit = static_cast<NodeId>(names_.size());
  if (from < 0 || from >= limit || to < 0 || to >= limit) {
    throw Error(ErrorCode::UnknownNode, "branch endpoint out of range");
  }
  if (from == to) {
    throw Error(ErrorCode::InvalidArgument, "branch endpoints must differ");
  }
  branches_.push_back({from, to, std::move(impedance)});
  return static_cast<Index>(branches_.size() - 1);
}

Index GridModelBuilder::add_branch(std::string_view from, std::string_view to,
                                   CompoundBranchImpedance impedance) {
  return add_branch(lookup(from), lookup(to), std::move(impedance));
}

std::string GridModelBuilder::add_tee(std::string_view from, std::string_view to,
                                      TeeSection section) {
  check_phase_count(section.primary_impedance.phase_count(), "T-section primary impedance");
  check_phase_count(section.secondary_impedance.phase_count(), "T-section secondary impedance");
  check_phase_count(section.center_shunt.phase_count(), "T-section center shunt");
  const NodeId from_id = lookup(from);
  const NodeId to_id = lookup(to);
  std::string center = std::string(from) + "__" + std::string(to) + "__T" +
                       std::to_string(tees_.size());
  if (name_index_.contains(center)) {
    throw Error(ErrorCode::InvalidArgument, "generated center name '" + center + "' collides");
  }
  tees_.push_back({from_id, to_id, center, std::move(section)});
  return center;
}

GridModel GridModelBuilder::build() && {
  if (names_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "a grid model needs at least one node");
  }

  // Virtual center nodes go after all physical nodes; their names were
  // reserved but not assigned ids until now.
  for (PendingTee& tee : tees_) {
    if (name_index_.contains(tee.center_name)) {
      throw Error(ErrorCode::InvalidArgument,
                  "node name '" + tee.center_name + "' collides with a T-section center");
    }
    const NodeId center = static_cast<NodeId>(names_.size());
    name_index_.emplace(tee.center_name, center);
    names_.push_back(tee.center_name);
    virtual_flags_.push_back(1);
    shunts_.push_back(tee.section.center_shunt);
    branches_.push_back({tee.from, center, tee.section.primary_impedance});
    branches_.push_back({center, tee.to, tee.section.secondary_impedance});
  }

  std::vector<DirectedEdge> edges;
  std::vector<CompoundBranchImpedance> impedances;
  edges.reserve(branches_.size());
  impedances.reserve(branches_.size());
  for (PendingBranch& b : branches_) {
    edges.push_back({b.from, b.to});
    impedances.push_back(std::move(b.impedance));
  }

  GridModel model;
  model.phase_count_ = phase_count_;
  model.graph_ = BranchGraph(static_cast<Index>(names_.size()), std::move(edges));
  model.node_names_ = std::move(names_);
  model.virtual_flags_ = std::move(virtual_flags_);
  model.branch_impedances_ = std::move(impedances);
  model.shunt_admittances_ = std::move(shunts_);
  model.name_index_ = std::move(name_index_);
  return model;
}

BlockMatrix::BlockMatrix(Index block_size, Index node_count, ComplexMatrix data)
    : block_size_(block_size), node_count_(node_count), data_(std::move(data)) {
  if (block_size_ < 1 || node_count_ < 1) {
    throw Error(ErrorCode::InvalidArgument, "block size and node count must be positive");
  }
  if (data_.rows() != node_count_ * block_size_ || data_.cols() != data_.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "block matrix data has the wrong shape");
  }
}

ComplexMatrix BlockMatrix::block(NodeId m, NodeId n) const {
  if (m < 0 || m >= node_count_ || n < 0 || n >= node_count_) {
    throw Error(ErrorCode::UnknownNode, "block index out of range");
  }
  return data_.block(m * block_size_, n * block_size_, block_size_, block_size_);
}

namespace {

NodeSet sorted_unique_nodes(const NodeSet& set, Index node_count, const char* what) {
  if (set.empty()) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + ": empty node set");
  }
  NodeSet sorted = set;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0 || sorted.back() >= node_count) {
    throw Error(ErrorCode::UnknownNode, std::string(what) + ": node id out of range");
  }
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + ": duplicate node id");
  }
  return sorted;
}

IndexList expand_block_indices(const NodeSet& nodes, Index block_size) {
  IndexList indices;
  indices.reserve(nodes.size() * static_cast<std::size_t>(block_size));
  for (NodeId n : nodes) {
    for (Index k = 0; k < block_size; ++k) indices.push_back(n * block_size + k);
  }
  return indices;
}

}  // namespace

ComplexMatrix BlockMatrix::subblock(const NodeSet& rows, const NodeSet& cols) const {
  const NodeSet r = sorted_unique_nodes(rows, node_count_, "subblock rows");
  const NodeSet c = sorted_unique_nodes(cols, node_count_, "subblock cols");
  return data_(expand_block_indices(r, block_size_), expand_block_indices(c, block_size_));
}

ComplexMatrix primitive_branch_admittance(const GridModel& model) {
  const Index p = model.phase_count();
  const Index l = model.branch_graph().edge_count();
  ComplexMatrix yl = ComplexMatrix::Zero(l * p, l * p);
  for (Index i = 0; i < l; ++i) {
    const ComplexMatrix& z = model.branch_impedances()[static_cast<std::size_t>(i)].matrix();
    Eigen::FullPivLU<ComplexMatrix> lu(z);
    if (!factorization_invertible(lu, kDefaultRankRelTol)) {
      throw Error(ErrorCode::SingularBranch,
                  "branch " + std::to_string(i) + " has a numerically singular impedance");
    }
    yl.block(i * p, i * p, p, p) = lu.inverse();
  }
  return yl;
}

BlockMatrix assemble(const GridModel& model) {
  const Index p = model.phase_count();
  const Index n = model.node_count();

  ComplexMatrix y;
  if (model.branch_graph().edge_count() > 0) {
    const ComplexMatrix incidence_p =
        kronecker_identity_expand(model.branch_graph().incidence_matrix(), p);
    y = incidence_p.transpose() * primitive_branch_admittance(model) * incidence_p;
  } else {
    y = ComplexMatrix::Zero(n * p, n * p);
  }

  for (NodeId node = 0; node < n; ++node) {
    y.block(node * p, node * p, p, p) +=
        model.shunt_admittances()[static_cast<std::size_t>(node)].matrix();
  }
  return BlockMatrix(p, n, std::move(y));
}

NodalVector apply_ohm(const BlockMatrix& y, const NodalVector& v) {
  if (v.block_size != y.block_size() || v.node_count != y.node_count() ||
      v.values.size() != y.data().rows()) {
    throw Error(ErrorCode::ShapeMismatch, "voltage vector does not match the matrix blocking");
  }
  return NodalVector{y.block_size(), y.node_count(), y.data() * v.values};
}

ShuntSumReport check_shunt_sum_lemma(const GridModel& model, const BlockMatrix& y, double tol) {
  const Index p = y.block_size();
  const Index n = y.node_count();
  if (p != model.phase_count() || n != model.node_count()) {
    throw Error(ErrorCode::ShapeMismatch, "matrix does not match the model");
  }

  ShuntSumReport report;
  report.tolerance = tol;
  report.row_residuals.resize(static_cast<std::size_t>(n));
  report.col_residuals.resize(static_cast<std::size_t>(n));
  for (NodeId node = 0; node < n; ++node) {
    ComplexMatrix row_sum = ComplexMatrix::Zero(p, p);
    ComplexMatrix col_sum = ComplexMatrix::Zero(p, p);
    for (NodeId other = 0; other < n; ++other) {
      row_sum += y.data().block(node * p, other * p, p, p);
      col_sum += y.data().block(other * p, node * p, p, p);
    }
    const ComplexMatrix& shunt =
        model.shunt_admittances()[static_cast<std::size_t>(node)].matrix();
    report.row_residuals[static_cast<std::size_t>(node)] =
        (row_sum - shunt).cwiseAbs().maxCoeff();
    report.col_residuals[static_cast<std::size_t>(node)] =
        (col_sum - shunt).cwiseAbs().maxCoeff();
    report.max_residual = std::max({report.max_residual,
                                    report.row_residuals[static_cast<std::size_t>(node)],
                                    report.col_residuals[static_cast<std::size_t>(node)]});
  }
  report.passed = report.max_residual <= tol;
  return report;
}

RankReport rank_report(const GridModel& model, double rel_tol, bool force) {
  if (!model.branch_graph().is_weakly_connected()) {
    if (!force) {
      throw Error(ErrorCode::PreconditionViolated,
                  "not_weakly_connected: the rank prediction assumes a connected branch graph");
    }
  }
  RankReport report;
  report.forced = force;
  report.predicted_rank = model.all_shunts_zero()
                              ? (model.node_count() - 1) * model.phase_count()
                              : model.node_count() * model.phase_count();
  const RankResult measured = numerical_rank(assemble(model).data(), rel_tol);
  report.measured_rank = measured.numerical_rank;
  report.tolerance_used = measured.tolerance_used;
  report.agrees = report.predicted_rank == report.measured_rank;
  return report;
}

RankReport block_rank_report(const GridModel& model, const NodeSet& m, double rel_tol,
                             bool force) {
  const NodeSet sorted = sorted_unique_nodes(m, model.node_count(), "block_rank_report");
  if (static_cast<Index>(sorted.size()) == model.node_count()) {
    throw Error(ErrorCode::InvalidSubset,
                "the subblock rank property concerns proper subsets only");
  }
  if (!force) {
    if (!model.branch_graph().is_weakly_connected()) {
      throw Error(ErrorCode::PreconditionViolated,
                  "not_weakly_connected: the subblock rank property assumes a connected graph");
    }
    if (!model.all_branches_strictly_passive()) {
      throw Error(ErrorCode::PreconditionViolated,
                  "not_strictly_passive: every branch impedance needs a positive definite "
                  "real part");
    }
  }

  RankReport report;
  report.forced = force;
  report.predicted_rank = static_cast<Index>(sorted.size()) * model.phase_count();
  const RankResult measured =
      numerical_rank(assemble(model).subblock(sorted, sorted), rel_tol);
  report.measured_rank = measured.numerical_rank;
  report.tolerance_used = measured.tolerance_used;
  report.agrees = report.predicted_rank == report.measured_rank;
  return report;
}

}  // namespace polygrid
