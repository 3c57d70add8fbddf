#include "polygrid/oracle.hpp"

#include <algorithm>

namespace polygrid {
namespace oracle {

namespace {

ComplexMatrix invert(const ComplexMatrix& m, ErrorCode code, const std::string& what) {
  Eigen::FullPivLU<ComplexMatrix> lu(m);
  if (!factorization_invertible(lu, kDefaultRankRelTol)) {
    throw Error(code, what + " is numerically singular");
  }
  return lu.inverse();
}

}  // namespace

std::string virtual_ground_name(const GridModel& model) {
  std::string name = "__virtual_ground__";
  while (model.find_node(name)) name += '_';
  return name;
}

GridModel augment_virtual_ground(const GridModel& model) {
  const Index p = model.phase_count();
  bool any_shunt = false;
  for (const CompoundShuntAdmittance& y : model.shunt_admittances()) {
    if (!y.is_zero()) {
      any_shunt = true;
      break;
    }
  }
  if (!any_shunt) {
    throw Error(ErrorCode::NothingToAugment, "every shunt admittance is zero");
  }

  GridModelBuilder builder(p);
  for (NodeId n = 0; n < model.node_count(); ++n) {
    builder.add_node(model.node_name(n));
  }
  const std::string ground = virtual_ground_name(model);
  builder.add_node(ground);

  const auto& edges = model.branch_graph().edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    builder.add_branch(edges[i].from, edges[i].to, model.branch_impedances()[i]);
  }
  // Non-zero shunts become branches towards the ground stand-in, with the
  // inverted admittance as impedance.
  for (NodeId n = 0; n < model.node_count(); ++n) {
    const CompoundShuntAdmittance& y =
        model.shunt_admittances()[static_cast<std::size_t>(n)];
    if (y.is_zero()) continue;
    builder.add_branch(model.node_name(n), ground,
                       CompoundBranchImpedance::from_matrix(
                           invert(y.matrix(), ErrorCode::HypothesisViolation,
                                  "shunt admittance of node '" + model.node_name(n) + "'")));
  }
  return std::move(builder).build();
}

GridModel ground_complement(const GridModel& model, const NodeSet& m) {
  const Index p = model.phase_count();
  if (m.empty() || static_cast<Index>(m.size()) >= model.node_count()) {
    throw Error(ErrorCode::InvalidSubset, "grounding requires a proper non-empty subset");
  }
  NodeSet kept = m;
  std::sort(kept.begin(), kept.end());
  if (kept.front() < 0 || kept.back() >= model.node_count()) {
    throw Error(ErrorCode::UnknownNode, "ground_complement: node id out of range");
  }
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw Error(ErrorCode::InvalidArgument, "ground_complement: duplicate node id");
  }

  std::vector<char> member(static_cast<std::size_t>(model.node_count()), 0);
  for (NodeId n : kept) member[static_cast<std::size_t>(n)] = 1;

  // Folded shunt per kept node: the original shunt plus the admittance of
  // every branch leaving the subset through that node.
  std::vector<ComplexMatrix> folded;
  folded.reserve(kept.size());
  for (NodeId n : kept) {
    folded.push_back(model.shunt_admittances()[static_cast<std::size_t>(n)].matrix());
  }
  const auto& edges = model.branch_graph().edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const bool from_in = member[static_cast<std::size_t>(edges[i].from)] != 0;
    const bool to_in = member[static_cast<std::size_t>(edges[i].to)] != 0;
    if (from_in == to_in) continue;  // internal or fully outside
    const NodeId inside = from_in ? edges[i].from : edges[i].to;
    const auto pos = std::lower_bound(kept.begin(), kept.end(), inside) - kept.begin();
    folded[static_cast<std::size_t>(pos)] +=
        invert(model.branch_impedances()[i].matrix(), ErrorCode::SingularBranch,
               "branch " + std::to_string(i));
  }

  GridModelBuilder builder(p);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    builder.add_node(model.node_name(kept[i]),
                     CompoundShuntAdmittance::from_matrix(folded[i]));
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (member[static_cast<std::size_t>(edges[i].from)] &&
        member[static_cast<std::size_t>(edges[i].to)]) {
      builder.add_branch(model.node_name(edges[i].from), model.node_name(edges[i].to),
                         model.branch_impedances()[i]);
    }
  }
  return std::move(builder).build();
}

}  // namespace oracle
}  // namespace polygrid
