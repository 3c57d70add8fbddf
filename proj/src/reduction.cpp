#include "polygrid/reduction.hpp"

#include <algorithm>
#include <random>
#include <utility>

namespace polygrid {

namespace {

NodeSet sorted_unique(const NodeSet& set, Index node_count, ErrorCode empty_code,
                      const char* what) {
  if (set.empty()) {
    throw Error(empty_code, std::string(what) + ": empty node set");
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

NodeSet complement_of(const NodeSet& sorted, Index node_count) {
  NodeSet out;
  out.reserve(static_cast<std::size_t>(node_count) - sorted.size());
  auto it = sorted.begin();
  for (NodeId n = 0; n < node_count; ++n) {
    if (it != sorted.end() && *it == n) {
      ++it;
    } else {
      out.push_back(n);
    }
  }
  return out;
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

ReducedGrid::ReducedGrid(NodeSet retained, NodeSet eliminated, BlockMatrix reduced,
                         ComplexMatrix elimination_map)
    : retained_(std::move(retained)),
      eliminated_(std::move(eliminated)),
      reduced_(std::move(reduced)),
      map_(std::move(elimination_map)) {
  const Index p = reduced_.block_size();
  if (reduced_.node_count() != static_cast<Index>(retained_.size()) ||
      map_.rows() != static_cast<Index>(eliminated_.size()) * p ||
      map_.cols() != static_cast<Index>(retained_.size()) * p) {
    throw Error(ErrorCode::ShapeMismatch, "reduced grid pieces are inconsistent");
  }
}

ReducedGrid kron_reduce(const BlockMatrix& y, const NodeSet& z, double rel_tol) {
  const Index p = y.block_size();
  const NodeSet eliminated = sorted_unique(z, y.node_count(), ErrorCode::InvalidSubset,
                                           "kron_reduce");
  if (static_cast<Index>(eliminated.size()) == y.node_count()) {
    throw Error(ErrorCode::InvalidSubset, "cannot eliminate every node");
  }
  const NodeSet retained = complement_of(eliminated, y.node_count());

  const IndexList zi = expand_block_indices(eliminated, p);
  const IndexList ri = expand_block_indices(retained, p);

  Eigen::FullPivLU<ComplexMatrix> lu(y.data()(zi, zi));
  if (!factorization_invertible(lu, rel_tol)) {
    throw Error(ErrorCode::InfeasibleReduction,
                "the zero-injection diagonal subblock is numerically singular");
  }
  const ComplexMatrix solved = lu.solve(y.data()(zi, ri));  // Y_ZZ^{-1} Y_ZR
  ComplexMatrix reduced = y.data()(ri, ri) - y.data()(ri, zi) * solved;

  return ReducedGrid(retained, eliminated,
                     BlockMatrix(p, static_cast<Index>(retained.size()), std::move(reduced)),
                     -solved);
}

NodalVector recover_voltages(const ReducedGrid& rg, const NodalVector& v_retained) {
  if (v_retained.values.size() != rg.elimination_map().cols() ||
      v_retained.block_size != rg.reduced_matrix().block_size()) {
    throw Error(ErrorCode::ShapeMismatch, "retained voltage vector has the wrong length");
  }
  return NodalVector{rg.reduced_matrix().block_size(),
                     static_cast<Index>(rg.eliminated_nodes().size()),
                     rg.elimination_map() * v_retained.values};
}

ReducedGrid sequential_reduce(const BlockMatrix& y, const std::vector<NodeSet>& parts,
                              double rel_tol) {
  const Index p = y.block_size();
  if (parts.empty()) {
    throw Error(ErrorCode::InvalidSubset, "sequential reduction needs at least one part");
  }

  // Validate the partition of the union up front.
  std::vector<char> claimed(static_cast<std::size_t>(y.node_count()), 0);
  for (const NodeSet& part : parts) {
    for (NodeId n :
         sorted_unique(part, y.node_count(), ErrorCode::InvalidSubset, "sequential part")) {
      if (claimed[static_cast<std::size_t>(n)]++) {
        throw Error(ErrorCode::InvalidPartition, "parts overlap at node " + std::to_string(n));
      }
    }
  }

  struct Stage {
    NodeSet eliminated;        // original ids, ascending
    NodeSet survivors;         // original ids surviving this stage, ascending
    ComplexMatrix local_map;   // V_eliminated = local_map * V_survivors
  };
  std::vector<Stage> stages;
  stages.reserve(parts.size());

  // current ids (position in `cur`) <-> original ids via `alive`.
  ComplexMatrix cur = y.data();
  NodeSet alive(static_cast<std::size_t>(y.node_count()));
  for (NodeId n = 0; n < y.node_count(); ++n) alive[static_cast<std::size_t>(n)] = n;

  for (std::size_t stage_index = 0; stage_index < parts.size(); ++stage_index) {
    NodeSet original = parts[stage_index];
    std::sort(original.begin(), original.end());

    NodeSet local;
    local.reserve(original.size());
    for (NodeId n : original) {
      auto it = std::lower_bound(alive.begin(), alive.end(), n);
      local.push_back(static_cast<NodeId>(it - alive.begin()));
    }

    try {
      BlockMatrix current(p, static_cast<Index>(alive.size()), cur);
      ReducedGrid step = kron_reduce(current, local, rel_tol);

      Stage record;
      record.eliminated = original;
      record.local_map = step.elimination_map();
      NodeSet next_alive;
      next_alive.reserve(step.retained_nodes().size());
      for (NodeId local_id : step.retained_nodes()) {
        next_alive.push_back(alive[static_cast<std::size_t>(local_id)]);
      }
      record.survivors = next_alive;
      stages.push_back(std::move(record));

      cur = step.reduced_matrix().data();
      alive = std::move(next_alive);
    } catch (const Error& e) {
      throw Error(e.code(), "stage " + std::to_string(stage_index) + ": " + e.what());
    }
  }

  // Back-substitute stage maps so every eliminated node is expressed in the
  // final retained voltages. Later stages are already in final terms.
  const NodeSet& retained = alive;
  const Index retained_cols = static_cast<Index>(retained.size()) * p;
  std::vector<std::pair<NodeId, Index>> final_rows;  // node -> row offset in total map

  ComplexMatrix empty(0, retained_cols);
  std::vector<ComplexMatrix> final_maps(stages.size());
  for (std::size_t s = stages.size(); s-- > 0;) {
    const Stage& stage = stages[s];
    // Rows of the survivor vector: retained nodes map to identity columns,
    // nodes eliminated by later stages map to their final maps.
    ComplexMatrix survivor_map(static_cast<Index>(stage.survivors.size()) * p, retained_cols);
    for (std::size_t row = 0; row < stage.survivors.size(); ++row) {
      const NodeId node = stage.survivors[row];
      auto it = std::lower_bound(retained.begin(), retained.end(), node);
      if (it != retained.end() && *it == node) {
        const Index col = static_cast<Index>(it - retained.begin()) * p;
        survivor_map.middleRows(static_cast<Index>(row) * p, p).setZero();
        survivor_map.block(static_cast<Index>(row) * p, col, p, p) =
            ComplexMatrix::Identity(p, p);
      } else {
        // Eliminated later: find the stage and row within it.
        for (std::size_t t = s + 1; t < stages.size(); ++t) {
          auto pos = std::lower_bound(stages[t].eliminated.begin(), stages[t].eliminated.end(),
                                      node);
          if (pos != stages[t].eliminated.end() && *pos == node) {
            const Index row_off = static_cast<Index>(pos - stages[t].eliminated.begin()) * p;
            survivor_map.middleRows(static_cast<Index>(row) * p, p) =
                final_maps[t].middleRows(row_off, p);
            break;
          }
        }
      }
    }
    final_maps[s] = stage.local_map * survivor_map;
  }

  // Assemble the total map with eliminated nodes ascending.
  NodeSet all_eliminated;
  for (const Stage& stage : stages) {
    all_eliminated.insert(all_eliminated.end(), stage.eliminated.begin(),
                          stage.eliminated.end());
  }
  std::sort(all_eliminated.begin(), all_eliminated.end());

  ComplexMatrix total_map(static_cast<Index>(all_eliminated.size()) * p, retained_cols);
  for (std::size_t s = 0; s < stages.size(); ++s) {
    for (std::size_t row = 0; row < stages[s].eliminated.size(); ++row) {
      const NodeId node = stages[s].eliminated[row];
      auto it = std::lower_bound(all_eliminated.begin(), all_eliminated.end(), node);
      const Index out_row = static_cast<Index>(it - all_eliminated.begin()) * p;
      total_map.middleRows(out_row, p) = final_maps[s].middleRows(static_cast<Index>(row) * p, p);
    }
  }

  return ReducedGrid(retained, all_eliminated,
                     BlockMatrix(p, static_cast<Index>(retained.size()), std::move(cur)),
                     std::move(total_map));
}

ReductionCheck verify_reduction(const GridModel& model, const ReducedGrid& rg, Index trials,
                                double tol, std::uint64_t seed) {
  const Index p = model.phase_count();
  const Index n = model.node_count();
  if (rg.reduced_matrix().block_size() != p ||
      static_cast<Index>(rg.retained_nodes().size() + rg.eliminated_nodes().size()) != n) {
    throw Error(ErrorCode::ShapeMismatch, "reduced grid does not belong to this model");
  }

  const BlockMatrix y = assemble(model);
  const IndexList ri = expand_block_indices(rg.retained_nodes(), p);
  const IndexList zi = expand_block_indices(rg.eliminated_nodes(), p);
  const double matrix_scale = y.data().cwiseAbs().maxCoeff();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  ReductionCheck check;
  check.trials = trials;
  check.tolerance = tol;
  for (Index trial = 0; trial < trials; ++trial) {
    NodalVector v_retained{p, static_cast<Index>(rg.retained_nodes().size()),
                           ComplexVector(static_cast<Index>(ri.size()))};
    for (Index i = 0; i < v_retained.values.size(); ++i) {
      v_retained.values(i) = Complex(gauss(rng), gauss(rng));
    }
    const NodalVector v_z = recover_voltages(rg, v_retained);

    ComplexVector v_full = ComplexVector::Zero(n * p);
    for (std::size_t i = 0; i < ri.size(); ++i) {
      v_full(ri[i]) = v_retained.values(static_cast<Index>(i));
    }
    for (std::size_t i = 0; i < zi.size(); ++i) {
      v_full(zi[i]) = v_z.values(static_cast<Index>(i));
    }

    const ComplexVector i_full = y.data() * v_full;
    const ComplexVector i_reduced = rg.reduced_matrix().data() * v_retained.values;

    const double scale =
        std::max(1.0, matrix_scale * v_full.cwiseAbs().maxCoeff());
    for (std::size_t i = 0; i < zi.size(); ++i) {
      check.max_eliminated_current =
          std::max(check.max_eliminated_current, std::abs(i_full(zi[i])) / scale);
    }
    for (std::size_t i = 0; i < ri.size(); ++i) {
      check.max_retained_mismatch =
          std::max(check.max_retained_mismatch,
                   std::abs(i_full(ri[i]) - i_reduced(static_cast<Index>(i))) / scale);
    }
  }
  check.passed = check.max_eliminated_current <= tol && check.max_retained_mismatch <= tol;
  return check;
}

}  // namespace polygrid
