#pragma once

#include "polygrid/admittance.hpp"

namespace polygrid {
namespace oracle {

/**
 * Independent reconstructions that cross-validate the rank machinery. Both
 * rebuild an equivalent grid from first principles, so the admittance of the
 * result can be compared against the matrix-level computation. They ship in
 * the library (not only in tests) because the CLI exposes them as an audit
 * mode for diagnosing infeasible reductions.
 */

/**
 * Trades every non-zero shunt for a branch towards a new node that stands in
 * for the old ground: the grounded reference moves one level down, the
 * augmented grid has |N|+1 nodes, |L| + #nonzero-shunts branches, and no
 * shunts at all. The ground stand-in is appended as the last node. Raises
 * NothingToAugment when every shunt is zero.
 */
GridModel augment_virtual_ground(const GridModel& model);

/// Name given to the ground stand-in node (suffixed with '_' on collision).
std::string virtual_ground_name(const GridModel& model);

/**
 * Fictional grid over the subset m obtained by grounding every node outside
 * m: internal branches keep their impedances, while each branch crossing the
 * boundary folds its admittance into the shunt of its endpoint inside m. The
 * admittance matrix of the result reproduces the (m, m) diagonal subblock of
 * the original grid exactly.
 */
GridModel ground_complement(const GridModel& model, const NodeSet& m);

}  // namespace oracle
}  // namespace polygrid
