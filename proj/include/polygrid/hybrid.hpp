#pragma once

#include "polygrid/admittance.hpp"

namespace polygrid {

/**
 * Compound hybrid parameters for the node partition (M, complement): the
 * stacked response [I_complement; V_M] equals H applied to the stacked
 * stimulus [V_complement; I_M]. Node order inside each set is ascending and
 * recorded here so callers can stack their vectors unambiguously.
 */
struct HybridMatrix {
  NodeSet m_set;
  NodeSet complement;
  Index block_size = 1;
  ComplexMatrix h_mm;    // inverse of Y_MM
  ComplexMatrix h_mmc;   // -Y_MM^{-1} Y_{M,Mc}
  ComplexMatrix h_mcm;   // Y_{Mc,M} Y_MM^{-1}
  ComplexMatrix h_mcmc;  // Schur complement Y / Y_MM
};

/**
 * Builds the hybrid parameters for a proper non-empty node subset. The
 * diagonal subblock Y_MM is factored once and every block derived from that
 * factorization; its explicit inverse is materialized because it is itself
 * one of the output blocks. A numerically singular Y_MM raises
 * InfeasibleHybrid; an empty or full subset raises InvalidSubset.
 */
HybridMatrix hybrid_matrix(const BlockMatrix& y, const NodeSet& m,
                           double rel_tol = kDefaultRankRelTol);

struct HybridResponse {
  NodalVector i_complement;
  NodalVector v_m;
};

/// Applies the hybrid equations to a stimulus pair.
HybridResponse apply_hybrid(const HybridMatrix& h, const NodalVector& v_complement,
                            const NodalVector& i_m);

}  // namespace polygrid
