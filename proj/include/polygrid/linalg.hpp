#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "polygrid/errors.hpp"

namespace polygrid {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;
using IndexList = std::vector<Index>;

// Default tolerances, shared across the whole library so that every module
// judges symmetry, rank, and eigenvalue signs on one scale-aware scheme.
inline constexpr double kDefaultRankRelTol = 1e-10;
inline constexpr double kDefaultSymmetryTol = 1e-9;
inline constexpr double kDefaultEigTol = 1e-9;
inline constexpr double kDefaultZeroTol = 1e-9;

/// Singular-value based rank decision for a dense complex matrix.
struct RankResult {
  Index numerical_rank = 0;
  std::vector<double> singular_values;  // sorted descending
  double tolerance_used = 0.0;
};

/// Sign classification of the eigenvalue spectrum of a real symmetric matrix.
enum class Definiteness {
  PositiveDefinite,
  PositiveSemiDefinite,
  Indefinite,
  NegativeSemiDefinite,
  NegativeDefinite,
};

constexpr const char* to_string(Definiteness d) noexcept {
  switch (d) {
    case Definiteness::PositiveDefinite: return "positive_definite";
    case Definiteness::PositiveSemiDefinite: return "positive_semi_definite";
    case Definiteness::Indefinite: return "indefinite";
    case Definiteness::NegativeSemiDefinite: return "negative_semi_definite";
    case Definiteness::NegativeDefinite: return "negative_definite";
  }
  return "unknown";
}

/// True iff every entry of m has finite real and imaginary part.
bool is_finite(const ComplexMatrix& m);

/**
 * Numerical rank via SVD. A singular value counts towards the rank when it
 * exceeds rel_tol * sigma_max * max(rows, cols); the all-zero matrix has
 * rank zero. Throws InvalidMatrix on non-finite entries.
 */
RankResult numerical_rank(const ComplexMatrix& m, double rel_tol = kDefaultRankRelTol);

/**
 * Complex symmetry test, M == transpose(M) without conjugation. Passes when
 * max |M_ij - M_ji| <= tol * (1 + max |M_ij|). Throws ShapeMismatch for
 * non-square input.
 */
bool is_symmetric(const ComplexMatrix& m, double tol = kDefaultSymmetryTol);

/**
 * Classifies the symmetrized real part (Re{M} + Re{M}^T) / 2 by the signs of
 * its eigenvalues. Eigenvalues within +/- tol * (1 + max |entry|) count as
 * zero; an all-zero spectrum classifies as positive semi-definite. Requires
 * m square and complex-symmetric, otherwise throws InvalidMatrix.
 */
Definiteness real_part_definiteness(const ComplexMatrix& m, double tol = kDefaultEigTol);

/**
 * Solves A X = B with a fully pivoted LU factorization. Throws SingularMatrix
 * when the reciprocal condition estimate of A falls below rel_tol.
 */
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b,
                    double rel_tol = kDefaultRankRelTol);

/// Invertibility gate for a computed factorization: full pivot rank plus a
/// reciprocal condition estimate above rel_tol. The rank check matters
/// because the condition estimator is unreliable on exactly singular input.
bool factorization_invertible(const Eigen::FullPivLU<ComplexMatrix>& lu, double rel_tol);

/**
 * Schur complement M/D with D = M[eliminate, eliminate]: returns
 * A - B D^{-1} C where A, B, C are the blocks selected by `keep` and
 * `eliminate`. The two index sets must partition the row indices of the
 * square matrix m (InvalidPartition otherwise); a numerically singular D
 * raises SingularBlock. Rows/columns of the result follow the order in which
 * `keep` lists them.
 */
ComplexMatrix schur_complement(const ComplexMatrix& m, const IndexList& keep,
                               const IndexList& eliminate,
                               double rel_tol = kDefaultRankRelTol);

/**
 * Kronecker expansion a (x) I_p: every scalar a_ij becomes the p-by-p block
 * a_ij * I. Throws InvalidPhaseCount when p < 1.
 */
ComplexMatrix kronecker_identity_expand(const ComplexMatrix& a, Index p);

}  // namespace polygrid
