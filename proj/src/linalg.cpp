#include "polygrid/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

namespace polygrid {

namespace {

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!is_finite(m)) {
    throw Error(ErrorCode::InvalidMatrix, std::string(what) + " has non-finite entries");
  }
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

bool is_finite(const ComplexMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      const Complex& v = m(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
  }
  return true;
}

RankResult numerical_rank(const ComplexMatrix& m, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "rel_tol must lie in (0, 1)");
  }
  require_finite(m, "rank input");

  RankResult result;
  if (m.size() == 0) return result;

  // Jacobi is the more accurate choice at desk scale; divide-and-conquer
  // only pays off once the matrix grows past a few dozen rows.
  Eigen::VectorXd sv;
  if (std::min(m.rows(), m.cols()) <= 16) {
    sv = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
  } else {
    sv = Eigen::BDCSVD<ComplexMatrix>(m).singularValues();
  }

  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  result.tolerance_used = rel_tol * sigma_max * static_cast<double>(std::max(m.rows(), m.cols()));
  result.singular_values.assign(sv.data(), sv.data() + sv.size());
  result.numerical_rank =
      std::count_if(result.singular_values.begin(), result.singular_values.end(),
                    [&](double s) { return s > result.tolerance_used; });
  return result;
}

bool is_symmetric(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "symmetry is defined for square matrices only");
  }
  require_finite(m, "symmetry input");
  const double deviation = max_abs(m - m.transpose());
  return deviation <= tol * (1.0 + max_abs(m));
}

Definiteness real_part_definiteness(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || !is_symmetric(m, tol)) {
    throw Error(ErrorCode::InvalidMatrix,
                "definiteness requires a square complex-symmetric matrix");
  }

  const RealMatrix symmetrized = 0.5 * (m.real() + m.real().transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(symmetrized, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();
  const double eps = tol * (1.0 + max_abs(m));
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();

  if (lo > eps) return Definiteness::PositiveDefinite;
  if (hi < -eps) return Definiteness::NegativeDefinite;
  if (lo >= -eps) return Definiteness::PositiveSemiDefinite;
  if (hi <= eps) return Definiteness::NegativeSemiDefinite;
  return Definiteness::Indefinite;
}

bool factorization_invertible(const Eigen::FullPivLU<ComplexMatrix>& lu, double rel_tol) {
  if (!lu.isInvertible()) return false;
  const double rc = lu.rcond();
  return std::isfinite(rc) && rc > rel_tol;
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b, double rel_tol) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "coefficient matrix must be square");
  }
  if (b.rows() != a.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "right-hand side row count does not match");
  }
  require_finite(a, "coefficient matrix");
  require_finite(b, "right-hand side");

  Eigen::FullPivLU<ComplexMatrix> lu(a);
  if (!factorization_invertible(lu, rel_tol)) {
    throw Error(ErrorCode::SingularMatrix, "coefficient matrix is numerically singular");
  }
  return lu.solve(b);
}

ComplexMatrix schur_complement(const ComplexMatrix& m, const IndexList& keep,
                               const IndexList& eliminate, double rel_tol) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "Schur complement requires a square matrix");
  }
  const Index n = m.rows();
  if (static_cast<Index>(keep.size() + eliminate.size()) != n) {
    throw Error(ErrorCode::InvalidPartition, "keep and eliminate must partition the index set");
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (const IndexList* set : {&keep, &eliminate}) {
    for (Index i : *set) {
      if (i < 0 || i >= n) {
        throw Error(ErrorCode::InvalidPartition, "index out of range");
      }
      if (seen[static_cast<std::size_t>(i)]++) {
        throw Error(ErrorCode::InvalidPartition, "keep and eliminate sets overlap");
      }
    }
  }
  if (eliminate.empty()) return m(keep, keep);

  const ComplexMatrix d = m(eliminate, eliminate);
  Eigen::FullPivLU<ComplexMatrix> lu(d);
  if (!factorization_invertible(lu, rel_tol)) {
    throw Error(ErrorCode::SingularBlock, "eliminated diagonal block is numerically singular");
  }
  if (keep.empty()) return ComplexMatrix(0, 0);
  return m(keep, keep) - m(keep, eliminate) * lu.solve(m(eliminate, keep));
}

ComplexMatrix kronecker_identity_expand(const ComplexMatrix& a, Index p) {
  if (p < 1) {
    throw Error(ErrorCode::InvalidPhaseCount, "phase count must be at least 1");
  }
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() * p, a.cols() * p);
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) != Complex(0.0, 0.0)) {
        out.block(i * p, j * p, p, p) = a(i, j) * ComplexMatrix::Identity(p, p);
      }
    }
  }
  return out;
}

}  // namespace polygrid
