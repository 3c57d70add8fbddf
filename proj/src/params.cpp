#include "polygrid/params.hpp"

#include <numeric>
#include <sstream>
#include <utility>

namespace polygrid {

namespace {

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const std::string& p : parts) {
    if (!out.empty()) out += ", ";
    out += p;
  }
  return out;
}

// Shared symmetry/invertibility/passivity checks; strict passivity reported
// through the out-parameter.
std::vector<std::string> conformance_violations(const ComplexMatrix& m, double tol,
                                                bool& strictly_passive) {
  std::vector<std::string> violations;
  strictly_passive = false;

  if (m.rows() != m.cols() || m.rows() < 1) {
    violations.emplace_back("not_square");
    return violations;
  }
  if (!is_finite(m)) {
    violations.emplace_back("non_finite");
    return violations;
  }

  const bool symmetric = is_symmetric(m, tol);
  if (!symmetric) violations.emplace_back("asymmetric");

  if (numerical_rank(m).numerical_rank != m.rows()) violations.emplace_back("singular");

  if (symmetric) {
    switch (real_part_definiteness(m, tol)) {
      case Definiteness::PositiveDefinite:
        strictly_passive = true;
        break;
      case Definiteness::PositiveSemiDefinite:
        break;
      default:
        violations.emplace_back("not_passive");
        break;
    }
  }
  return violations;
}

bool is_real_symmetric_positive_definite(const RealMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1 || !m.allFinite()) return false;
  const double scale = tol * (1.0 + m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > scale) return false;
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(0.5 * (m + m.transpose()),
                                                   Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() > scale;
}

bool is_positive_diagonal(const RealMatrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1 || !m.allFinite()) return false;
  const double scale = tol * (1.0 + m.cwiseAbs().maxCoeff());
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (i == j) {
        if (!(m(i, j) > scale)) return false;
      } else if (std::abs(m(i, j)) > scale) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

BranchValidation validate_branch_impedance(const ComplexMatrix& z, double tol) {
  BranchValidation result;
  result.violations = conformance_violations(z, tol, result.strictly_passive);
  result.conformant = result.violations.empty();
  if (!result.conformant) result.strictly_passive = false;
  return result;
}

ShuntValidation validate_shunt_admittance(const ComplexMatrix& y, double tol) {
  ShuntValidation result;
  if (y.rows() == y.cols() && y.rows() >= 1 && is_finite(y) && max_abs(y) <= tol) {
    result.kind = ShuntKind::Zero;
    return result;
  }
  bool strict = false;
  result.violations = conformance_violations(y, tol, strict);
  result.kind = result.violations.empty() ? ShuntKind::Conformant : ShuntKind::Violation;
  return result;
}

CompoundBranchImpedance CompoundBranchImpedance::from_matrix(ComplexMatrix z, double tol) {
  BranchValidation v = validate_branch_impedance(z, tol);
  if (!v.conformant) {
    throw Error(ErrorCode::HypothesisViolation, "branch impedance: " + join(v.violations));
  }
  return CompoundBranchImpedance(std::move(z), v.strictly_passive);
}

CompoundShuntAdmittance CompoundShuntAdmittance::zero(Index phase_count) {
  if (phase_count < 1) {
    throw Error(ErrorCode::InvalidPhaseCount, "phase count must be at least 1");
  }
  return CompoundShuntAdmittance(ComplexMatrix::Zero(phase_count, phase_count), true);
}

CompoundShuntAdmittance CompoundShuntAdmittance::from_matrix(ComplexMatrix y, double tol) {
  ShuntValidation v = validate_shunt_admittance(y, tol);
  if (v.kind == ShuntKind::Violation) {
    throw Error(ErrorCode::HypothesisViolation, "shunt admittance: " + join(v.violations));
  }
  return CompoundShuntAdmittance(std::move(y), v.kind == ShuntKind::Zero);
}

void validate_line_parameters(const LineParameters& p, double tol) {
  const Index n = p.r_per_len.rows();
  const struct {
    const RealMatrix* m;
    const char* name;
  } entries[] = {{&p.r_per_len, "R'"},
                 {&p.l_per_len, "L'"},
                 {&p.g_per_len, "G'"},
                 {&p.c_per_len, "C'"}};
  for (const auto& e : entries) {
    if (e.m->rows() != n || e.m->cols() != n) {
      throw Error(ErrorCode::InvalidLineParameters,
                  std::string(e.name) + " has an inconsistent shape");
    }
    if (!is_real_symmetric_positive_definite(*e.m, tol)) {
      throw Error(ErrorCode::InvalidLineParameters,
                  std::string(e.name) + " must be symmetric positive definite");
    }
  }
  if (!(p.length > 0.0)) {
    throw Error(ErrorCode::InvalidLineParameters, "length must be positive");
  }
  if (!(p.omega > 0.0)) {
    throw Error(ErrorCode::InvalidLineParameters, "angular frequency must be positive");
  }
}

PiSection build_pi_line(const LineParameters& p, double tol) {
  validate_line_parameters(p, tol);
  const Complex jw(0.0, p.omega);

  ComplexMatrix series = (p.r_per_len.cast<Complex>() + jw * p.l_per_len.cast<Complex>()) * p.length;
  ComplexMatrix shunt =
      0.5 * (p.g_per_len.cast<Complex>() + jw * p.c_per_len.cast<Complex>()) * p.length;

  // Both ends carry the same half of the total transversal admittance.
  PiSection out{CompoundBranchImpedance::from_matrix(std::move(series), tol), shunt, shunt};
  if (validate_shunt_admittance(out.shunt_from, tol).kind != ShuntKind::Conformant) {
    throw Error(ErrorCode::InvalidLineParameters, "shunt admittance failed validation");
  }
  return out;
}

TeeSection build_tee_transformer(const RealMatrix& rw1, const RealMatrix& ll1,
                                 const RealMatrix& rw2, const RealMatrix& ll2,
                                 const RealMatrix& gh, const RealMatrix& bm, double omega,
                                 double tol) {
  const Index n = rw1.rows();
  const struct {
    const RealMatrix* m;
    const char* name;
    bool diagonal;
  } entries[] = {{&rw1, "primary winding resistance", true},
                 {&ll1, "primary leakage inductance", false},
                 {&rw2, "secondary winding resistance", true},
                 {&ll2, "secondary leakage inductance", false},
                 {&gh, "hysteresis conductance", true},
                 {&bm, "magnetizing susceptance", false}};
  for (const auto& e : entries) {
    if (e.m->rows() != n || e.m->cols() != n) {
      throw Error(ErrorCode::InvalidTransformerParameters,
                  std::string(e.name) + " has an inconsistent shape");
    }
    if (e.diagonal ? !is_positive_diagonal(*e.m, tol)
                   : !is_real_symmetric_positive_definite(*e.m, tol)) {
      throw Error(ErrorCode::InvalidTransformerParameters,
                  std::string(e.name) + (e.diagonal ? " must be positive diagonal"
                                                    : " must be symmetric positive definite"));
    }
  }
  if (!(omega > 0.0)) {
    throw Error(ErrorCode::InvalidTransformerParameters, "angular frequency must be positive");
  }

  const Complex jw(0.0, omega);
  return TeeSection{
      CompoundBranchImpedance::from_matrix(rw1.cast<Complex>() + jw * ll1.cast<Complex>(), tol),
      CompoundBranchImpedance::from_matrix(rw2.cast<Complex>() + jw * ll2.cast<Complex>(), tol),
      CompoundShuntAdmittance::from_matrix(gh.cast<Complex>() + jw * bm.cast<Complex>(), tol)};
}

namespace {

void require_strict_compensator(const ComplexMatrix& m, double tol, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1 || !is_finite(m)) {
    throw Error(ErrorCode::InvalidCompensator, std::string(what) + " must be a finite square matrix");
  }
  if (!is_symmetric(m, tol) ||
      real_part_definiteness(m, tol) != Definiteness::PositiveDefinite) {
    throw Error(ErrorCode::InvalidCompensator,
                std::string(what) + " must be symmetric with positive definite real part");
  }
}

}  // namespace

PiSection apply_series_compensation(const PiSection& line, const ComplexMatrix& z_comp,
                                    double tol) {
  require_strict_compensator(z_comp, tol, "series compensator");
  if (z_comp.rows() != line.series_impedance.phase_count()) {
    throw Error(ErrorCode::ShapeMismatch, "compensator phase count does not match the line");
  }
  return PiSection{
      CompoundBranchImpedance::from_matrix(line.series_impedance.matrix() + z_comp, tol),
      line.shunt_from, line.shunt_to};
}

PiSection apply_shunt_compensation(const PiSection& line, const ComplexMatrix& y_m,
                                   const ComplexMatrix& y_n, double tol) {
  PiSection out = line;
  const struct {
    const ComplexMatrix* comp;
    ComplexMatrix* target;
    const char* name;
  } sides[] = {{&y_m, &out.shunt_from, "from-side compensator"},
               {&y_n, &out.shunt_to, "to-side compensator"}};
  for (const auto& side : sides) {
    if (side.comp->rows() != side.comp->cols() ||
        side.comp->rows() != line.series_impedance.phase_count()) {
      throw Error(ErrorCode::ShapeMismatch, std::string(side.name) + " has the wrong shape");
    }
    if (max_abs(*side.comp) <= tol) continue;  // absent compensator
    require_strict_compensator(*side.comp, tol, side.name);
    *side.target += *side.comp;
    if (validate_shunt_admittance(*side.target, tol).kind == ShuntKind::Violation) {
      throw Error(ErrorCode::HypothesisViolation,
                  std::string(side.name) + ": compensated shunt failed validation");
    }
  }
  return out;
}

CompoundShuntAdmittance aggregate_node_shunt(Index phase_count,
                                             std::span<const ComplexMatrix> contributions,
                                             double tol) {
  if (phase_count < 1) {
    throw Error(ErrorCode::InvalidPhaseCount, "phase count must be at least 1");
  }
  ComplexMatrix sum = ComplexMatrix::Zero(phase_count, phase_count);
  for (const ComplexMatrix& c : contributions) {
    if (c.rows() != phase_count || c.cols() != phase_count) {
      throw Error(ErrorCode::ShapeMismatch, "shunt contribution has the wrong shape");
    }
    sum += c;
  }
  return CompoundShuntAdmittance::from_matrix(std::move(sum), tol);
}

}  // namespace polygrid
