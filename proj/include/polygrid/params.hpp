#pragma once

#include <span>
#include <string>
#include <vector>

#include "polygrid/linalg.hpp"

namespace polygrid {

/**
 * Outcome of checking a compound branch impedance against the parameter
 * requirements: complex symmetry, invertibility, and a positive
 * semi-definite real part. Violations are reported as values, never thrown.
 */
struct BranchValidation {
  bool conformant = false;
  bool strictly_passive = false;  // real part positive definite
  std::vector<std::string> violations;
};

enum class ShuntKind { Zero, Conformant, Violation };

struct ShuntValidation {
  ShuntKind kind = ShuntKind::Violation;
  std::vector<std::string> violations;
};

BranchValidation validate_branch_impedance(const ComplexMatrix& z, double tol = kDefaultEigTol);

/// A shunt admittance may be exactly zero (max |entry| <= tol); otherwise it
/// must satisfy the same symmetry/invertibility/passivity requirements as a
/// branch impedance.
ShuntValidation validate_shunt_admittance(const ComplexMatrix& y, double tol = kDefaultEigTol);

/**
 * Compound branch impedance Z of one polyphase branch: a |P| x |P| complex
 * matrix that is symmetric, invertible, and passive. Strict passivity
 * (positive definite real part) is evaluated once at construction and kept
 * as a queryable flag.
 */
class CompoundBranchImpedance {
 public:
  static CompoundBranchImpedance from_matrix(ComplexMatrix z, double tol = kDefaultEigTol);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  bool strictly_passive() const noexcept { return strictly_passive_; }
  Index phase_count() const noexcept { return matrix_.rows(); }

  bool operator==(const CompoundBranchImpedance& other) const {
    return matrix_ == other.matrix_;
  }

 private:
  CompoundBranchImpedance(ComplexMatrix z, bool strict)
      : matrix_(std::move(z)), strictly_passive_(strict) {}

  ComplexMatrix matrix_;
  bool strictly_passive_ = false;
};

/// Compound shunt admittance Y of one polyphase node; either exactly zero or
/// symmetric, invertible, and passive.
class CompoundShuntAdmittance {
 public:
  static CompoundShuntAdmittance zero(Index phase_count);
  static CompoundShuntAdmittance from_matrix(ComplexMatrix y, double tol = kDefaultEigTol);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  bool is_zero() const noexcept { return zero_; }
  Index phase_count() const noexcept { return matrix_.rows(); }

  bool operator==(const CompoundShuntAdmittance& other) const {
    return zero_ == other.zero_ && matrix_ == other.matrix_;
  }

 private:
  CompoundShuntAdmittance(ComplexMatrix y, bool zero) : matrix_(std::move(y)), zero_(zero) {}

  ComplexMatrix matrix_;
  bool zero_ = true;
};

/// Two-port equivalent with the series impedance between the terminals and
/// one shunt admittance hanging off each end.
struct PiSection {
  CompoundBranchImpedance series_impedance;
  ComplexMatrix shunt_from;
  ComplexMatrix shunt_to;
};

/// Two-port equivalent made of two series impedances joined at a center node
/// carrying a shunt. Installing it into a grid model introduces that center
/// node as a virtual polyphase node.
struct TeeSection {
  CompoundBranchImpedance primary_impedance;
  CompoundBranchImpedance secondary_impedance;
  CompoundShuntAdmittance center_shunt;
};

/// Per-unit-length line constants at a fixed angular frequency. All four
/// matrices must be real symmetric positive definite.
struct LineParameters {
  RealMatrix r_per_len;
  RealMatrix l_per_len;
  RealMatrix g_per_len;
  RealMatrix c_per_len;
  double length = 0.0;
  double omega = 0.0;
};

/// Throws InvalidLineParameters when the constants violate their shape or
/// definiteness requirements.
void validate_line_parameters(const LineParameters& p, double tol = kDefaultEigTol);

/**
 * Electrically short line: series (R' + jwL') * length with half of the total
 * shunt admittance (G' + jwC') * length placed at each end. The output is
 * strictly passive by construction.
 */
PiSection build_pi_line(const LineParameters& p, double tol = kDefaultEigTol);

/**
 * Transformer as a T-section: winding resistance plus leakage reactance on
 * each side, hysteresis conductance plus magnetizing susceptance at the
 * center. rw1, rw2, gh must be positive diagonal; ll1, ll2, bm symmetric
 * positive definite.
 */
TeeSection build_tee_transformer(const RealMatrix& rw1, const RealMatrix& ll1,
                                 const RealMatrix& rw2, const RealMatrix& ll2,
                                 const RealMatrix& gh, const RealMatrix& bm, double omega,
                                 double tol = kDefaultEigTol);

/// Adds a series compensator impedance (symmetric, strictly passive) to the
/// line's series branch; shunts stay untouched.
PiSection apply_series_compensation(const PiSection& line, const ComplexMatrix& z_comp,
                                    double tol = kDefaultEigTol);

/// Adds shunt compensator admittances to the respective ends. A zero matrix
/// means no compensator on that side; non-zero compensators must be symmetric
/// with positive definite real part.
PiSection apply_shunt_compensation(const PiSection& line, const ComplexMatrix& y_m,
                                   const ComplexMatrix& y_n, double tol = kDefaultEigTol);

/// Entrywise sum of all shunt contributions incident to one node, validated
/// as a compound shunt admittance. The empty sum is the zero shunt.
CompoundShuntAdmittance aggregate_node_shunt(Index phase_count,
                                             std::span<const ComplexMatrix> contributions,
                                             double tol = kDefaultEigTol);

}  // namespace polygrid
