#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "kscars/basis.hpp"

namespace kscars {

// ---------------------------------------------------------------------------
// Operator strings
// ---------------------------------------------------------------------------

/// Single-site operators in the {|0>, |1>} basis, |1> = excited.
///   P  = |0><0|          N  = |1><1|
///   Sp = |1><0|          Sm = |0><1|
///   X  = Sp + Sm         Z  = |1><1| - |0><0|
enum class LocalOp : std::uint8_t { P, N, Sp, Sm, X, Z };

/// One factor of an operator string. Sites are 1-based and wrap periodically,
/// so site 0 is site N and site N+1 is site 1.
struct Factor {
  int site;
  LocalOp op;
};

/// coeff * F_1 F_2 ... F_k. Factors act right to left, and repeated sites are
/// allowed (P_m P_m = P_m, Sp_m P_m = Sp_m, ...).
struct OpString {
  double coeff = 1.0;
  std::vector<Factor> factors;

  /// Image of a basis configuration: (new mask, amplitude), or nullopt when the
  /// string annihilates it.
  std::optional<std::pair<Mask, double>> apply(Mask mask, int n_sites) const noexcept;

  OpString operator*(const OpString& rhs) const;
  OpString scaled(double s) const { return OpString{coeff * s, factors}; }
};

using OperatorSum = std::vector<OpString>;

OperatorSum operator+(OperatorSum a, const OperatorSum& b);
OperatorSum operator*(double s, OperatorSum a);

/// P_{m-1} op_m P_{m+1}: the blockade-dressed single-site operator.
OpString dressed(int m, LocalOp op, double coeff = 1.0);
OpString product(double coeff, std::initializer_list<Factor> factors);

// ---------------------------------------------------------------------------
// Sparse operators on a basis
// ---------------------------------------------------------------------------

using RealSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Real sparse matrix over a basis. Columns are images of basis states; terms
/// that leave the basis are dropped, i.e. the stored matrix is the compression
/// of the operator onto the basis span.
class SparseOperator {
 public:
  SparseOperator(BasisPtr basis, RealSparse matrix, bool hermitian);

  const BasisPtr& basis() const noexcept { return basis_; }
  const RealSparse& matrix() const noexcept { return matrix_; }
  bool hermitian() const noexcept { return hermitian_; }
  Eigen::Index dimension() const noexcept { return matrix_.rows(); }
  Eigen::Index nonzeros() const noexcept { return matrix_.nonZeros(); }

  /// y = A x, fixed row-major reduction order.
  void multiply(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Ref<Eigen::VectorXd> y) const;
  void multiply(const Eigen::Ref<const Eigen::VectorXcd>& x, Eigen::Ref<Eigen::VectorXcd> y) const;

  double coefficient(Mask row, Mask col) const;
  Eigen::MatrixXd to_dense() const;
  SparseOperator adjoint() const;

 private:
  BasisPtr basis_;
  RealSparse matrix_;
  bool hermitian_;
};

SparseOperator assemble(BasisPtr basis, const OperatorSum& terms, bool hermitian);

enum class Model {
  Paramagnetic,   // sum_m X_m on the full basis
  PXP,            // sum_m P_{m-1} X_m P_{m+1}
  PXPPerturbed,   // PXP + lambda sum_m (PXPP + PPXP)
  PXPTransverse,  // sum_m (PXP - chi Z_m)
  LadderPlus,     // H_+ of the PXP splitting, divided by alpha_scale
  LadderMinus,
  LadderPlus1,    // H_+^(1) including the lambda-dressed terms
  LadderMinus1,
};

std::string_view to_string(Model m) noexcept;
Model parse_model(std::string_view text);
bool is_hamiltonian(Model m) noexcept;
Constraint required_constraint(Model m) noexcept;

struct OperatorSpec {
  Model model = Model::PXP;
  double lambda = 0.0;
  double chi = 0.0;
  double alpha_scale = 1.0;
};

void validate(const OperatorSpec& spec);

OperatorSum model_terms(const OperatorSpec& spec, int n_sites);
SparseOperator build_operator(BasisPtr basis, const OperatorSpec& spec);

/// AB - BA. Bases must agree.
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);
SparseOperator linear_combination(double ca, const SparseOperator& a, double cb, const SparseOperator& b);

StateVector apply(const SparseOperator& op, const StateVector& v);

double frobenius_norm(const SparseOperator& a);
/// ||A - A^T||_F
double hermiticity_defect(const SparseOperator& a);

// ---------------------------------------------------------------------------
// Term libraries
// ---------------------------------------------------------------------------

namespace terms {

OperatorSum paramagnetic(int n);
/// H^{+/-} = sum_n (S^{+/-}_{2n} + S^{-/+}_{2n-1}); sign = +1 or -1.
OperatorSum paramagnetic_ladder(int sign, int n);
/// H^z = sum_n (Z_{2n} - Z_{2n-1}) / 2
OperatorSum paramagnetic_hz(int n);

OperatorSum pxp(int n);
/// sum_m (P_{m-1} X_m P_{m+1} P_{m+2} + P_{m-2} P_{m-1} X_m P_{m+1}), without lambda.
OperatorSum pxp_perturbation(int n);
OperatorSum transverse_field(int n);

/// H_{+/-} = sum_{m odd} P S^{-/+}_m P + sum_{m even} P S^{+/-}_m P
OperatorSum pxp_ladder(int sign, int n);
/// Lambda-linear part of H^(1)_{+/-} (coefficient of lambda).
OperatorSum pxp_ladder_correction(int sign, int n);
/// sum_m (-1)^m P_{m-1} Z_m P_{m+1}
OperatorSum staggered_dressed_z(int n);

}  // namespace terms

}  // namespace kscars
