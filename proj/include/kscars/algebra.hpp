#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kscars/basis.hpp"
#include "kscars/operators.hpp"

namespace kscars {

inline constexpr int kMaxAlgebraSites = 12;

enum class AlgebraFamily { Paramagnetic, PXP, PXP1 };

std::string_view to_string(AlgebraFamily f) noexcept;
AlgebraFamily parse_family(std::string_view text);

struct AlgebraReport {
  std::string identity_name;
  double residual_frobenius = 0.0;
  long matrix_dimension = 0;
  double relative_residual = 0.0;  // residual / ||left-hand side||_F
};

/// Commutator identities of the ladder splitting of each family.
///
/// param: [H+,H-] - 2Hz, [Hz,H+-] -+ H+-, and the norms of the breaking terms.
/// pxp:   [H+,H-] - 2H0 with H0 = 1/2 sum (-1)^m PZP; [H0,H+-] -+ H+- -+ c X+-
///        with the listed X+- for c = 1 ("unit_x") and c = 1/2 ("half_x").
/// pxp1:  1/2 [H+^(1),H-^(1)] minus its lambda expansion, once with the listed
///        coefficients and once with the coefficients that close the identity.
std::vector<AlgebraReport> check_su2_identities(const BasisPtr& basis, AlgebraFamily family,
                                                double lambda = 0.0);

/// Breaking term X+- (sign = +1 / -1) of the PXP ladder algebra.
OperatorSum pxp_breaking_term(int sign, int n_sites);

struct PerturbedExpansion {
  double order0;                   // sum (Zt_2n - Zt_2n+1)
  double p_z_left, p_z_right;      // P Zt and Zt P strings
  double hop_plus, hop_minus;      // S+ S- P and S- S+ P strings
  std::vector<double> second;      // nine lambda^2 blocks
};

PerturbedExpansion listed_expansion();
PerturbedExpansion closing_expansion();

/// O(1) + lambda O(lambda) + lambda^2 O(lambda^2) assembled from `c`.
OperatorSum perturbed_commutator_expansion(const PerturbedExpansion& c, int n_sites,
                                           double lambda);

}  // namespace kscars
