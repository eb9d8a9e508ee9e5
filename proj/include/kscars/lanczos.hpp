#pragma once

#include <vector>

#include <Eigen/Core>

#include "kscars/basis.hpp"
#include "kscars/operators.hpp"

namespace kscars {

inline constexpr double kDefaultBTol = 1e-8;
inline constexpr int kDefaultKmax = 20;

struct TridiagonalData {
  std::vector<double> a;  // a_0 .. a_{K-1}
  std::vector<double> b;  // b_1 .. b_{K-1}; b[k] holds b_{k+1}
  int krylov_dim = 0;
  bool terminated_naturally = false;
  double b_tol = kDefaultBTol;
  // Norm of the residual after the last stored vector (would-be b_K).
  double tail_norm = 0.0;
  // Column n is |K_n>. Empty unless vectors were requested.
  Eigen::MatrixXcd krylov_vectors;

  bool has_vectors() const noexcept { return krylov_vectors.cols() > 0; }
  /// [0, b_1, ..., b_{K-1}], i.e. entry n is b_n.
  std::vector<double> b_by_index() const;
  Eigen::MatrixXd tridiagonal() const;
};

/// Lanczos recursion with two-pass full reorthogonalization. Stops when
/// b_n < b_tol * max_k b_k or when kmax vectors have been built. kmax is
/// clamped to the basis dimension.
TridiagonalData run_lanczos(const SparseOperator& h, const StateVector& v0, int kmax,
                            double b_tol = kDefaultBTol, bool store_vectors = false);

}  // namespace kscars
