#pragma once

#include <span>
#include <utility>
#include <vector>

namespace kscars {

/// Inclusive range of Lanczos indices n entering the least-squares sum.
struct FitWindow {
  int lower = 0;
  int upper = 0;

  /// n = 0 .. N+1.
  static FitWindow standard(int n_sites);
  /// n = 0 .. N+1 below N = 20 and n = 0 .. N-2 from N = 20 on; this window
  /// matches the tabulated (q, alpha) values at every size.
  static FitWindow table(int n_sites);
};

struct DeformationFit {
  int n_sites = 0;
  double q_hat = 1.0;
  double alpha_hat = 0.0;
  double residual = 0.0;
  FitWindow fit_range;
};

struct Su2Fit {
  double alpha_hat = 0.0;
  double residual = 0.0;
};

/// Least-squares alpha for fixed q and the resulting sum of squared errors.
/// b_target[n] is b_n with b_0 = 0.
std::pair<double, double> optimal_alpha(std::span<const double> b_target, int n_sites, double q,
                                        const FitWindow& window);

DeformationFit fit_q_alpha(std::span<const double> b_target, int n_sites);
DeformationFit fit_q_alpha(std::span<const double> b_target, int n_sites, const FitWindow& window);

Su2Fit fit_alpha_su2(std::span<const double> b_target, int n_sites);
Su2Fit fit_alpha_su2(std::span<const double> b_target, int n_sites, const FitWindow& window);

struct RegressionSummary {
  double slope = 0.0;
  double intercept = 0.0;
  double q_infinity = 0.0;
  double r_squared = 0.0;
  double std_error = 0.0;  // of the intercept
  std::vector<std::pair<double, double>> points;  // (1/N, q_N)
};

/// OLS of q_N against 1/N. An intercept above 1 is mapped to its inverse.
RegressionSummary extrapolate_q(std::span<const DeformationFit> fits);
RegressionSummary extrapolate_q(std::span<const std::pair<int, double>> size_q);

}  // namespace kscars
