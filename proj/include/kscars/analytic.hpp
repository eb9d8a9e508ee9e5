#pragma once

#include <complex>
#include <utility>

namespace kscars {

/// H = alpha (J+ + J-) + eta0 J0 + delta on a spin-j representation; q enters
/// only the deformed Lanczos coefficients.
struct AnalyticParams {
  double j = 0.5;
  double alpha = 1.0;
  double eta0 = 0.0;
  double delta = 0.0;
  double q = 1.0;

  /// 2j as an integer; throws Domain unless 2j is a nonnegative integer.
  int two_j() const;
  double tau() const;  // ln q
};

void validate(const AnalyticParams& p);

/// [x]_q = (q^x - q^-x) / (q - q^-1). Integer x goes through the Chebyshev
/// recurrence, [n]_q = U_{n-1}((q + 1/q) / 2).
double q_number(double x, double q);

/// Chebyshev polynomial of the second kind, U_{-1} = 0.
double cheb_u(int n, double x);

/// (a_n, b_n) of the undeformed algebra; valid for 0 <= n <= 2j+1 with
/// b_0 = b_{2j+1} = 0.
std::pair<double, double> lanczos_su2(int n, const AnalyticParams& p);

/// alpha sqrt([n]_q [2j-n+1]_q) for 0 <= n <= 2j+1, q in (0, 1].
double lanczos_suq2(int n, const AnalyticParams& p);
/// Same radicand expanded as a sum of Chebyshev polynomials.
double lanczos_suq2_chebyshev_sum(int n, const AnalyticParams& p);
/// Smooth interpolation in n (for plotting), using the sinh form of [x]_q.
double lanczos_suq2_continuous(double n, const AnalyticParams& p);

/// psi_n(t) of the undeformed algebra started from the lowest-weight state.
std::complex<double> su2_wavefunction(int n, double t, const AnalyticParams& p);
double su2_complexity(double t, const AnalyticParams& p);
/// Krylov entropy from the closed-form wavefunctions.
double su2_entropy(double t, const AnalyticParams& p);

}  // namespace kscars
