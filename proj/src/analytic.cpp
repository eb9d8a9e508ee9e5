#include "kscars/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kscars/error.hpp"

namespace kscars {

int AnalyticParams::two_j() const {
  const double tj = 2.0 * j;
  require(std::isfinite(tj) && tj >= 0.0 && tj == std::round(tj) && tj <= 1e6, ErrorKind::Domain,
          "2j must be a nonnegative integer, got j = " + std::to_string(j));
  return static_cast<int>(tj);
}

double AnalyticParams::tau() const { return std::log(q); }

void validate(const AnalyticParams& p) {
  (void)p.two_j();
  require(std::isfinite(p.alpha), ErrorKind::Domain, "alpha must be finite");
  require(std::isfinite(p.eta0) && std::isfinite(p.delta), ErrorKind::Domain,
          "eta0 and delta must be finite");
  require(std::isfinite(p.q) && p.q > 0.0 && p.q <= 1.0, ErrorKind::Domain,
          "q must lie in (0, 1], got " + std::to_string(p.q));
}

double cheb_u(int n, double x) {
  require(n >= -1, ErrorKind::Domain, "cheb_u needs n >= -1");
  if (n == -1) return 0.0;
  double prev = 0.0, cur = 1.0;
  for (int k = 0; k < n; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

// U_n extended to all integers: U_{-1} = 0, U_{-n-2} = -U_n.
double cheb_u_any(int n, double x) {
  if (n >= -1) return cheb_u(n, x);
  return -cheb_u(-n - 2, x);
}

}  // namespace

double q_number(double x, double q) {
  require(std::isfinite(q) && q > 0.0, ErrorKind::Domain,
          "q must be positive, got " + std::to_string(q));
  require(std::isfinite(x), ErrorKind::Domain, "q_number needs finite x");
  if (q == 1.0) return x;
  if (x == std::round(x) && std::abs(x) <= 1e6) {
    const int n = static_cast<int>(std::abs(x));
    const double v = n == 0 ? 0.0 : cheb_u(n - 1, 0.5 * (q + 1.0 / q));
    return x < 0 ? -v : v;
  }
  const double tau = std::log(q);
  return std::sinh(x * tau) / std::sinh(tau);
}

std::pair<double, double> lanczos_su2(int n, const AnalyticParams& p) {
  const int tj = p.two_j();
  require(n >= 0 && n <= tj + 1, ErrorKind::Domain,
          "n must lie in [0, 2j+1], got " + std::to_string(n));
  const double a = p.eta0 * (-p.j + n) + p.delta;
  const double b = p.alpha * std::sqrt(static_cast<double>(n) * (tj - n + 1));
  return {a, b};
}

double lanczos_suq2(int n, const AnalyticParams& p) {
  validate(p);
  const int tj = p.two_j();
  require(n >= 0 && n <= tj + 1, ErrorKind::Domain,
          "n must lie in [0, 2j+1], got " + std::to_string(n));
  const double r = q_number(n, p.q) * q_number(tj - n + 1, p.q);
  return p.alpha * std::sqrt(std::max(0.0, r));
}

double lanczos_suq2_chebyshev_sum(int n, const AnalyticParams& p) {
  validate(p);
  const int tj = p.two_j();
  require(n >= 0 && n <= tj + 1, ErrorKind::Domain,
          "n must lie in [0, 2j+1], got " + std::to_string(n));
  const double x = 0.5 * (p.q + 1.0 / p.q);
  double r = 0.0;
  for (int k = 0; k < n; ++k) r += cheb_u_any(tj - 2 * n + 2 * k + 1, x);
  return p.alpha * std::sqrt(std::max(0.0, r));
}

double lanczos_suq2_continuous(double n, const AnalyticParams& p) {
  validate(p);
  const int tj = p.two_j();
  require(n >= 0.0 && n <= tj + 1.0, ErrorKind::Domain, "n must lie in [0, 2j+1]");
  double r;
  if (p.q == 1.0) {
    r = n * (tj - n + 1.0);
  } else {
    const double tau = p.tau();
    r = std::sinh(n * tau) * std::sinh((tj - n + 1.0) * tau) / (std::sinh(tau) * std::sinh(tau));
  }
  return p.alpha * std::sqrt(std::max(0.0, r));
}

namespace {

std::complex<double> ipow(std::complex<double> z, int e) {
  std::complex<double> r = 1.0;
  while (e > 0) {
    if (e & 1) r *= z;
    z *= z;
    e >>= 1;
  }
  return r;
}

}  // namespace

std::complex<double> su2_wavefunction(int n, double t, const AnalyticParams& p) {
  const int tj = p.two_j();
  require(n >= 0 && n <= tj, ErrorKind::Domain,
          "n must lie in [0, 2j], got " + std::to_string(n));
  require(std::isfinite(t), ErrorKind::Domain, "t must be finite");
  const double s = std::sqrt(4.0 * p.alpha * p.alpha + p.eta0 * p.eta0);
  if (s == 0.0) {
    const std::complex<double> phase = std::polar(1.0, -(p.delta - p.eta0 * p.j) * t);
    return n == 0 ? phase : 0.0;
  }
  const double th = 0.5 * t * s;
  const std::complex<double> c(std::cos(th), p.eta0 * std::sin(th) / s);
  const std::complex<double> d(0.0, -2.0 * p.alpha * std::sin(th) / s);
  const double log_binom =
      std::lgamma(tj + 1.0) - std::lgamma(n + 1.0) - std::lgamma(tj - n + 1.0);
  return std::polar(std::exp(0.5 * log_binom), -p.delta * t) * ipow(d, n) * ipow(c, tj - n);
}

double su2_complexity(double t, const AnalyticParams& p) {
  const double tj = 2.0 * p.j;
  const double s = std::sqrt(4.0 * p.alpha * p.alpha + p.eta0 * p.eta0);
  if (s == 0.0) return 0.0;
  const double sn = std::sin(0.5 * t * s);
  return tj * 4.0 * p.alpha * p.alpha / (s * s) * sn * sn;
}

double su2_entropy(double t, const AnalyticParams& p) {
  const int tj = p.two_j();
  double e = 0.0;
  for (int n = 0; n <= tj; ++n) {
    const double pr = std::norm(su2_wavefunction(n, t, p));
    if (pr > 0.0) e -= pr * std::log(pr);
  }
  return e;
}

}  // namespace kscars
