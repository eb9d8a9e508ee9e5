#include "kscars/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <tuple>

#include "kscars/analytic.hpp"
#include "kscars/error.hpp"

namespace kscars {

FitWindow FitWindow::standard(int n_sites) { return {0, n_sites + 1}; }

FitWindow FitWindow::table(int n_sites) {
  return n_sites < 20 ? FitWindow{0, n_sites + 1} : FitWindow{0, n_sites - 2};
}

namespace {

constexpr double kQLow = 0.5;
constexpr int kCoarse = 200;

void check_target(std::span<const double> b, int n_sites, const FitWindow& w) {
  require(n_sites >= 2 && n_sites % 2 == 0, ErrorKind::Precondition,
          "fits need an even number of sites, got " + std::to_string(n_sites));
  require(w.lower >= 0 && w.lower <= w.upper && w.upper <= n_sites + 1, ErrorKind::Precondition,
          "fit window must lie inside [0, N+1]");
  require(b.size() > static_cast<std::size_t>(w.upper), ErrorKind::Precondition,
          "target has " + std::to_string(b.size()) + " coefficients, fit needs n up to " +
              std::to_string(w.upper));
  for (int n = w.lower; n <= w.upper; ++n)
    require(std::isfinite(b[static_cast<std::size_t>(n)]), ErrorKind::Precondition,
            "non-finite target coefficient");
}

// shape s_n(q) = sqrt([n]_q [N-n+1]_q)
double shape(int n, int n_sites, double q) {
  const double r = q_number(n, q) * q_number(n_sites - n + 1, q);
  return std::sqrt(std::max(0.0, r));
}

}  // namespace

std::pair<double, double> optimal_alpha(std::span<const double> b, int n_sites, double q,
                                        const FitWindow& w) {
  double sb = 0.0, ss = 0.0;
  for (int n = w.lower; n <= w.upper; ++n) {
    const double s = shape(n, n_sites, q);
    const double t = b[static_cast<std::size_t>(n)];
    sb += s * t;
    ss += s * s;
  }
  const double alpha = ss > 0.0 ? sb / ss : 0.0;
  double res = 0.0;
  for (int n = w.lower; n <= w.upper; ++n) {
    const double e = b[static_cast<std::size_t>(n)] - alpha * shape(n, n_sites, q);
    res += e * e;
  }
  return {alpha, res};
}

DeformationFit fit_q_alpha(std::span<const double> b, int n_sites) {
  return fit_q_alpha(b, n_sites, FitWindow::standard(n_sites));
}

DeformationFit fit_q_alpha(std::span<const double> b, int n_sites, const FitWindow& w) {
  check_target(b, n_sites, w);
  auto objective = [&](double q) { return optimal_alpha(b, n_sites, q, w).second; };

  const double step = (1.0 - kQLow) / kCoarse;
  int best = kCoarse;
  double best_val = objective(1.0);
  for (int k = kCoarse - 1; k >= 1; --k) {
    const double v = objective(kQLow + k * step);
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }

  // golden-section refinement on the neighbouring grid cells
  double lo = kQLow + std::max(best - 1, 0) * step;
  double hi = std::min(1.0, kQLow + (best + 1) * step);
  if (lo <= kQLow) lo = kQLow + 1e-12;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  while (hi - lo > 1e-11) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = objective(x2);
    }
  }
  double q = 0.5 * (lo + hi);
  double val = objective(q);
  for (double cand : {kQLow + best * step, 1.0}) {
    const double v = objective(cand);
    if (v < val) {
      val = v;
      q = cand;
    }
  }

  DeformationFit fit;
  fit.n_sites = n_sites;
  fit.q_hat = q;
  std::tie(fit.alpha_hat, fit.residual) = optimal_alpha(b, n_sites, q, w);
  fit.fit_range = w;
  return fit;
}

Su2Fit fit_alpha_su2(std::span<const double> b, int n_sites) {
  return fit_alpha_su2(b, n_sites, FitWindow::standard(n_sites));
}

Su2Fit fit_alpha_su2(std::span<const double> b, int n_sites, const FitWindow& w) {
  check_target(b, n_sites, w);
  const auto [alpha, res] = optimal_alpha(b, n_sites, 1.0, w);
  return {alpha, res};
}

RegressionSummary extrapolate_q(std::span<const DeformationFit> fits) {
  std::vector<std::pair<int, double>> pts;
  pts.reserve(fits.size());
  for (const auto& f : fits) pts.emplace_back(f.n_sites, f.q_hat);
  return extrapolate_q(std::span<const std::pair<int, double>>(pts));
}

RegressionSummary extrapolate_q(std::span<const std::pair<int, double>> size_q) {
  std::set<int> sizes;
  for (const auto& [n, q] : size_q) {
    require(n > 0, ErrorKind::Precondition, "system sizes must be positive");
    require(std::isfinite(q), ErrorKind::Precondition, "q values must be finite");
    sizes.insert(n);
  }
  require(sizes.size() >= 2, ErrorKind::Precondition,
          "extrapolation needs at least two distinct system sizes");

  RegressionSummary r;
  const double m = static_cast<double>(size_q.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [n, q] : size_q) {
    r.points.emplace_back(1.0 / n, q);
    sx += 1.0 / n;
    sy += q;
  }
  const double xbar = sx / m, ybar = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : r.points) {
    sxx += (x - xbar) * (x - xbar);
    sxy += (x - xbar) * (y - ybar);
    syy += (y - ybar) * (y - ybar);
  }
  r.slope = sxy / sxx;
  r.intercept = ybar - r.slope * xbar;
  double ssr = 0.0;
  for (const auto& [x, y] : r.points) {
    const double e = y - (r.intercept + r.slope * x);
    ssr += e * e;
  }
  r.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  r.std_error = m > 2.0 ? std::sqrt(ssr / (m - 2.0) * (1.0 / m + xbar * xbar / sxx)) : 0.0;
  r.q_infinity = r.intercept > 1.0 ? 1.0 / r.intercept : r.intercept;
  return r;
}

}  // namespace kscars
