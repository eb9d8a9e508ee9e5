#include "kscars/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>

#include "kscars/error.hpp"

namespace kscars {

using cplx = std::complex<double>;

std::vector<double> uniform_grid(double tmax, double dt) {
  require(std::isfinite(tmax) && tmax >= 0.0, ErrorKind::Precondition, "tmax must be >= 0");
  require(std::isfinite(dt) && dt > 0.0, ErrorKind::Precondition, "dt must be positive");
  const auto steps = static_cast<std::size_t>(std::floor(tmax / dt + 0.5));
  require(steps < 50'000'000, ErrorKind::Precondition, "time grid too long");
  std::vector<double> grid(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) grid[k] = static_cast<double>(k) * dt;
  return grid;
}

namespace {

void check_grid(const std::vector<double>& grid) {
  require(!grid.empty(), ErrorKind::Precondition, "empty time grid");
  require(grid.front() == 0.0, ErrorKind::Precondition, "time grid must start at 0");
  if (grid.size() < 2) return;
  const double dt = grid[1] - grid[0];
  require(dt > 0.0, ErrorKind::Precondition, "time grid must be increasing");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double step = grid[k] - grid[k - 1];
    require(std::abs(step - dt) <= 1e-9 * std::max(1.0, grid[k]), ErrorKind::Precondition,
            "time grid must be uniform");
  }
}

void fill_observables(EvolutionSeries& s) {
  s.complexity = complexity(s);
  s.entropy = entropy(s);
  s.fidelity_abs = fidelity(s);
  s.leakage = leakage(s);
}

// Spectral data of a real symmetric tridiagonal matrix.
struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd weights;  // first row of vectors: overlap with e_0

  Eigen::VectorXcd evolve(double t) const {
    Eigen::VectorXcd phase(values.size());
    for (Eigen::Index k = 0; k < values.size(); ++k)
      phase[k] = std::polar(weights[k], -values[k] * t);
    return vectors * phase;
  }
};

Spectrum diagonalize(const Eigen::MatrixXd& t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  require(es.info() == Eigen::Success, ErrorKind::Convergence,
          "tridiagonal eigensolver failed");
  Spectrum s{es.eigenvalues(), es.eigenvectors(), {}};
  s.weights = s.vectors.row(0).transpose();
  return s;
}

}  // namespace

EvolutionSeries evolve_tridiagonal(const TridiagonalData& tri, const std::vector<double>& grid) {
  check_grid(grid);
  require(tri.krylov_dim >= 1 && static_cast<int>(tri.a.size()) == tri.krylov_dim,
          ErrorKind::Precondition, "tridiagonal data is empty");
  const Spectrum sp = diagonalize(tri.tridiagonal());

  EvolutionSeries s;
  s.time = grid;
  s.psi.resize(static_cast<Eigen::Index>(grid.size()), tri.krylov_dim);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] == 0.0) {
      s.psi.row(static_cast<Eigen::Index>(i)).setZero();
      s.psi(static_cast<Eigen::Index>(i), 0) = 1.0;
    } else {
      s.psi.row(static_cast<Eigen::Index>(i)) = sp.evolve(grid[i]).transpose();
    }
  }
  fill_observables(s);
  return s;
}

namespace {

// One short-step Krylov space built from the current state.
struct LocalKrylov {
  Eigen::MatrixXcd basis;
  Spectrum spectrum;
  double beta_next = 0.0;  // residual norm after the last vector
  double scale = 1.0;      // norm of the starting state
};

LocalKrylov build_local(const SparseOperator& h, const Eigen::VectorXcd& psi, int m) {
  const Eigen::Index d = h.dimension();
  m = static_cast<int>(std::min<Eigen::Index>(m, d));
  LocalKrylov out;
  out.scale = psi.norm();
  out.basis.resize(d, m);
  out.basis.col(0) = psi / out.scale;

  std::vector<double> a, b;
  Eigen::VectorXcd w(d);
  int k = 0;
  for (int n = 0; n < m; ++n) {
    h.multiply(out.basis.col(n), w);
    const double an = std::real(out.basis.col(n).dot(w));
    a.push_back(an);
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXcd ov = out.basis.leftCols(n + 1).adjoint() * w;
      w.noalias() -= out.basis.leftCols(n + 1) * ov;
    }
    const double bn = w.norm();
    k = n + 1;
    out.beta_next = bn;
    if (bn <= 1e-13 * std::max(1.0, std::abs(an))) {
      out.beta_next = 0.0;
      break;
    }
    if (k == m) break;
    b.push_back(bn);
    out.basis.col(n + 1) = w / bn;
  }
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) t(i, i) = a[static_cast<std::size_t>(i)];
  for (int i = 0; i + 1 < k; ++i) t(i, i + 1) = t(i + 1, i) = b[static_cast<std::size_t>(i)];
  out.basis.conservativeResize(Eigen::NoChange, k);
  out.spectrum = diagonalize(t);
  return out;
}

}  // namespace

EvolutionSeries evolve_full(const SparseOperator& h, const StateVector& v0,
                            const std::vector<double>& grid, const TridiagonalData& tri,
                            const PropagatorOptions& options) {
  check_grid(grid);
  require(h.hermitian(), ErrorKind::Precondition, "propagation needs a Hermitian operator");
  require(v0.basis != nullptr && h.basis()->same_as(*v0.basis), ErrorKind::Configuration,
          "initial state and operator live on different bases");
  require(h.basis()->n_sites() <= kMaxFullPropagatorSites, ErrorKind::Size,
          "full-space propagation limited to N <= " + std::to_string(kMaxFullPropagatorSites));
  require(tri.has_vectors(), ErrorKind::Configuration,
          "full propagation needs stored Krylov vectors (run Lanczos with vectors)");
  require(tri.krylov_vectors.rows() == h.dimension(), ErrorKind::Configuration,
          "Krylov vectors do not match the operator dimension");
  require(options.tolerance > 0.0 && options.subspace >= 2 && options.retry_budget >= 1,
          ErrorKind::Precondition, "invalid propagator options");

  const Eigen::MatrixXcd& kv = tri.krylov_vectors;
  EvolutionSeries s;
  s.time = grid;
  s.psi.resize(static_cast<Eigen::Index>(grid.size()), kv.cols());

  Eigen::VectorXcd psi = v0.amplitudes;
  s.psi.row(0) = (kv.adjoint() * psi).transpose();

  const double t_end = grid.back();
  double tau = 0.0;
  double h_step = grid.size() > 1 ? 4.0 * (grid[1] - grid[0]) : 0.0;
  std::size_t next = 1;
  while (next < grid.size()) {
    const LocalKrylov lk = build_local(h, psi, options.subspace);
    const auto last = lk.spectrum.vectors.rows() - 1;

    double hh = std::min(h_step, t_end - tau);
    int rejections = 0;
    for (;;) {
      double err = 0.0;
      if (lk.beta_next > 0.0) err = lk.beta_next * lk.scale * std::abs(lk.spectrum.evolve(hh)[last]);
      if (err <= options.tolerance) break;
      hh *= 0.5;
      if (++rejections > options.retry_budget)
        fail(ErrorKind::Convergence, "propagator step rejected beyond the retry budget at t = " +
                                         std::to_string(tau));
    }

    const double reach = tau + hh;
    for (; next < grid.size() && grid[next] <= reach + 1e-12; ++next) {
      const Eigen::VectorXcd phi = lk.scale * (lk.basis * lk.spectrum.evolve(grid[next] - tau));
      s.psi.row(static_cast<Eigen::Index>(next)) = (kv.adjoint() * phi).transpose();
    }
    psi = lk.scale * (lk.basis * lk.spectrum.evolve(hh));
    tau = reach;
    h_step = rejections == 0 ? 1.5 * hh : hh;
  }
  fill_observables(s);
  return s;
}

std::vector<double> complexity(const EvolutionSeries& s) {
  std::vector<double> out(static_cast<std::size_t>(s.psi.rows()), 0.0);
  for (Eigen::Index i = 0; i < s.psi.rows(); ++i) {
    double c = 0.0;
    for (Eigen::Index n = 1; n < s.psi.cols(); ++n)
      c += static_cast<double>(n) * std::norm(s.psi(i, n));
    out[static_cast<std::size_t>(i)] = c;
  }
  return out;
}

std::vector<double> entropy(const EvolutionSeries& s) {
  std::vector<double> out(static_cast<std::size_t>(s.psi.rows()), 0.0);
  for (Eigen::Index i = 0; i < s.psi.rows(); ++i) {
    double e = 0.0;
    for (Eigen::Index n = 0; n < s.psi.cols(); ++n) {
      const double p = std::norm(s.psi(i, n));
      if (p > 0.0) e -= p * std::log(p);
    }
    out[static_cast<std::size_t>(i)] = e;
  }
  return out;
}

std::vector<double> fidelity(const EvolutionSeries& s) {
  std::vector<double> out(static_cast<std::size_t>(s.psi.rows()), 0.0);
  if (s.psi.cols() == 0) return out;
  for (Eigen::Index i = 0; i < s.psi.rows(); ++i)
    out[static_cast<std::size_t>(i)] = std::abs(s.psi(i, 0));
  return out;
}

std::vector<double> leakage(const EvolutionSeries& s) {
  std::vector<double> out(static_cast<std::size_t>(s.psi.rows()), 0.0);
  for (Eigen::Index i = 0; i < s.psi.rows(); ++i)
    out[static_cast<std::size_t>(i)] = std::max(0.0, 1.0 - s.psi.row(i).squaredNorm());
  return out;
}

std::vector<double> complexity_with_leakage(const EvolutionSeries& s) {
  std::vector<double> c = complexity(s);
  const std::vector<double> l = leakage(s);
  const double k = static_cast<double>(s.psi.cols());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += k * l[i];
  return c;
}

double time_average(const std::vector<double>& time, const std::vector<double>& values) {
  require(time.size() == values.size() && !time.empty(), ErrorKind::Precondition,
          "time and value arrays must match and be non-empty");
  if (time.size() == 1) return values.front();
  double acc = 0.0;
  for (std::size_t i = 1; i < time.size(); ++i)
    acc += 0.5 * (values[i] + values[i - 1]) * (time[i] - time[i - 1]);
  return acc / (time.back() - time.front());
}

std::vector<Peak> revival_peaks(const EvolutionSeries& s, double threshold, double window) {
  const std::vector<double> f = s.fidelity_abs.empty() ? fidelity(s) : s.fidelity_abs;
  const auto& t = s.time;
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    if (!(f[i] > f[i - 1] && f[i] >= f[i + 1] && f[i] > threshold)) continue;
    bool dominant = true;
    for (std::size_t j = 0; j < f.size() && dominant; ++j)
      if (j != i && std::abs(t[j] - t[i]) <= window && f[j] > f[i]) dominant = false;
    if (dominant) peaks.push_back({t[i], f[i]});
  }
  return peaks;
}

}  // namespace kscars
