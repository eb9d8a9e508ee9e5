#pragma once

#include <vector>

#include <Eigen/Core>

#include "kscars/basis.hpp"
#include "kscars/lanczos.hpp"
#include "kscars/operators.hpp"

namespace kscars {

inline constexpr int kMaxFullPropagatorSites = 20;

/// psi(t, n) = <K_n|Psi(t)> on a uniform time grid.
struct EvolutionSeries {
  std::vector<double> time;
  Eigen::MatrixXcd psi;  // rows: time, columns: Krylov index
  std::vector<double> complexity;
  std::vector<double> entropy;
  std::vector<double> fidelity_abs;
  std::vector<double> leakage;

  int krylov_dim() const noexcept { return static_cast<int>(psi.cols()); }
};

/// 0, dt, 2dt, ... up to tmax (inclusive within dt/2).
std::vector<double> uniform_grid(double tmax, double dt);

EvolutionSeries evolve_tridiagonal(const TridiagonalData& tri, const std::vector<double>& grid);

struct PropagatorOptions {
  double tolerance = 1e-10;  // local error per step
  int subspace = 30;         // Krylov dimension of each short step
  int retry_budget = 60;
};

/// Full-space short-step Krylov propagation of v0, projected on the stored
/// Krylov vectors of `tri`.
EvolutionSeries evolve_full(const SparseOperator& h, const StateVector& v0,
                            const std::vector<double>& grid, const TridiagonalData& tri,
                            const PropagatorOptions& options = {});

std::vector<double> complexity(const EvolutionSeries& s);
std::vector<double> entropy(const EvolutionSeries& s);
std::vector<double> fidelity(const EvolutionSeries& s);
std::vector<double> leakage(const EvolutionSeries& s);

/// sum_{n<K} n |psi_n|^2 + K * leakage: the spread complexity with all leaked
/// weight placed at the first index outside the stored Krylov set.
std::vector<double> complexity_with_leakage(const EvolutionSeries& s);

/// Trapezoidal time average of `values` over the series grid.
double time_average(const std::vector<double>& time, const std::vector<double>& values);

struct Peak {
  double time;
  double value;
};

/// Local maxima of |psi_0| above `threshold` that are the largest value within
/// +-window, excluding t = 0.
std::vector<Peak> revival_peaks(const EvolutionSeries& s, double threshold = 0.1,
                                double window = 2.0);

}  // namespace kscars
