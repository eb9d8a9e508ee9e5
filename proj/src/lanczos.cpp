#include "kscars/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kscars/error.hpp"

namespace kscars {

std::vector<double> TridiagonalData::b_by_index() const {
  std::vector<double> out;
  out.reserve(b.size() + 1);
  out.push_back(0.0);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Eigen::MatrixXd TridiagonalData::tridiagonal() const {
  const auto k = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) t(i, i) = a[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < k; ++i) {
    t(i, i + 1) = b[static_cast<std::size_t>(i)];
    t(i + 1, i) = b[static_cast<std::size_t>(i)];
  }
  return t;
}

namespace {

template <class X, class Y>
double real_dot(const X& x, const Y& y) {
  return std::real(x.dot(y));
}

template <class Scalar>
TridiagonalData lanczos_impl(const SparseOperator& h,
                             const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v0, int kmax,
                             double b_tol, bool store_vectors) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  const Eigen::Index d = h.dimension();
  const int kcap = static_cast<int>(std::min<Eigen::Index>(kmax, d));

  TridiagonalData out;
  out.b_tol = b_tol;
  Mat v(d, kcap);
  v.col(0) = v0;

  Vec w(d);
  double bmax = 0.0;
  int k = 0;
  for (int n = 0;; ++n) {
    h.multiply(v.col(n), w);
    const double an = real_dot(v.col(n), w);
    out.a.push_back(an);
    w -= an * v.col(n);
    if (n > 0) w -= out.b.back() * v.col(n - 1);

    // two passes of classical Gram-Schmidt against everything kept so far
    for (int pass = 0; pass < 2; ++pass) {
      const Vec overlaps = v.leftCols(n + 1).adjoint() * w;
      w.noalias() -= v.leftCols(n + 1) * overlaps;
    }

    const double bn = w.norm();
    bmax = std::max(bmax, bn);
    k = n + 1;
    out.tail_norm = bn;
    if (bn == 0.0 || bn < b_tol * bmax) {
      out.terminated_naturally = true;
      break;
    }
    if (k == kcap) break;
    out.b.push_back(bn);
    v.col(n + 1) = w / bn;
  }

  out.krylov_dim = k;
  if (store_vectors) out.krylov_vectors = v.leftCols(k).template cast<std::complex<double>>();
  return out;
}

}  // namespace

TridiagonalData run_lanczos(const SparseOperator& h, const StateVector& v0, int kmax,
                            double b_tol, bool store_vectors) {
  require(v0.basis != nullptr && h.basis()->same_as(*v0.basis), ErrorKind::Configuration,
          "initial state and operator live on different bases");
  require(h.hermitian(), ErrorKind::Precondition, "Lanczos needs a Hermitian operator");
  require(kmax >= 1, ErrorKind::Precondition, "kmax must be at least 1");
  require(b_tol > 0.0 && std::isfinite(b_tol), ErrorKind::Precondition, "b_tol must be positive");
  const double nrm = v0.amplitudes.norm();
  require(std::abs(nrm - 1.0) <= 1e-12, ErrorKind::Precondition,
          "initial state must be normalized, norm = " + std::to_string(nrm));

  if (v0.amplitudes.imag().cwiseAbs().maxCoeff() == 0.0) {
    const Eigen::VectorXd real = v0.amplitudes.real();
    return lanczos_impl<double>(h, real, kmax, b_tol, store_vectors);
  }
  return lanczos_impl<std::complex<double>>(h, v0.amplitudes, kmax, b_tol, store_vectors);
}

}  // namespace kscars
