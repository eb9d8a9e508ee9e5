#include "kscars/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kscars/error.hpp"

namespace kscars {

// ---------------------------------------------------------------------------
// Operator strings
// ---------------------------------------------------------------------------

std::optional<std::pair<Mask, double>> OpString::apply(Mask mask, int n_sites) const noexcept {
  double amp = coeff;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    const int pos = ((it->site - 1) % n_sites + n_sites) % n_sites;
    const Mask bit = Mask{1} << pos;
    const bool set = (mask & bit) != 0;
    switch (it->op) {
      case LocalOp::P:
        if (set) return std::nullopt;
        break;
      case LocalOp::N:
        if (!set) return std::nullopt;
        break;
      case LocalOp::Sp:
        if (set) return std::nullopt;
        mask |= bit;
        break;
      case LocalOp::Sm:
        if (!set) return std::nullopt;
        mask &= ~bit;
        break;
      case LocalOp::X:
        mask ^= bit;
        break;
      case LocalOp::Z:
        if (!set) amp = -amp;
        break;
    }
  }
  return std::make_pair(mask, amp);
}

OpString OpString::operator*(const OpString& rhs) const {
  OpString out{coeff * rhs.coeff, factors};
  out.factors.insert(out.factors.end(), rhs.factors.begin(), rhs.factors.end());
  return out;
}

OperatorSum operator+(OperatorSum a, const OperatorSum& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

OperatorSum operator*(double s, OperatorSum a) {
  for (auto& t : a) t.coeff *= s;
  return a;
}

OpString dressed(int m, LocalOp op, double coeff) {
  return OpString{coeff, {{m - 1, LocalOp::P}, {m, op}, {m + 1, LocalOp::P}}};
}

OpString product(double coeff, std::initializer_list<Factor> factors) {
  return OpString{coeff, std::vector<Factor>(factors)};
}

// ---------------------------------------------------------------------------
// SparseOperator
// ---------------------------------------------------------------------------

SparseOperator::SparseOperator(BasisPtr basis, RealSparse matrix, bool hermitian)
    : basis_(std::move(basis)), matrix_(std::move(matrix)), hermitian_(hermitian) {
  require(basis_ != nullptr, ErrorKind::Configuration, "operator without basis");
  const auto d = static_cast<Eigen::Index>(basis_->size());
  require(matrix_.rows() == d && matrix_.cols() == d, ErrorKind::Configuration,
          "operator dimension does not match basis size");
}

void SparseOperator::multiply(const Eigen::Ref<const Eigen::VectorXd>& x,
                              Eigen::Ref<Eigen::VectorXd> y) const {
  const auto* outer = matrix_.outerIndexPtr();
  const auto* inner = matrix_.innerIndexPtr();
  const auto* vals = matrix_.valuePtr();
  for (Eigen::Index r = 0; r < matrix_.rows(); ++r) {
    double acc = 0.0;
    for (auto k = outer[r]; k < outer[r + 1]; ++k) acc += vals[k] * x[inner[k]];
    y[r] = acc;
  }
}

void SparseOperator::multiply(const Eigen::Ref<const Eigen::VectorXcd>& x,
                              Eigen::Ref<Eigen::VectorXcd> y) const {
  const auto* outer = matrix_.outerIndexPtr();
  const auto* inner = matrix_.innerIndexPtr();
  const auto* vals = matrix_.valuePtr();
  for (Eigen::Index r = 0; r < matrix_.rows(); ++r) {
    std::complex<double> acc = 0.0;
    for (auto k = outer[r]; k < outer[r + 1]; ++k) acc += vals[k] * x[inner[k]];
    y[r] = acc;
  }
}

double SparseOperator::coefficient(Mask row, Mask col) const {
  const auto r = basis_->index_of(row);
  const auto c = basis_->index_of(col);
  require(r.has_value() && c.has_value(), ErrorKind::Configuration, "mask not in basis");
  return matrix_.coeff(static_cast<Eigen::Index>(*r), static_cast<Eigen::Index>(*c));
}

Eigen::MatrixXd SparseOperator::to_dense() const {
  require(dimension() <= 4096, ErrorKind::Size, "dense conversion limited to dimension 4096");
  return Eigen::MatrixXd(matrix_);
}

SparseOperator SparseOperator::adjoint() const {
  return SparseOperator(basis_, RealSparse(matrix_.transpose()), hermitian_);
}

SparseOperator assemble(BasisPtr basis, const OperatorSum& terms, bool hermitian) {
  require(basis != nullptr, ErrorKind::Configuration, "null basis");
  const int n = basis->n_sites();
  const auto states = basis->states();
  const auto d = static_cast<Eigen::Index>(states.size());

  // Column-compressed assembly: column j holds the image of basis state j.
  using ColSparse = Eigen::SparseMatrix<double, Eigen::ColMajor>;
  std::vector<Eigen::Index> col_ptr(static_cast<std::size_t>(d) + 1, 0);
  std::vector<Eigen::Index> row_idx;
  std::vector<double> values;
  row_idx.reserve(static_cast<std::size_t>(d) * std::min<std::size_t>(terms.size(), 8));
  values.reserve(row_idx.capacity());

  std::vector<std::pair<Eigen::Index, double>> column;
  for (Eigen::Index j = 0; j < d; ++j) {
    column.clear();
    for (const auto& term : terms) {
      const auto image = term.apply(states[static_cast<std::size_t>(j)], n);
      if (!image) continue;
      const auto r = basis->index_of(image->first);
      if (!r) continue;
      column.emplace_back(static_cast<Eigen::Index>(*r), image->second);
    }
    std::sort(column.begin(), column.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < column.size();) {
      const Eigen::Index r = column[k].first;
      double sum = 0.0;
      for (; k < column.size() && column[k].first == r; ++k) sum += column[k].second;
      if (sum != 0.0) {
        row_idx.push_back(r);
        values.push_back(sum);
      }
    }
    col_ptr[static_cast<std::size_t>(j) + 1] = static_cast<Eigen::Index>(values.size());
  }

  std::vector<int> outer(col_ptr.begin(), col_ptr.end());
  std::vector<int> inner(row_idx.begin(), row_idx.end());
  Eigen::Map<const ColSparse> csc(d, d, static_cast<Eigen::Index>(values.size()), outer.data(),
                                  inner.data(), values.data());
  RealSparse m = csc;
  m.makeCompressed();
  return SparseOperator(std::move(basis), std::move(m), hermitian);
}

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

std::string_view to_string(Model m) noexcept {
  switch (m) {
    case Model::Paramagnetic: return "param";
    case Model::PXP: return "pxp";
    case Model::PXPPerturbed: return "pxp1";
    case Model::PXPTransverse: return "pxp-chi";
    case Model::LadderPlus: return "ladder+";
    case Model::LadderMinus: return "ladder-";
    case Model::LadderPlus1: return "ladder1+";
    case Model::LadderMinus1: return "ladder1-";
  }
  return "unknown";
}

Model parse_model(std::string_view text) {
  if (text == "param" || text == "paramagnetic") return Model::Paramagnetic;
  if (text == "pxp") return Model::PXP;
  if (text == "pxp1" || text == "pxp-perturbed") return Model::PXPPerturbed;
  if (text == "pxp-chi" || text == "pxp-transverse") return Model::PXPTransverse;
  if (text == "ladder+") return Model::LadderPlus;
  if (text == "ladder-") return Model::LadderMinus;
  if (text == "ladder1+") return Model::LadderPlus1;
  if (text == "ladder1-") return Model::LadderMinus1;
  fail(ErrorKind::Configuration, "unknown model '" + std::string(text) + "'");
}

bool is_hamiltonian(Model m) noexcept {
  return m == Model::Paramagnetic || m == Model::PXP || m == Model::PXPPerturbed ||
         m == Model::PXPTransverse;
}

Constraint required_constraint(Model m) noexcept {
  return m == Model::Paramagnetic ? Constraint::Full : Constraint::NoAdjacentExcitationsPeriodic;
}

void validate(const OperatorSpec& spec) {
  require(std::isfinite(spec.lambda), ErrorKind::Configuration, "lambda must be finite");
  require(std::isfinite(spec.chi), ErrorKind::Configuration, "chi must be finite");
  require(std::isfinite(spec.alpha_scale) && spec.alpha_scale > 0.0, ErrorKind::Configuration,
          "alpha_scale must be positive");
}

namespace terms {

namespace {
LocalOp ladder_op(int sign, int m) {
  // even sites raise in H_+, odd sites lower
  const bool even = (m % 2) == 0;
  return (even == (sign > 0)) ? LocalOp::Sp : LocalOp::Sm;
}
}  // namespace

OperatorSum paramagnetic(int n) {
  OperatorSum out;
  for (int m = 1; m <= n; ++m) out.push_back(product(1.0, {{m, LocalOp::X}}));
  return out;
}

OperatorSum paramagnetic_ladder(int sign, int n) {
  OperatorSum out;
  for (int m = 1; m <= n; ++m) out.push_back(product(1.0, {{m, ladder_op(sign, m)}}));
  return out;
}

OperatorSum paramagnetic_hz(int n) {
  OperatorSum out;
  for (int m = 1; m <= n; ++m)
    out.push_back(product(m % 2 == 0 ? 0.5 : -0.5, {{m, LocalOp::Z}}));
  return out;
}

OperatorSum pxp(int n) {
  OperatorSum out;
  for (int m = 1; m <= n; ++m) out.push_back(dressed(m, LocalOp::X));
  return out;
}

OperatorSum pxp_perturbation(int n) {
  OperatorSum out;
  for (int m = 1; m <= n; ++m) {
    out.push_back(dressed(m, LocalOp::X) * product(1.0, {{m + 2, LocalOp::P}}));
    out.push_back(product(1.0, {{m - 2, LocalOp::P}}) * dressed(m, LocalOp::X));
  }
  return out;
}

OperatorSum transverse_field(int n) {
  OperatorSum out;
  for (int m = 1; m <= n; ++m) out.push_back(product(1.0, {{m, LocalOp::Z}}));
  return out;
}

OperatorSum pxp_ladder(int sign, int n) {
  OperatorSum out;
  for (int m = 1; m <= n; ++m) out.push_back(dressed(m, ladder_op(sign, m)));
  return out;
}

OperatorSum pxp_ladder_correction(int sign, int n) {
  OperatorSum out;
  for (int m = 1; m <= n; ++m) {
    const auto op = ladder_op(sign, m);
    out.push_back(dressed(m, op) * product(1.0, {{m + 2, LocalOp::P}}));
    out.push_back(product(1.0, {{m - 2, LocalOp::P}}) * dressed(m, op));
  }
  return out;
}

OperatorSum staggered_dressed_z(int n) {
  OperatorSum out;
  for (int m = 1; m <= n; ++m) out.push_back(dressed(m, LocalOp::Z, m % 2 == 0 ? 1.0 : -1.0));
  return out;
}

}  // namespace terms

OperatorSum model_terms(const OperatorSpec& spec, int n) {
  validate(spec);
  const double inv_alpha = 1.0 / spec.alpha_scale;
  switch (spec.model) {
    case Model::Paramagnetic: return terms::paramagnetic(n);
    case Model::PXP: return terms::pxp(n);
    case Model::PXPPerturbed:
      return terms::pxp(n) + spec.lambda * terms::pxp_perturbation(n);
    case Model::PXPTransverse:
      return terms::pxp(n) + (-spec.chi) * terms::transverse_field(n);
    case Model::LadderPlus: return inv_alpha * terms::pxp_ladder(+1, n);
    case Model::LadderMinus: return inv_alpha * terms::pxp_ladder(-1, n);
    case Model::LadderPlus1:
      return inv_alpha * (terms::pxp_ladder(+1, n) +
                          spec.lambda * terms::pxp_ladder_correction(+1, n));
    case Model::LadderMinus1:
      return inv_alpha * (terms::pxp_ladder(-1, n) +
                          spec.lambda * terms::pxp_ladder_correction(-1, n));
  }
  fail(ErrorKind::Configuration, "unhandled model");
}

SparseOperator build_operator(BasisPtr basis, const OperatorSpec& spec) {
  require(basis != nullptr, ErrorKind::Configuration, "null basis");
  validate(spec);
  require(basis->constraint() == required_constraint(spec.model), ErrorKind::Configuration,
          std::string("model '") + std::string(to_string(spec.model)) + "' requires the " +
              std::string(to_string(required_constraint(spec.model))) + " basis");
  const int n = basis->n_sites();
  return assemble(std::move(basis), model_terms(spec, n), is_hamiltonian(spec.model));
}

// ---------------------------------------------------------------------------
// Algebra on assembled operators
// ---------------------------------------------------------------------------

namespace {
void require_same_basis(const SparseOperator& a, const SparseOperator& b) {
  require(a.basis()->same_as(*b.basis()), ErrorKind::Configuration,
          "operators live on different bases");
}
}  // namespace

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
  require_same_basis(a, b);
  RealSparse ab = a.matrix() * b.matrix();
  RealSparse ba = b.matrix() * a.matrix();
  RealSparse c = ab - ba;
  c.prune(0.0);
  return SparseOperator(a.basis(), std::move(c), false);
}

SparseOperator linear_combination(double ca, const SparseOperator& a, double cb,
                                  const SparseOperator& b) {
  require_same_basis(a, b);
  RealSparse c = ca * a.matrix() + cb * b.matrix();
  return SparseOperator(a.basis(), std::move(c), a.hermitian() && b.hermitian());
}

StateVector apply(const SparseOperator& op, const StateVector& v) {
  require(v.basis != nullptr && op.basis()->same_as(*v.basis), ErrorKind::Configuration,
          "state and operator live on different bases");
  StateVector out{op.basis(), Eigen::VectorXcd(op.dimension())};
  op.multiply(v.amplitudes, out.amplitudes);
  return out;
}

double frobenius_norm(const SparseOperator& a) { return a.matrix().norm(); }

double hermiticity_defect(const SparseOperator& a) {
  RealSparse diff = a.matrix() - RealSparse(a.matrix().transpose());
  return diff.norm();
}

}  // namespace kscars
