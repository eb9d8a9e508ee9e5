#include "kscars/algebra.hpp"

#include <string>

#include "kscars/error.hpp"

namespace kscars {

std::string_view to_string(AlgebraFamily f) noexcept {
  switch (f) {
    case AlgebraFamily::Paramagnetic: return "param";
    case AlgebraFamily::PXP: return "pxp";
    case AlgebraFamily::PXP1: return "pxp1";
  }
  return "unknown";
}

AlgebraFamily parse_family(std::string_view text) {
  if (text == "param" || text == "paramagnetic") return AlgebraFamily::Paramagnetic;
  if (text == "pxp") return AlgebraFamily::PXP;
  if (text == "pxp1") return AlgebraFamily::PXP1;
  fail(ErrorKind::Configuration, "unknown algebra family '" + std::string(text) + "'");
}

OperatorSum pxp_breaking_term(int sign, int n_sites) {
  return -1.0 * terms::pxp_ladder_correction(sign, n_sites);
}

namespace {

using L = LocalOp;

OpString P(int m) { return product(1.0, {{m, L::P}}); }
OpString S(int m, LocalOp op) { return product(1.0, {{m, op}}); }
OpString Zt(int m) { return dressed(m, L::Z); }

// sum_{n=1}^{N/2} (f(2n) - f(2n+1)) with an overall coefficient
template <class F>
OperatorSum staggered(int n_sites, double coeff, F f) {
  OperatorSum out;
  for (int n = 1; n <= n_sites / 2; ++n) {
    out.push_back(f(2 * n).scaled(coeff));
    out.push_back(f(2 * n + 1).scaled(-coeff));
  }
  return out;
}

// O(lambda^2) blocks, each written as sum_n (f(2n) - f(2n+1)) up to sign.
std::vector<OperatorSum> second_order_blocks(int n) {
  auto hop = [](LocalOp first, LocalOp second) {
    return [=](int m) { return dressed(m, first) * S(m + 2, second); };
  };
  std::vector<OperatorSum> out;
  out.push_back(staggered(n, -1.0, [](int m) { return P(m - 2) * Zt(m); }));
  out.push_back(staggered(n, 1.0, [](int m) { return Zt(m) * P(m + 2); }));
  out.push_back(staggered(n, 1.0, [&](int m) { return hop(L::Sp, L::Sm)(m) * P(m + 3); }));
  out.push_back(staggered(n, 1.0, [&](int m) { return hop(L::Sm, L::Sp)(m) * P(m + 3); }));
  out.push_back(staggered(n, -1.0, [](int m) { return P(m - 2) * Zt(m) * P(m + 2); }));
  out.push_back(staggered(n, 1.0, [&](int m) { return P(m - 2) * hop(L::Sp, L::Sm)(m) * P(m + 3); }));
  out.push_back(staggered(n, 1.0, [&](int m) { return P(m - 2) * hop(L::Sm, L::Sp)(m) * P(m + 3); }));
  out.push_back(
      staggered(n, 1.0, [&](int m) { return hop(L::Sp, L::Sm)(m) * P(m + 3) * P(m + 4); }));
  out.push_back(
      staggered(n, 1.0, [&](int m) { return hop(L::Sm, L::Sp)(m) * P(m + 3) * P(m + 4); }));
  return out;
}

AlgebraReport report(std::string name, const SparseOperator& lhs, const SparseOperator& rhs) {
  RealSparse diff = lhs.matrix() - rhs.matrix();
  const double res = diff.norm();
  const double ln = lhs.matrix().norm();
  return {std::move(name), res, static_cast<long>(lhs.dimension()), ln > 0.0 ? res / ln : res};
}

AlgebraReport norm_report(std::string name, const SparseOperator& x, const SparseOperator& ref) {
  const double nx = x.matrix().norm();
  const double nr = ref.matrix().norm();
  return {std::move(name), nx, static_cast<long>(x.dimension()), nr > 0.0 ? nx / nr : nx};
}

SparseOperator scaled(const SparseOperator& a, double s) {
  return SparseOperator(a.basis(), RealSparse(s * a.matrix()), false);
}

}  // namespace

PerturbedExpansion listed_expansion() {
  return {1.0, -2.0, 2.0, 1.0, 1.0, {1.0, 1.0, 0.5, 0.5, 2.0, -0.5, -0.5, 0.5, 0.5}};
}

PerturbedExpansion closing_expansion() {
  return {0.5, 1.0, 1.0, 1.0, 1.0, {-0.5, 0.5, 0.5, 0.5, -1.0, 0.5, 0.5, 0.5, 0.5}};
}

OperatorSum perturbed_commutator_expansion(const PerturbedExpansion& c, int n, double lambda) {
  require(c.second.size() == 9, ErrorKind::Configuration, "expansion needs nine second-order coefficients");
  OperatorSum out = staggered(n, c.order0, [](int m) { return Zt(m); });
  out = out + staggered(n, lambda * c.p_z_left, [](int m) { return P(m - 2) * Zt(m); });
  out = out + staggered(n, lambda * c.p_z_right, [](int m) { return Zt(m) * P(m + 2); });
  out = out + staggered(n, lambda * c.hop_plus, [](int m) {
          return dressed(m, L::Sp) * dressed(m + 2, L::Sm) * P(m + 3);
        });
  out = out + staggered(n, lambda * c.hop_minus, [](int m) {
          return dressed(m, L::Sm) * dressed(m + 2, L::Sp) * P(m + 3);
        });
  const auto blocks = second_order_blocks(n);
  for (std::size_t k = 0; k < blocks.size(); ++k)
    out = out + (lambda * lambda * c.second[k]) * blocks[k];
  return out;
}

std::vector<AlgebraReport> check_su2_identities(const BasisPtr& basis, AlgebraFamily family,
                                                double lambda) {
  require(basis != nullptr, ErrorKind::Configuration, "null basis");
  const int n = basis->n_sites();
  require(n <= kMaxAlgebraSites, ErrorKind::Size,
          "algebra checks limited to N <= " + std::to_string(kMaxAlgebraSites));
  require(n % 2 == 0 && n >= 4, ErrorKind::Precondition,
          "ladder splitting needs an even N >= 4");
  require(std::isfinite(lambda), ErrorKind::Configuration, "lambda must be finite");
  const Constraint want =
      family == AlgebraFamily::Paramagnetic ? Constraint::Full : Constraint::NoAdjacentExcitationsPeriodic;
  require(basis->constraint() == want, ErrorKind::Configuration,
          std::string("family '") + std::string(to_string(family)) + "' needs the " +
              std::string(to_string(want)) + " basis");

  std::vector<AlgebraReport> out;
  if (family == AlgebraFamily::Paramagnetic) {
    const auto hp = assemble(basis, terms::paramagnetic_ladder(+1, n), false);
    const auto hm = assemble(basis, terms::paramagnetic_ladder(-1, n), false);
    const auto hz = assemble(basis, terms::paramagnetic_hz(n), true);
    out.push_back(report("param.comm_pm_minus_2hz", commutator(hp, hm), scaled(hz, 2.0)));
    const auto cp = commutator(hz, hp);
    const auto cm = commutator(hz, hm);
    out.push_back(report("param.comm_z_plus", cp, hp));
    out.push_back(report("param.comm_z_minus", cm, scaled(hm, -1.0)));
    out.push_back(norm_report("param.norm_x_plus", linear_combination(1.0, cp, -1.0, hp), hp));
    out.push_back(norm_report("param.norm_x_minus", linear_combination(1.0, cm, 1.0, hm), hm));
    return out;
  }

  if (family == AlgebraFamily::PXP) {
    const auto hp = assemble(basis, terms::pxp_ladder(+1, n), false);
    const auto hm = assemble(basis, terms::pxp_ladder(-1, n), false);
    const auto h0 = assemble(basis, 0.5 * terms::staggered_dressed_z(n), true);
    const auto xp = assemble(basis, pxp_breaking_term(+1, n), false);
    const auto xm = assemble(basis, pxp_breaking_term(-1, n), false);
    out.push_back(report("pxp.comm_pm_minus_2h0", commutator(hp, hm), scaled(h0, 2.0)));
    const auto cp = commutator(h0, hp);
    const auto cm = commutator(h0, hm);
    for (const double c : {1.0, 0.5}) {
      const std::string tag = c == 1.0 ? "unit_x" : "half_x";
      out.push_back(report("pxp.comm_0_plus_" + tag, cp, linear_combination(1.0, hp, c, xp)));
      out.push_back(report("pxp.comm_0_minus_" + tag, cm, linear_combination(-1.0, hm, -c, xm)));
    }
    out.push_back(norm_report("pxp.norm_x_plus", xp, hp));
    out.push_back(norm_report("pxp.norm_x_minus", xm, hm));
    return out;
  }

  const auto hp = assemble(
      basis, terms::pxp_ladder(+1, n) + lambda * terms::pxp_ladder_correction(+1, n), false);
  const auto hm = assemble(
      basis, terms::pxp_ladder(-1, n) + lambda * terms::pxp_ladder_correction(-1, n), false);
  const auto lhs = scaled(commutator(hp, hm), 0.5);
  const auto listed = assemble(basis, perturbed_commutator_expansion(listed_expansion(), n, lambda), false);
  const auto closing = assemble(basis, perturbed_commutator_expansion(closing_expansion(), n, lambda), false);
  out.push_back(report("pxp1.expansion_listed", lhs, listed));
  out.push_back(report("pxp1.expansion_closing", lhs, closing));
  OperatorSum y;
  const auto blocks = second_order_blocks(n);
  const auto coeffs = closing_expansion().second;
  for (std::size_t k = 0; k < blocks.size(); ++k) y = y + (lambda * lambda * coeffs[k]) * blocks[k];
  out.push_back(norm_report("pxp1.norm_lambda2_term", assemble(basis, y, false), lhs));
  return out;
}

}  // namespace kscars
