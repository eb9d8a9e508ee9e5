#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "kscars/analytic.hpp"
#include "support.hpp"

using namespace kscars;
using kscars::testing::kind_of;

TEST_CASE("q-numbers") {
  CHECK(q_number(0, 0.7) == 0.0);
  CHECK(q_number(1, 0.7) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q_number(2, 0.8) == doctest::Approx(2.05).epsilon(1e-15));
  CHECK(q_number(3, 0.5) == doctest::Approx(0.25 + 1.0 + 4.0).epsilon(1e-15));
  CHECK(q_number(5.0, 1.0) == 5.0);
  CHECK(q_number(-2, 0.8) == doctest::Approx(-2.05));
  for (double q : {0.3, 0.55, 0.9, 0.999}) {
    const double tau = std::log(q);
    for (int n = 0; n <= 40; ++n) {
      const double sinh_form = std::sinh(n * tau) / std::sinh(tau);
      CHECK(q_number(n, q) == doctest::Approx(sinh_form).epsilon(1e-12));
      CHECK(q_number(n, 1.0 / q) == doctest::Approx(q_number(n, q)).epsilon(1e-12));
    }
    CHECK(q_number(2.5, q) == doctest::Approx(std::sinh(2.5 * tau) / std::sinh(tau)).epsilon(1e-14));
  }
  CHECK(kind_of([] { q_number(1, 0.0); }) == ErrorKind::Domain);
  CHECK(kind_of([] { q_number(1, -0.5); }) == ErrorKind::Domain);
}

TEST_CASE("Chebyshev polynomials") {
  CHECK(cheb_u(-1, 0.3) == 0.0);
  CHECK(cheb_u(0, 0.3) == 1.0);
  CHECK(cheb_u(1, 0.3) == doctest::Approx(0.6));
  CHECK(cheb_u(2, 0.3) == doctest::Approx(4 * 0.09 - 1));
  CHECK(cheb_u(3, 0.5) == doctest::Approx(8 * 0.125 - 4 * 0.5));
  for (int n = 0; n < 12; ++n) {
    const double th = 0.37;
    CHECK(cheb_u(n, std::cos(th)) == doctest::Approx(std::sin((n + 1) * th) / std::sin(th)).epsilon(1e-12));
  }
  CHECK(kind_of([] { cheb_u(-2, 0.1); }) == ErrorKind::Domain);
}

TEST_CASE("undeformed Lanczos coefficients") {
  const AnalyticParams p{2.0, 0.5, 0.3, 0.1, 1.0};
  CHECK(lanczos_su2(0, p).second == 0.0);
  CHECK(lanczos_su2(5, p).second == 0.0);
  CHECK(lanczos_su2(2, p).second == doctest::Approx(0.5 * std::sqrt(6.0)));
  CHECK(lanczos_su2(0, p).first == doctest::Approx(-0.6 + 0.1));
  CHECK(kind_of([&] { lanczos_su2(6, p); }) == ErrorKind::Domain);
  CHECK(kind_of([] { lanczos_su2(0, AnalyticParams{0.3}); }) == ErrorKind::Domain);
}

TEST_CASE("deformed Lanczos coefficients") {
  const AnalyticParams p{1.0, 1.0, 0.0, 0.0, 0.8};
  CHECK(lanczos_suq2(1, p) == doctest::Approx(std::sqrt(2.05)).epsilon(1e-14));
  CHECK(lanczos_suq2(2, p) == doctest::Approx(std::sqrt(2.05)).epsilon(1e-14));
  CHECK(lanczos_suq2(0, p) == 0.0);
  CHECK(lanczos_suq2(3, p) == 0.0);

  for (double j : {0.5, 3.0, 8.0, 10.5}) {
    AnalyticParams u{j, 0.41, 0.0, 0.0, 1.0};
    for (int n = 0; n <= u.two_j() + 1; ++n)
      CHECK(lanczos_suq2(n, u) == doctest::Approx(lanczos_su2(n, u).second).epsilon(1e-14));
    for (double q : {0.5, 0.83, 0.97}) {
      AnalyticParams d{j, 0.41, 0.0, 0.0, q};
      const int tj = d.two_j();
      for (int n = 0; n <= tj + 1; ++n) {
        const double bn = lanczos_suq2(n, d);
        CHECK(lanczos_suq2_chebyshev_sum(n, d) == doctest::Approx(bn).epsilon(1e-11));
        CHECK(lanczos_suq2_continuous(n, d) == doctest::Approx(bn).epsilon(1e-11));
        CHECK(lanczos_suq2(tj + 1 - n, d) == doctest::Approx(bn).epsilon(1e-13));
        if (n >= 1 && n <= tj) CHECK(bn > 0.0);
        CHECK(bn >= lanczos_su2(n, d).second - 1e-12);
      }
    }
  }
  CHECK(kind_of([] { lanczos_suq2(1, AnalyticParams{1.0, 1.0, 0.0, 0.0, 1.2}); }) == ErrorKind::Domain);
  CHECK(kind_of([] { lanczos_suq2(1, AnalyticParams{1.0, 1.0, 0.0, 0.0, 0.0}); }) == ErrorKind::Domain);
}

TEST_CASE("wavefunction of the undeformed chain") {
  const AnalyticParams flip{8.0, 1.0, 0.0, 0.0, 1.0};
  for (double t : {0.0, 0.3, 1.1, 2.9}) {
    CHECK(std::abs(su2_wavefunction(0, t, flip)) ==
          doctest::Approx(std::pow(std::abs(std::cos(t)), 16)).epsilon(1e-12));
    CHECK(su2_complexity(t, flip) == doctest::Approx(16.0 * std::pow(std::sin(t), 2)).epsilon(1e-11));
  }
  CHECK(su2_complexity(std::numbers::pi / 2, flip) == doctest::Approx(16.0).epsilon(1e-12));

  for (const AnalyticParams& p : {AnalyticParams{8.0, 1.0, 0.0, 0.0, 1.0},
                                  AnalyticParams{3.5, 0.7, 0.45, -0.2, 1.0},
                                  AnalyticParams{6.0, 0.4, -1.1, 0.3, 1.0}}) {
    const int tj = p.two_j();
    for (double t : {0.17, 1.3, 4.0}) {
      double norm = 0.0, c = 0.0, s = 0.0;
      for (int n = 0; n <= tj; ++n) {
        const double w = std::norm(su2_wavefunction(n, t, p));
        norm += w;
        c += n * w;
        if (w > 0.0) s -= w * std::log(w);
      }
      CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(su2_complexity(t, p) == doctest::Approx(c).epsilon(1e-11));
      CHECK(su2_entropy(t, p) == doctest::Approx(s).epsilon(1e-11));

      // i d/dt psi_n = a_n psi_n + b_{n+1} psi_{n+1} + b_n psi_{n-1}
      const double h = 1e-5;
      for (int n = 0; n <= tj; ++n) {
        const std::complex<double> dpsi =
            (su2_wavefunction(n, t + h, p) - su2_wavefunction(n, t - h, p)) / (2 * h);
        std::complex<double> rhs = lanczos_su2(n, p).first * su2_wavefunction(n, t, p);
        if (n < tj) rhs += lanczos_su2(n + 1, p).second * su2_wavefunction(n + 1, t, p);
        if (n > 0) rhs += lanczos_su2(n, p).second * su2_wavefunction(n - 1, t, p);
        CHECK(std::abs(std::complex<double>(0, 1) * dpsi - rhs) < 1e-7);
      }
    }
  }
  CHECK(kind_of([&] { su2_wavefunction(17, 0.0, flip); }) == ErrorKind::Domain);
}
