#include <doctest.h>

#include <cmath>

#include "magnus/asymptotics.hpp"

using namespace magnus;

TEST_CASE("iterated logarithms") {
  CHECK(iterated_log(1, 0.0) == 0.0);
  CHECK(iterated_log(2, std::exp(1.0) - 1) == doctest::Approx(std::log(2.0)));
  double prev = -1;
  for (double n = 0; n < 1e6; n = n * 1.7 + 1) {
    const double v = iterated_log(3, n);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(iterated_log(1, -1.0), std::invalid_argument);
}

TEST_CASE("profile formulas") {
  const auto poly = make_profile("polynomial", {2});
  CHECK(phi_profile(poly, 100).value == doctest::Approx(0.01));
  const auto meta = make_profile("metabelian", {2});
  const double n = 1234.5;
  CHECK(phi_profile(meta, n).exponent == doctest::Approx(std::sqrt(n) * std::sqrt(std::log(n))));
  // d = 3, r = 2: exponent / n decreases on [1e3, 1e9]
  const auto fs = make_profile("free-solvable", {3, 2});
  double prev = 1e300;
  for (double x = 1e3; x <= 1e9; x *= 10) {
    const double ratio = phi_profile(fs, x).exponent / x;
    CHECK(ratio < prev);
    prev = ratio;
  }
  CHECK_THROWS_AS(make_profile("metabelian", {1}), std::invalid_argument);
  CHECK_THROWS_AS(make_profile("alpha-metabelian", {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(make_profile("nope", {}), std::invalid_argument);
  CHECK_THROWS_AS(phi_profile(meta, 2), std::invalid_argument);
}

TEST_CASE("profile values lie in (0,1] and decrease") {
  const std::vector<ProfileSpec> all = {
      make_profile("polynomial", {3}),        make_profile("metabelian", {3}),      make_profile("free-solvable", {4, 2}),
      make_profile("nilpotent-base", {4}),    make_profile("log2", {}),             make_profile("lamplighter-base", {2}),
      make_profile("zwr-zd-base", {2}),       make_profile("alpha-metabelian", {2, 1}), make_profile("scdr", {3, 2, 2}),
  };
  for (const auto& s : all) {
    CAPTURE(s.family);
    double prev = 2;
    for (double n = 20; n < 1e6; n *= 1.5) {
      const auto p = phi_profile(s, n);
      CHECK(p.value <= 1.0);
      CHECK(p.value >= 0.0);
      CHECK(p.exponent > 0);
      CHECK(p.value <= prev);
      prev = p.value;
    }
  }
}

TEST_CASE("Witt degrees") {
  CHECK(witt_degree(2, 1) == 2);
  CHECK(witt_degree(5, 1) == 5);
  CHECK(witt_degree(2, 2) == 4);
  CHECK(witt_degree(3, 2) == 9);
  CHECK(mobius(1) == 1);
  CHECK(mobius(6) == 1);
  CHECK(mobius(12) == 0);
  CHECK(mobius(30) == -1);
  // sum of m * (rank of the degree-m part), ranks by the necklace count
  for (int r = 2; r <= 5; ++r) {
    for (int c = 1; c <= 6; ++c) {
      std::int64_t total = 0;
      for (int m = 1; m <= c; ++m) {
        std::int64_t necklaces = 0;
        for (int d = 1; d <= m; ++d) {
          if (m % d) continue;
          std::int64_t p = 1;
          for (int i = 0; i < m / d; ++i) p *= r;
          necklaces += mobius(d) * p;
        }
        CHECK(necklaces % m == 0);
        total += m * (necklaces / m);
      }
      CHECK(witt_degree(r, c) == total);
    }
  }
}

TEST_CASE("volume functions invert") {
  for (const auto& v : {volume_power(1), volume_power(2.5), volume_exp_power(0.5), volume_wreath(volume_power(2))}) {
    CAPTURE(v.tag);
    for (double t : {1.5, 10.0, 300.0}) {
      const double back = v.inverse_log(v.log_volume(t));
      CHECK(std::abs(back - t) <= 1e-9 * t);
    }
  }
  CHECK(parse_volume("wreath(power:2,1.5)").tag.find("wreath") == 0);
  CHECK_THROWS_AS(parse_volume("linear"), ParseError);
}

TEST_CASE("gamma from volume") {
  const auto v = volume_power(1);
  for (double t : {0.5, 10.0, 1e3, 1e5}) {
    CHECK(gamma_from_volume(v, t).gamma == doctest::Approx(std::sqrt(2 * t + 1)).epsilon(1e-6));
  }
  // V = t^D in closed form: log gamma = (D/2) log(2t/D + 1)
  const auto v3 = volume_power(3);
  CHECK(gamma_from_volume(v3, 50).log_gamma == doctest::Approx(1.5 * std::log(2 * 50 / 3.0 + 1)).epsilon(1e-8));
  double prev = 0;
  const auto wv = volume_wreath(volume_power(2));
  for (double t = 1; t < 1e6; t *= 3) {
    const double lg = gamma_from_volume(wv, t).log_gamma;
    CHECK(lg > prev);
    prev = lg;
  }
  CHECK_THROWS_AS(gamma_from_volume(v, 0), std::invalid_argument);
}

TEST_CASE("delta regularity") {
  const auto r = delta_regular_check(volume_power(2), 0.5, 10, 1e5);
  CHECK(r.regular);
  CHECK(r.worst_ratio >= 0.5);
  CHECK_FALSE(delta_regular_check(volume_power(2), 0.9, 10, 1e5).regular);
}

TEST_CASE("Folner couples in Z^D") {
  const auto f = folner_zd(2, 1, 1);
  CHECK(f.omega == 5);
  CHECK(f.omega_prime == 3);
  CHECK(f.distance >= 1);
  for (int D = 1; D <= 3; ++D) {
    for (int r = 1; r <= 3; ++r) {
      for (int k = 2; k <= 40; k += 3) {
        const auto c = folner_zd(k, D, r);
        CHECK(c.omega == std::pow(2 * k + 1, D));
        const double v = c.omega;
        const double base = std::log(c.omega_prime / c.omega);
        // exact ratio (1 - 1/v)^(r v) omega'/omega, and (1-1/v)^(v-1) >= 1/e
        CHECK(c.log_theta_prime - c.log_theta == doctest::Approx(r * v * std::log1p(-1 / v) + base));
        CHECK(c.log_theta_prime - c.log_theta >= -r + r * std::log1p(-1 / v) + base - 1e-9);
        CHECK(c.log_theta <= 3 * r * v * std::log(v));
      }
    }
  }
  CHECK_THROWS_AS(folner_zd(1, 1, 1), std::invalid_argument);
}

TEST_CASE("Dirichlet eigenvalues") {
  auto z1 = parse_group("zr:1");
  const auto mu = make_lazy_srw(z1);
  CHECK(dirichlet_lambda1(mu, box_zd(1, 0)).lambda1 == doctest::Approx(0.5));
  const double pi = std::acos(-1.0);
  for (int k : {1, 3, 8, 15}) {
    const auto d = dirichlet_lambda1(mu, box_zd(1, k));
    CHECK(std::abs(d.lambda1 - (1 - std::cos(pi / (2 * k + 2))) / 2) < 1e-6);
    CHECK(d.lambda1 <= d.test_function_bound);
  }
  auto s22 = parse_group("sdr:2,2");
  const auto d = dirichlet_lambda1(make_lazy_srw(s22), word_ball(*s22, 4));
  CHECK(d.lambda1 > 0);
  CHECK(d.lambda1 <= d.test_function_bound);
  CHECK_THROWS_AS(dirichlet_lambda1(mu, box_zd(1, 10), 5), BudgetExceeded);
  CHECK(box_zd(2, 3).size() == 49);
}
