#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "magnus/measures.hpp"

using namespace magnus;
using testing::w;

TEST_CASE("lazy simple random walk") {
  auto z2 = parse_group("zr:2");
  const auto mu = make_lazy_srw(z2);
  CHECK(mu.exact);
  mpq_class total = 0;
  for (const auto& a : mu.atoms) total += a.exact;
  CHECK(total == 1);
  CHECK(to_exact(mu).at(z2->identity()) == mpq_class(1, 2));
  CHECK(to_exact(mu).at(z2->generator(0)) == mpq_class(1, 8));
  for (const auto& a : mu.atoms) CHECK(to_exact(mu).at(z2->inverse(a.element)) == a.exact);
  CHECK_NOTHROW(mu.validate());
}

TEST_CASE("generator power measures") {
  auto z2 = parse_group("zr:2");
  const auto lazy = make_generator_power_measure(z2, {IntegerLaw::lazy(), IntegerLaw::lazy()});
  CHECK(to_exact(lazy).sorted() == to_exact(make_lazy_srw(z2)).sorted());
  const auto mixed = make_generator_power_measure(z2, {IntegerLaw::two_point(), IntegerLaw::lazy()});
  const auto d = to_exact(mixed);
  CHECK(d.at(z2->generator(0)) == mpq_class(1, 4));
  CHECK(d.at(z2->generator_inverse(0)) == mpq_class(1, 4));
  CHECK(d.at(z2->identity()) == mpq_class(1, 4));
  CHECK(d.at(z2->generator(1)) == mpq_class(1, 8));
  CHECK_THROWS_AS(IntegerLaw::from_rational({{1, mpq_class(1, 2)}, {-1, mpq_class(1, 3)}, {0, mpq_class(1, 6)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(IntegerLaw::from_rational({{1, mpq_class(1, 2)}, {-1, mpq_class(1, 4)}}), std::invalid_argument);
}

TEST_CASE("power laws") {
  const auto p = make_power_law(1.0, 1000);
  CHECK(p.max_abs() == 1000);
  CHECK_FALSE(p.exact);
  for (std::int64_t m = 0; m <= 1000; m += 37) CHECK(p.weight(m) == p.weight(-m));
  for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
    const auto q = make_power_law(alpha, 100);
    CHECK(q.weight(0) / q.weight(1) == doctest::Approx(std::pow(2.0, 1 + alpha)).epsilon(1e-12));
  }
  const auto big = make_power_law(1.0, 10000);
  double s = 0;
  for (const auto& [m, x] : big.weights) s += x;
  CHECK(std::abs(s - 1.0) < 1e-12);
  CHECK(big.deficit > 0);
  CHECK(big.deficit < 1e-3);
  CHECK_THROWS_AS(make_power_law(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_power_law(2.5), std::invalid_argument);
  CHECK_THROWS_AS(make_power_law(1.0, 0), std::invalid_argument);
  const auto spec = make_generator_power_measure(parse_group("zr:2"), {big, big});
  CHECK_FALSE(spec.exact);
  CHECK_NOTHROW(spec.validate());
}

TEST_CASE("lower measure atoms") {
  auto z2 = parse_group("zr:2");
  const auto phi = make_phi_lower_measure(z2, {IntegerLaw::lazy(), IntegerLaw::lazy()});
  const auto* wg = dynamic_cast<const WreathGroup*>(phi.group.get());
  REQUIRE(wg);
  const Element atom = wg->from_parts({{make_vector({0, 0}), make_vector({1, 0})}, {make_vector({1, 0}), make_vector({-1, 0})}},
                                      make_vector({1, 0}));
  const auto d = to_exact(phi);
  CHECK(d.at(atom) == mpq_class(1, 8));
  CHECK(d.at(wg->identity()) == mpq_class(1, 2));
  for (const auto& a : phi.atoms) CHECK(d.at(wg->inverse(a.element)) == a.exact);
  CHECK_THROWS_AS(make_phi_lower_measure(parse_group("ll:2"), {IntegerLaw::lazy(), IntegerLaw::lazy()}),
                  std::invalid_argument);
}

TEST_CASE("convolution powers") {
  auto s22 = parse_group("sdr:2,2");
  const auto mu = make_lazy_srw(s22);
  const auto zero = convolve_power_exact(mu, 0);
  CHECK(zero.mass.size() == 1);
  CHECK(zero.at(s22->identity()) == 1);
  CHECK(return_probability_exact(mu, 2) == mpq_class(5, 16));
  for (int n = 1; n <= 4; ++n) {
    const auto d = convolve_power_exact(mu, n);
    CHECK(d.total() == 1);
    for (const auto& [g, m] : d.mass) CHECK(d.at(s22->inverse(g)) == m);
    CHECK(return_probability_exact(mu, n) == d.at(s22->identity()));
  }
  mpq_class prev = 2;
  for (int n = 1; n <= 6; ++n) {
    const mpq_class p = return_probability_exact(mu, 2 * n);
    CHECK(p <= prev);
    prev = p;
  }
  CHECK_THROWS_AS(convolve_power_exact(mu, 6, 100), BudgetExceeded);
  // float path with pruning reports the mass it dropped
  const auto f = convolve_power_float(mu, 6, 5'000'000, 1e-4);
  CHECK(f.pruned > 0);
  CHECK(std::abs(f.total() + f.pruned - 1.0) < 1e-9);
}

TEST_CASE("lower measure identity for lazy and two-point laws") {
  for (const char* spec : {"zr:2", "llw:2"}) {
    auto base = parse_group(spec);
    for (const auto& law : {IntegerLaw::lazy(), IntegerLaw::two_point()}) {
      const auto mu = make_generator_power_measure(make_magnus(base), {law, law});
      const auto phi = make_phi_lower_measure(base, {law, law});
      for (int n = 1; n <= 6; ++n) CHECK(return_probability_exact(mu, n) == return_probability_exact(phi, n));
    }
  }
}

TEST_CASE("switch-walk-switch") {
  auto z1 = parse_group("zr:1");
  const auto eta = make_word_measure(z1, {{w("s1", 1), mpq_class(1, 2)}, {w("s1^-1", 1), mpq_class(1, 2)}}, "eta");
  const auto q = sws(eta, make_dirac(parse_group("zr:2")));
  const auto d = to_exact(q);
  const auto* wg = dynamic_cast<const WreathGroup*>(q.group.get());
  REQUIRE(wg);
  CHECK(d.at(wg->identity()) == mpq_class(1, 2));
  CHECK(d.total() == 1);
  // lamps only at e and at the base endpoint
  const auto mu = make_lazy_srw(parse_group("zr:2"));
  const auto q2 = sws(eta, mu);
  for (const auto& a : q2.atoms) {
    const auto& x = a.element.wreath();
    for (const auto& [key, v] : x.lamps) CHECK((key == make_vector({0, 0}) || key == *x.base));
  }
  CHECK(to_exact(iterated_sws(eta, mu, 1)).sorted() == to_exact(q2).sorted());
  const auto q3 = iterated_sws(eta, mu, 2);
  CHECK(to_exact(q3).total() == 1);
  CHECK_NOTHROW(q3.validate());
}

TEST_CASE("pushforwards") {
  auto s22 = parse_group("sdr:2,2");
  auto z2 = parse_group("zr:2");
  const auto ab = pushforward(make_lazy_srw(s22), abelianization_map(s22));
  CHECK(to_exact(ab).sorted() == to_exact(make_lazy_srw(z2)).sorted());

  // lamp values add up over fibers
  auto z1 = parse_group("zr:1");
  auto wr = std::make_shared<WreathGroup>(z1, z1);
  const auto lift = theta_lift(wr, mod_map(z1, {2}));
  const Element x = wr->from_parts({{make_vector({0}), make_vector({1})}, {make_vector({2}), make_vector({3})}}, make_vector({5}));
  const Element y = lift.apply(x);
  REQUIRE(y.is_wreath());
  REQUIRE(y.wreath().lamps.size() == 1);
  CHECK(y.wreath().lamps[0].second == make_vector({4}));
  CHECK(*y.wreath().base == make_vector({1}));

  const auto eta = make_word_measure(z1, {{w("s1", 1), mpq_class(1, 2)}, {w("s1^-1", 1), mpq_class(1, 2)}}, "eta");
  const auto mu = make_lazy_srw(z1);
  const auto theta = mod_map(z1, {2});
  const auto left = sws(eta, mu);
  CHECK(pushforward(to_exact(left), theta_lift(left.group, theta)).sorted() ==
        to_exact(sws(eta, pushforward(mu, theta))).sorted());

  const auto gen = generator_table_map(z2, parse_group("tm:3,3"), {make_vector({1, 0}), make_vector({0, 2})});
  const auto img = to_exact(pushforward(make_lazy_srw(z2), gen));
  CHECK(img.at(make_vector({0, 2})) == mpq_class(1, 8));
  CHECK(img.at(make_vector({0, 1})) == mpq_class(1, 8));
  CHECK(img.at(make_vector({2, 0})) == mpq_class(1, 8));
  CHECK(img.at(make_vector({0, 0})) == mpq_class(1, 2));
}

TEST_CASE("Monte Carlo estimates") {
  auto s22 = parse_group("sdr:2,2");
  const auto mu = make_lazy_srw(s22);
  CHECK(mc_return_probability(mu, 0, 1000, 1, 1).estimate == 1.0);
  CHECK(mc_return_probability(make_dirac(s22), 5, 1000, 1, 1).estimate == 1.0);
  const auto a = mc_return_probability(mu, 4, 50000, 42, 1);
  const auto b = mc_return_probability(mu, 4, 50000, 42, 3);
  CHECK(a.hits == b.hits);
  CHECK(a.ci_lo <= a.estimate);
  CHECK(a.estimate <= a.ci_hi);
  CHECK(a.seed == 42);
  const double exact = return_probability_exact(mu, 4).get_d();
  const auto wide = mc_return_probability(mu, 4, 50000, 42, 2, 4.0);
  CHECK(wide.ci_lo <= exact);
  CHECK(exact <= wide.ci_hi);
  const auto [lo, hi] = wilson_interval(0, 100, 1.96);
  CHECK(lo == 0.0);
  CHECK(hi > 0.0);
}

TEST_CASE("weak moments") {
  auto z1 = parse_group("zr:1");
  CHECK(std::isfinite(weak_moment(make_lazy_srw(z1), 1.0)));
  const auto p = make_generator_power_measure(z1, {make_power_law(1.0, 10000)});
  const double wm = weak_moment(p, 1.0);
  CHECK(std::isfinite(wm));
  CHECK(wm > 0);
  // rho(e) = 1, so s mu(rho > s) tends to 1 as s -> 1 from below
  CHECK(weak_moment(make_dirac(z1), 0.5) == doctest::Approx(1.0));
  CHECK(weak_moment(make_lazy_srw(z1), 1.0) == doctest::Approx(1.0));
  CHECK(weak_moment(make_lazy_srw(z1), 2.0) == doctest::Approx(2.0));
}

TEST_CASE("measure spec strings") {
  auto z2 = parse_group("zr:2");
  CHECK(parse_measure(z2, "lazy").atoms.size() == 5);
  CHECK(parse_measure(z2, "srw").atoms.size() == 4);
  CHECK(parse_measure(z2, "dirac").atoms.size() == 1);
  CHECK(parse_measure(z2, "powers:lazy;two").exact);
  CHECK_FALSE(parse_measure(z2, "powers:power:1:50;lazy").exact);
  CHECK(parse_measure(z2, "phi:lazy;lazy").group->spec() == "sdr:2,2");
  CHECK_THROWS_AS(parse_measure(z2, "bogus"), ParseError);
}
