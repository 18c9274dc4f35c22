#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "magnus/group.hpp"

using namespace magnus;
using testing::w;

TEST_CASE("abelian groups") {
  auto z2 = make_abelian_group(2);
  CHECK(z2->multiply(z2->generator(0), z2->generator(1)) == make_vector({1, 1}));
  CHECK(z2->power(z2->generator(0), 3) == make_vector({3, 0}));
  auto t22 = make_abelian_group(2, {2, 2});
  CHECK(t22->is_identity(t22->power(t22->generator(0), 2)));
  CHECK(t22->generator_is_torsion(0));
  CHECK_FALSE(z2->generator_is_torsion(0));
  CHECK_THROWS_AS(make_abelian_group(2, {2, 1}), std::invalid_argument);
  CHECK(z2->is_identity(z2->evaluate(w("[s1,s2]"))));
  CHECK(z2->is_identity(z2->evaluate(Word(2))));
  CHECK_THROWS_AS(z2->evaluate(w("s1", 3)), std::invalid_argument);
}

TEST_CASE("lamplighter relators") {
  auto ll = make_lamplighter(3);
  const Element a = ll->generator(0), t = ll->generator(1);
  CHECK(ll->is_identity(ll->power(a, 3)));
  const Element c = ll->multiply(ll->multiply(ll->inverse(t), a), t);
  CHECK(ll->multiply(a, c) == ll->multiply(c, a));
  CHECK(ll->is_identity(ll->multiply(t, ll->inverse(t))));
  CHECK_FALSE(ll->generator_is_torsion(1));
  CHECK_THROWS_AS(make_lamplighter(1), std::invalid_argument);
  // the (t, a t) marking has no torsion generator
  auto llw = make_lamplighter_t(2);
  CHECK_FALSE(llw->any_torsion_generator());
}

TEST_CASE("Baumslag-Solitar relators") {
  for (int q : {2, 3, 5}) {
    auto bs = make_bs(q);
    const int r = 2;
    CHECK(bs->evaluate(parse_word("s1^-1 s2 s1", r)) == bs->power(bs->generator(1), q));
    CHECK(bs->evaluate(parse_word("s1^-1 s2^2 s1", r)) == bs->power(bs->generator(1), 2 * q));
    CHECK(bs->is_identity(bs->evaluate(parse_word("s2 s2^-1", r))));
    // lowest form: b^q conjugated back by a is b
    const Element x = bs->evaluate(parse_word("s1 s2^" + std::to_string(q) + " s1^-1", r));
    CHECK(x == bs->generator(1));
  }
  CHECK_THROWS_AS(make_bs(1), std::invalid_argument);
}

TEST_CASE("wreath law") {
  auto z1 = make_abelian_group(1);
  auto z2 = make_abelian_group(2);
  auto wr = std::dynamic_pointer_cast<const WreathGroup>(make_wreath(z1, z2));
  REQUIRE(wr);
  const Element h = make_vector({2, -1});
  const Element lamp = wr->pure_lamp(z2->identity(), make_vector({1}));
  const Element x = wr->multiply(wr->multiply(wr->pure_base(h), lamp), wr->pure_base(z2->inverse(h)));
  CHECK(x == wr->pure_lamp(h, make_vector({1})));
  CHECK(wr->multiply(wr->identity(), x) == x);
  const Element y = wr->pure_lamp(make_vector({0, 3}), make_vector({-2}));
  CHECK(wr->multiply(x, y) == wr->multiply(y, x));
  CHECK_THROWS_AS(make_wreath(make_magnus(z2), z2), std::invalid_argument);
}

TEST_CASE("free solvable groups") {
  auto s12 = make_free_solvable(1, 2);
  CHECK(s12->spec() == "zr:2");
  const Word x = w("[[s1,s2], s1[s1,s2]s1^-1]");
  auto s22 = make_free_solvable(2, 2), s32 = make_free_solvable(3, 2);
  CHECK(s22->is_identity(s22->evaluate(x)));
  CHECK_FALSE(s32->is_identity(s32->evaluate(x)));
  CHECK_FALSE(s22->is_identity(s22->evaluate(w("[s1,s2]"))));
}

TEST_CASE("group axioms on random triples") {
  std::mt19937_64 rng(5);
  for (const char* spec : {"zr:3", "tm:2,3", "ll:2", "llw:3", "bs:2", "bs:3", "sdr:2,2", "sdr:3,2", "wr(zr:1, zr:2)",
                           "wr(tm:2, bs:2)", "mag(ll:2)"}) {
    CAPTURE(spec);
    auto g = parse_group(spec);
    for (int k = 0; k < 500; ++k) {
      const Element a = g->evaluate(testing::random_word(rng, g->rank(), 10));
      const Element b = g->evaluate(testing::random_word(rng, g->rank(), 10));
      const Element c = g->evaluate(testing::random_word(rng, g->rank(), 10));
      CHECK(g->multiply(g->multiply(a, b), c) == g->multiply(a, g->multiply(b, c)));
      CHECK(g->is_identity(g->multiply(a, g->inverse(a))));
      CHECK((g->canonical_key(a) == g->canonical_key(b)) == (a == b));
    }
  }
}

TEST_CASE("group spec strings") {
  CHECK(parse_group("zr:2")->spec() == "zr:2");
  CHECK(parse_group("tm:2,2")->spec() == "tm:2,2");
  CHECK(parse_group("ll:2")->spec() == "ll:2");
  CHECK(parse_group("bs:3")->spec() == "bs:3");
  CHECK(parse_group("sdr:3,2")->rank() == 2);
  CHECK(parse_group("wr(zr:1, zr:2)")->rank() == 3);
  CHECK_THROWS_AS(parse_group("zz:2"), ParseError);
  CHECK_THROWS_AS(parse_group("wr(zr:1"), ParseError);
}

TEST_CASE("balls") {
  auto z2 = parse_group("zr:2");
  CHECK(ball(*z2, 1, 1000).back().ball_size == 5);
  CHECK(ball(*z2, 2, 1000).back().ball_size == 13);
  CHECK(ball(*parse_group("ll:2"), 1, 1000).back().ball_size == 4);
  std::vector<BallLayer> partial;
  CHECK_THROWS_AS(ball(*parse_group("sdr:2,2"), 12, 500, &partial), BudgetExceeded);
  CHECK_FALSE(partial.empty());
  // canonical keys are injective on a ball
  const auto layers = ball(*parse_group("sdr:2,2"), 5, 100000);
  std::set<std::string> keys;
  std::size_t total = 0;
  for (const auto& l : layers) {
    for (const auto& e : l.frontier) keys.insert(canonical_bytes(e));
    total += l.frontier.size();
  }
  CHECK(keys.size() == total);
  CHECK(total == layers.back().ball_size);
}

TEST_CASE("ball growth in Z^D is polynomial of degree D") {
  for (int D = 1; D <= 3; ++D) {
    auto g = make_abelian_group(D);
    const auto layers = ball(*g, 64, 10'000'000);
    const double r1 = 8, r2 = 64;
    const double slope = std::log(static_cast<double>(layers[64].ball_size) / static_cast<double>(layers[8].ball_size)) /
                         std::log(r2 / r1);
    CHECK(std::abs(slope - D) < 0.1);
  }
}

TEST_CASE("membership predicates") {
  auto z2 = parse_group("zr:2");
  CHECK(*z2->member("sublattice:2,2", make_vector({2, 4})));
  CHECK_FALSE(*z2->member("sublattice:2,2", make_vector({1, 2})));
  auto ll = parse_group("ll:2");
  CHECK(*ll->member("even-t", ll->evaluate(w("s2^2"))));
  CHECK_FALSE(*ll->member("even-t", ll->evaluate(w("s2"))));
  auto bs = parse_group("bs:2");
  CHECK(*bs->member("even-t", bs->evaluate(w("s1^2"))));
  CHECK_FALSE(*bs->member("even-t", bs->evaluate(w("s1"))));
  // index-2 subgroup of Z^2 with even first coordinate, as a coset table
  Membership m(z2, "coset:1,0/0,1");
  CHECK(m.contains(make_vector({2, 1}), w("s1^2 s2")));
  CHECK_FALSE(m.contains(make_vector({1, 0}), w("s1")));
  CHECK_THROWS(Membership(z2, "no-such-subgroup"));
}
