#include <doctest.h>

#include "helpers.hpp"
#include "magnus/fox.hpp"

using namespace magnus;
using testing::w;

namespace {

// Z marked by (1, 0): the quotient of F_2 by the normal closure of s2.
// Its Cayley graph is a line with a loop at every vertex.
class LineWithLoops final : public MarkedGroup {
 public:
  LineWithLoops() { set_generators({make_vector({1}), make_vector({0})}, {false, true}); }
  std::string spec() const override { return "line-with-loops"; }
  Element identity() const override { return make_vector({0}); }
  Element multiply(const Element& a, const Element& b) const override {
    return make_vector({a.vec().coords[0] + b.vec().coords[0]});
  }
  Element inverse(const Element& a) const override { return make_vector({-a.vec().coords[0]}); }
};

Flow flow(std::initializer_list<std::tuple<Element, int, std::int64_t>> edges) {
  Flow f;
  for (const auto& [x, i, v] : edges) f[{x, i}] = v;
  return f;
}

}  // namespace

TEST_CASE("Fox derivatives of letters") {
  auto z2 = parse_group("zr:2");
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const auto d = fox_derivative(Word::generator_power(2, j), i, *z2);
      if (i == j) {
        CHECK(d.terms().size() == 1);
        CHECK(d.coefficient(z2->identity()) == 1);
      } else {
        CHECK(d.is_zero());
      }
    }
    const auto d = fox_derivative(Word::generator_power(2, i, -1), i, *z2);
    CHECK(d.terms().size() == 1);
    CHECK(d.coefficient(z2->generator_inverse(i)) == -1);
  }
}

TEST_CASE("Fox derivatives of the commutator over Z^2") {
  auto z2 = parse_group("zr:2");
  const auto d = fox_derivatives(w("[s1,s2]"), *z2);
  CHECK(d[0] == GroupRingElement({{make_vector({0, 0}), 1}, {make_vector({0, 1}), -1}}));
  CHECK(d[1] == GroupRingElement({{make_vector({1, 0}), 1}, {make_vector({0, 0}), -1}}));
}

TEST_CASE("Magnus images") {
  auto z2 = parse_group("zr:2");
  for (int i = 0; i < 2; ++i) {
    const auto x = magnus_embed(Word::generator_power(2, i), *z2);
    CHECK(x.base == z2->generator(i));
    REQUIRE(x.a.size() == 1);
    CHECK(x.a.begin()->first == z2->identity());
    CHECK(x.a.begin()->second == (i == 0 ? IntCoords{1, 0} : IntCoords{0, 1}));
  }
  const auto e = magnus_embed(Word(2), *z2);
  CHECK(e.a.empty());
  CHECK(e.base == z2->identity());
  // four nonzero (key, coordinate) entries, matching the commutator flow
  const Word c = w("[s1,s2]");
  const auto x = magnus_embed(c, *z2);
  const Flow f = flow_of_word(c, *z2);
  std::size_t nonzero = 0;
  for (const auto& [key, v] : x.a) {
    for (int i = 0; i < 2; ++i) {
      if (v[static_cast<std::size_t>(i)] != 0) {
        ++nonzero;
        CHECK(flow_at(f, key, i) == v[static_cast<std::size_t>(i)]);
      }
    }
  }
  CHECK(nonzero == 4);
  CHECK(f.size() == 4);
}

TEST_CASE("flows of small words") {
  auto z2 = parse_group("zr:2");
  CHECK(flow_of_word(w("s1 s1^-1"), *z2).empty());
  CHECK(flow_of_word(w("s1^2"), *z2) == flow({{make_vector({0, 0}), 0, 1}, {make_vector({1, 0}), 0, 1}}));
  CHECK(flow_of_word(w("[s1,s2]"), *z2) == flow({{make_vector({0, 0}), 0, 1},
                                                 {make_vector({1, 0}), 1, 1},
                                                 {make_vector({0, 1}), 0, -1},
                                                 {make_vector({0, 0}), 1, -1}}));
}

TEST_CASE("net flow") {
  auto z2 = parse_group("zr:2");
  CHECK(net_flow(*z2, flow_of_word(w("[s1,s2]"), *z2)).circulation);
  CHECK(net_flow(*z2, Flow{}).circulation);
  const auto n = net_flow(*z2, flow_of_word(w("s1"), *z2));
  CHECK_FALSE(n.circulation);
  CHECK(n.net.at(z2->identity()) == 1);
  CHECK(n.net.at(z2->generator(0)) == -1);
  // source at e and sink at pi(w) for random words
  std::mt19937_64 rng(9);
  for (int k = 0; k < 200; ++k) {
    const Word u = testing::random_word(rng, 2, 20);
    const auto m = net_flow(*z2, flow_of_word(u, *z2));
    const Element end = z2->evaluate(u);
    if (z2->is_identity(end)) {
      CHECK(m.circulation);
    } else {
      CHECK(m.net.size() == 2);
      CHECK(m.net.at(z2->identity()) == 1);
      CHECK(m.net.at(end) == -1);
    }
  }
}

TEST_CASE("word problem modulo [N,N]") {
  auto z2 = parse_group("zr:2");
  CHECK(words_equal_mod_NN(w("s1 s2"), w("s1 s2"), *z2));
  CHECK_FALSE(words_equal_mod_NN(w("s1 s2"), w("s2 s1"), *z2));
  const Word x = w("[[s1,s2], s1[s1,s2]s1^-1]");
  CHECK(words_equal_mod_NN(x, Word(2), *z2));
  CHECK(magnus_embed(x, *z2) == magnus_embed(Word(2), *z2));
}

TEST_CASE("cocycle, conjugation and agreement with the Magnus image") {
  std::mt19937_64 rng(21);
  // each relator is trivial in its group
  const std::vector<std::pair<const char*, const char*>> cases = {
      {"zr:2", "[s1,s2]"}, {"ll:2", "s1^2"}, {"bs:3", "s1^-1 s2 s1 s2^-3"}, {"sdr:2,2", "[[s1,s2], s1[s1,s2]s1^-1]"}};
  for (const auto& [spec, relator] : cases) {
    CAPTURE(spec);
    auto g = parse_group(spec);
    const Word rho = w(relator);
    REQUIRE(g->is_identity(g->evaluate(rho)));
    for (int k = 0; k < 200; ++k) {
      const Word u = testing::random_word(rng, 2, 15), v = testing::random_word(rng, 2, 15);
      const Element ub = g->evaluate(u);
      CHECK(flow_of_word(word_multiply(u, v), *g) ==
            flow_add(flow_of_word(u, *g), flow_translate(*g, flow_of_word(v, *g), ub)));
      CHECK(words_equal_mod_NN(u, v, *g) == (magnus_embed(u, *g) == magnus_embed(v, *g)));
      // a(g rho g^-1) = tau_g a(rho)
      const auto lhs = magnus_embed(word_multiply(word_multiply(u, rho), word_inverse(u)), *g);
      ModuleVector shifted;
      for (const auto& [x, vec] : magnus_embed(rho, *g).a) shifted.emplace(g->multiply(ub, x), vec);
      CHECK(lhs.a == shifted);
      CHECK(g->is_identity(lhs.base) == g->is_identity(g->evaluate(rho)));
    }
  }
}

TEST_CASE("conjugates of the killed generator commute") {
  LineWithLoops line;
  for (int i = -3; i <= 3; ++i) {
    for (int j = -3; j <= 3; ++j) {
      const Word x = conjugate(w("s2"), Word::generator_power(2, 0, i));
      const Word y = conjugate(w("s2"), Word::generator_power(2, 0, j));
      CHECK(words_equal_mod_NN(word_multiply(x, y), word_multiply(y, x), line));
    }
  }
  // they are still nontrivial
  CHECK_FALSE(words_equal_mod_NN(w("s2"), Word(2), line));
}

TEST_CASE("stretch") {
  CHECK(stretch_word(w("s1 s2"), 2) == w("s1^2 s2^2"));
  CHECK(stretch_word(w("s1 s2^-1 s1"), 1) == w("s1 s2^-1 s1"));
  auto z2 = parse_group("zr:2");
  const auto t = stretch_flow(*z2, flow_of_word(w("[s1,s2]"), *z2), 2);
  CHECK(t.verified);
  CHECK(t.flow.size() == 8);
  for (const auto& [k, v] : t.flow) CHECK(std::abs(v) == 1);
  CHECK(t.flow == flow_of_word(stretch_word(w("[s1,s2]"), 2), *z2));
  auto bs = parse_group("bs:2");
  CHECK_THROWS_AS(stretch_flow(*bs, flow_of_word(w("s1"), *bs), 2), std::invalid_argument);
}

TEST_CASE("vartheta projection") {
  auto z2 = parse_group("zr:2");
  WreathGroup target(parse_group("zr:1"), z2);
  const Word rho = w("[s1,s2]");
  const AlternatingForm just_rho{{Word(2), Word(2)}, {1}, rho};
  CHECK(vartheta_project(just_rho, target) == target.pure_lamp(z2->identity(), make_vector({1})));
  const Word gamma = w("s1^2 s2^-2");
  const AlternatingForm just_gamma{{gamma}, {}, rho};
  CHECK(vartheta_project(just_gamma, target) == target.pure_base(z2->evaluate(gamma)));
  const AlternatingForm comm{{gamma, word_inverse(gamma), Word(2)}, {1, -1}, rho};
  const Element expect = target.multiply(target.pure_lamp(z2->evaluate(gamma), make_vector({1})),
                                         target.pure_lamp(z2->identity(), make_vector({-1})));
  CHECK(vartheta_project(comm, target) == expect);
  CHECK(alternating_word(comm) == word_multiply(word_multiply(word_multiply(gamma, rho), word_inverse(gamma)), word_inverse(rho)));

  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> ex(-3, 3), p(0, 3);
  auto random_form = [&] {
    AlternatingForm f{{}, {}, rho};
    const int k = p(rng);
    for (int j = 0; j <= k; ++j) f.gammas.push_back(stretch_word(testing::random_word(rng, 2, 4), 2));
    for (int j = 0; j < k; ++j) f.exponents.push_back(ex(rng));
    return f;
  };
  for (int k = 0; k < 100; ++k) {
    const auto x = random_form(), y = random_form();
    CHECK(vartheta_project(alternating_product(x, y), target) ==
          target.multiply(vartheta_project(x, target), vartheta_project(y, target)));
  }
}
