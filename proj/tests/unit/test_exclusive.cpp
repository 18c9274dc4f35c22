#include <doctest.h>

#include "helpers.hpp"
#include "magnus/exclusive.hpp"

using namespace magnus;
using testing::w;

namespace {

ExclusiveCandidate candidate(GroupPtr g, std::vector<Word> gamma, const char* rho, std::size_t split) {
  ExclusiveCandidate c;
  c.base = std::move(g);
  c.gamma = std::move(gamma);
  c.rho = w(rho, c.base->rank());
  c.split = split;
  return c;
}

// Rank over Q by elimination with rationals.
std::size_t rational_rank(std::vector<std::vector<mpq_class>> m) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == rank || m[i][c] == 0) continue;
      const mpq_class f = m[i][c] / m[rank][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST_CASE("example pair is exclusive") {
  auto z2 = parse_group("zr:2");
  const auto r = check_exclusive(candidate(z2, {w("s1^2"), w("s2^2")}, "[s1,s2]", 1));
  CHECK(r.condition1);
  CHECK(r.edge_flow != 0);
  CHECK(r.condition2);
  CHECK(r.condition3 == Verdict::True);
  CHECK(r.method == "T_m criterion");
  CHECK(r.certified());
  CHECK(r.u_bar == make_vector({1, 0}));
  CHECK(r.s_gen == 1);
}

TEST_CASE("full group fails condition (2) with a checkable witness") {
  auto z2 = parse_group("zr:2");
  const auto r = check_exclusive(candidate(z2, {w("s1"), w("s2")}, "[s1,s2]", 0));
  CHECK(r.condition1);
  CHECK_FALSE(r.condition2);
  REQUIRE(r.witness_x.has_value());
  CHECK(*r.witness_x == make_vector({0, 1}));
  CHECK(r.witness_flow == -1);
  const Flow f = flow_of_word(w("[s1,s2]"), *z2);
  CHECK(flow_at(f, z2->multiply(*r.witness_x, r.u_bar), r.s_gen) == r.witness_flow);
  CHECK_FALSE(r.exclusive());
  // a false verdict for (3) carries a witness
  if (r.condition3 == Verdict::False) CHECK(r.witness_g.has_value());
}

TEST_CASE("malformed candidates are rejected") {
  auto z2 = parse_group("zr:2");
  CHECK_THROWS_AS(check_exclusive(candidate(z2, {w("s1^2"), w("s2^2")}, "[[s1,s2],[s1,s2]]", 0)), std::invalid_argument);
  CHECK_THROWS_AS(check_exclusive(candidate(z2, {w("s1^2"), w("s2^2")}, "s1 s2", 0)), std::invalid_argument);
  // the letter after the split must be a positive generator
  CHECK_THROWS_AS(check_exclusive(candidate(z2, {w("s1^2"), w("s2^2")}, "[s1,s2]", 2)), std::invalid_argument);
  CHECK_THROWS_AS(check_exclusive(candidate(z2, {w("s1^2"), w("s2^2")}, "[s1,s2]", 9)), std::invalid_argument);
}

TEST_CASE("T_m criterion") {
  auto z2 = parse_group("zr:2");
  CHECK(tm_criterion(*z2, w("s1"), 1, {2, 2}));
  CHECK_FALSE(tm_criterion(*z2, w("s2"), 1, {2, 2}));
  for (std::int64_t m : {2, 3, 5}) CHECK_FALSE(tm_criterion(*z2, Word(2), 0, {m, m}));
  CHECK_THROWS_AS(tm_criterion(*z2, w("s1"), 1, {1, 2}), std::invalid_argument);
}

TEST_CASE("T_m criterion agrees with bounded search on Z^2") {
  auto z2 = parse_group("zr:2");
  for (const char* rho : {"[s1,s2]", "[s1^2,s2]", "[s1,s2^-1]", "s1 s2 s1^-1 s2 s1 s2^-2 s1^-1"}) {
    const Word r = w(rho);
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (r[k].sign < 0) continue;
      auto c = candidate(z2, {w("s1^2"), w("s2^2")}, rho, k);
      if (!tm_criterion(*z2, r.prefix(k), r[k].gen, {2, 2})) continue;
      c.membership = "sublattice:2,2";
      const auto with_tm = check_exclusive(c);
      CHECK(with_tm.condition3 == Verdict::True);
      // m = (1,1) switches the T_m route off and forces the search
      auto search = c;
      search.m = std::vector<std::int64_t>{1, 1};
      const auto bounded = check_exclusive(search);
      CHECK(bounded.bounded_only);
      CAPTURE(rho);
      CAPTURE(k);
      CHECK(bounded.condition3 != Verdict::False);
    }
  }
}

TEST_CASE("H_m data") {
  auto z2 = parse_group("zr:2");
  const auto h = make_Hm(*z2, {2, 2});
  CHECK(h.generators == std::vector<Word>{w("s1^2"), w("s2^2")});
  REQUIRE(h.membership.has_value());
  CHECK(*z2->member(*h.membership, make_vector({2, 4})));
  CHECK_FALSE(*z2->member(*h.membership, make_vector({1, 2})));
  const auto full = make_Hm(*z2, {1, 1});
  REQUIRE(full.membership.has_value());
  CHECK(Membership(z2, *full.membership).contains(make_vector({1, 3}), w("s1 s2^3")));
  CHECK(word_in_Hm(w("s1^2 s2^-4 s1^2"), {2, 2}));
  CHECK_FALSE(word_in_Hm(w("s1 s2^2 s1"), {2, 2}));
}

TEST_CASE("translates of a(rho) are independent") {
  auto z2 = parse_group("zr:2");
  const auto [count, rank] = translate_rank(*z2, w("[s1,s2]"), {w("s1^2"), w("s2^2")}, 3);
  CHECK(count == 25);
  CHECK(rank == count);
}

TEST_CASE("integer rank against rational elimination") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> val(-3, 3), dim(1, 7);
  for (int k = 0; k < 300; ++k) {
    const int rows = dim(rng), cols = dim(rng);
    std::vector<std::vector<mpz_class>> m(static_cast<std::size_t>(rows));
    std::vector<std::vector<mpq_class>> q(static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        // sparse-ish entries make rank drops common
        const int v = val(rng) * (val(rng) > 0 ? 1 : 0);
        m[static_cast<std::size_t>(i)].push_back(v);
        q[static_cast<std::size_t>(i)].push_back(v);
      }
    }
    CHECK(integer_rank(m) == rational_rank(q));
  }
}
