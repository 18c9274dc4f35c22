#include "magnus/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "magnus/asymptotics.hpp"
#include "magnus/exclusive.hpp"
#include "magnus/fox.hpp"
#include "magnus/measures.hpp"

namespace magnus {

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail.str("");
      detail << "FAILED: " << what;
    }
  }
};

using Rng = std::mt19937_64;

Word random_word(Rng& rng, int rank, int max_len, int min_len = 0) {
  std::uniform_int_distribution<int> len(min_len, max_len), gen(0, rank - 1), coin(0, 1);
  std::vector<Letter> t;
  const int n = len(rng);
  // Draw until the reduced word has the drawn length, so lengths are honest.
  Word w(rank);
  while (static_cast<int>(w.size()) < n) {
    t.assign(w.letters().begin(), w.letters().end());
    t.push_back({gen(rng), coin(rng) ? 1 : -1});
    w = Word::reduce(rank, t);
  }
  return w;
}

// d(uv) = du + u dv, split at the midpoint; independent of the prefix scan.
std::vector<GroupRingElement> fox_oracle(const Word& w, const MarkedGroup& g) {
  const int r = w.rank();
  std::vector<GroupRingElement> out(static_cast<std::size_t>(r));
  if (w.empty()) return out;
  if (w.size() == 1) {
    const Letter l = w[0];
    if (l.sign > 0) {
      out[static_cast<std::size_t>(l.gen)].add_term(g.identity(), 1);
    } else {
      out[static_cast<std::size_t>(l.gen)].add_term(g.generator_inverse(l.gen), -1);
    }
    return out;
  }
  const std::size_t mid = w.size() / 2;
  const Word u = w.prefix(mid), v = w.suffix_from(mid);
  auto du = fox_oracle(u, g);
  auto dv = fox_oracle(v, g);
  const Element ub = g.evaluate(u);
  for (int i = 0; i < r; ++i) {
    out[static_cast<std::size_t>(i)] =
        du[static_cast<std::size_t>(i)] + dv[static_cast<std::size_t>(i)].left_translate(g, ub);
  }
  return out;
}

// ------------------------------------------------------------------- 1
Outcome magnus_homomorphism(std::uint64_t seed) {
  Outcome o;
  Rng rng(seed);
  std::size_t pairs = 0;
  for (const char* spec : {"zr:2", "zr:3", "ll:2", "bs:2"}) {
    auto g = parse_group(spec);
    auto m = make_magnus(g);
    for (int k = 0; k < 1000 && o.ok; ++k) {
      const Word u = random_word(rng, g->rank(), 30), v = random_word(rng, g->rank(), 30);
      const Word uv = word_multiply(u, v);
      const WreathImage lhs = magnus_embed(uv, *g);
      o.require(lhs == wreath_image_multiply(*g, magnus_embed(u, *g), magnus_embed(v, *g)),
                std::string("psi(uv) != psi(u)psi(v) over ") + spec + " for u=" + to_string(u) + " v=" + to_string(v));
      // The wreath-group law on the Magnus group must agree with the module law.
      o.require(to_magnus_element(lhs) == m->multiply(m->evaluate(u), m->evaluate(v)),
                std::string("Magnus group product disagrees over ") + spec);
      ++pairs;
    }
  }
  if (o.ok) o.detail << pairs << " pairs over zr:2, zr:3, ll:2, bs:2";
  return o;
}

// ------------------------------------------------------------------- 2
Outcome kernel_word_problem(std::uint64_t seed) {
  Outcome o;
  auto z2 = parse_group("zr:2");
  auto s22 = parse_group("sdr:2,2");
  auto s32 = parse_group("sdr:3,2");
  const Word w = parse_word("[[s1,s2], s1[s1,s2]s1^-1]", 2);
  o.require(s22->is_identity(s22->evaluate(w)), "w is not the identity in S_{2,2}");
  o.require(!s32->is_identity(s32->evaluate(w)), "w is the identity in S_{3,2}");
  o.require(words_equal_mod_NN(w, Word(2), *z2), "flow of w is not zero over Z^2");

  Rng rng(seed);
  auto n_elem = [&] {
    Word c = commutator(random_word(rng, 2, 5, 1), random_word(rng, 2, 5, 1));
    return conjugate(c, random_word(rng, 2, 5));
  };
  std::size_t nonempty = 0;
  for (int k = 0; k < 200 && o.ok; ++k) {
    Word x(2);
    std::uniform_int_distribution<int> factors(1, 3);
    for (int j = factors(rng); j > 0; --j) {
      Word c = conjugate(commutator(n_elem(), n_elem()), random_word(rng, 2, 4));
      x = word_multiply(x, c);
    }
    if (!x.empty()) ++nonempty;
    o.require(s22->is_identity(s22->evaluate(x)), "[N,N] product not trivial in S_{2,2}: " + to_string(x));
    o.require(words_equal_mod_NN(x, Word(2), *z2), "[N,N] product has nonzero flow: " + to_string(x));
  }
  o.require(nonempty >= 150, "random [N,N] products were mostly freely trivial");
  if (o.ok) o.detail << "w: e in S_{2,2}, not e in S_{3,2}; " << nonempty << "/200 freely nontrivial products trivial";
  return o;
}

// ------------------------------------------------------------------- 3
Outcome flow_equals_fox(std::uint64_t seed) {
  Outcome o;
  Rng rng(seed);
  const char* specs[] = {"zr:2", "ll:2", "bs:2", "sdr:2,2", "zr:3"};
  std::size_t edges = 0;
  for (int k = 0; k < 500 && o.ok; ++k) {
    auto g = parse_group(specs[k % 5]);
    const Word w = random_word(rng, g->rank(), 30);
    const Flow f = flow_of_word(w, *g);
    const auto oracle = fox_oracle(w, *g);
    const auto lib = fox_derivatives(w, *g);
    for (int i = 0; i < g->rank(); ++i) {
      const auto& d = oracle[static_cast<std::size_t>(i)];
      o.require(d == lib[static_cast<std::size_t>(i)], "library Fox derivative disagrees with product-rule oracle");
      for (const auto& [x, c] : d.terms()) o.require(flow_at(f, x, i) == c, "flow != Fox coefficient on " + to_string(w));
    }
    for (const auto& [key, value] : f) {
      o.require(oracle[static_cast<std::size_t>(key.second)].coefficient(key.first) == value,
                "flow edge without matching Fox coefficient on " + to_string(w));
      ++edges;
    }
  }
  if (o.ok) o.detail << "500 words, " << edges << " edges matched";
  return o;
}

// ------------------------------------------------------------------- 4
// Sum over all 5^n lazy step sequences in S_{2,2} of the weight of those
// that return to e.
mpq_class path_enumeration(const MarkedGroup& g, int n) {
  std::vector<std::pair<Element, mpq_class>> steps = {{g.identity(), mpq_class(1, 2)}};
  for (int i = 0; i < g.rank(); ++i) {
    steps.emplace_back(g.generator(i), mpq_class(1, 4 * g.rank()));
    steps.emplace_back(g.generator_inverse(i), mpq_class(1, 4 * g.rank()));
  }
  mpq_class total = 0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    Element x = g.identity();
    mpq_class w = 1;
    for (auto i : idx) {
      x = g.multiply(x, steps[i].first);
      w *= steps[i].second;
    }
    if (g.is_identity(x)) total += w;
    std::size_t p = 0;
    while (p < idx.size() && ++idx[p] == steps.size()) idx[p++] = 0;
    if (p == idx.size()) break;
  }
  return total;
}

Outcome lower_measure_identity() {
  Outcome o;
  auto s22 = parse_group("sdr:2,2");
  const mpq_class two = path_enumeration(*s22, 2);
  o.require(two == mpq_class(5, 16), "25-path enumeration gives " + two.get_str() + ", expected 5/16");
  std::ostringstream vals;
  for (const char* spec : {"zr:2", "llw:2"}) {
    auto base = parse_group(spec);
    auto mu = make_lazy_srw(make_magnus(base));
    auto phi = make_phi_lower_measure(base, {IntegerLaw::lazy(), IntegerLaw::lazy()});
    vals << spec << ":";
    for (int n = 1; n <= 6 && o.ok; ++n) {
      const mpq_class a = return_probability_exact(mu, n), b = return_probability_exact(phi, n);
      o.require(a == b, std::string(spec) + " n=" + std::to_string(n) + ": " + a.get_str() + " != " + b.get_str());
      if (n <= 3) {
        const mpq_class e = path_enumeration(*mu.group, n);
        o.require(e == a, std::string(spec) + " n=" + std::to_string(n) + " disagrees with path enumeration");
      }
      if (n == 2 && std::strcmp(spec, "zr:2") == 0) o.require(a == mpq_class(5, 16), "n=2 value is not 5/16");
      vals << " " << a.get_str();
    }
    vals << "; ";
  }
  if (o.ok) o.detail << vals.str();
  return o;
}

// ------------------------------------------------------------------- 5
Outcome projection_inequality() {
  Outcome o;
  auto s22 = parse_group("sdr:2,2");
  auto z1 = parse_group("zr:1");
  auto z2 = parse_group("zr:2");
  auto w = [](const char* t, int r) { return parse_word(t, r); };
  const Word rho = w("[s1,s2]", 2);
  auto nu = make_word_measure(s22, {{rho, mpq_class(1, 2)}, {word_inverse(rho), mpq_class(1, 2)}}, "nu");
  const std::vector<std::pair<Word, mpq_class>> phi_table = {{Word(2), mpq_class(1, 2)},
                                                             {w("s1^2", 2), mpq_class(1, 8)},
                                                             {w("s1^-2", 2), mpq_class(1, 8)},
                                                             {w("s2^2", 2), mpq_class(1, 8)},
                                                             {w("s2^-2", 2), mpq_class(1, 8)}};
  auto phi = make_word_measure(s22, phi_table, "phi");
  auto phibar = make_word_measure(z2, phi_table, "phibar");
  auto eta = make_word_measure(z1, {{w("s1", 1), mpq_class(1, 2)}, {w("s1^-1", 1), mpq_class(1, 2)}}, "eta");
  const auto step = convolve(convolve(to_exact(nu), to_exact(phi), 5'000'000), to_exact(nu), 5'000'000);
  const auto q = sws(eta, phibar);
  for (int n = 1; n <= 4 && o.ok; ++n) {
    const mpq_class lhs = return_probability_exact(step, n), rhs = return_probability_exact(q, n);
    o.require(lhs <= rhs, "n=" + std::to_string(n) + ": " + lhs.get_str() + " > " + rhs.get_str());
    o.detail << " n=" << n << ": " << lhs.get_str() << " <= " << rhs.get_str() << ";";
  }
  return o;
}

// ------------------------------------------------------------------- 6
Outcome exclusive_pairs() {
  Outcome o;
  auto z2 = parse_group("zr:2");
  auto w = [](const char* t) { return parse_word(t, 2); };
  ExclusiveCandidate ex{z2, {w("s1^2"), w("s2^2")}, w("[s1,s2]"), 1, "", std::nullopt, 4, 200000};
  const auto a = check_exclusive(ex);
  o.require(a.condition1 && a.condition2 && a.condition3 == Verdict::True, "Gamma=<s1^2,s2^2> is not reported exclusive");
  o.require(a.certified(), "condition (3) for Gamma=<s1^2,s2^2> is only bounded");

  ExclusiveCandidate full{z2, {w("s1"), w("s2")}, w("[s1,s2]"), 0, "", std::nullopt, 4, 200000};
  const auto b = check_exclusive(full);
  o.require(!b.condition2 && b.witness_x.has_value(), "full group: condition (2) not refuted");
  if (b.witness_x) {
    // Re-verify the witness from scratch.
    const Flow f = flow_of_word(w("[s1,s2]"), *z2);
    const std::int64_t fl = flow_at(f, z2->multiply(*b.witness_x, b.u_bar), b.s_gen);
    o.require(fl != 0 && fl == b.witness_flow, "witness edge carries no flow");
    o.require(!z2->is_identity(*b.witness_x), "witness is the identity");
    o.require(*b.witness_x == make_vector({0, 1}), "witness is " + to_display(*b.witness_x) + ", expected (0,1)");
  }
  o.require(tm_criterion(*z2, w("s1"), 1, {2, 2}), "T_m criterion false for u=s1, s=s2, m=(2,2)");
  o.require(!tm_criterion(*z2, w("s2"), 1, {2, 2}), "T_m criterion true for u=s2, s=s2, m=(2,2)");
  o.require(!tm_criterion(*z2, Word(2), 1, {2, 2}), "T_m criterion true for u=e");
  bool rejected = false;
  try {
    check_exclusive({z2, {w("s1^2"), w("s2^2")}, w("[[s1,s2],[s1,s2]]"), 0, "", std::nullopt, 4, 200000});
  } catch (const std::invalid_argument&) {
    rejected = true;
  }
  o.require(rejected, "rho with zero flow was accepted");
  const auto [count, rank] = translate_rank(*z2, w("[s1,s2]"), ex.gamma, 3);
  o.require(count == rank, "translates of a(rho) are dependent");
  if (o.ok) {
    o.detail << "example pair exclusive (" << a.method << "); full group witness x=" << to_display(*b.witness_x)
             << " flow " << b.witness_flow << "; " << count << " translates, rank " << rank;
  }
  return o;
}

// ------------------------------------------------------------------- 7
bool same_distribution(const ExactDistribution& a, const ExactDistribution& b) {
  auto x = a.sorted(), y = b.sorted();
  return x == y;
}

Outcome pushforward_commutes() {
  Outcome o;
  auto z1 = parse_group("zr:1");
  auto eta = make_word_measure(
      z1, {{parse_word("s1", 1), mpq_class(1, 2)}, {parse_word("s1^-1", 1), mpq_class(1, 2)}}, "eta");
  struct Case {
    GroupPtr base;
    Homomorphism theta;
  };
  auto s22 = parse_group("sdr:2,2");
  std::vector<Case> cases = {{z1, mod_map(z1, {2})}, {s22, abelianization_map(s22)}};
  for (const auto& c : cases) {
    auto mu = make_lazy_srw(c.base);
    const auto left = sws(eta, mu);
    const auto lift = theta_lift(left.group, c.theta);
    const auto right = sws(eta, pushforward(mu, c.theta));
    for (int n = 1; n <= 3 && o.ok; ++n) {
      const auto lhs = pushforward(convolve_power_exact(left, n), lift);
      const auto rhs = convolve_power_exact(right, n);
      o.require(same_distribution(lhs, rhs), c.base->spec() + " n=" + std::to_string(n) + ": distributions differ");
      if (n == 3) o.detail << c.base->spec() << " -> " << c.theta.target->spec() << ": " << rhs.mass.size() << " atoms at n=3; ";
    }
  }
  return o;
}

// ------------------------------------------------------------------- 8
Outcome stretch_flows(std::uint64_t seed) {
  Outcome o;
  Rng rng(seed);
  for (const char* spec : {"zr:2", "sdr:2,2"}) {
    auto g = parse_group(spec);
    for (int k = 0; k < 100 && o.ok; ++k) {
      const Word w = random_word(rng, g->rank(), 20);
      const auto t = stretch_flow(*g, flow_of_word(w, *g), 2);
      o.require(t.verified, std::string("delta_2 is not verified on ") + spec);
      o.require(flow_of_word(stretch_word(w, 2), *g) == t.flow,
                std::string("f_{delta_2(g)} != t_2 f_g over ") + spec + " for " + to_string(w));
    }
  }
  if (o.ok) o.detail << "100 words over zr:2 and 100 over sdr:2,2";
  return o;
}

// ------------------------------------------------------------------- 9
Outcome monte_carlo(std::uint64_t seed) {
  Outcome o;
  auto mu = make_lazy_srw(parse_group("sdr:2,2"));
  const mpq_class exact = return_probability_exact(mu, 8);
  const double ex = exact.get_d();
  const auto one = mc_return_probability(mu, 8, 1'000'000, seed, 1, 3.0);
  const auto four = mc_return_probability(mu, 8, 1'000'000, seed, 4, 3.0);
  o.require(one.ci_lo <= ex && ex <= one.ci_hi, "exact value outside the 3-sigma Wilson interval");
  o.require(one.hits == four.hits && std::memcmp(&one.estimate, &four.estimate, sizeof(double)) == 0,
            "1 and 4 threads disagree");
  o.detail << "exact " << exact.get_str() << " = " << ex << ", estimate " << one.estimate << " in [" << one.ci_lo << ", "
           << one.ci_hi << "], hits " << one.hits << " (1 thread) vs " << four.hits << " (4 threads)";
  return o;
}

// ------------------------------------------------------------------ 10
double fitted_exponent(const VolumeFunction& w, double D) {
  // log log gamma = e log t + (2/(2+D)) log log t + c; fit e.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int N = 31;
  for (int i = 0; i < N; ++i) {
    const double t = std::pow(10.0, 3.0 + 3.0 * i / (N - 1));
    const double x = std::log(t);
    const double y = std::log(gamma_from_volume(w, t).log_gamma) - 2.0 / (2.0 + D) * std::log(x);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (N * sxy - sx * sy) / (N * sxx - sx * sx);
}

Outcome gamma_solver() {
  Outcome o;
  const auto v = volume_power(1);
  for (double t : {10.0, 1e3, 1e5}) {
    const double g = gamma_from_volume(v, t).gamma, want = std::sqrt(2 * t + 1);
    o.require(std::abs(g - want) <= 1e-4 * want, "V=t at t=" + std::to_string(t) + " gives " + std::to_string(g));
  }
  for (int D = 1; D <= 3 && o.ok; ++D) {
    const double e = fitted_exponent(volume_wreath(volume_power(D)), D), want = D / (2.0 + D);
    o.require(std::abs(e - want) <= 0.05, "D=" + std::to_string(D) + " exponent " + std::to_string(e));
    o.detail << "D=" << D << ": " << e << " vs " << want << "; ";
  }
  return o;
}

// ------------------------------------------------------------------ 11
// Number of Lyndon words of length m over r letters by brute force.
std::int64_t lyndon_count(int r, int m) {
  std::vector<int> w(static_cast<std::size_t>(m), 0);
  std::int64_t count = 0;
  for (;;) {
    bool lyndon = true;
    for (int s = 1; s < m && lyndon; ++s) {
      // rotation by s must be strictly larger
      for (int i = 0; i < m; ++i) {
        const int a = w[static_cast<std::size_t>(i)], b = w[static_cast<std::size_t>((i + s) % m)];
        if (a != b) {
          lyndon = a < b;
          break;
        }
        if (i == m - 1) lyndon = false;
      }
    }
    if (lyndon) ++count;
    std::size_t p = 0;
    while (p < w.size() && ++w[p] == r) w[p++] = 0;
    if (p == w.size()) break;
  }
  return count;
}

Outcome witt() {
  Outcome o;
  o.require(witt_degree(2, 1) == 2, "D(2,1) != 2");
  o.require(witt_degree(2, 2) == 4, "D(2,2) != 4");
  o.require(witt_degree(3, 2) == 9, "D(3,2) != 9");
  for (int r = 2; r <= 4; ++r) {
    std::int64_t sum = 0;
    for (int c = 1; c <= 5; ++c) {
      sum += c * lyndon_count(r, c);
      o.require(witt_degree(r, c) == sum, "D(" + std::to_string(r) + "," + std::to_string(c) + ") != Lyndon rank sum");
    }
  }
  if (o.ok) o.detail << "D(2,1)=2, D(2,2)=4, D(3,2)=9; Lyndon rank sums agree for r<=4, c<=5";
  return o;
}

// ------------------------------------------------------------------ 12
Outcome dirichlet() {
  Outcome o;
  auto z1 = parse_group("zr:1");
  auto z2 = parse_group("zr:2");
  const auto mu1 = make_lazy_srw(z1), mu2 = make_lazy_srw(z2);
  const double pi = std::acos(-1.0);
  double worst = 0;
  for (int k : {0, 1, 2, 5, 10, 20, 40}) {
    const auto d = dirichlet_lambda1(mu1, box_zd(1, k));
    const double want = (1 - std::cos(pi / (2 * k + 2))) / 2;
    worst = std::max(worst, std::abs(d.lambda1 - want));
    o.require(std::abs(d.lambda1 - want) <= 1e-6, "segment k=" + std::to_string(k));
    o.require(d.lambda1 <= d.test_function_bound + 1e-12, "eigenvalue above the test-function bound");
  }
  double lo = 1e300, hi = 0;
  for (int k : {4, 8, 16, 32}) {
    const auto d = dirichlet_lambda1(mu2, box_zd(2, k));
    o.require(d.lambda1 <= d.test_function_bound + 1e-12, "eigenvalue above the test-function bound");
    lo = std::min(lo, k * k * d.lambda1);
    hi = std::max(hi, k * k * d.lambda1);
  }
  o.require(hi <= 2 * lo, "k^2 lambda_1 spread exceeds a factor 2");
  if (o.ok) o.detail << "segment error " << worst << "; k^2 lambda_1 in [" << lo << ", " << hi << "]";
  return o;
}

struct Spec {
  int id;
  const char* name;
  double limit;
  std::function<Outcome(const SelftestOptions&)> run;
};

std::vector<Spec> criteria() {
  return {
      {1, "Magnus embedding is a homomorphism", 10, [](auto& s) { return magnus_homomorphism(s.seed); }},
      {2, "kernel and word problem", 5, [](auto& s) { return kernel_word_problem(s.seed + 1); }},
      {3, "flows equal Fox derivatives", 10, [](auto& s) { return flow_equals_fox(s.seed + 2); }},
      {4, "lower measure return identity", 60, [](auto&) { return lower_measure_identity(); }},
      {5, "projection inequality", 120, [](auto&) { return projection_inequality(); }},
      {6, "exclusive pair checker", 1, [](auto&) { return exclusive_pairs(); }},
      {7, "switch-walk-switch pushforward", 10, [](auto&) { return pushforward_commutes(); }},
      {8, "stretch of flows", 10, [](auto& s) { return stretch_flows(s.seed + 3); }},
      {9, "Monte Carlo vs exact", 60, [](auto& s) { return monte_carlo(s.seed + 4); }},
      {10, "gamma solver", 10, [](auto&) { return gamma_solver(); }},
      {11, "Witt degree", 1, [](auto&) { return witt(); }},
      {12, "Dirichlet eigenvalue", 30, [](auto&) { return dirichlet(); }},
  };
}

}  // namespace

int selftest_criterion_count() { return 12; }

std::vector<CriterionResult> run_selftest(const SelftestOptions& opts) {
  std::vector<CriterionResult> out;
  for (const auto& c : criteria()) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), c.id) == opts.only.end()) continue;
    CriterionResult r{c.id, c.name, false, 0.0, c.limit, ""};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Outcome o = c.run(opts);
      r.passed = o.ok;
      r.detail = o.detail.str();
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.passed && r.seconds > r.time_limit) {
      r.passed = false;
      r.detail = "over time limit; " + r.detail;
    }
    if (opts.on_result) opts.on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace magnus
