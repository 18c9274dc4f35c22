#ifndef MAGNUS_MEASURES_HPP
#define MAGNUS_MEASURES_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

#include "magnus/group.hpp"

namespace magnus {

// Symmetric law on Z. Exact laws keep rational weights; power laws are
// float-only.
struct IntegerLaw {
  bool exact = true;
  std::vector<std::pair<std::int64_t, mpq_class>> rational;  // exact laws
  std::vector<std::pair<std::int64_t, double>> weights;      // always filled
  // power-law bookkeeping
  double alpha = 0.0;
  std::int64_t cutoff = 0;
  double normalization = 1.0;  // sum of unnormalized weights kept
  double deficit = 0.0;        // tail mass of the untruncated law lost to the cutoff

  static IntegerLaw from_rational(std::vector<std::pair<std::int64_t, mpq_class>> table);
  static IntegerLaw lazy();       // 0: 1/2, +-1: 1/4
  static IntegerLaw two_point();  // +-1: 1/2
  double weight(std::int64_t m) const;
  std::int64_t max_abs() const;
};

// p(m) proportional to (1+|m|)^{-1-alpha} on |m| <= cutoff.
IntegerLaw make_power_law(double alpha, std::int64_t cutoff = 10000);

struct Atom {
  Element element;
  std::optional<Word> word;  // representative over the marked generators
  // (i, m) when the atom is s_i^m; words are not stored for long powers
  std::optional<std::pair<int, std::int64_t>> gen_power;
  mpq_class exact;  // meaningful when the spec is exact
  double weight = 0.0;
};

struct MeasureSpec {
  GroupPtr group;
  std::vector<Atom> atoms;  // one atom per distinct element, sorted by element
  bool exact = true;
  std::string kind;
  double deficit = 0.0;
  std::vector<double> alphas;
  std::int64_t cutoff = 0;

  // Throws std::invalid_argument unless weights are positive, sum to one
  // (exactly, or within 1e-12) and the spec is symmetric.
  void validate() const;
  double weight_of(const Element& g) const;
};

MeasureSpec make_lazy_srw(GroupPtr g);
MeasureSpec make_dirac(GroupPtr g);
MeasureSpec make_generator_power_measure(GroupPtr g, const std::vector<IntegerLaw>& laws);
// Atoms (e_i at e)(0, s_i^m)(-e_i at e) on Z^r wr base, weight p_i(m)/r.
// The returned spec lives on the Magnus group over `base` (same law).
MeasureSpec make_phi_lower_measure(GroupPtr base, const std::vector<IntegerLaw>& laws);
// Finitely supported measure given by explicit words.
MeasureSpec make_word_measure(GroupPtr g, const std::vector<std::pair<Word, mpq_class>>& table, std::string kind);

// Spec strings: lazy, dirac, srw, powers:LAW;LAW;... with LAW one of
// lazy | two | power:ALPHA[:CUTOFF].
MeasureSpec parse_measure(GroupPtr g, std::string_view text);

template <class T>
struct Distribution {
  GroupPtr group;
  std::unordered_map<Element, T, ElementHash> mass;
  double pruned = 0.0;  // mass dropped by float pruning

  T at(const Element& x) const {
    auto it = mass.find(x);
    return it == mass.end() ? T(0) : it->second;
  }
  T total() const {
    T s(0);
    for (const auto& kv : mass) s += kv.second;
    return s;
  }
  // Entries sorted by element, for deterministic output.
  std::vector<std::pair<Element, T>> sorted() const;
};

using ExactDistribution = Distribution<mpq_class>;
using FloatDistribution = Distribution<double>;

ExactDistribution dirac_exact(GroupPtr g);
ExactDistribution to_exact(const MeasureSpec& s);
FloatDistribution to_float(const MeasureSpec& s);
FloatDistribution to_float(const ExactDistribution& d);
MeasureSpec spec_from_distribution(const ExactDistribution& d, std::string kind);

ExactDistribution convolve(const ExactDistribution& a, const ExactDistribution& b, std::size_t budget);
FloatDistribution convolve(const FloatDistribution& a, const FloatDistribution& b, std::size_t budget,
                           double floor = 0.0);

// mu^{*n}. Exact mode throws BudgetExceeded when the support passes
// `budget`; float mode prunes below `floor` and reports the pruned mass.
ExactDistribution convolve_power_exact(const MeasureSpec& s, int n, std::size_t budget = 5'000'000);
FloatDistribution convolve_power_float(const MeasureSpec& s, int n, std::size_t budget = 5'000'000,
                                       double floor = 0.0);
ExactDistribution convolve_power_exact(const ExactDistribution& step, int n, std::size_t budget = 5'000'000);

// mu^{*n}(e) via mu^{*a} and mu^{*b}, a + b = n.
mpq_class return_probability_exact(const MeasureSpec& s, int n, std::size_t budget = 5'000'000);
mpq_class return_probability_exact(const ExactDistribution& step, int n, std::size_t budget = 5'000'000);

// eta * mu * eta on lamp wr base: lamp move at the current position, base
// move, lamp move. `eta` lives on the lamp group, `mu` on the base.
MeasureSpec sws(const MeasureSpec& eta, const MeasureSpec& mu, std::shared_ptr<const WreathGroup> target = nullptr);
// q_1 = sws(eta, mu), q_k = eta *_k q_{k-1} *_k eta on W_k = A wr W_{k-1}.
MeasureSpec iterated_sws(const MeasureSpec& eta, const MeasureSpec& mu, int k);

struct Homomorphism {
  GroupPtr source;
  GroupPtr target;
  std::string name;
  std::function<Element(const Element&)> on_element;  // may be empty
  std::vector<Element> generator_images;               // used when on_element is empty

  // Element-level map when available, else generator images applied to the
  // atom's word or generator power.
  Element apply(const Element& x, const Atom* atom = nullptr) const;
  bool element_level() const { return static_cast<bool>(on_element); }
};

// S_{d,r} or any Magnus group -> Z^r (sum of the lamp vectors); identity on Z^r.
Homomorphism abelianization_map(GroupPtr g);
// lamp wr base -> base
Homomorphism base_projection(GroupPtr g);
// Z^k -> Z/m_1 x ... x Z/m_k
Homomorphism mod_map(GroupPtr source, std::vector<std::int64_t> moduli);
// (f, h) -> (fbar, theta(h)), fbar(y) = sum over theta(x) = y of f(x).
Homomorphism theta_lift(GroupPtr source_wreath, const Homomorphism& theta);
// delta_m on groups that implement it.
Homomorphism stretch_map(GroupPtr g, int m);
// s_i -> image_i
Homomorphism generator_table_map(GroupPtr source, GroupPtr target, std::vector<Element> images);

MeasureSpec pushforward(const MeasureSpec& s, const Homomorphism& h);
template <class T>
Distribution<T> pushforward(const Distribution<T>& d, const Homomorphism& h);

struct WalkEstimate {
  int n = 0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double estimate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t seed = 0;
  double z = 1.96;
};

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials, double z);

// Trials run in fixed blocks; block b draws from a generator seeded by
// (seed, b), so the result does not depend on `threads`. threads = 0 reads
// MAGNUS_THREADS (default: hardware concurrency).
WalkEstimate mc_return_probability(const MeasureSpec& s, int n, std::uint64_t trials, std::uint64_t seed,
                                   unsigned threads = 0, double z = 1.96);
unsigned default_thread_count();
constexpr std::uint64_t kMcBlockSize = 8192;

// sup_{s>0} s * mu({g : (1+|g|)^alpha > s}) for generator-power specs.
double weak_moment(const MeasureSpec& s, double alpha);

}  // namespace magnus

#endif  // MAGNUS_MEASURES_HPP
