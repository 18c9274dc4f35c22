#ifndef MAGNUS_EXCLUSIVE_HPP
#define MAGNUS_EXCLUSIVE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "magnus/fox.hpp"

namespace magnus {

enum class Verdict { True, False, Unknown };
std::string to_string(Verdict v);

struct ExclusiveCandidate {
  GroupPtr base;             // Gamma_1
  std::vector<Word> gamma;   // generators of Gamma, as words over F_r
  Word rho;
  std::size_t split = 0;     // rho = u s v with u = first `split` letters
  std::string membership;    // predicate for the image of Gamma in Gamma_1; "" = infer
  std::optional<std::vector<std::int64_t>> m;  // T_m data; inferred when Gamma = H_m
  int radius = 4;
  std::size_t budget = 200000;
};

struct CheckReport {
  // split data
  Word u;
  int s_gen = 0;
  Element u_bar;
  std::int64_t edge_flow = 0;
  bool condition1 = false;

  bool condition2 = false;
  std::optional<Element> witness_x;  // x in image(Gamma) \ {e} with flow on (x u, s) != 0
  std::optional<Word> witness_x_word;
  std::int64_t witness_flow = 0;
  std::string membership;

  Verdict condition3 = Verdict::Unknown;
  std::string method;          // "T_m criterion" or "bounded search to radius R"
  bool bounded_only = false;
  std::optional<Word> witness_g;  // element of Gamma whose flow uses the edge
  std::size_t searched = 0;

  // True when all three hold; `certified` is false if (3) is only bounded.
  bool exclusive() const { return condition1 && condition2 && condition3 == Verdict::True; }
  bool certified() const { return exclusive() && !bounded_only; }
};

// Throws std::invalid_argument for malformed candidates: rho not in N,
// rho in [N,N], split not on a positive letter, unknown membership.
CheckReport check_exclusive(const ExclusiveCandidate& c);

// In T_m = Gamma_1^ab / <m_i e_i>, is pi(u) outside <pi(s)>?
bool tm_criterion(const MarkedGroup& base, const Word& u, int s_gen, const std::vector<std::int64_t>& m);

// True when every maximal run of s_i in w has exponent divisible by m_i.
bool word_in_Hm(const Word& w, const std::vector<std::int64_t>& m);

struct HmData {
  std::vector<Word> generators;           // s_i^{m_i}
  std::optional<std::string> membership;  // exact predicate when one is built in
};
HmData make_Hm(const MarkedGroup& base, const std::vector<std::int64_t>& m);

// Stacks tau_g a(rho) for g over the radius ball of the image of Gamma and
// returns (number of translates, exact integer rank).
std::pair<std::size_t, std::size_t> translate_rank(const MarkedGroup& base, const Word& rho, const std::vector<Word>& gamma,
                                                   int radius);

// Exact rank of an integer matrix (fraction-free elimination).
std::size_t integer_rank(std::vector<std::vector<mpz_class>> rows);

}  // namespace magnus

#endif  // MAGNUS_EXCLUSIVE_HPP
