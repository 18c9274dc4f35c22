#ifndef MAGNUS_FOX_HPP
#define MAGNUS_FOX_HPP

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "magnus/group.hpp"

namespace magnus {

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

// Finitely supported element of Z(G). No zero coefficients are stored.
class GroupRingElement {
 public:
  using Map = std::map<Element, std::int64_t>;

  GroupRingElement() = default;
  explicit GroupRingElement(Map terms);

  const Map& terms() const { return terms_; }
  std::int64_t coefficient(const Element& x) const;
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Element& x, std::int64_t c);
  GroupRingElement operator+(const GroupRingElement& o) const;
  GroupRingElement operator-() const;
  // h * sum c_x x = sum c_x (h x)
  GroupRingElement left_translate(const MarkedGroup& g, const Element& h) const;

  friend bool operator==(const GroupRingElement&, const GroupRingElement&) = default;

 private:
  Map terms_;
};

// pi(d w / d s_i) for every i, from one left-to-right pass over w.
std::vector<GroupRingElement> fox_derivatives(const Word& w, const MarkedGroup& g);
GroupRingElement fox_derivative(const Word& w, int i, const MarkedGroup& g);

// Finitely supported map Gamma_1 -> Z^r; no zero vectors stored.
using ModuleVector = std::map<Element, IntCoords>;

// (a, base) with the law (a1,g1)(a2,g2) = (a1 + tau_{g1} a2, g1 g2).
struct WreathImage {
  ModuleVector a;
  Element base;
  friend bool operator==(const WreathImage&, const WreathImage&) = default;
};

WreathImage magnus_embed(const Word& w, const MarkedGroup& g);
WreathImage wreath_image_multiply(const MarkedGroup& g, const WreathImage& x, const WreathImage& y);
// Same data as an element of the Magnus group built over g.
Element to_magnus_element(const WreathImage& x);
WreathImage from_magnus_element(const Element& e);

// Edge key (x, i) is the marked edge x -> x s_i.
using EdgeKey = std::pair<Element, int>;
using Flow = std::map<EdgeKey, std::int64_t>;

Flow flow_of_word(const Word& w, const MarkedGroup& g);
// Pointwise sum, zeros dropped. f_{uv} = f_u + tau_{pi(u)} f_v.
Flow flow_add(const Flow& a, const Flow& b);
Flow flow_translate(const MarkedGroup& g, const Flow& f, const Element& h);
std::int64_t flow_at(const Flow& f, const Element& x, int i);

struct NetFlow {
  std::map<Element, std::int64_t> net;  // outgoing minus incoming, zeros dropped
  bool circulation = true;
};
NetFlow net_flow(const MarkedGroup& g, const Flow& f);

bool words_equal_mod_NN(const Word& u, const Word& v, const MarkedGroup& g);

// delta_m on words: s_i^{+-1} -> s_i^{+-m}.
Word stretch_word(const Word& w, int m);

struct StretchedFlow {
  Flow flow;
  bool verified = false;  // false when the base group lacks the injectivity guarantee
};
// t_m f; throws std::invalid_argument when the base group has no delta_m.
StretchedFlow stretch_flow(const MarkedGroup& g, const Flow& f, int m);

// gamma_1 rho^{x_1} gamma_2 ... gamma_p rho^{x_p} gamma_{p+1}
struct AlternatingForm {
  std::vector<Word> gammas;           // p + 1 words over F_r
  std::vector<std::int64_t> exponents;  // p integers
  Word rho;
};

// Concatenation of two alternating forms (gamma_{p+1} and gamma'_1 merge).
AlternatingForm alternating_product(const AlternatingForm& x, const AlternatingForm& y);
Word alternating_word(const AlternatingForm& x);

// theta(x) = (sum_j x_j delta_{sigma_j}, pi(gamma_1...gamma_{p+1})) in Z wr base,
// sigma_j = pi(gamma_1 ... gamma_j). `target` must be wr(zr:1, base).
Element vartheta_project(const AlternatingForm& x, const WreathGroup& target);

}  // namespace magnus

#endif  // MAGNUS_FOX_HPP
