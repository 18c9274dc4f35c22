#ifndef MAGNUS_GROUP_HPP
#define MAGNUS_GROUP_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "magnus/element.hpp"
#include "magnus/words.hpp"

namespace magnus {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A group with a designated generating tuple s_1..s_r. Elements are plain
// values; the group object only supplies the law. Read-only after
// construction, so one instance can be shared across threads.
class MarkedGroup {
 public:
  virtual ~MarkedGroup() = default;

  virtual std::string spec() const = 0;
  virtual Element identity() const = 0;
  virtual Element multiply(const Element& a, const Element& b) const = 0;
  virtual Element inverse(const Element& a) const = 0;
  virtual bool is_abelian() const { return false; }

  // Relations of the abelianization as a quotient of Z^r (one integer
  // vector per relation, in generator coordinates). nullopt when unknown.
  virtual std::optional<std::vector<IntCoords>> abelianization_relations() const { return std::nullopt; }

  // delta_m: the endomorphism induced by s_i -> s_i^m. Returns nullopt when
  // the group does not ship an injective implementation.
  virtual std::optional<Element> stretch(const Element& /*x*/, int /*m*/) const { return std::nullopt; }

  // Named subgroup predicates; nullopt when the name is not known here.
  virtual std::optional<bool> member(const std::string& /*name*/, const Element& /*x*/) const { return std::nullopt; }
  virtual std::vector<std::string> membership_names() const { return {}; }

  int rank() const { return static_cast<int>(gens_.size()); }
  const Element& generator(int i) const { return gens_.at(static_cast<std::size_t>(i)); }
  const Element& generator_inverse(int i) const { return gen_inv_.at(static_cast<std::size_t>(i)); }
  const Element& letter_image(const Letter& l) const { return l.sign > 0 ? generator(l.gen) : generator_inverse(l.gen); }
  bool generator_is_torsion(int i) const { return torsion_.at(static_cast<std::size_t>(i)); }
  bool any_torsion_generator() const;

  bool equal(const Element& a, const Element& b) const { return a == b; }
  bool is_identity(const Element& a) const { return a == identity(); }
  std::string canonical_key(const Element& a) const { return canonical_bytes(a); }

  Element evaluate(const Word& w) const;
  Element power(const Element& a, std::int64_t k) const;

 protected:
  void set_generators(std::vector<Element> gens, std::vector<bool> torsion);

 private:
  std::vector<Element> gens_;
  std::vector<Element> gen_inv_;
  std::vector<bool> torsion_;
};

using GroupPtr = std::shared_ptr<const MarkedGroup>;

// Z^r (no moduli) or Z/m_1 x ... x Z/m_r.
class AbelianGroup final : public MarkedGroup {
 public:
  explicit AbelianGroup(int r, std::vector<std::int64_t> moduli = {});

  std::string spec() const override;
  Element identity() const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  bool is_abelian() const override { return true; }
  std::optional<std::vector<IntCoords>> abelianization_relations() const override;
  std::optional<Element> stretch(const Element& x, int m) const override;
  std::optional<bool> member(const std::string& name, const Element& x) const override;
  std::vector<std::string> membership_names() const override { return {"sublattice:m1,..,mr"}; }

  int dim() const { return dim_; }
  const std::vector<std::int64_t>& moduli() const { return moduli_; }
  bool free() const { return moduli_.empty(); }
  Element reduce(IntCoords c) const;

 private:
  int dim_;
  std::vector<std::int64_t> moduli_;
};

// BS(1,q) = <a,b | a^-1 b a = b^q> realised as affine maps x -> q^-t x + c;
// a = (1, 0), b = (0, 1).
class BSGroup final : public MarkedGroup {
 public:
  explicit BSGroup(int q);

  std::string spec() const override;
  Element identity() const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  std::optional<std::vector<IntCoords>> abelianization_relations() const override;
  std::optional<bool> member(const std::string& name, const Element& x) const override;
  std::vector<std::string> membership_names() const override { return {"even-t"}; }

  int q() const { return q_; }
  Element make(std::int64_t t, const mpq_class& x) const;

 private:
  // Brings num * q^-k into lowest form.
  void normalize(BsElement& e) const;
  int q_;
  mpz_class qz_;
};

// Restricted wreath product lamp wr base with abelian lamp group. With the
// default marking the generators are the lamp generators at the base
// identity followed by the base generators.
class WreathGroup : public MarkedGroup {
 public:
  WreathGroup(GroupPtr lamp, GroupPtr base);

  std::string spec() const override;
  Element identity() const override;
  Element multiply(const Element& a, const Element& b) const override;
  Element inverse(const Element& a) const override;
  std::optional<std::vector<IntCoords>> abelianization_relations() const override;
  std::optional<bool> member(const std::string& name, const Element& x) const override;
  std::vector<std::string> membership_names() const override;

  const GroupPtr& lamp() const { return lamp_; }
  const GroupPtr& base() const { return base_; }

  // Builders used by measures and the Magnus embedding.
  Element pure_lamp(const Element& at, const Element& value) const;
  Element pure_base(const Element& h) const;
  Element from_parts(std::vector<std::pair<Element, Element>> lamps, const Element& base) const;
  // tau_h f: every key x moves to h x.
  std::vector<std::pair<Element, Element>> translate(const std::vector<std::pair<Element, Element>>& f,
                                                     const Element& h) const;
  // Pointwise f + g with identity values dropped; both inputs sorted.
  std::vector<std::pair<Element, Element>> add(const std::vector<std::pair<Element, Element>>& f,
                                               const std::vector<std::pair<Element, Element>>& g) const;

 protected:
  struct CustomMarking {};
  WreathGroup(GroupPtr lamp, GroupPtr base, CustomMarking);
  void install_generators(std::vector<Element> gens, std::vector<bool> torsion) {
    set_generators(std::move(gens), std::move(torsion));
  }

 private:
  GroupPtr lamp_;
  GroupPtr base_;
  bool order_preserving_translation_;
};

// Z_q wr Z marked by (t, a t); both generators have infinite order.
class LamplighterTGroup final : public WreathGroup {
 public:
  explicit LamplighterTGroup(int q);
  std::string spec() const override;
  std::optional<std::vector<IntCoords>> abelianization_relations() const override;

 private:
  int q_;
};

// Z^r wr base marked by psi(s_i) = (delta_e * e_i, s_i). Over base = F_r/N
// this is the Magnus image of Gamma_2(N); iterating from Z^r gives S_{d,r}.
class MagnusGroup final : public WreathGroup {
 public:
  explicit MagnusGroup(GroupPtr base);
  std::string spec() const override;
  std::optional<std::vector<IntCoords>> abelianization_relations() const override;
  std::optional<Element> stretch(const Element& x, int m) const override;

  // True when delta_m is known injective with s_i^q outside its image for
  // 1 <= q < m (Z^r and towers over it).
  bool stretch_verified() const { return stretch_verified_; }

 private:
  bool stretch_verified_;
};

GroupPtr make_abelian_group(int r, std::vector<std::int64_t> moduli = {});
GroupPtr make_lamplighter(int q);
GroupPtr make_lamplighter_t(int q);
GroupPtr make_bs(int q);
GroupPtr make_wreath(GroupPtr lamp, GroupPtr base);
GroupPtr make_magnus(GroupPtr base);
GroupPtr make_free_solvable(int d, int r);

// Spec strings: zr:R, tm:M1,..,Mr, ll:Q, llw:Q, bs:Q, sdr:D,R, wr(G,H), mag(G).
GroupPtr parse_group(std::string_view text);

bool stretch_is_verified(const MarkedGroup& g);

// Breadth-first ball growth using s_i^{+-1}. Throws BudgetExceeded when the
// element count passes `budget`, after filling `partial`.
struct BallLayer {
  int radius;
  std::size_t ball_size;
  std::vector<Element> frontier;
};
std::vector<BallLayer> ball(const MarkedGroup& g, int radius, std::size_t budget,
                            std::vector<BallLayer>* partial = nullptr);

// Membership for a finite-index subgroup given by the permutation action of
// the generators on cosets 0..k-1 (subgroup = stabilizer of coset 0). Works
// on words, since elements of arbitrary groups carry no word.
class CosetTable {
 public:
  // "p1/p2/..." with each pi a comma list: image of coset j under s_i.
  static CosetTable parse(std::string_view text, int rank);
  bool contains(const Word& w) const;
  std::size_t index() const { return perms_.empty() ? 1 : perms_.front().size(); }

 private:
  std::vector<std::vector<int>> perms_;
  std::vector<std::vector<int>> inv_;
};

// A named subgroup predicate. Element-level names go to the group; the
// "coset:" form uses the word representative.
class Membership {
 public:
  Membership(GroupPtr group, std::string name);
  const std::string& name() const { return name_; }
  bool contains(const Element& x, const Word& representative) const;

 private:
  GroupPtr group_;
  std::string name_;
  std::optional<CosetTable> table_;
};

}  // namespace magnus

#endif  // MAGNUS_GROUP_HPP
