#ifndef MAGNUS_ELEMENT_HPP
#define MAGNUS_ELEMENT_HPP

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <gmpxx.h>

namespace magnus {

class Element;

using IntCoords = boost::container::small_vector<std::int64_t, 4>;

// Point of Z^r, or of Z/m_1 x ... x Z/m_r with coordinates kept in [0, m_i).
struct IntVector {
  IntCoords coords;
};

// Element of BS(1,q) as an affine pair (t, x) with x = num * q^-k, k >= 0,
// and q not dividing num whenever k > 0.
struct BsElement {
  std::int64_t t = 0;
  mpz_class num;
  std::int64_t k = 0;
};

// Element (f, h) of a wreath product: f is a finitely supported map from
// base elements to lamp elements, stored sorted by key with no identity
// values; h is the base position.
struct WreathElement {
  std::vector<std::pair<Element, Element>> lamps;
  std::shared_ptr<const Element> base;
};

// Immutable value type shared by every built-in marked group. Equality and
// ordering are structural; two elements of the same group are equal as group
// elements iff they compare equal.
class Element {
 public:
  using Variant = std::variant<IntVector, BsElement, WreathElement>;

  Element() = default;
  Element(IntVector v) : v_(std::move(v)) {}
  Element(BsElement v) : v_(std::move(v)) {}
  Element(WreathElement v) : v_(std::move(v)) {}

  const Variant& value() const { return v_; }

  bool is_vector() const { return std::holds_alternative<IntVector>(v_); }
  bool is_bs() const { return std::holds_alternative<BsElement>(v_); }
  bool is_wreath() const { return std::holds_alternative<WreathElement>(v_); }

  const IntVector& vec() const { return std::get<IntVector>(v_); }
  const BsElement& bs() const { return std::get<BsElement>(v_); }
  const WreathElement& wreath() const { return std::get<WreathElement>(v_); }

  std::size_t hash() const;

  friend std::strong_ordering operator<=>(const Element& a, const Element& b);
  friend bool operator==(const Element& a, const Element& b) { return (a <=> b) == 0; }

 private:
  Variant v_;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const { return e.hash(); }
};

Element make_vector(std::initializer_list<std::int64_t> coords);
Element make_vector(const IntCoords& coords);
Element make_wreath_element(std::vector<std::pair<Element, Element>> lamps, Element base);

// Deterministic byte serialization; byte-equal iff structurally equal.
std::string canonical_bytes(const Element& e);

// Compact human-readable form, e.g. "(1,0)" or "{(0,0):(1,0)}@(1,0)".
std::string to_display(const Element& e);

}  // namespace magnus

#endif  // MAGNUS_ELEMENT_HPP
