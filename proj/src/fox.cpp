#include "magnus/fox.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace magnus {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t c;
  if (__builtin_add_overflow(a, b, &c)) throw std::overflow_error("integer coefficient overflow");
  return c;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t c;
  if (__builtin_mul_overflow(a, b, &c)) throw std::overflow_error("integer coefficient overflow");
  return c;
}

// ------------------------------------------------------------- group ring

GroupRingElement::GroupRingElement(Map terms) : terms_(std::move(terms)) {
  std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; });
}

std::int64_t GroupRingElement::coefficient(const Element& x) const {
  auto it = terms_.find(x);
  return it == terms_.end() ? 0 : it->second;
}

void GroupRingElement::add_term(const Element& x, std::int64_t c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.try_emplace(x, 0);
  it->second = checked_add(it->second, c);
  if (it->second == 0) terms_.erase(it);
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement& o) const {
  GroupRingElement out = *this;
  for (const auto& [x, c] : o.terms_) out.add_term(x, c);
  return out;
}

GroupRingElement GroupRingElement::operator-() const {
  GroupRingElement out = *this;
  for (auto& [x, c] : out.terms_) c = -c;
  return out;
}

GroupRingElement GroupRingElement::left_translate(const MarkedGroup& g, const Element& h) const {
  GroupRingElement out;
  for (const auto& [x, c] : terms_) out.add_term(g.multiply(h, x), c);
  return out;
}

// ---------------------------------------------------------------- Fox / psi

namespace {

// Shared prefix walk. visit(i, vertex, +-1) sees each letter's edge.
template <class Visit>
Element walk(const Word& w, const MarkedGroup& g, Visit&& visit) {
  if (w.rank() != g.rank()) {
    throw std::invalid_argument("rank mismatch: word rank " + std::to_string(w.rank()) + " vs group " + g.spec());
  }
  Element x = g.identity();
  for (const Letter& l : w.letters()) {
    if (l.sign > 0) {
      visit(l.gen, x, 1);
      x = g.multiply(x, g.generator(l.gen));
    } else {
      x = g.multiply(x, g.generator_inverse(l.gen));
      visit(l.gen, x, -1);
    }
  }
  return x;
}

}  // namespace

std::vector<GroupRingElement> fox_derivatives(const Word& w, const MarkedGroup& g) {
  std::vector<std::unordered_map<Element, std::int64_t, ElementHash>> acc(static_cast<std::size_t>(g.rank()));
  walk(w, g, [&](int i, const Element& x, int sign) {
    auto& slot = acc[static_cast<std::size_t>(i)][x];
    slot = checked_add(slot, sign);
  });
  std::vector<GroupRingElement> out;
  for (auto& m : acc) out.emplace_back(GroupRingElement::Map(m.begin(), m.end()));
  return out;
}

GroupRingElement fox_derivative(const Word& w, int i, const MarkedGroup& g) {
  if (i < 0 || i >= g.rank()) throw std::out_of_range("Fox derivative index out of range");
  return fox_derivatives(w, g)[static_cast<std::size_t>(i)];
}

WreathImage magnus_embed(const Word& w, const MarkedGroup& g) {
  const std::size_t r = static_cast<std::size_t>(g.rank());
  std::unordered_map<Element, IntCoords, ElementHash> acc;
  Element base = walk(w, g, [&](int i, const Element& x, int sign) {
    auto [it, fresh] = acc.try_emplace(x, IntCoords(r, 0));
    auto& c = it->second[static_cast<std::size_t>(i)];
    c = checked_add(c, sign);
  });
  WreathImage out{{}, std::move(base)};
  for (auto& [x, v] : acc) {
    if (std::any_of(v.begin(), v.end(), [](std::int64_t c) { return c != 0; })) out.a.emplace(x, std::move(v));
  }
  return out;
}

WreathImage wreath_image_multiply(const MarkedGroup& g, const WreathImage& x, const WreathImage& y) {
  WreathImage out{x.a, g.multiply(x.base, y.base)};
  for (const auto& [key, v] : y.a) {
    auto [it, fresh] = out.a.try_emplace(g.multiply(x.base, key), IntCoords(v.size(), 0));
    for (std::size_t i = 0; i < v.size(); ++i) it->second[i] = checked_add(it->second[i], v[i]);
    if (std::all_of(it->second.begin(), it->second.end(), [](std::int64_t c) { return c == 0; })) out.a.erase(it);
  }
  return out;
}

Element to_magnus_element(const WreathImage& x) {
  std::vector<std::pair<Element, Element>> lamps;
  lamps.reserve(x.a.size());
  for (const auto& [key, v] : x.a) lamps.emplace_back(key, make_vector(v));
  return make_wreath_element(std::move(lamps), x.base);
}

WreathImage from_magnus_element(const Element& e) {
  const auto& w = e.wreath();
  WreathImage out{{}, *w.base};
  for (const auto& [key, v] : w.lamps) out.a.emplace(key, v.vec().coords);
  return out;
}

// -------------------------------------------------------------------- flows

Flow flow_of_word(const Word& w, const MarkedGroup& g) {
  Flow f;
  walk(w, g, [&](int i, const Element& x, int sign) {
    auto [it, fresh] = f.try_emplace(EdgeKey{x, i}, 0);
    it->second = checked_add(it->second, sign);
    if (it->second == 0) f.erase(it);
  });
  return f;
}

Flow flow_add(const Flow& a, const Flow& b) {
  Flow out = a;
  for (const auto& [k, v] : b) {
    auto [it, fresh] = out.try_emplace(k, 0);
    it->second = checked_add(it->second, v);
    if (it->second == 0) out.erase(it);
  }
  return out;
}

Flow flow_translate(const MarkedGroup& g, const Flow& f, const Element& h) {
  Flow out;
  for (const auto& [k, v] : f) out.emplace(EdgeKey{g.multiply(h, k.first), k.second}, v);
  return out;
}

std::int64_t flow_at(const Flow& f, const Element& x, int i) {
  auto it = f.find(EdgeKey{x, i});
  return it == f.end() ? 0 : it->second;
}

NetFlow net_flow(const MarkedGroup& g, const Flow& f) {
  NetFlow out;
  auto bump = [&](const Element& x, std::int64_t v) {
    auto [it, fresh] = out.net.try_emplace(x, 0);
    it->second = checked_add(it->second, v);
    if (it->second == 0) out.net.erase(it);
  };
  for (const auto& [k, v] : f) {
    bump(k.first, v);
    bump(g.multiply(k.first, g.generator(k.second)), -v);
  }
  out.circulation = out.net.empty();
  return out;
}

bool words_equal_mod_NN(const Word& u, const Word& v, const MarkedGroup& g) {
  return flow_of_word(u, g) == flow_of_word(v, g);
}

Word stretch_word(const Word& w, int m) {
  if (m < 1) throw std::invalid_argument("stretch factor must be >= 1");
  std::vector<Letter> tokens;
  tokens.reserve(w.size() * static_cast<std::size_t>(m));
  for (const Letter& l : w.letters()) tokens.insert(tokens.end(), static_cast<std::size_t>(m), l);
  return Word::reduce(w.rank(), tokens);
}

StretchedFlow stretch_flow(const MarkedGroup& g, const Flow& f, int m) {
  if (m < 1) throw std::invalid_argument("stretch factor must be >= 1");
  StretchedFlow out;
  out.verified = stretch_is_verified(g);
  for (const auto& [k, v] : f) {
    auto dx = g.stretch(k.first, m);
    if (!dx) throw std::invalid_argument("group " + g.spec() + " has no delta_m implementation");
    Element pos = *dx;
    for (int j = 0; j < m; ++j) {
      auto [it, fresh] = out.flow.try_emplace(EdgeKey{pos, k.second}, 0);
      it->second = checked_add(it->second, v);
      if (it->second == 0) out.flow.erase(it);
      pos = g.multiply(pos, g.generator(k.second));
    }
  }
  return out;
}

// ------------------------------------------------------------------ vartheta

namespace {

void check_form(const AlternatingForm& x) {
  if (x.gammas.size() != x.exponents.size() + 1) {
    throw std::invalid_argument("alternating form needs p+1 gamma words for p exponents (got " +
                                std::to_string(x.gammas.size()) + " and " + std::to_string(x.exponents.size()) + ")");
  }
}

}  // namespace

AlternatingForm alternating_product(const AlternatingForm& x, const AlternatingForm& y) {
  check_form(x);
  check_form(y);
  AlternatingForm out{x.gammas, x.exponents, x.rho};
  out.gammas.back() = word_multiply(out.gammas.back(), y.gammas.front());
  out.gammas.insert(out.gammas.end(), y.gammas.begin() + 1, y.gammas.end());
  out.exponents.insert(out.exponents.end(), y.exponents.begin(), y.exponents.end());
  return out;
}

Word alternating_word(const AlternatingForm& x) {
  check_form(x);
  Word acc = x.gammas.front();
  for (std::size_t j = 0; j < x.exponents.size(); ++j) {
    acc = word_multiply(acc, word_power(x.rho, x.exponents[j]));
    acc = word_multiply(acc, x.gammas[j + 1]);
  }
  return acc;
}

Element vartheta_project(const AlternatingForm& x, const WreathGroup& target) {
  check_form(x);
  const auto* lamp = dynamic_cast<const AbelianGroup*>(target.lamp().get());
  if (!lamp || !lamp->free() || lamp->dim() != 1) throw std::invalid_argument("vartheta target must be wr(zr:1, base)");
  const MarkedGroup& base = *target.base();
  std::vector<std::pair<Element, Element>> lamps;
  Element sigma = base.identity();
  for (std::size_t j = 0; j < x.exponents.size(); ++j) {
    sigma = base.multiply(sigma, base.evaluate(x.gammas[j]));
    lamps.emplace_back(sigma, make_vector({x.exponents[j]}));
  }
  sigma = base.multiply(sigma, base.evaluate(x.gammas.back()));
  return target.from_parts(std::move(lamps), sigma);
}

}  // namespace magnus
