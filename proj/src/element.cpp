#include "magnus/element.hpp"

#include <functional>

namespace magnus {

namespace {

std::strong_ordering compare_coords(const IntCoords& a, const IntCoords& b) {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::strong_ordering from_int(int c) {
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

inline void mix(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<char>((v >> s) & 0xff));
}

// Order-preserving encoding of a signed integer.
void put_i64(std::string& out, std::int64_t v) {
  put_u64(out, static_cast<std::uint64_t>(v) ^ (std::uint64_t{1} << 63));
}

void put_bytes(std::string& out, const Element& e) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, IntVector>) {
          out.push_back('V');
          put_u64(out, x.coords.size());
          for (auto c : x.coords) put_i64(out, c);
        } else if constexpr (std::is_same_v<T, BsElement>) {
          out.push_back('B');
          put_i64(out, x.t);
          put_i64(out, x.k);
          const std::string digits = x.num.get_str(16);
          put_u64(out, digits.size());
          out += digits;
        } else {
          out.push_back('W');
          put_u64(out, x.lamps.size());
          for (const auto& [key, value] : x.lamps) {
            put_bytes(out, key);
            put_bytes(out, value);
          }
          put_bytes(out, *x.base);
        }
      },
      e.value());
}

void put_display(std::string& out, const Element& e) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, IntVector>) {
          out += '(';
          for (std::size_t i = 0; i < x.coords.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(x.coords[i]);
          }
          out += ')';
        } else if constexpr (std::is_same_v<T, BsElement>) {
          out += "<t=" + std::to_string(x.t) + ",x=" + x.num.get_str();
          if (x.k) out += "/q^" + std::to_string(x.k);
          out += '>';
        } else {
          out += '{';
          bool first = true;
          for (const auto& [key, value] : x.lamps) {
            if (!first) out += ',';
            first = false;
            put_display(out, key);
            out += ':';
            put_display(out, value);
          }
          out += "}@";
          put_display(out, *x.base);
        }
      },
      e.value());
}

}  // namespace

std::strong_ordering operator<=>(const Element& a, const Element& b) {
  if (auto c = a.v_.index() <=> b.v_.index(); c != 0) return c;
  switch (a.v_.index()) {
    case 0:
      return compare_coords(a.vec().coords, b.vec().coords);
    case 1: {
      const auto& x = a.bs();
      const auto& y = b.bs();
      if (auto c = x.t <=> y.t; c != 0) return c;
      if (auto c = x.k <=> y.k; c != 0) return c;
      return from_int(cmp(x.num, y.num));
    }
    default: {
      const auto& x = a.wreath();
      const auto& y = b.wreath();
      if (x.base != y.base) {
        if (auto c = *x.base <=> *y.base; c != 0) return c;
      }
      if (auto c = x.lamps.size() <=> y.lamps.size(); c != 0) return c;
      for (std::size_t i = 0; i < x.lamps.size(); ++i) {
        if (auto c = x.lamps[i].first <=> y.lamps[i].first; c != 0) return c;
        if (auto c = x.lamps[i].second <=> y.lamps[i].second; c != 0) return c;
      }
      return std::strong_ordering::equal;
    }
  }
}

std::size_t Element::hash() const {
  std::size_t seed = v_.index();
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, IntVector>) {
          for (auto c : x.coords) mix(seed, std::hash<std::int64_t>{}(c));
        } else if constexpr (std::is_same_v<T, BsElement>) {
          mix(seed, std::hash<std::int64_t>{}(x.t));
          mix(seed, std::hash<std::int64_t>{}(x.k));
          mix(seed, std::hash<long>{}(mpz_get_si(x.num.get_mpz_t())));
        } else {
          mix(seed, x.base->hash());
          for (const auto& [key, value] : x.lamps) {
            mix(seed, key.hash());
            mix(seed, value.hash());
          }
        }
      },
      v_);
  return seed;
}

Element make_vector(std::initializer_list<std::int64_t> coords) {
  IntVector v;
  v.coords.assign(coords.begin(), coords.end());
  return Element(std::move(v));
}

Element make_vector(const IntCoords& coords) { return Element(IntVector{coords}); }

Element make_wreath_element(std::vector<std::pair<Element, Element>> lamps, Element base) {
  WreathElement w;
  w.lamps = std::move(lamps);
  w.base = std::make_shared<const Element>(std::move(base));
  return Element(std::move(w));
}

std::string canonical_bytes(const Element& e) {
  std::string out;
  put_bytes(out, e);
  return out;
}

std::string to_display(const Element& e) {
  std::string out;
  put_display(out, e);
  return out;
}

}  // namespace magnus
