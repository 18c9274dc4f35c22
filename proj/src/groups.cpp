#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <unordered_set>

#include "magnus/group.hpp"

namespace magnus {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::vector<std::int64_t> parse_int_list(std::string_view text, const char* what) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw ParseError(std::string("bad integer list for ") + what + ": \"" + std::string(text) + "\"");
    }
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- base class

bool MarkedGroup::any_torsion_generator() const {
  return std::any_of(torsion_.begin(), torsion_.end(), [](bool b) { return b; });
}

void MarkedGroup::set_generators(std::vector<Element> gens, std::vector<bool> torsion) {
  gen_inv_.clear();
  for (const auto& g : gens) gen_inv_.push_back(inverse(g));
  gens_ = std::move(gens);
  torsion_ = std::move(torsion);
}

Element MarkedGroup::evaluate(const Word& w) const {
  if (w.rank() != rank()) {
    throw std::invalid_argument("rank mismatch: word has rank " + std::to_string(w.rank()) + ", group " + spec() +
                                " has rank " + std::to_string(rank()));
  }
  Element acc = identity();
  for (const Letter& l : w.letters()) acc = multiply(acc, letter_image(l));
  return acc;
}

Element MarkedGroup::power(const Element& a, std::int64_t k) const {
  Element base = k < 0 ? inverse(a) : a;
  std::uint64_t n = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  Element acc = identity();
  while (n) {
    if (n & 1) acc = multiply(acc, base);
    n >>= 1;
    if (n) base = multiply(base, base);
  }
  return acc;
}

// ------------------------------------------------------------------ abelian

AbelianGroup::AbelianGroup(int r, std::vector<std::int64_t> moduli) : dim_(r), moduli_(std::move(moduli)) {
  if (r < 1) throw std::invalid_argument("abelian group rank must be >= 1");
  if (!moduli_.empty()) {
    if (static_cast<int>(moduli_.size()) != r) throw std::invalid_argument("need one modulus per generator");
    for (auto m : moduli_) {
      if (m < 2) throw std::invalid_argument("modulus must be >= 2, got " + std::to_string(m));
    }
  }
  std::vector<Element> gens;
  for (int i = 0; i < r; ++i) {
    IntCoords c(static_cast<std::size_t>(r), 0);
    c[static_cast<std::size_t>(i)] = 1;
    gens.push_back(reduce(std::move(c)));
  }
  set_generators(std::move(gens), std::vector<bool>(static_cast<std::size_t>(r), !moduli_.empty()));
}

std::string AbelianGroup::spec() const {
  if (moduli_.empty()) return "zr:" + std::to_string(dim_);
  std::string s = "tm:";
  for (std::size_t i = 0; i < moduli_.size(); ++i) s += (i ? "," : "") + std::to_string(moduli_[i]);
  return s;
}

Element AbelianGroup::reduce(IntCoords c) const {
  if (!moduli_.empty()) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = floor_mod(c[i], moduli_[i]);
  }
  return Element(IntVector{std::move(c)});
}

Element AbelianGroup::identity() const { return Element(IntVector{IntCoords(static_cast<std::size_t>(dim_), 0)}); }

Element AbelianGroup::multiply(const Element& a, const Element& b) const {
  const auto& x = a.vec().coords;
  const auto& y = b.vec().coords;
  IntCoords c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (__builtin_add_overflow(x[i], y[i], &c[i])) throw std::overflow_error("Z^r coordinate overflow");
  }
  return moduli_.empty() ? Element(IntVector{std::move(c)}) : reduce(std::move(c));
}

Element AbelianGroup::inverse(const Element& a) const {
  IntCoords c = a.vec().coords;
  for (auto& v : c) v = -v;
  return moduli_.empty() ? Element(IntVector{std::move(c)}) : reduce(std::move(c));
}

std::optional<std::vector<IntCoords>> AbelianGroup::abelianization_relations() const {
  std::vector<IntCoords> rel;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    IntCoords c(static_cast<std::size_t>(dim_), 0);
    c[i] = moduli_[i];
    rel.push_back(std::move(c));
  }
  return rel;
}

std::optional<Element> AbelianGroup::stretch(const Element& x, int m) const {
  if (!moduli_.empty()) return std::nullopt;
  IntCoords c = x.vec().coords;
  for (auto& v : c) v *= m;
  return Element(IntVector{std::move(c)});
}

std::optional<bool> AbelianGroup::member(const std::string& name, const Element& x) const {
  constexpr std::string_view prefix = "sublattice:";
  if (name.rfind(prefix, 0) != 0) return std::nullopt;
  const auto m = parse_int_list(std::string_view(name).substr(prefix.size()), "sublattice");
  if (static_cast<int>(m.size()) != dim_) throw ParseError("sublattice needs " + std::to_string(dim_) + " entries");
  const auto& c = x.vec().coords;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] < 1) throw ParseError("sublattice entries must be >= 1");
    const std::int64_t step = moduli_.empty() ? m[i] : std::gcd(m[i], moduli_[i]);
    if (c[i] % step != 0) return false;
  }
  return true;
}

// ----------------------------------------------------------------- BS(1,q)

BSGroup::BSGroup(int q) : q_(q), qz_(q) {
  if (q < 2) throw std::invalid_argument("BS(1,q) needs q >= 2, got " + std::to_string(q));
  BsElement a{1, 0, 0};
  BsElement b{0, 1, 0};
  set_generators({Element(a), Element(b)}, {false, false});
}

std::string BSGroup::spec() const { return "bs:" + std::to_string(q_); }

void BSGroup::normalize(BsElement& e) const {
  if (e.num == 0) {
    e.k = 0;
    return;
  }
  while (e.k > 0 && mpz_divisible_ui_p(e.num.get_mpz_t(), static_cast<unsigned long>(q_))) {
    mpz_divexact_ui(e.num.get_mpz_t(), e.num.get_mpz_t(), static_cast<unsigned long>(q_));
    --e.k;
  }
}

Element BSGroup::identity() const { return Element(BsElement{0, 0, 0}); }

Element BSGroup::make(std::int64_t t, const mpq_class& x) const {
  mpq_class v = x;
  v.canonicalize();
  mpz_class den = v.get_den();
  BsElement e{t, v.get_num(), 0};
  while (den != 1) {
    if (!mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(q_))) {
      throw std::invalid_argument("x is not in Z[1/q]");
    }
    den /= q_;
    ++e.k;
  }
  normalize(e);
  return Element(std::move(e));
}

Element BSGroup::multiply(const Element& a, const Element& b) const {
  const BsElement& x = a.bs();
  const BsElement& y = b.bs();
  BsElement out;
  out.t = x.t + y.t;
  // q^-t1 * y.num / q^y.k
  mpz_class n2 = y.num;
  std::int64_t k2 = y.k + x.t;
  if (k2 < 0) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(q_), static_cast<unsigned long>(-k2));
    n2 *= p;
    k2 = 0;
  }
  const std::int64_t k = std::max(x.k, k2);
  mpz_class n1 = x.num;
  if (k > x.k) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(q_), static_cast<unsigned long>(k - x.k));
    n1 *= p;
  }
  if (k > k2) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(q_), static_cast<unsigned long>(k - k2));
    n2 *= p;
  }
  out.num = n1 + n2;
  out.k = k;
  normalize(out);
  return Element(std::move(out));
}

Element BSGroup::inverse(const Element& a) const {
  // (t, x)^-1 = (-t, -q^t x)
  const BsElement& x = a.bs();
  BsElement out{-x.t, -x.num, x.k - x.t};
  if (out.k < 0) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(q_), static_cast<unsigned long>(-out.k));
    out.num *= p;
    out.k = 0;
  }
  normalize(out);
  return Element(std::move(out));
}

std::optional<std::vector<IntCoords>> BSGroup::abelianization_relations() const {
  // a^-1 b a b^-q: b^(q-1) = 1
  return std::vector<IntCoords>{IntCoords{0, q_ - 1}};
}

std::optional<bool> BSGroup::member(const std::string& name, const Element& x) const {
  if (name == "even-t") return x.bs().t % 2 == 0;
  return std::nullopt;
}

// ------------------------------------------------------------------- wreath

WreathGroup::WreathGroup(GroupPtr lamp, GroupPtr base, CustomMarking)
    : lamp_(std::move(lamp)), base_(std::move(base)) {
  if (!lamp_ || !base_) throw std::invalid_argument("wreath product needs two groups");
  if (!lamp_->is_abelian()) throw std::invalid_argument("wreath product lamp group must be abelian, got " + lamp_->spec());
  const auto* ab = dynamic_cast<const AbelianGroup*>(base_.get());
  order_preserving_translation_ = ab && ab->free();
}

WreathGroup::WreathGroup(GroupPtr lamp, GroupPtr base) : WreathGroup(std::move(lamp), std::move(base), CustomMarking{}) {
  std::vector<Element> gens;
  std::vector<bool> torsion;
  const Element e = base_->identity();
  for (int j = 0; j < lamp_->rank(); ++j) {
    gens.push_back(pure_lamp(e, lamp_->generator(j)));
    torsion.push_back(lamp_->generator_is_torsion(j));
  }
  for (int j = 0; j < base_->rank(); ++j) {
    gens.push_back(pure_base(base_->generator(j)));
    torsion.push_back(base_->generator_is_torsion(j));
  }
  set_generators(std::move(gens), std::move(torsion));
}

std::string WreathGroup::spec() const {
  const auto* l = dynamic_cast<const AbelianGroup*>(lamp_.get());
  const auto* b = dynamic_cast<const AbelianGroup*>(base_.get());
  if (l && b && l->dim() == 1 && l->moduli().size() == 1 && b->free() && b->dim() == 1) {
    return "ll:" + std::to_string(l->moduli()[0]);
  }
  return "wr(" + lamp_->spec() + "," + base_->spec() + ")";
}

Element WreathGroup::identity() const { return make_wreath_element({}, base_->identity()); }

Element WreathGroup::pure_lamp(const Element& at, const Element& value) const {
  std::vector<std::pair<Element, Element>> f;
  if (!lamp_->is_identity(value)) f.emplace_back(at, value);
  return make_wreath_element(std::move(f), base_->identity());
}

Element WreathGroup::pure_base(const Element& h) const { return make_wreath_element({}, h); }

Element WreathGroup::from_parts(std::vector<std::pair<Element, Element>> lamps, const Element& base) const {
  std::sort(lamps.begin(), lamps.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<std::pair<Element, Element>> merged;
  for (auto& kv : lamps) {
    if (!merged.empty() && merged.back().first == kv.first) {
      merged.back().second = lamp_->multiply(merged.back().second, kv.second);
    } else {
      merged.push_back(std::move(kv));
    }
  }
  std::erase_if(merged, [&](const auto& kv) { return lamp_->is_identity(kv.second); });
  return make_wreath_element(std::move(merged), base);
}

std::vector<std::pair<Element, Element>> WreathGroup::translate(const std::vector<std::pair<Element, Element>>& f,
                                                                const Element& h) const {
  std::vector<std::pair<Element, Element>> out;
  out.reserve(f.size());
  if (base_->is_identity(h)) return f;
  for (const auto& [key, value] : f) out.emplace_back(base_->multiply(h, key), value);
  if (!order_preserving_translation_) {
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  }
  return out;
}

std::vector<std::pair<Element, Element>> WreathGroup::add(const std::vector<std::pair<Element, Element>>& f,
                                                          const std::vector<std::pair<Element, Element>>& g) const {
  std::vector<std::pair<Element, Element>> out;
  out.reserve(f.size() + g.size());
  std::size_t i = 0, j = 0;
  while (i < f.size() || j < g.size()) {
    if (j == g.size() || (i < f.size() && f[i].first < g[j].first)) {
      out.push_back(f[i++]);
    } else if (i == f.size() || g[j].first < f[i].first) {
      out.push_back(g[j++]);
    } else {
      Element v = lamp_->multiply(f[i].second, g[j].second);
      if (!lamp_->is_identity(v)) out.emplace_back(f[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

Element WreathGroup::multiply(const Element& a, const Element& b) const {
  const auto& x = a.wreath();
  const auto& y = b.wreath();
  if (y.lamps.empty()) return make_wreath_element(x.lamps, base_->multiply(*x.base, *y.base));
  return make_wreath_element(add(x.lamps, translate(y.lamps, *x.base)), base_->multiply(*x.base, *y.base));
}

Element WreathGroup::inverse(const Element& a) const {
  const auto& x = a.wreath();
  Element hinv = base_->inverse(*x.base);
  std::vector<std::pair<Element, Element>> neg;
  neg.reserve(x.lamps.size());
  for (const auto& [key, value] : x.lamps) neg.emplace_back(key, lamp_->inverse(value));
  return make_wreath_element(translate(neg, hinv), hinv);
}

std::optional<std::vector<IntCoords>> WreathGroup::abelianization_relations() const {
  // (A wr B)^ab = A x B^ab for abelian A.
  auto lr = lamp_->abelianization_relations();
  auto br = base_->abelianization_relations();
  if (!lr || !br) return std::nullopt;
  const std::size_t nl = static_cast<std::size_t>(lamp_->rank());
  const std::size_t n = nl + static_cast<std::size_t>(base_->rank());
  std::vector<IntCoords> out;
  for (const auto& rel : *lr) {
    IntCoords c(n, 0);
    std::copy(rel.begin(), rel.end(), c.begin());
    out.push_back(std::move(c));
  }
  for (const auto& rel : *br) {
    IntCoords c(n, 0);
    std::copy(rel.begin(), rel.end(), c.begin() + static_cast<std::ptrdiff_t>(nl));
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<std::string> WreathGroup::membership_names() const {
  const auto* b = dynamic_cast<const AbelianGroup*>(base_.get());
  if (b && b->free() && b->dim() == 1) return {"even-t"};
  return {};
}

std::optional<bool> WreathGroup::member(const std::string& name, const Element& x) const {
  if (name != "even-t") return std::nullopt;
  const auto* b = dynamic_cast<const AbelianGroup*>(base_.get());
  if (!(b && b->free() && b->dim() == 1)) return std::nullopt;
  // <a, t^2>: even position and lamps only at even sites.
  const auto& w = x.wreath();
  if (w.base->vec().coords[0] % 2 != 0) return false;
  return std::all_of(w.lamps.begin(), w.lamps.end(), [](const auto& kv) { return kv.first.vec().coords[0] % 2 == 0; });
}

// ----------------------------------------------------- lamplighter, t-marked

LamplighterTGroup::LamplighterTGroup(int q)
    : WreathGroup(make_abelian_group(1, {q}), make_abelian_group(1), CustomMarking{}), q_(q) {
  const Element t = pure_base(make_vector({1}));
  const Element a = pure_lamp(make_vector({0}), make_vector({1}));
  install_generators({t, WreathGroup::multiply(a, t)}, {false, false});
}

std::string LamplighterTGroup::spec() const { return "llw:" + std::to_string(q_); }

std::optional<std::vector<IntCoords>> LamplighterTGroup::abelianization_relations() const {
  // t -> (0,1), at -> (1,1) in Z_q x Z; kernel spanned by (-q, q).
  return std::vector<IntCoords>{IntCoords{-q_, q_}};
}

// ------------------------------------------------------------------- Magnus

MagnusGroup::MagnusGroup(GroupPtr base)
    : WreathGroup(make_abelian_group(base ? base->rank() : 1), base, CustomMarking{}) {
  const int r = this->base()->rank();
  const Element e = this->base()->identity();
  std::vector<Element> gens;
  for (int i = 0; i < r; ++i) {
    IntCoords c(static_cast<std::size_t>(r), 0);
    c[static_cast<std::size_t>(i)] = 1;
    gens.push_back(make_wreath_element({{e, make_vector(c)}}, this->base()->generator(i)));
  }
  install_generators(std::move(gens), std::vector<bool>(static_cast<std::size_t>(r), false));
  stretch_verified_ = stretch_is_verified(*this->base());
}

std::string MagnusGroup::spec() const {
  // Recognise the free solvable tower.
  int d = 1;
  const MarkedGroup* g = base().get();
  while (const auto* m = dynamic_cast<const MagnusGroup*>(g)) {
    ++d;
    g = m->base().get();
  }
  const auto* ab = dynamic_cast<const AbelianGroup*>(g);
  if (ab && ab->free()) return "sdr:" + std::to_string(d + 1) + "," + std::to_string(ab->dim());
  return "mag(" + base()->spec() + ")";
}

std::optional<std::vector<IntCoords>> MagnusGroup::abelianization_relations() const {
  // Gamma_2(N)^ab = F/N[F,F] = Gamma_1^ab.
  return base()->abelianization_relations();
}

std::optional<Element> MagnusGroup::stretch(const Element& x, int m) const {
  if (m < 1) throw std::invalid_argument("stretch factor must be >= 1");
  const auto& w = x.wreath();
  auto h = base()->stretch(*w.base, m);
  if (!h) return std::nullopt;
  const std::size_t r = static_cast<std::size_t>(rank());
  std::map<Element, IntCoords> acc;
  for (const auto& [key, value] : w.lamps) {
    auto dk = base()->stretch(key, m);
    if (!dk) return std::nullopt;
    const auto& v = value.vec().coords;
    for (std::size_t i = 0; i < r; ++i) {
      if (v[i] == 0) continue;
      Element pos = *dk;
      for (int j = 0; j < m; ++j) {
        auto [it, fresh] = acc.try_emplace(pos, IntCoords(r, 0));
        it->second[i] += v[i];
        pos = base()->multiply(pos, base()->generator(static_cast<int>(i)));
      }
    }
  }
  std::vector<std::pair<Element, Element>> lamps;
  for (auto& [key, c] : acc) {
    if (std::any_of(c.begin(), c.end(), [](std::int64_t v) { return v != 0; })) {
      lamps.emplace_back(key, make_vector(c));
    }
  }
  return make_wreath_element(std::move(lamps), *h);
}

bool stretch_is_verified(const MarkedGroup& g) {
  if (const auto* ab = dynamic_cast<const AbelianGroup*>(&g)) return ab->free();
  if (const auto* m = dynamic_cast<const MagnusGroup*>(&g)) return m->stretch_verified();
  return false;
}

// ------------------------------------------------------------------ factories

GroupPtr make_abelian_group(int r, std::vector<std::int64_t> moduli) {
  return std::make_shared<AbelianGroup>(r, std::move(moduli));
}

GroupPtr make_lamplighter(int q) {
  if (q < 2) throw std::invalid_argument("lamplighter needs q >= 2, got " + std::to_string(q));
  return std::make_shared<WreathGroup>(make_abelian_group(1, {q}), make_abelian_group(1));
}

GroupPtr make_lamplighter_t(int q) {
  if (q < 2) throw std::invalid_argument("lamplighter needs q >= 2, got " + std::to_string(q));
  return std::make_shared<LamplighterTGroup>(q);
}

GroupPtr make_bs(int q) { return std::make_shared<BSGroup>(q); }

GroupPtr make_wreath(GroupPtr lamp, GroupPtr base) { return std::make_shared<WreathGroup>(std::move(lamp), std::move(base)); }

GroupPtr make_magnus(GroupPtr base) { return std::make_shared<MagnusGroup>(std::move(base)); }

GroupPtr make_free_solvable(int d, int r) {
  if (d < 1 || r < 1) throw std::invalid_argument("free solvable group needs d >= 1 and r >= 1");
  GroupPtr g = make_abelian_group(r);
  for (int i = 1; i < d; ++i) g = make_magnus(g);
  return g;
}

// ------------------------------------------------------------- spec parser

namespace {

class GroupSpecParser {
 public:
  explicit GroupSpecParser(std::string_view text) : text_(text) {}

  GroupPtr parse() {
    GroupPtr g = parse_group();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return g;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("group spec error at offset " + std::to_string(pos_) + ": " + msg + " in \"" + std::string(text_) +
                     "\"");
  }

  void skip_ws() {
    while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string ident() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  // Integers separated by commas; a comma followed by a non-digit ends the
  // list so that "wr(tm:2,2, zr:1)" parses.
  std::vector<std::int64_t> int_list() {
    std::vector<std::int64_t> out;
    for (;;) {
      skip_ws();
      const std::size_t start = pos_;
      if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
      if (start == pos_ || ec != std::errc()) fail("expected integer");
      out.push_back(v);
      std::size_t look = pos_;
      while (look < text_.size() && text_[look] == ' ') ++look;
      if (look < text_.size() && text_[look] == ',') {
        std::size_t after = look + 1;
        while (after < text_.size() && text_[after] == ' ') ++after;
        if (after < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[after])) || text_[after] == '-')) {
          pos_ = after;
          continue;
        }
      }
      return out;
    }
  }

  int single(const std::vector<std::int64_t>& v, const char* what) {
    if (v.size() != 1) fail(std::string(what) + " takes one parameter");
    return static_cast<int>(v[0]);
  }

  GroupPtr parse_group() {
    const std::size_t at = pos_;
    const std::string name = ident();
    try {
      if (name == "wr") {
        expect('(');
        GroupPtr lamp = parse_group();
        expect(',');
        GroupPtr base = parse_group();
        expect(')');
        return make_wreath(lamp, base);
      }
      if (name == "mag") {
        expect('(');
        GroupPtr base = parse_group();
        expect(')');
        return make_magnus(base);
      }
      expect(':');
      const auto p = int_list();
      if (name == "zr") return make_abelian_group(single(p, "zr"));
      if (name == "tm") return make_abelian_group(static_cast<int>(p.size()), p);
      if (name == "ll") return make_lamplighter(single(p, "ll"));
      if (name == "llw") return make_lamplighter_t(single(p, "llw"));
      if (name == "bs") return make_bs(single(p, "bs"));
      if (name == "sdr") {
        if (p.size() != 2) fail("sdr takes d,r");
        return make_free_solvable(static_cast<int>(p[0]), static_cast<int>(p[1]));
      }
    } catch (const std::invalid_argument& e) {
      pos_ = at;
      fail(e.what());
    }
    pos_ = at;
    fail("unknown group \"" + name + "\"");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

GroupPtr parse_group(std::string_view text) { return GroupSpecParser(text).parse(); }

// --------------------------------------------------------------------- ball

std::vector<BallLayer> ball(const MarkedGroup& g, int radius, std::size_t budget, std::vector<BallLayer>* partial) {
  std::vector<BallLayer> layers;
  std::unordered_set<Element, ElementHash> seen;
  std::vector<Element> frontier{g.identity()};
  seen.insert(frontier.front());
  layers.push_back({0, 1, frontier});
  for (int R = 1; R <= radius; ++R) {
    std::vector<Element> next;
    for (const auto& x : frontier) {
      for (int i = 0; i < g.rank(); ++i) {
        for (const Element* s : {&g.generator(i), &g.generator_inverse(i)}) {
          Element y = g.multiply(x, *s);
          if (seen.insert(y).second) {
            next.push_back(std::move(y));
            if (seen.size() > budget) {
              if (partial) *partial = layers;
              throw BudgetExceeded("ball enumeration passed " + std::to_string(budget) + " elements at radius " +
                                   std::to_string(R));
            }
          }
        }
      }
    }
    frontier = std::move(next);
    layers.push_back({R, seen.size(), frontier});
  }
  return layers;
}

// --------------------------------------------------------------- membership

CosetTable CosetTable::parse(std::string_view text, int rank) {
  CosetTable t;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('/', pos);
    if (end == std::string_view::npos) end = text.size();
    auto raw = parse_int_list(text.substr(pos, end - pos), "coset table");
    t.perms_.emplace_back(raw.begin(), raw.end());
    pos = end + 1;
  }
  if (static_cast<int>(t.perms_.size()) != rank) {
    throw ParseError("coset table needs one permutation per generator (" + std::to_string(rank) + ")");
  }
  const std::size_t k = t.perms_.front().size();
  for (const auto& p : t.perms_) {
    if (p.size() != k) throw ParseError("coset table permutations differ in length");
    std::vector<int> inv(k, -1);
    for (std::size_t j = 0; j < k; ++j) {
      if (p[j] < 0 || static_cast<std::size_t>(p[j]) >= k || inv[static_cast<std::size_t>(p[j])] != -1) {
        throw ParseError("coset table entry is not a permutation");
      }
      inv[static_cast<std::size_t>(p[j])] = static_cast<int>(j);
    }
    t.inv_.push_back(std::move(inv));
  }
  return t;
}

bool CosetTable::contains(const Word& w) const {
  int c = 0;
  for (const Letter& l : w.letters()) {
    const auto& p = l.sign > 0 ? perms_[static_cast<std::size_t>(l.gen)] : inv_[static_cast<std::size_t>(l.gen)];
    c = p[static_cast<std::size_t>(c)];
  }
  return c == 0;
}

Membership::Membership(GroupPtr group, std::string name) : group_(std::move(group)), name_(std::move(name)) {
  if (name_ == "all" || name_ == "trivial") return;
  constexpr std::string_view coset = "coset:";
  if (name_.rfind(coset, 0) == 0) {
    table_ = CosetTable::parse(std::string_view(name_).substr(coset.size()), group_->rank());
    return;
  }
  if (!group_->member(name_, group_->identity())) {
    throw ParseError("group " + group_->spec() + " has no membership predicate \"" + name_ + "\"");
  }
}

bool Membership::contains(const Element& x, const Word& representative) const {
  if (name_ == "all") return true;
  if (name_ == "trivial") return group_->is_identity(x);
  if (table_) return table_->contains(representative);
  return *group_->member(name_, x);
}

}  // namespace magnus
