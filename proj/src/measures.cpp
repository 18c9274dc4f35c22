#include "magnus/measures.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <random>
#include <thread>

#include <boost/math/special_functions/zeta.hpp>

namespace magnus {

// -------------------------------------------------------------- integer laws

IntegerLaw IntegerLaw::from_rational(std::vector<std::pair<std::int64_t, mpq_class>> table) {
  IntegerLaw law;
  std::map<std::int64_t, mpq_class> merged;
  for (auto& [m, p] : table) {
    if (p < 0) throw std::invalid_argument("negative weight in integer law");
    merged[m] += p;
  }
  mpq_class total = 0;
  for (const auto& [m, p] : merged) {
    total += p;
    auto it = merged.find(-m);
    if (it == merged.end() || it->second != p) {
      throw std::invalid_argument("integer law is not symmetric at m=" + std::to_string(m));
    }
  }
  if (total != 1) throw std::invalid_argument("integer law weights sum to " + total.get_str() + ", not 1");
  for (const auto& [m, p] : merged) {
    if (p == 0) continue;
    law.rational.emplace_back(m, p);
    law.weights.emplace_back(m, p.get_d());
  }
  return law;
}

IntegerLaw IntegerLaw::lazy() { return from_rational({{-1, mpq_class(1, 4)}, {0, mpq_class(1, 2)}, {1, mpq_class(1, 4)}}); }

IntegerLaw IntegerLaw::two_point() { return from_rational({{-1, mpq_class(1, 2)}, {1, mpq_class(1, 2)}}); }

double IntegerLaw::weight(std::int64_t m) const {
  auto it = std::lower_bound(weights.begin(), weights.end(), m, [](const auto& kv, std::int64_t v) { return kv.first < v; });
  return it != weights.end() && it->first == m ? it->second : 0.0;
}

std::int64_t IntegerLaw::max_abs() const {
  std::int64_t best = 0;
  for (const auto& [m, w] : weights) best = std::max(best, m < 0 ? -m : m);
  return best;
}

IntegerLaw make_power_law(double alpha, std::int64_t cutoff) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("power-law exponent must lie in (0,2]");
  if (cutoff < 1) throw std::invalid_argument("power-law cutoff must be >= 1");
  IntegerLaw law;
  law.exact = false;
  law.alpha = alpha;
  law.cutoff = cutoff;
  std::vector<double> raw(static_cast<std::size_t>(cutoff) + 1);
  // Sum small terms first.
  double total = 0.0;
  for (std::int64_t m = cutoff; m >= 0; --m) {
    raw[static_cast<std::size_t>(m)] = std::pow(1.0 + static_cast<double>(m), -1.0 - alpha);
    total += (m == 0 ? 1.0 : 2.0) * raw[static_cast<std::size_t>(m)];
  }
  law.normalization = total;
  const double full = 2.0 * boost::math::zeta(1.0 + alpha) - 1.0;
  law.deficit = std::max(0.0, 1.0 - total / full);
  for (std::int64_t m = -cutoff; m <= cutoff; ++m) {
    law.weights.emplace_back(m, raw[static_cast<std::size_t>(m < 0 ? -m : m)] / total);
  }
  return law;
}

// ---------------------------------------------------------------- specs

namespace {

// Merge atoms with equal elements and sort.
void finalize(MeasureSpec& s) {
  std::map<Element, Atom> merged;
  for (auto& a : s.atoms) {
    auto it = merged.find(a.element);
    if (it == merged.end()) {
      merged.emplace(a.element, std::move(a));
      continue;
    }
    Atom& b = it->second;
    b.exact += a.exact;
    b.weight += a.weight;
    if (!b.word && a.word) b.word = std::move(a.word);
    if (a.gen_power && (!b.gen_power || std::llabs(a.gen_power->second) < std::llabs(b.gen_power->second))) {
      b.gen_power = a.gen_power;
    }
  }
  s.atoms.clear();
  for (auto& [e, a] : merged) s.atoms.push_back(std::move(a));
}

}  // namespace

void MeasureSpec::validate() const {
  if (!group) throw std::invalid_argument("measure has no group");
  if (atoms.empty()) throw std::invalid_argument("measure has no atoms");
  std::map<Element, const Atom*> index;
  for (const auto& a : atoms) index.emplace(a.element, &a);
  if (exact) {
    mpq_class total = 0;
    for (const auto& a : atoms) {
      if (a.exact <= 0) throw std::invalid_argument("non-positive atom weight");
      total += a.exact;
      auto it = index.find(group->inverse(a.element));
      if (it == index.end() || it->second->exact != a.exact) throw std::invalid_argument("measure is not symmetric");
    }
    if (total != 1) throw std::invalid_argument("measure weights sum to " + total.get_str());
  } else {
    double total = 0.0;
    for (const auto& a : atoms) {
      if (!(a.weight > 0.0)) throw std::invalid_argument("non-positive atom weight");
      total += a.weight;
      auto it = index.find(group->inverse(a.element));
      if (it == index.end() || std::abs(it->second->weight - a.weight) > 1e-12 * a.weight) {
        throw std::invalid_argument("measure is not symmetric");
      }
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("measure weights do not sum to 1");
  }
}

double MeasureSpec::weight_of(const Element& g) const {
  auto it = std::lower_bound(atoms.begin(), atoms.end(), g, [](const Atom& a, const Element& x) { return a.element < x; });
  return it != atoms.end() && it->element == g ? it->weight : 0.0;
}

MeasureSpec make_lazy_srw(GroupPtr g) {
  const int r = g->rank();
  MeasureSpec s;
  s.group = g;
  s.kind = "lazy";
  s.atoms.push_back({g->identity(), Word(r), std::pair<int, std::int64_t>{0, 0}, mpq_class(1, 2), 0.5});
  const mpq_class w(1, 4 * r);
  for (int i = 0; i < r; ++i) {
    for (int sign : {1, -1}) {
      s.atoms.push_back({sign > 0 ? g->generator(i) : g->generator_inverse(i), Word::generator_power(r, i, sign),
                         std::pair<int, std::int64_t>{i, sign}, w, w.get_d()});
    }
  }
  finalize(s);
  s.validate();
  return s;
}

MeasureSpec make_dirac(GroupPtr g) {
  MeasureSpec s;
  s.group = g;
  s.kind = "dirac";
  s.atoms.push_back({g->identity(), Word(g->rank()), std::pair<int, std::int64_t>{0, 0}, mpq_class(1), 1.0});
  return s;
}

MeasureSpec make_generator_power_measure(GroupPtr g, const std::vector<IntegerLaw>& laws) {
  const int r = g->rank();
  if (static_cast<int>(laws.size()) != r) throw std::invalid_argument("need one integer law per generator");
  MeasureSpec s;
  s.group = g;
  s.kind = "powers";
  s.exact = std::all_of(laws.begin(), laws.end(), [](const IntegerLaw& l) { return l.exact; });
  for (int i = 0; i < r; ++i) {
    const IntegerLaw& law = laws[static_cast<std::size_t>(i)];
    s.alphas.push_back(law.alpha);
    s.cutoff = std::max(s.cutoff, law.cutoff);
    s.deficit = std::max(s.deficit, law.deficit);
    for (std::size_t j = 0; j < law.weights.size(); ++j) {
      const std::int64_t m = law.weights[j].first;
      Atom a;
      a.element = g->power(g->generator(i), m);
      if (std::llabs(m) <= 64) a.word = Word::generator_power(r, i, m);
      a.gen_power = std::pair<int, std::int64_t>{i, m};
      if (s.exact) {
        a.exact = law.rational[j].second / r;
        a.weight = a.exact.get_d();
      } else {
        a.weight = law.weights[j].second / r;
      }
      s.atoms.push_back(std::move(a));
    }
  }
  finalize(s);
  s.validate();
  return s;
}

MeasureSpec make_phi_lower_measure(GroupPtr base, const std::vector<IntegerLaw>& laws) {
  const int r = base->rank();
  for (int i = 0; i < r; ++i) {
    if (base->generator_is_torsion(i)) {
      throw std::invalid_argument("lower-bound measure phi requires every generator of the base to have infinite order; s" +
                                  std::to_string(i + 1) + " of " + base->spec() + " is torsion");
    }
  }
  if (static_cast<int>(laws.size()) != r) throw std::invalid_argument("need one integer law per generator");
  auto target = std::make_shared<MagnusGroup>(base);
  MeasureSpec s;
  s.group = target;
  s.kind = "phi";
  s.exact = std::all_of(laws.begin(), laws.end(), [](const IntegerLaw& l) { return l.exact; });
  const Element e = base->identity();
  for (int i = 0; i < r; ++i) {
    const IntegerLaw& law = laws[static_cast<std::size_t>(i)];
    IntCoords unit(static_cast<std::size_t>(r), 0), neg(static_cast<std::size_t>(r), 0);
    unit[static_cast<std::size_t>(i)] = 1;
    neg[static_cast<std::size_t>(i)] = -1;
    for (std::size_t j = 0; j < law.weights.size(); ++j) {
      const std::int64_t m = law.weights[j].first;
      const Element h = base->power(base->generator(i), m);
      Atom a;
      a.element = target->from_parts({{e, make_vector(unit)}, {h, make_vector(neg)}}, h);
      if (s.exact) {
        a.exact = law.rational[j].second / r;
        a.weight = a.exact.get_d();
      } else {
        a.weight = law.weights[j].second / r;
      }
      s.atoms.push_back(std::move(a));
    }
  }
  finalize(s);
  s.validate();
  return s;
}

MeasureSpec make_word_measure(GroupPtr g, const std::vector<std::pair<Word, mpq_class>>& table, std::string kind) {
  MeasureSpec s;
  s.group = g;
  s.kind = std::move(kind);
  for (const auto& [w, p] : table) s.atoms.push_back({g->evaluate(w), w, std::nullopt, p, p.get_d()});
  finalize(s);
  s.validate();
  return s;
}

namespace {

IntegerLaw parse_law(std::string_view text) {
  if (text == "lazy") return IntegerLaw::lazy();
  if (text == "two") return IntegerLaw::two_point();
  if (text.rfind("power:", 0) == 0) {
    std::string_view rest = text.substr(6);
    std::int64_t cutoff = 10000;
    const auto colon = rest.find(':');
    if (colon != std::string_view::npos) {
      std::string_view c = rest.substr(colon + 1);
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), cutoff);
      if (ec != std::errc() || ptr != c.data() + c.size()) throw ParseError("bad power-law cutoff");
      rest = rest.substr(0, colon);
    }
    char* end = nullptr;
    const std::string a(rest);
    const double alpha = std::strtod(a.c_str(), &end);
    if (end == a.c_str() || *end) throw ParseError("bad power-law exponent \"" + a + "\"");
    return make_power_law(alpha, cutoff);
  }
  throw ParseError("unknown integer law \"" + std::string(text) + "\" (lazy, two, power:ALPHA[:CUTOFF])");
}

std::vector<IntegerLaw> parse_laws(std::string_view text, int r) {
  std::vector<IntegerLaw> laws;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(';', pos);
    if (end == std::string_view::npos) end = text.size();
    laws.push_back(parse_law(text.substr(pos, end - pos)));
    pos = end + 1;
  }
  if (laws.size() == 1 && r > 1) laws.resize(static_cast<std::size_t>(r), laws.front());
  if (static_cast<int>(laws.size()) != r) throw ParseError("need 1 or " + std::to_string(r) + " integer laws");
  return laws;
}

}  // namespace

MeasureSpec parse_measure(GroupPtr g, std::string_view text) {
  try {
    if (text == "lazy") return make_lazy_srw(g);
    if (text == "dirac") return make_dirac(g);
    if (text == "srw") {
      std::vector<std::pair<Word, mpq_class>> table;
      for (int i = 0; i < g->rank(); ++i) {
        for (int sign : {1, -1}) table.emplace_back(Word::generator_power(g->rank(), i, sign), mpq_class(1, 2 * g->rank()));
      }
      return make_word_measure(g, table, "srw");
    }
    if (text.rfind("powers:", 0) == 0) return make_generator_power_measure(g, parse_laws(text.substr(7), g->rank()));
    if (text.rfind("phi:", 0) == 0) return make_phi_lower_measure(g, parse_laws(text.substr(4), g->rank()));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("measure \"") + std::string(text) + "\": " + e.what());
  }
  throw ParseError("unknown measure \"" + std::string(text) + "\" (lazy, srw, dirac, powers:LAWS, phi:LAWS)");
}

// ------------------------------------------------------------ distributions

template <class T>
std::vector<std::pair<Element, T>> Distribution<T>::sorted() const {
  std::vector<std::pair<Element, T>> out(mass.begin(), mass.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

template struct Distribution<mpq_class>;
template struct Distribution<double>;

ExactDistribution dirac_exact(GroupPtr g) {
  ExactDistribution d;
  d.mass.emplace(g->identity(), mpq_class(1));
  d.group = std::move(g);
  return d;
}

ExactDistribution to_exact(const MeasureSpec& s) {
  if (!s.exact) throw std::invalid_argument("measure \"" + s.kind + "\" has float weights; exact path unavailable");
  ExactDistribution d;
  d.group = s.group;
  for (const auto& a : s.atoms) d.mass[a.element] += a.exact;
  return d;
}

FloatDistribution to_float(const MeasureSpec& s) {
  FloatDistribution d;
  d.group = s.group;
  for (const auto& a : s.atoms) d.mass[a.element] += a.weight;
  return d;
}

FloatDistribution to_float(const ExactDistribution& x) {
  FloatDistribution d;
  d.group = x.group;
  for (const auto& [e, p] : x.mass) d.mass.emplace(e, p.get_d());
  return d;
}

MeasureSpec spec_from_distribution(const ExactDistribution& d, std::string kind) {
  MeasureSpec s;
  s.group = d.group;
  s.kind = std::move(kind);
  for (auto& [e, p] : d.sorted()) {
    if (p != 0) s.atoms.push_back({e, std::nullopt, std::nullopt, p, p.get_d()});
  }
  return s;
}

ExactDistribution convolve(const ExactDistribution& a, const ExactDistribution& b, std::size_t budget) {
  const MarkedGroup& g = *a.group;
  ExactDistribution out;
  out.group = a.group;
  std::vector<std::pair<Element, mpq_class>> right(b.mass.begin(), b.mass.end());
  out.mass.reserve(a.mass.size() * 2);
  mpq_class prod;
  for (const auto& [x, p] : a.mass) {
    for (const auto& [y, q] : right) {
      mpq_mul(prod.get_mpq_t(), p.get_mpq_t(), q.get_mpq_t());
      auto [it, fresh] = out.mass.try_emplace(g.multiply(x, y));
      it->second += prod;
      if (fresh && out.mass.size() > budget) {
        throw BudgetExceeded("exact convolution support passed " + std::to_string(budget) + " elements");
      }
    }
  }
  return out;
}

FloatDistribution convolve(const FloatDistribution& a, const FloatDistribution& b, std::size_t budget, double floor) {
  const MarkedGroup& g = *a.group;
  FloatDistribution out;
  out.group = a.group;
  out.pruned = a.pruned + b.pruned;
  std::vector<std::pair<Element, double>> right(b.mass.begin(), b.mass.end());
  for (const auto& [x, p] : a.mass) {
    for (const auto& [y, q] : right) {
      auto [it, fresh] = out.mass.try_emplace(g.multiply(x, y), 0.0);
      it->second += p * q;
      if (fresh && out.mass.size() > 2 * budget) {
        throw BudgetExceeded("float convolution support passed " + std::to_string(budget) + " elements");
      }
    }
  }
  if (floor > 0.0) {
    for (auto it = out.mass.begin(); it != out.mass.end();) {
      if (it->second < floor) {
        out.pruned += it->second;
        it = out.mass.erase(it);
      } else {
        ++it;
      }
    }
  }
  if (out.mass.size() > budget) {
    throw BudgetExceeded("float convolution support passed " + std::to_string(budget) + " elements");
  }
  return out;
}

ExactDistribution convolve_power_exact(const ExactDistribution& step, int n, std::size_t budget) {
  if (n < 0) throw std::invalid_argument("convolution power must be >= 0");
  ExactDistribution d = dirac_exact(step.group);
  for (int i = 0; i < n; ++i) d = convolve(d, step, budget);
  return d;
}

ExactDistribution convolve_power_exact(const MeasureSpec& s, int n, std::size_t budget) {
  return convolve_power_exact(to_exact(s), n, budget);
}

FloatDistribution convolve_power_float(const MeasureSpec& s, int n, std::size_t budget, double floor) {
  if (n < 0) throw std::invalid_argument("convolution power must be >= 0");
  const FloatDistribution step = to_float(s);
  FloatDistribution d;
  d.group = s.group;
  d.mass.emplace(s.group->identity(), 1.0);
  for (int i = 0; i < n; ++i) d = convolve(d, step, budget, floor);
  return d;
}

mpq_class return_probability_exact(const ExactDistribution& step, int n, std::size_t budget) {
  if (n < 0) throw std::invalid_argument("convolution power must be >= 0");
  const MarkedGroup& g = *step.group;
  const int b = n / 2;
  const int a = n - b;
  ExactDistribution d = dirac_exact(step.group);
  ExactDistribution low;
  for (int i = 1; i <= a; ++i) {
    d = convolve(d, step, budget);
    if (i == b) low = d;
  }
  if (b == 0) return d.at(g.identity());
  mpq_class total = 0, prod;
  for (const auto& [y, q] : low.mass) {
    auto it = d.mass.find(g.inverse(y));
    if (it == d.mass.end()) continue;
    mpq_mul(prod.get_mpq_t(), it->second.get_mpq_t(), q.get_mpq_t());
    total += prod;
  }
  return total;
}

mpq_class return_probability_exact(const MeasureSpec& s, int n, std::size_t budget) {
  return return_probability_exact(to_exact(s), n, budget);
}

// --------------------------------------------------------------------- SWS

MeasureSpec sws(const MeasureSpec& eta, const MeasureSpec& mu, std::shared_ptr<const WreathGroup> target) {
  if (!target) target = std::make_shared<WreathGroup>(eta.group, mu.group);
  if (target->lamp()->spec() != eta.group->spec() || target->base()->spec() != mu.group->spec()) {
    throw std::invalid_argument("sws: eta must live on the lamp group and mu on the base of " + target->spec());
  }
  MeasureSpec s;
  s.group = target;
  s.kind = "sws";
  s.exact = eta.exact && mu.exact;
  const Element e = mu.group->identity();
  for (const auto& a1 : eta.atoms) {
    for (const auto& g : mu.atoms) {
      for (const auto& a2 : eta.atoms) {
        Atom atom;
        atom.element = target->from_parts({{e, a1.element}, {g.element, a2.element}}, g.element);
        if (s.exact) {
          atom.exact = a1.exact * g.exact * a2.exact;
          atom.weight = atom.exact.get_d();
        } else {
          atom.weight = a1.weight * g.weight * a2.weight;
        }
        s.atoms.push_back(std::move(atom));
      }
    }
  }
  finalize(s);
  return s;
}

MeasureSpec iterated_sws(const MeasureSpec& eta, const MeasureSpec& mu, int k) {
  if (k < 1) throw std::invalid_argument("iterated sws needs k >= 1");
  MeasureSpec q = sws(eta, mu);
  for (int j = 2; j <= k; ++j) q = sws(eta, q);
  q.kind = "sws^" + std::to_string(k);
  return q;
}

// ---------------------------------------------------------- homomorphisms

Element Homomorphism::apply(const Element& x, const Atom* atom) const {
  if (on_element) return on_element(x);
  if (atom && atom->gen_power) {
    return target->power(generator_images.at(static_cast<std::size_t>(atom->gen_power->first)), atom->gen_power->second);
  }
  if (atom && atom->word) {
    Element acc = target->identity();
    for (const Letter& l : atom->word->letters()) {
      const Element& img = generator_images.at(static_cast<std::size_t>(l.gen));
      acc = target->multiply(acc, l.sign > 0 ? img : target->inverse(img));
    }
    return acc;
  }
  throw std::invalid_argument("homomorphism \"" + name + "\" is given on generators but the element carries no word");
}

Homomorphism abelianization_map(GroupPtr g) {
  if (const auto* ab = dynamic_cast<const AbelianGroup*>(g.get()); ab && ab->free()) {
    return {g, g, "abelianization", [](const Element& x) { return x; }, {}};
  }
  if (dynamic_cast<const MagnusGroup*>(g.get())) {
    const int r = g->rank();
    GroupPtr target = make_abelian_group(r);
    return {g, target, "abelianization",
            [r](const Element& x) {
              IntCoords c(static_cast<std::size_t>(r), 0);
              for (const auto& [key, v] : x.wreath().lamps) {
                for (std::size_t i = 0; i < c.size(); ++i) c[i] += v.vec().coords[i];
              }
              return make_vector(c);
            },
            {}};
  }
  throw std::invalid_argument("no built-in abelianization map for " + g->spec());
}

Homomorphism base_projection(GroupPtr g) {
  const auto* w = dynamic_cast<const WreathGroup*>(g.get());
  if (!w) throw std::invalid_argument("base projection needs a wreath product, got " + g->spec());
  return {g, w->base(), "base", [](const Element& x) { return *x.wreath().base; }, {}};
}

Homomorphism mod_map(GroupPtr source, std::vector<std::int64_t> moduli) {
  const auto* ab = dynamic_cast<const AbelianGroup*>(source.get());
  if (!ab || !ab->free() || ab->dim() != static_cast<int>(moduli.size())) {
    throw std::invalid_argument("mod map needs Z^k with k moduli");
  }
  auto target = std::make_shared<AbelianGroup>(ab->dim(), moduli);
  return {source, target, "mod", [target](const Element& x) { return target->reduce(x.vec().coords); }, {}};
}

Homomorphism theta_lift(GroupPtr source_wreath, const Homomorphism& theta) {
  const auto* w = dynamic_cast<const WreathGroup*>(source_wreath.get());
  if (!w) throw std::invalid_argument("theta lift needs a wreath product source");
  if (!theta.element_level()) throw std::invalid_argument("theta lift needs an element-level base map");
  if (w->base()->spec() != theta.source->spec()) throw std::invalid_argument("theta does not start at the wreath base");
  auto target = std::make_shared<WreathGroup>(w->lamp(), theta.target);
  auto f = theta.on_element;
  return {source_wreath, target, "lift(" + theta.name + ")",
          [target, f](const Element& x) {
            const auto& we = x.wreath();
            std::vector<std::pair<Element, Element>> lamps;
            lamps.reserve(we.lamps.size());
            for (const auto& [key, v] : we.lamps) lamps.emplace_back(f(key), v);
            return target->from_parts(std::move(lamps), f(*we.base));
          },
          {}};
}

Homomorphism stretch_map(GroupPtr g, int m) {
  if (!g->stretch(g->identity(), m)) throw std::invalid_argument("group " + g->spec() + " has no delta_m");
  const MarkedGroup* raw = g.get();
  return {g, g, "delta_" + std::to_string(m), [raw, m](const Element& x) { return *raw->stretch(x, m); }, {}};
}

Homomorphism generator_table_map(GroupPtr source, GroupPtr target, std::vector<Element> images) {
  if (static_cast<int>(images.size()) != source->rank()) throw std::invalid_argument("need one image per generator");
  return {std::move(source), std::move(target), "table", {}, std::move(images)};
}

MeasureSpec pushforward(const MeasureSpec& s, const Homomorphism& h) {
  if (s.group->spec() != h.source->spec()) {
    throw std::invalid_argument("pushforward: measure lives on " + s.group->spec() + ", map starts at " + h.source->spec());
  }
  MeasureSpec out;
  out.group = h.target;
  out.kind = h.name + "(" + s.kind + ")";
  out.exact = s.exact;
  out.deficit = s.deficit;
  out.alphas = s.alphas;
  out.cutoff = s.cutoff;
  for (const auto& a : s.atoms) out.atoms.push_back({h.apply(a.element, &a), std::nullopt, std::nullopt, a.exact, a.weight});
  finalize(out);
  return out;
}

template <class T>
Distribution<T> pushforward(const Distribution<T>& d, const Homomorphism& h) {
  if (!h.element_level()) throw std::invalid_argument("distribution pushforward needs an element-level map");
  Distribution<T> out;
  out.group = h.target;
  out.pruned = d.pruned;
  for (const auto& [x, p] : d.mass) out.mass[h.on_element(x)] += p;
  return out;
}

template ExactDistribution pushforward(const ExactDistribution&, const Homomorphism&);
template FloatDistribution pushforward(const FloatDistribution&, const Homomorphism&);

// ------------------------------------------------------------- Monte Carlo

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("MAGNUS_THREADS")) {
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), v);
    if (ec == std::errc() && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

WalkEstimate mc_return_probability(const MeasureSpec& s, int n, std::uint64_t trials, std::uint64_t seed, unsigned threads,
                                   double z) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  if (n < 0) throw std::invalid_argument("walk length must be >= 0");
  if (threads == 0) threads = default_thread_count();
  const MarkedGroup& g = *s.group;
  std::vector<double> w;
  for (const auto& a : s.atoms) w.push_back(a.weight);
  const std::discrete_distribution<std::size_t> pick_proto(w.begin(), w.end());
  const Element e = g.identity();

  const std::uint64_t blocks = (trials + kMcBlockSize - 1) / kMcBlockSize;
  std::vector<std::uint64_t> block_hits(blocks, 0);
  auto run_block = [&](std::uint64_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    std::mt19937_64 rng(seq);
    auto pick = pick_proto;
    const std::uint64_t count = std::min(kMcBlockSize, trials - b * kMcBlockSize);
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < count; ++t) {
      Element x = e;
      for (int j = 0; j < n; ++j) x = g.multiply(x, s.atoms[pick(rng)].element);
      if (x == e) ++hits;
    }
    block_hits[b] = hits;
  };
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));
  if (threads <= 1) {
    for (std::uint64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::uint64_t b = t; b < blocks; b += threads) run_block(b);
      });
    }
    for (auto& th : pool) th.join();
  }
  WalkEstimate est;
  est.n = n;
  est.trials = trials;
  est.seed = seed;
  est.z = z;
  for (auto h : block_hits) est.hits += h;
  est.estimate = static_cast<double>(est.hits) / static_cast<double>(trials);
  std::tie(est.ci_lo, est.ci_hi) = wilson_interval(est.hits, trials, z);
  return est;
}

// ------------------------------------------------------------- weak moment

double weak_moment(const MeasureSpec& s, double alpha) {
  std::map<std::int64_t, double> by_length;
  for (const auto& a : s.atoms) {
    if (!a.gen_power) throw std::invalid_argument("weak moment needs a measure supported on generator powers");
    by_length[std::llabs(a.gen_power->second)] += a.weight;
  }
  // The tail t(s) = mu(rho > s) jumps at each value v = (1+|m|)^alpha, and
  // s * t(s) increases to v * mu(rho >= v) as s -> v from below.
  double best = 0.0, tail = 0.0;
  for (auto it = by_length.rbegin(); it != by_length.rend(); ++it) {
    tail += it->second;
    best = std::max(best, std::pow(1.0 + static_cast<double>(it->first), alpha) * tail);
  }
  return best;
}

}  // namespace magnus
