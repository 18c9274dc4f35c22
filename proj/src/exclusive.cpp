#include "magnus/exclusive.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace magnus {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::True:
      return "true";
    case Verdict::False:
      return "false";
    default:
      return "unknown";
  }
}

bool word_in_Hm(const Word& w, const std::vector<std::int64_t>& m) {
  if (static_cast<int>(m.size()) != w.rank()) throw std::invalid_argument("m has wrong length");
  const auto letters = w.letters();
  for (std::size_t i = 0; i < letters.size();) {
    std::size_t j = i;
    while (j < letters.size() && letters[j].gen == letters[i].gen) ++j;
    std::int64_t run = 0;
    for (std::size_t k = i; k < j; ++k) run += letters[k].sign;
    if (run % m[static_cast<std::size_t>(letters[i].gen)] != 0) return false;
    i = j;
  }
  return true;
}

bool tm_criterion(const MarkedGroup& base, const Word& u, int s_gen, const std::vector<std::int64_t>& m) {
  const int r = base.rank();
  if (static_cast<int>(m.size()) != r) throw std::invalid_argument("m needs one entry per generator");
  for (auto mi : m) {
    if (mi < 2) throw std::invalid_argument("T_m criterion needs m_i >= 2");
  }
  if (s_gen < 0 || s_gen >= r) throw std::out_of_range("split generator out of range");
  auto rel = base.abelianization_relations();
  if (!rel) throw std::invalid_argument("abelianization of " + base.spec() + " is not available");

  // Work in Z/m_1 x ... x Z/m_r; T_m is its quotient by the relation images.
  auto reduce = [&](IntCoords c) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      c[i] %= m[i];
      if (c[i] < 0) c[i] += m[i];
    }
    return c;
  };
  std::vector<IntCoords> gens;
  for (const auto& v : *rel) gens.push_back(reduce(v));
  IntCoords s(static_cast<std::size_t>(r), 0);
  s[static_cast<std::size_t>(s_gen)] = 1;
  gens.push_back(reduce(s));

  IntCoords target(static_cast<std::size_t>(r), 0);
  for (const Letter& l : u.letters()) target[static_cast<std::size_t>(l.gen)] += l.sign;
  target = reduce(target);

  // Closure of the subgroup <relations, s> in the finite group.
  std::set<IntCoords> seen{IntCoords(static_cast<std::size_t>(r), 0)};
  std::vector<IntCoords> queue{IntCoords(static_cast<std::size_t>(r), 0)};
  while (!queue.empty()) {
    IntCoords x = std::move(queue.back());
    queue.pop_back();
    for (const auto& g : gens) {
      IntCoords y = x;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += g[i];
      y = reduce(std::move(y));
      if (seen.insert(y).second) queue.push_back(std::move(y));
    }
  }
  return !seen.contains(target);
}

HmData make_Hm(const MarkedGroup& base, const std::vector<std::int64_t>& m) {
  const int r = base.rank();
  if (static_cast<int>(m.size()) != r) throw std::invalid_argument("m needs one entry per generator");
  HmData out;
  for (int i = 0; i < r; ++i) {
    if (m[static_cast<std::size_t>(i)] < 1) throw std::invalid_argument("H_m needs m_i >= 1");
    out.generators.push_back(Word::generator_power(r, i, m[static_cast<std::size_t>(i)]));
  }
  if (std::all_of(m.begin(), m.end(), [](std::int64_t v) { return v == 1; })) {
    out.membership = "all";
  } else if (dynamic_cast<const AbelianGroup*>(&base)) {
    std::string name = "sublattice:";
    for (int i = 0; i < r; ++i) name += (i ? "," : "") + std::to_string(m[static_cast<std::size_t>(i)]);
    out.membership = name;
  } else if (base.spec().rfind("ll:", 0) == 0 && m[0] == 1 && m[1] == 2) {
    out.membership = "even-t";  // <a, t^2>
  } else if (base.spec().rfind("bs:", 0) == 0 && m[0] == 2 && m[1] == 1) {
    out.membership = "even-t";  // <a^2, b>
  }
  return out;
}

namespace {

// Infer m when every Gamma generator is a single generator power s_i^{k}
// and each s_i appears; returns the exponents.
std::optional<std::vector<std::int64_t>> infer_m(const std::vector<Word>& gamma, int r) {
  std::vector<std::int64_t> m(static_cast<std::size_t>(r), 0);
  for (const Word& w : gamma) {
    if (w.empty()) continue;
    const int g = w[0].gen;
    for (const Letter& l : w.letters()) {
      if (l.gen != g) return std::nullopt;
    }
    auto& slot = m[static_cast<std::size_t>(g)];
    if (slot != 0) return std::nullopt;
    slot = static_cast<std::int64_t>(w.size());
  }
  if (std::any_of(m.begin(), m.end(), [](std::int64_t v) { return v == 0; })) return std::nullopt;
  return m;
}

Word gamma_product_word(const std::vector<Word>& gamma, const std::vector<std::pair<int, int>>& path, int r) {
  Word acc(r);
  for (auto [idx, sign] : path) {
    const Word& g = gamma[static_cast<std::size_t>(idx)];
    acc = word_multiply(acc, sign > 0 ? g : word_inverse(g));
  }
  return acc;
}

}  // namespace

CheckReport check_exclusive(const ExclusiveCandidate& c) {
  if (!c.base) throw std::invalid_argument("candidate has no base group");
  const MarkedGroup& g = *c.base;
  const int r = g.rank();
  if (c.rho.rank() != r) throw std::invalid_argument("rho rank does not match the base group");
  if (c.rho.empty()) throw std::invalid_argument("rho must be nonempty");
  if (c.split >= c.rho.size()) throw std::invalid_argument("split position past the end of rho");
  for (const Word& w : c.gamma) {
    if (w.rank() != r) throw std::invalid_argument("Gamma generator rank does not match the base group");
  }
  const Letter s = c.rho[c.split];
  if (s.sign != 1) throw std::invalid_argument("letter after the split must be a positive generator s_i");

  const Flow f = flow_of_word(c.rho, g);
  if (f.empty()) throw std::invalid_argument("rho has zero flow: it lies in [N,N]");
  if (!net_flow(g, f).circulation) throw std::invalid_argument("rho does not lie in N: its flow is not a circulation");

  CheckReport rep;
  rep.u = c.rho.prefix(c.split);
  rep.s_gen = s.gen;
  rep.u_bar = g.evaluate(rep.u);

  // (1)
  rep.edge_flow = flow_at(f, rep.u_bar, s.gen);
  rep.condition1 = rep.edge_flow != 0;

  // (2): the only x with nonzero flow on (x u, s) are x = z u^-1 for edges
  // (z, s) in the support, so the check is finite.
  std::string member = c.membership;
  std::optional<std::vector<std::int64_t>> m = c.m;
  if (!m) m = infer_m(c.gamma, r);
  if (member.empty()) {
    if (m) {
      auto hm = make_Hm(g, *m);
      if (hm.membership) member = *hm.membership;
    }
    if (member.empty()) {
      throw std::invalid_argument("no membership predicate for the image of Gamma; pass one explicitly");
    }
  }
  rep.membership = member;
  const Membership pred(c.base, member);

  std::unordered_map<Element, Word, ElementHash> vertex_word;
  {
    Element x = g.identity();
    vertex_word.emplace(x, Word(r));
    for (std::size_t k = 0; k < c.rho.size(); ++k) {
      x = g.multiply(x, g.letter_image(c.rho[k]));
      vertex_word.emplace(x, c.rho.prefix(k + 1));
    }
  }
  const Element u_inv = g.inverse(rep.u_bar);
  const Word u_inv_word = word_inverse(rep.u);
  rep.condition2 = true;
  for (const auto& [edge, value] : f) {
    if (edge.second != s.gen) continue;
    const Element x = g.multiply(edge.first, u_inv);
    if (g.is_identity(x)) continue;
    const Word xw = word_multiply(vertex_word.at(edge.first), u_inv_word);
    if (pred.contains(x, xw)) {
      rep.condition2 = false;
      rep.witness_x = x;
      rep.witness_x_word = xw;
      rep.witness_flow = value;
      break;
    }
  }

  // (3)
  bool tm_applies = m && std::all_of(m->begin(), m->end(), [](std::int64_t v) { return v >= 2; }) &&
                    std::all_of(c.gamma.begin(), c.gamma.end(), [&](const Word& w) { return word_in_Hm(w, *m); }) &&
                    g.abelianization_relations().has_value();
  if (tm_applies && tm_criterion(g, rep.u, s.gen, *m)) {
    rep.condition3 = Verdict::True;
    rep.method = "T_m criterion";
    return rep;
  }

  // Bounded search over products of Gamma generators, as Magnus images.
  MagnusGroup mg(c.base);
  std::vector<Element> steps;
  std::vector<std::pair<int, int>> step_label;
  for (std::size_t j = 0; j < c.gamma.size(); ++j) {
    const Element e = mg.evaluate(c.gamma[j]);
    steps.push_back(e);
    step_label.emplace_back(static_cast<int>(j), 1);
    steps.push_back(mg.inverse(e));
    step_label.emplace_back(static_cast<int>(j), -1);
  }
  auto uses_edge = [&](const Element& x) {
    for (const auto& [key, v] : x.wreath().lamps) {
      if (key == rep.u_bar) return v.vec().coords[static_cast<std::size_t>(s.gen)] != 0;
    }
    return false;
  };
  rep.method = "bounded search to radius " + std::to_string(c.radius);
  struct Node {
    Element e;
    std::vector<std::pair<int, int>> path;
  };
  std::unordered_set<Element, ElementHash> seen{mg.identity()};
  std::vector<Node> frontier{{mg.identity(), {}}};
  for (int R = 1; R <= c.radius; ++R) {
    std::vector<Node> next;
    for (const Node& n : frontier) {
      for (std::size_t k = 0; k < steps.size(); ++k) {
        Element y = mg.multiply(n.e, steps[k]);
        if (!seen.insert(y).second) continue;
        auto path = n.path;
        path.push_back(step_label[k]);
        if (uses_edge(y)) {
          rep.condition3 = Verdict::False;
          rep.witness_g = gamma_product_word(c.gamma, path, r);
          rep.searched = seen.size();
          return rep;
        }
        if (seen.size() > c.budget) {
          rep.condition3 = Verdict::Unknown;
          rep.method += " (budget exhausted at radius " + std::to_string(R) + ")";
          rep.searched = seen.size();
          return rep;
        }
        next.push_back({std::move(y), std::move(path)});
      }
    }
    frontier = std::move(next);
  }
  rep.searched = seen.size();
  rep.condition3 = Verdict::True;
  rep.bounded_only = true;
  return rep;
}

std::size_t integer_rank(std::vector<std::vector<mpz_class>> rows) {
  if (rows.empty()) return 0;
  const std::size_t ncol = rows.front().size();
  std::size_t rank = 0;
  mpz_class prev = 1;
  for (std::size_t col = 0; col < ncol && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      for (std::size_t j = col + 1; j < ncol; ++j) {
        rows[i][j] = (rows[rank][col] * rows[i][j] - rows[i][col] * rows[rank][j]) / prev;
      }
      rows[i][col] = 0;
    }
    prev = rows[rank][col];
    ++rank;
  }
  return rank;
}

std::pair<std::size_t, std::size_t> translate_rank(const MarkedGroup& base, const Word& rho, const std::vector<Word>& gamma,
                                                   int radius) {
  const WreathImage a_rho = magnus_embed(rho, base);
  // Ball of the image of Gamma, generated by the images of the Gamma words.
  std::vector<Element> gens;
  for (const Word& w : gamma) {
    gens.push_back(base.evaluate(w));
    gens.push_back(base.inverse(gens.back()));
  }
  std::set<Element> ball{base.identity()};
  std::vector<Element> frontier{base.identity()};
  for (int R = 0; R < radius; ++R) {
    std::vector<Element> next;
    for (const auto& x : frontier) {
      for (const auto& s : gens) {
        Element y = base.multiply(x, s);
        if (ball.insert(y).second) next.push_back(std::move(y));
      }
    }
    frontier = std::move(next);
  }
  // Columns indexed by (key, coordinate).
  std::vector<ModuleVector> translates;
  std::map<std::pair<Element, std::size_t>, std::size_t> column;
  for (const auto& h : ball) {
    ModuleVector t;
    for (const auto& [key, v] : a_rho.a) {
      Element k = base.multiply(h, key);
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] != 0) column.try_emplace({k, i}, column.size());
      }
      t.emplace(std::move(k), v);
    }
    translates.push_back(std::move(t));
  }
  std::vector<std::vector<mpz_class>> rows;
  for (const auto& t : translates) {
    std::vector<mpz_class> row(column.size(), 0);
    for (const auto& [key, v] : t) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] != 0) row[column.at({key, i})] = static_cast<long>(v[i]);
      }
    }
    rows.push_back(std::move(row));
  }
  return {rows.size(), integer_rank(std::move(rows))};
}

}  // namespace magnus
