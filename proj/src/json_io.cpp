#include "magnus/json_io.hpp"

#include <stdexcept>

namespace magnus {

using nlohmann::json;

json element_to_json(const Element& e) {
  if (e.is_vector()) {
    json a = json::array();
    for (auto c : e.vec().coords) a.push_back(c);
    return a;
  }
  if (e.is_bs()) {
    const auto& b = e.bs();
    return json{{"t", b.t}, {"num", b.num.get_str()}, {"k", b.k}};
  }
  const auto& w = e.wreath();
  json lamps = json::array();
  for (const auto& [key, value] : w.lamps) lamps.push_back(json::array({element_to_json(key), element_to_json(value)}));
  return json{{"lamps", std::move(lamps)}, {"base", element_to_json(*w.base)}};
}

Element element_from_json(const json& j) {
  if (j.is_array()) {
    IntCoords c;
    for (const auto& x : j) {
      if (!x.is_number_integer()) throw ParseError("vector coordinates must be integers");
      c.push_back(x.get<std::int64_t>());
    }
    return make_vector(c);
  }
  if (!j.is_object()) throw ParseError("element must be an array or an object");
  if (j.contains("t")) {
    BsElement b;
    b.t = j.at("t").get<std::int64_t>();
    if (b.num.set_str(j.at("num").get<std::string>(), 10) != 0) throw ParseError("bad BS numerator");
    b.k = j.at("k").get<std::int64_t>();
    return Element(std::move(b));
  }
  if (j.contains("lamps")) {
    std::vector<std::pair<Element, Element>> lamps;
    for (const auto& kv : j.at("lamps")) {
      if (!kv.is_array() || kv.size() != 2) throw ParseError("lamp entries are [key, value] pairs");
      lamps.emplace_back(element_from_json(kv[0]), element_from_json(kv[1]));
    }
    return make_wreath_element(std::move(lamps), element_from_json(j.at("base")));
  }
  throw ParseError("unrecognized element object");
}

json wreath_image_to_json(const WreathImage& x) {
  json a = json::array();
  for (const auto& [key, v] : x.a) {
    json vec = json::array();
    for (auto c : v) vec.push_back(c);
    a.push_back({{"key", element_to_json(key)}, {"vector", std::move(vec)}});
  }
  return json{{"a", std::move(a)}, {"base", element_to_json(x.base)}};
}

json flow_to_json(const Flow& f) {
  json edges = json::array();
  for (const auto& [key, value] : f) {
    edges.push_back({{"vertex", element_to_json(key.first)}, {"gen", key.second + 1}, {"value", value}});
  }
  return json{{"edges", std::move(edges)}};
}

json word_to_json(const Word& w) { return to_string(w); }

json report_to_json(const CheckReport& r) {
  json c2 = {{"holds", r.condition2}, {"membership", r.membership}};
  if (r.witness_x) {
    c2["witness"] = {{"x", element_to_json(*r.witness_x)}, {"flow", r.witness_flow}};
    if (r.witness_x_word) c2["witness"]["word"] = word_to_json(*r.witness_x_word);
  }
  json c3 = {{"verdict", to_string(r.condition3)},
             {"method", r.method},
             {"bounded_only", r.bounded_only},
             {"searched", r.searched}};
  if (r.witness_g) c3["witness"] = word_to_json(*r.witness_g);
  return json{{"split", {{"u", word_to_json(r.u)}, {"s", r.s_gen + 1}, {"u_bar", element_to_json(r.u_bar)}}},
              {"condition1", {{"holds", r.condition1}, {"edge_flow", r.edge_flow}}},
              {"condition2", std::move(c2)},
              {"condition3", std::move(c3)},
              {"exclusive", r.exclusive()},
              {"certified", r.certified()}};
}

json versioned(std::string kind, json body) {
  json out = {{"schema_version", kJsonSchemaVersion}, {"kind", std::move(kind)}};
  for (auto& [k, v] : body.items()) out[k] = v;
  return out;
}

}  // namespace magnus
