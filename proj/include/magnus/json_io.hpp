#ifndef MAGNUS_JSON_IO_HPP
#define MAGNUS_JSON_IO_HPP

#include <json.hpp>

#include "magnus/asymptotics.hpp"
#include "magnus/exclusive.hpp"
#include "magnus/fox.hpp"

namespace magnus {

// Bumped whenever a field changes meaning.
inline constexpr int kJsonSchemaVersion = 1;

// Element layout:
//   Z^r, Z/m          [c1, c2, ...]
//   BS(1,q)           {"t": int, "num": "decimal", "k": int}     x = num / q^k
//   wreath / Magnus   {"lamps": [[key, value], ...], "base": element}
// Lamps are listed in canonical key order, so equal elements serialize to
// equal text.
nlohmann::json element_to_json(const Element& e);
Element element_from_json(const nlohmann::json& j);

// {"a": [{"key": element, "vector": [..]}...], "base": element}
nlohmann::json wreath_image_to_json(const WreathImage& x);
// {"edges": [{"vertex": element, "gen": 1-based, "value": int}...]}
nlohmann::json flow_to_json(const Flow& f);
nlohmann::json word_to_json(const Word& w);
nlohmann::json report_to_json(const CheckReport& r);

// Adds "schema_version" and "kind" to an object.
nlohmann::json versioned(std::string kind, nlohmann::json body);

}  // namespace magnus

#endif  // MAGNUS_JSON_IO_HPP
