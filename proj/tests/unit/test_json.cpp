#include <doctest.h>

#include "helpers.hpp"
#include "magnus/json_io.hpp"

using namespace magnus;
using testing::w;

TEST_CASE("element JSON round trip") {
  std::mt19937_64 rng(17);
  for (const char* spec : {"zr:3", "tm:2,3", "bs:3", "ll:2", "sdr:2,2", "sdr:3,2", "wr(zr:1, bs:2)"}) {
    CAPTURE(spec);
    auto g = parse_group(spec);
    for (int k = 0; k < 100; ++k) {
      const Element x = g->evaluate(testing::random_word(rng, g->rank(), 12));
      const auto j = element_to_json(x);
      CHECK(element_from_json(j) == x);
      CHECK(element_from_json(nlohmann::json::parse(j.dump())) == x);
    }
  }
  CHECK(element_to_json(make_vector({1, -2})) == nlohmann::json::array({1, -2}));
  const auto b = element_to_json(parse_group("bs:2")->evaluate(w("s1 s2 s1^-1")));
  CHECK(b["num"] == "1");
  CHECK(b["k"] == 1);
  CHECK_THROWS_AS(element_from_json(nlohmann::json("x")), ParseError);
}

TEST_CASE("embed and flow JSON") {
  auto z2 = parse_group("zr:2");
  const auto e = wreath_image_to_json(magnus_embed(w("[s1,s2]"), *z2));
  CHECK(e["a"].size() == 3);
  CHECK(e["base"] == nlohmann::json::array({0, 0}));
  const auto f = flow_to_json(flow_of_word(w("[s1,s2]"), *z2));
  CHECK(f["edges"].size() == 4);
  std::int64_t total = 0;
  for (const auto& edge : f["edges"]) {
    CHECK((edge["gen"] == 1 || edge["gen"] == 2));
    total += edge["value"].get<std::int64_t>();
  }
  CHECK(total == 0);
  const auto v = versioned("flow", f);
  CHECK(v["schema_version"] == kJsonSchemaVersion);
  CHECK(v["kind"] == "flow");
  // equal inputs give identical text
  CHECK(v.dump() == versioned("flow", flow_to_json(flow_of_word(w("[s1,s2]"), *z2))).dump());
}
