#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "magnus/asymptotics.hpp"
#include "magnus/json_io.hpp"
#include "magnus/selftest.hpp"

namespace py = pybind11;
using namespace magnus;

namespace {

// JSON crosses the boundary as text; the Python side decodes it.
std::string dump(const nlohmann::json& j) { return j.dump(); }

std::vector<Word> parse_words(const std::vector<std::string>& texts, int rank) {
  std::vector<Word> out;
  for (const auto& t : texts) out.push_back(parse_word(t, rank));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("schema_version") = kJsonSchemaVersion;

  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("normalize_word", [](const std::string& word, int rank) { return to_string(parse_word(word, rank)); },
        py::arg("word"), py::arg("rank"));

  m.def("group_info", [](const std::string& group) {
    auto g = parse_group(group);
    return py::make_tuple(g->spec(), g->rank());
  }, py::arg("group"));

  m.def("embed_json", [](const std::string& group, const std::string& word) {
    auto g = parse_group(group);
    return dump(versioned("embed", wreath_image_to_json(magnus_embed(parse_word(word, g->rank()), *g))));
  }, py::arg("group"), py::arg("word"));

  m.def("flow_json", [](const std::string& group, const std::string& word) {
    auto g = parse_group(group);
    return dump(versioned("flow", flow_to_json(flow_of_word(parse_word(word, g->rank()), *g))));
  }, py::arg("group"), py::arg("word"));

  m.def("words_equal", [](const std::string& group, const std::string& u, const std::string& v) {
    auto g = parse_group(group);
    return words_equal_mod_NN(parse_word(u, g->rank()), parse_word(v, g->rank()), *g);
  }, py::arg("group"), py::arg("u"), py::arg("v"));

  m.def("return_probability_exact", [](const std::string& group, const std::string& measure, int n, std::size_t budget) {
    auto g = parse_group(group);
    mpq_class p;
    {
      py::gil_scoped_release release;
      p = return_probability_exact(parse_measure(g, measure), n, budget);
    }
    return py::make_tuple(p.get_num().get_str(), p.get_den().get_str());
  }, py::arg("group"), py::arg("measure"), py::arg("n"), py::arg("budget") = 5'000'000);

  m.def("return_probability_mc", [](const std::string& group, const std::string& measure, int n, std::uint64_t trials,
                                    std::uint64_t seed, unsigned threads, double z) {
    auto g = parse_group(group);
    const auto mu = parse_measure(g, measure);
    WalkEstimate e;
    {
      py::gil_scoped_release release;
      e = mc_return_probability(mu, n, trials, seed, threads, z);
    }
    py::dict d;
    d["n"] = e.n;
    d["trials"] = e.trials;
    d["hits"] = e.hits;
    d["estimate"] = e.estimate;
    d["ci_lo"] = e.ci_lo;
    d["ci_hi"] = e.ci_hi;
    d["seed"] = e.seed;
    d["z"] = e.z;
    return d;
  }, py::arg("group"), py::arg("measure"), py::arg("n"), py::arg("trials"), py::arg("seed"), py::arg("threads") = 0,
     py::arg("z") = 1.96);

  m.def("check_exclusive_json", [](const std::string& group, const std::vector<std::string>& gamma, const std::string& rho,
                                   std::size_t split, const std::string& membership, int radius) {
    ExclusiveCandidate c;
    c.base = parse_group(group);
    c.gamma = parse_words(gamma, c.base->rank());
    c.rho = parse_word(rho, c.base->rank());
    c.split = split;
    c.membership = membership;
    c.radius = radius;
    auto body = report_to_json(check_exclusive(c));
    body["group"] = c.base->spec();
    body["rho"] = to_string(c.rho);
    return dump(versioned("check-exclusive", std::move(body)));
  }, py::arg("group"), py::arg("gamma"), py::arg("rho"), py::arg("split"), py::arg("membership") = "",
     py::arg("radius") = 4);

  m.def("phi_profile", [](const std::string& family, const std::vector<double>& params, double n) {
    const auto p = phi_profile(make_profile(family, params), n);
    return py::make_tuple(p.exponent, p.value);
  }, py::arg("family"), py::arg("params"), py::arg("n"));

  m.def("gamma", [](const std::string& volume, double t) {
    const auto g = gamma_from_volume(parse_volume(volume), t);
    return py::make_tuple(g.log_gamma, g.gamma);
  }, py::arg("volume"), py::arg("t"));

  m.def("witt_degree", &witt_degree, py::arg("r"), py::arg("c"));

  m.def("dirichlet_box", [](const std::string& group, const std::string& measure, int k, std::size_t budget) {
    auto g = parse_group(group);
    if (g->spec().rfind("zr:", 0) != 0) throw std::invalid_argument("box sets need a free abelian group");
    const auto d = dirichlet_lambda1(parse_measure(g, measure), box_zd(g->rank(), k), budget);
    return py::make_tuple(d.lambda1, d.test_function_bound);
  }, py::arg("group"), py::arg("measure"), py::arg("k"), py::arg("budget") = 1'000'000);

  m.def("selftest", [](std::vector<int> only, std::uint64_t seed) {
    SelftestOptions o;
    o.only = std::move(only);
    o.seed = seed;
    std::vector<CriterionResult> res;
    {
      py::gil_scoped_release release;
      res = run_selftest(o);
    }
    py::list out;
    for (const auto& r : res) {
      py::dict d;
      d["id"] = r.id;
      d["name"] = r.name;
      d["passed"] = r.passed;
      d["seconds"] = r.seconds;
      d["detail"] = r.detail;
      out.append(d);
    }
    return out;
  }, py::arg("only") = std::vector<int>{}, py::arg("seed") = 20240611);
}
