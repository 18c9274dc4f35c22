#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "magnus/asymptotics.hpp"
#include "magnus/exclusive.hpp"
#include "magnus/json_io.hpp"
#include "magnus/measures.hpp"
#include "magnus/selftest.hpp"

namespace {

using namespace magnus;
using nlohmann::json;

constexpr int kExitSelftest = 1;
constexpr int kExitParse = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInternal = 4;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto p = s.find(sep, start);
    out.emplace_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("bad number \"" + s + "\"");
  }
  if (used != s.size()) throw ParseError("bad number \"" + s + "\"");
  return v;
}

std::int64_t to_int(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw ParseError("bad integer \"" + s + "\"");
  }
  if (used != s.size()) throw ParseError("bad integer \"" + s + "\"");
  return v;
}

std::vector<std::int64_t> int_list(const std::string& s) {
  std::vector<std::int64_t> out;
  if (s.empty()) return out;
  for (const auto& p : split(s, ',')) out.push_back(to_int(p));
  return out;
}

// "8", "1,2,5" or "1:8" (inclusive)
std::vector<int> n_list(const std::string& s) {
  std::vector<int> out;
  if (auto colon = s.find(':'); colon != std::string::npos) {
    const auto a = to_int(s.substr(0, colon)), b = to_int(s.substr(colon + 1));
    if (a > b) throw ParseError("empty range " + s);
    for (auto n = a; n <= b; ++n) out.push_back(static_cast<int>(n));
  } else {
    for (auto v : int_list(s)) out.push_back(static_cast<int>(v));
  }
  for (int n : out) {
    if (n < 0) throw ParseError("step counts must be >= 0");
  }
  return out;
}

// "a:b:steps", linear or geometric
std::vector<double> grid(const std::string& s, bool log_spaced) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw ParseError("grid must be a:b:steps, got \"" + s + "\"");
  const double a = to_double(parts[0]), b = to_double(parts[1]);
  const auto k = to_int(parts[2]);
  if (k < 1 || b < a) throw ParseError("grid needs steps >= 1 and a <= b");
  if (log_spaced && a <= 0) throw ParseError("log grid needs a > 0");
  std::vector<double> out;
  for (std::int64_t i = 0; i < k; ++i) {
    const double f = k == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(k - 1);
    out.push_back(log_spaced ? a * std::pow(b / a, f) : a + (b - a) * f);
  }
  return out;
}

void print_json(std::ostream& out, const std::string& kind, json body) { out << versioned(kind, std::move(body)).dump(2) << "\n"; }

struct Common {
  bool json = false;
};

// ------------------------------------------------------------ subcommands
// Each returns an exit code and writes to `out`.

struct EmbedOpts : Common {
  std::string group, word;
};
int cmd_embed(const EmbedOpts& o, std::ostream& out) {
  auto g = parse_group(o.group);
  const Word w = parse_word(o.word, g->rank());
  json body = wreath_image_to_json(magnus_embed(w, *g));
  body["group"] = g->spec();
  body["word"] = to_string(w);
  print_json(out, "embed", std::move(body));
  return 0;
}

int cmd_flow(const EmbedOpts& o, std::ostream& out) {
  auto g = parse_group(o.group);
  const Word w = parse_word(o.word, g->rank());
  const Flow f = flow_of_word(w, *g);
  json body = flow_to_json(f);
  body["group"] = g->spec();
  body["word"] = to_string(w);
  body["circulation"] = net_flow(*g, f).circulation;
  print_json(out, "flow", std::move(body));
  return 0;
}

struct WpOpts : Common {
  std::string group, u, v;
};
int cmd_wp(const WpOpts& o, std::ostream& out) {
  auto g = parse_group(o.group);
  const Word u = parse_word(o.u, g->rank()), v = parse_word(o.v, g->rank());
  const bool eq = words_equal_mod_NN(u, v, *g);
  if (o.json) {
    print_json(out, "wp", {{"group", g->spec()}, {"u", to_string(u)}, {"v", to_string(v)}, {"equal", eq}});
  } else {
    out << (eq ? "EQUAL" : "DISTINCT") << "\n";
  }
  return 0;
}

struct ReturnOpts : Common {
  std::string group, measure = "lazy", n;
  bool exact = false, mc = false;
  std::uint64_t trials = 100000, seed = 1;
  unsigned threads = 0;
  std::size_t budget = 5'000'000;
  double floor = 0.0, z = 1.96;
};
int cmd_return_prob(const ReturnOpts& o, std::ostream& out) {
  auto g = parse_group(o.group);
  const MeasureSpec s = parse_measure(g, o.measure);
  const auto ns = n_list(o.n);
  const bool exact = o.exact || !o.mc;
  json rows = json::array();
  if (!o.json) out << "n,exact,estimate,ci_lo,ci_hi,trials,seed\n";
  for (int n : ns) {
    json row = {{"n", n}};
    std::string ex_str, est, lo, hi, tr, sd;
    if (exact) {
      if (s.exact) {
        const mpq_class p = return_probability_exact(s, n, o.budget);
        ex_str = p.get_str();
        est = fmt(p.get_d());
        row["exact"] = ex_str;
      } else {
        const auto d = convolve_power_float(s, n, o.budget, o.floor);
        est = fmt(d.at(g->identity()));
        row["exact"] = nullptr;
        row["pruned_mass"] = d.pruned;
      }
      row["estimate"] = to_double(est);
    }
    if (o.mc) {
      const auto e = mc_return_probability(s, n, o.trials, o.seed, o.threads, o.z);
      est = fmt(e.estimate);
      lo = fmt(e.ci_lo);
      hi = fmt(e.ci_hi);
      tr = std::to_string(e.trials);
      sd = std::to_string(e.seed);
      row["estimate"] = e.estimate;
      row["ci_lo"] = e.ci_lo;
      row["ci_hi"] = e.ci_hi;
      row["trials"] = e.trials;
      row["hits"] = e.hits;
      row["seed"] = e.seed;
      row["z"] = e.z;
    }
    if (o.json) {
      rows.push_back(std::move(row));
    } else {
      out << n << "," << ex_str << "," << est << "," << lo << "," << hi << "," << tr << "," << sd << "\n";
    }
  }
  if (o.json) {
    json body = {{"group", g->spec()}, {"measure", o.measure}, {"rows", std::move(rows)}};
    if (!s.exact) body["truncation_deficit"] = s.deficit;
    print_json(out, "return-prob", std::move(body));
  }
  return 0;
}

struct ExclusiveOpts : Common {
  std::string group, gamma, rho, m, member;
  std::size_t split = 0;
  int radius = 4;
  std::size_t budget = 200000;
};
int cmd_check_exclusive(const ExclusiveOpts& o, std::ostream& out) {
  ExclusiveCandidate c;
  c.base = parse_group(o.group);
  const int r = c.base->rank();
  for (const auto& w : split(o.gamma, ';')) {
    if (!w.empty()) c.gamma.push_back(parse_word(w, r));
  }
  if (c.gamma.empty()) throw ParseError("--gamma needs at least one word");
  c.rho = parse_word(o.rho, r);
  c.split = o.split;
  c.membership = o.member;
  if (!o.m.empty()) c.m = int_list(o.m);
  c.radius = o.radius;
  c.budget = o.budget;
  const auto rep = check_exclusive(c);
  json body = report_to_json(rep);
  body["group"] = c.base->spec();
  body["rho"] = to_string(c.rho);
  print_json(out, "check-exclusive", std::move(body));
  return 0;
}

struct CurvesOpts : Common {
  std::string family, params, n_grid;
  bool log_grid = false;
  std::string gnuplot, data_name = "curve.csv";
};
int cmd_curves(const CurvesOpts& o, std::ostream& out) {
  std::vector<double> p;
  if (!o.params.empty()) {
    for (const auto& x : split(o.params, ',')) p.push_back(to_double(x));
  }
  const auto spec = make_profile(o.family, p);
  const auto ns = grid(o.n_grid, o.log_grid);
  json rows = json::array();
  if (!o.json) out << "n,exponent,value\n";
  for (double n : ns) {
    const auto pt = phi_profile(spec, n);
    if (o.json) {
      rows.push_back({{"n", n}, {"exponent", pt.exponent}, {"value", pt.value}});
    } else {
      out << fmt(n) << "," << fmt(pt.exponent) << "," << fmt(pt.value) << "\n";
    }
  }
  if (o.json) print_json(out, "curves", {{"family", o.family}, {"params", p}, {"rows", std::move(rows)}});
  if (!o.gnuplot.empty()) {
    std::ofstream gp(o.gnuplot);
    if (!gp) throw std::runtime_error("cannot write " + o.gnuplot);
    gp << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << (o.log_grid ? "set logscale x\n" : "") << "set xlabel 'n'\nset ylabel 'exponent'\n"
       << "plot '" << o.data_name << "' using 1:2 with lines title '" << o.family << "'\n";
  }
  return 0;
}

struct GammaOpts : Common {
  std::string volume, t_grid;
  bool log_grid = false;
  double delta = 0.0;
};
int cmd_gamma(const GammaOpts& o, std::ostream& out) {
  const auto v = parse_volume(o.volume);
  const auto ts = grid(o.t_grid, o.log_grid);
  json rows = json::array();
  if (!o.json) out << "t,log_gamma,gamma\n";
  for (double t : ts) {
    const auto g = gamma_from_volume(v, t);
    if (o.json) {
      rows.push_back({{"t", t}, {"log_gamma", g.log_gamma}, {"gamma", std::isfinite(g.gamma) ? json(g.gamma) : json()}});
    } else {
      out << fmt(t) << "," << fmt(g.log_gamma) << "," << fmt(g.gamma) << "\n";
    }
  }
  json body = {{"volume", v.tag}, {"rows", std::move(rows)}};
  if (o.delta > 0) {
    const auto rep = delta_regular_check(v, o.delta, ts.front(), ts.back());
    if (o.json) {
      body["delta_regular"] = {{"delta", o.delta}, {"regular", rep.regular}, {"worst_ratio", rep.worst_ratio}};
    } else {
      out << "# delta=" << fmt(o.delta) << " regular=" << (rep.regular ? "true" : "false")
          << " worst_ratio=" << fmt(rep.worst_ratio) << "\n";
    }
  }
  if (o.json) print_json(out, "gamma", std::move(body));
  return 0;
}

struct BallOpts : Common {
  std::string group;
  int radius = 3;
  std::size_t budget = 1'000'000;
};
int cmd_ball(const BallOpts& o, std::ostream& out) {
  auto g = parse_group(o.group);
  const auto layers = ball(*g, o.radius, o.budget);
  if (o.json) {
    json rows = json::array();
    for (const auto& l : layers) rows.push_back({{"radius", l.radius}, {"sphere", l.frontier.size()}, {"ball", l.ball_size}});
    print_json(out, "ball", {{"group", g->spec()}, {"layers", std::move(rows)}});
  } else {
    out << "radius,sphere,ball\n";
    for (const auto& l : layers) out << l.radius << "," << l.frontier.size() << "," << l.ball_size << "\n";
  }
  return 0;
}

struct DirichletOpts : Common {
  std::string group, measure = "lazy";
  int box = -1, radius = -1;
  std::size_t budget = 1'000'000;
};
int cmd_dirichlet(const DirichletOpts& o, std::ostream& out) {
  auto g = parse_group(o.group);
  const MeasureSpec s = parse_measure(g, o.measure);
  std::vector<Element> omega;
  std::string region;
  if ((o.box >= 0) == (o.radius >= 0)) throw ParseError("give exactly one of --box K or --radius R");
  if (o.box >= 0) {
    const auto* ab = dynamic_cast<const AbelianGroup*>(g.get());
    if (!ab || !ab->free()) throw ParseError("--box needs a free abelian group zr:D");
    omega = box_zd(ab->dim(), o.box);
    region = "box:" + std::to_string(o.box);
  } else {
    omega = word_ball(*g, o.radius, o.budget);
    region = "ball:" + std::to_string(o.radius);
  }
  const auto d = dirichlet_lambda1(s, omega, o.budget);
  if (o.json) {
    print_json(out, "dirichlet",
               {{"group", g->spec()},
                {"measure", o.measure},
                {"region", region},
                {"size", d.size},
                {"lambda1", d.lambda1},
                {"test_function_bound", d.test_function_bound},
                {"iterations", d.iterations}});
  } else {
    out << "size,lambda1,test_function_bound\n" << d.size << "," << fmt(d.lambda1) << "," << fmt(d.test_function_bound) << "\n";
  }
  return 0;
}

struct SelftestOpts : Common {
  std::string only;
  std::uint64_t seed = SelftestOptions{}.seed;
};
int cmd_selftest(const SelftestOpts& o, std::ostream& out) {
  SelftestOptions opts;
  opts.seed = o.seed;
  for (auto v : int_list(o.only)) opts.only.push_back(static_cast<int>(v));
  if (!o.json) {
    opts.on_result = [&](const CriterionResult& r) {
      char line[160];
      std::snprintf(line, sizeof line, "%s %2d  %-36s %7.3f s  ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
      out << line << r.detail << std::endl;
    };
  }
  const auto results = run_selftest(opts);
  const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  if (o.json) {
    json rows = json::array();
    for (const auto& r : results) {
      rows.push_back({{"id", r.id},
                      {"name", r.name},
                      {"passed", r.passed},
                      {"seconds", r.seconds},
                      {"time_limit", r.time_limit},
                      {"detail", r.detail}});
    }
    print_json(out, "selftest", {{"passed", all}, {"criteria", std::move(rows)}});
  }
  return all ? 0 : kExitSelftest;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

// {"jobs": [{"command": "...", "args": [...], "seed": S, "output": "path"}]}
int cmd_manifest(const std::string& path, const std::string& out_dir, std::ostream& err) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read manifest " + path);
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  if (!m.contains("jobs") || !m["jobs"].is_array()) throw ParseError("manifest needs a \"jobs\" array");
  const std::filesystem::path base = out_dir.empty() ? std::filesystem::path(path).parent_path() : std::filesystem::path(out_dir);
  int job = 0;
  for (const auto& j : m["jobs"]) {
    ++job;
    if (!j.contains("command") || !j.contains("output")) throw ParseError("job " + std::to_string(job) + " needs command and output");
    const std::string command = j["command"].get<std::string>();
    if (command == "run") throw ParseError("manifests cannot nest");
    std::vector<std::string> args = {command};
    for (const auto& a : j.value("args", json::array())) args.push_back(a.is_string() ? a.get<std::string>() : a.dump());
    if (j.contains("seed")) {
      args.push_back("--seed");
      args.push_back(std::to_string(j["seed"].get<std::uint64_t>()));
    }
    std::ostringstream buf;
    const int code = run(args, buf, err);
    const auto target = base / j["output"].get<std::string>();
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    std::ofstream f(target, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + target.string());
    f << buf.str();
    if (code != 0) {
      err << "job " << job << " (" << command << ") exited with " << code << "\n";
      return code;
    }
  }
  return 0;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations in F_r/[N,N] through the Magnus embedding and flows"};
  app.name("magnus");
  app.require_subcommand(1);
  app.set_version_flag("--version", "magnus 1.0");

  auto json_flag = [](CLI::App* sc, Common& c) { sc->add_flag("--json", c.json, "versioned JSON output"); };

  EmbedOpts emb, flo;
  auto* sc_embed = app.add_subcommand("embed", "Magnus image (a, base) of a word, as JSON");
  sc_embed->add_option("--group", emb.group, "base group Gamma_1")->required();
  sc_embed->add_option("--word", emb.word, "word over s1..sr")->required();
  json_flag(sc_embed, emb);
  auto* sc_flow = app.add_subcommand("flow", "edge flow of a word in the Cayley graph of the group, as JSON");
  sc_flow->add_option("--group", flo.group)->required();
  sc_flow->add_option("--word", flo.word)->required();
  json_flag(sc_flow, flo);

  WpOpts wp;
  auto* sc_wp = app.add_subcommand("wp", "word problem in F_r/[N,N]: prints EQUAL or DISTINCT");
  sc_wp->add_option("--group", wp.group)->required();
  sc_wp->add_option("--u", wp.u)->required();
  sc_wp->add_option("--v", wp.v, "defaults to the empty word");
  json_flag(sc_wp, wp);

  ReturnOpts rp;
  auto* sc_rp = app.add_subcommand("return-prob", "mu^{*n}(e), exact and/or Monte Carlo; CSV");
  sc_rp->add_option("--group", rp.group)->required();
  sc_rp->add_option("--measure", rp.measure, "lazy | srw | dirac | powers:LAW;.. | phi:LAW;..")->capture_default_str();
  sc_rp->add_option("--n", rp.n, "N, N1,N2,.. or A:B")->required();
  sc_rp->add_flag("--exact", rp.exact, "exact convolution (default when --mc is absent)");
  sc_rp->add_flag("--mc", rp.mc, "Monte Carlo estimate with Wilson interval");
  sc_rp->add_option("--trials", rp.trials)->capture_default_str();
  sc_rp->add_option("--seed", rp.seed)->capture_default_str();
  sc_rp->add_option("--threads", rp.threads, "0 = MAGNUS_THREADS or hardware")->capture_default_str();
  sc_rp->add_option("--z", rp.z, "interval width in standard deviations")->capture_default_str();
  sc_rp->add_option("--budget", rp.budget, "support size limit for convolution")->capture_default_str();
  sc_rp->add_option("--floor", rp.floor, "float mode: prune atoms below this mass")->capture_default_str();
  json_flag(sc_rp, rp);

  ExclusiveOpts ex;
  auto* sc_ex = app.add_subcommand("check-exclusive", "sufficient conditions for an exclusive pair; JSON report");
  sc_ex->add_option("--group", ex.group)->required();
  sc_ex->add_option("--gamma", ex.gamma, "generators of Gamma, \"w1;w2;...\"")->required();
  sc_ex->add_option("--rho", ex.rho)->required();
  sc_ex->add_option("--split-at", ex.split, "rho = u s v with |u| = K")->required();
  sc_ex->add_option("--m", ex.m, "T_m data m1,..,mr");
  sc_ex->add_option("--member", ex.member, "membership predicate for the image of Gamma");
  sc_ex->add_option("--radius", ex.radius)->capture_default_str();
  sc_ex->add_option("--budget", ex.budget)->capture_default_str();
  json_flag(sc_ex, ex);

  CurvesOpts cv;
  auto* sc_cv = app.add_subcommand("curves", "return-probability profile exponents; CSV n,exponent,value");
  sc_cv->add_option("--family", cv.family)->required();
  sc_cv->add_option("--params", cv.params, "comma list");
  sc_cv->add_option("--n-grid", cv.n_grid, "a:b:steps")->required();
  sc_cv->add_flag("--log-grid", cv.log_grid, "geometric grid");
  sc_cv->add_option("--gnuplot", cv.gnuplot, "also write a gnuplot script here");
  sc_cv->add_option("--data-name", cv.data_name, "CSV file name used by the gnuplot script")->capture_default_str();
  json_flag(sc_cv, cv);

  GammaOpts gm;
  auto* sc_gm = app.add_subcommand("gamma", "gamma(t) for a volume function; CSV t,log_gamma,gamma");
  sc_gm->add_option("--volume", gm.volume, "power:D | exp-power:A | wreath(V[,C])")->required();
  sc_gm->add_option("--t-grid", gm.t_grid, "a:b:steps")->required();
  sc_gm->add_flag("--log-grid", gm.log_grid);
  sc_gm->add_option("--delta", gm.delta, "also test delta-regularity over the grid range");
  json_flag(sc_gm, gm);

  BallOpts bl;
  auto* sc_bl = app.add_subcommand("ball", "sphere and ball sizes in the Cayley graph");
  sc_bl->add_option("--group", bl.group)->required();
  sc_bl->add_option("--radius", bl.radius)->capture_default_str();
  sc_bl->add_option("--budget", bl.budget)->capture_default_str();
  json_flag(sc_bl, bl);

  DirichletOpts dr;
  auto* sc_dr = app.add_subcommand("dirichlet", "lowest Dirichlet eigenvalue of I - P on a box or word ball");
  sc_dr->add_option("--group", dr.group)->required();
  sc_dr->add_option("--measure", dr.measure)->capture_default_str();
  sc_dr->add_option("--box", dr.box, "[-K,K]^D in zr:D");
  sc_dr->add_option("--radius", dr.radius, "word ball of radius R");
  sc_dr->add_option("--budget", dr.budget)->capture_default_str();
  json_flag(sc_dr, dr);

  SelftestOpts st;
  auto* sc_st = app.add_subcommand("selftest", "run the acceptance criteria");
  sc_st->add_option("--only", st.only, "comma list of criterion ids");
  sc_st->add_option("--seed", st.seed)->capture_default_str();
  json_flag(sc_st, st);

  std::string manifest, out_dir;
  auto* sc_run = app.add_subcommand("run", "execute a JSON manifest of jobs");
  sc_run->add_option("manifest", manifest)->required();
  sc_run->add_option("--out-dir", out_dir, "base for relative outputs (default: the manifest's directory)");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitParse;
  }

  try {
    if (*sc_embed) return cmd_embed(emb, out);
    if (*sc_flow) return cmd_flow(flo, out);
    if (*sc_wp) return cmd_wp(wp, out);
    if (*sc_rp) return cmd_return_prob(rp, out);
    if (*sc_ex) return cmd_check_exclusive(ex, out);
    if (*sc_cv) return cmd_curves(cv, out);
    if (*sc_gm) return cmd_gamma(gm, out);
    if (*sc_bl) return cmd_ball(bl, out);
    if (*sc_dr) return cmd_dirichlet(dr, out);
    if (*sc_st) return cmd_selftest(st, out);
    if (*sc_run) return cmd_manifest(manifest, out_dir, err);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::logic_error& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitParse;
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitParse;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(std::move(args), std::cout, std::cerr);
}
