#include "magnus/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include <Eigen/Sparse>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/lambert_w.hpp>

namespace magnus {

double iterated_log(int i, double n) {
  if (i < 0) throw std::invalid_argument("iterated log index must be >= 0");
  if (n < 0) throw std::invalid_argument("iterated log needs n >= 0");
  double v = n;
  for (int j = 0; j < i; ++j) v = std::log1p(v);
  return v;
}

// ------------------------------------------------------------------ profiles

namespace {

struct FamilyInfo {
  const char* name;
  std::size_t params;
};

constexpr FamilyInfo kFamilies[] = {
    {"polynomial", 1},      {"metabelian", 1},     {"free-solvable", 2}, {"nilpotent-base", 1}, {"log2", 0},
    {"lamplighter-base", 1}, {"zwr-zd-base", 1},   {"alpha-metabelian", 2}, {"scdr", 3},
};

bool is_integer(double x) { return std::floor(x) == x; }

}  // namespace

ProfileSpec make_profile(const std::string& family, const std::vector<double>& p) {
  const FamilyInfo* info = nullptr;
  for (const auto& f : kFamilies) {
    if (family == f.name) info = &f;
  }
  if (!info) throw std::invalid_argument("unknown profile family \"" + family + "\"");
  if (p.size() != info->params) {
    throw std::invalid_argument("family " + family + " takes " + std::to_string(info->params) + " parameter(s)");
  }
  auto need = [&](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument("family " + family + ": " + what);
  };
  if (family == "polynomial" || family == "nilpotent-base") need(p[0] >= 1, "D >= 1");
  if (family == "metabelian") need(p[0] >= 2 && is_integer(p[0]), "integer r >= 2");
  if (family == "free-solvable") need(p[0] >= 3 && is_integer(p[0]) && p[1] >= 2 && is_integer(p[1]), "integers d >= 3, r >= 2");
  if (family == "lamplighter-base" || family == "zwr-zd-base") need(p[0] >= 1, "d >= 1");
  if (family == "alpha-metabelian") need(p[0] >= 2 && is_integer(p[0]) && p[1] > 0 && p[1] < 2, "integer r >= 2, alpha in (0,2)");
  if (family == "scdr") {
    need(p[0] >= 3 && is_integer(p[0]) && p[1] >= 2 && is_integer(p[1]) && p[2] >= 1 && is_integer(p[2]),
         "integers d >= 3, r >= 2, c >= 1");
  }
  return {family, p};
}

ProfilePoint phi_profile(const ProfileSpec& s, double n) {
  if (n < 3) throw std::invalid_argument("profiles are evaluated for n >= 3");
  const auto& p = s.params;
  const double L = std::log(n);
  double x = 0.0;
  if (s.family == "polynomial") {
    x = p[0] / 2.0 * L;
  } else if (s.family == "metabelian") {
    const double r = p[0];
    x = std::pow(n, r / (r + 2)) * std::pow(L, 2 / (r + 2));
  } else if (s.family == "free-solvable") {
    const int d = static_cast<int>(p[0]);
    x = n * std::pow(iterated_log(d - 1, n) / iterated_log(d - 2, n), 2 / p[1]);
  } else if (s.family == "nilpotent-base") {
    const double D = p[0];
    x = std::pow(n, D / (D + 2)) * std::pow(L, 2 / (D + 2));
  } else if (s.family == "log2") {
    x = n / (L * L);
  } else if (s.family == "lamplighter-base") {
    x = n / std::pow(L, 2 / p[0]);
  } else if (s.family == "zwr-zd-base") {
    x = n * std::pow(std::log(L) / L, 2 / p[0]);
  } else if (s.family == "alpha-metabelian") {
    const double r = p[0], a = p[1];
    x = std::pow(n, r / (r + a)) * std::pow(L, a / (r + a));
  } else if (s.family == "scdr") {
    const int d = static_cast<int>(p[0]);
    const double D = static_cast<double>(witt_degree(static_cast<int>(p[1]), static_cast<int>(p[2])));
    x = n * std::pow(iterated_log(d - 1, n) / iterated_log(d - 2, n), 2 / D);
  } else {
    throw std::invalid_argument("unknown profile family \"" + s.family + "\"");
  }
  return {x, std::exp(-x)};
}

int mobius(int n) {
  if (n < 1) throw std::invalid_argument("mobius needs n >= 1");
  int result = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  if (n > 1) result = -result;
  return result;
}

std::int64_t witt_degree(int r, int c) {
  if (r < 1 || c < 1) throw std::invalid_argument("witt degree needs r >= 1 and c >= 1");
  // Sieve mu up to c.
  std::vector<int> mu(static_cast<std::size_t>(c) + 1, 1);
  std::vector<bool> composite(static_cast<std::size_t>(c) + 1, false);
  for (int p = 2; p <= c; ++p) {
    if (composite[static_cast<std::size_t>(p)]) continue;
    for (int j = p; j <= c; j += p) {
      if (j > p) composite[static_cast<std::size_t>(j)] = true;
      mu[static_cast<std::size_t>(j)] = -mu[static_cast<std::size_t>(j)];
    }
    for (long long j = static_cast<long long>(p) * p; j <= c; j += static_cast<long long>(p) * p) mu[static_cast<std::size_t>(j)] = 0;
  }
  auto ipow = [](std::int64_t b, int e) {
    std::int64_t v = 1;
    for (int i = 0; i < e; ++i) {
      if (__builtin_mul_overflow(v, b, &v)) throw std::overflow_error("witt degree overflow");
    }
    return v;
  };
  std::int64_t total = 0;
  for (int m = 1; m <= c; ++m) {
    for (int k = 1; k <= m; ++k) {
      if (m % k == 0) total += mu[static_cast<std::size_t>(k)] * ipow(r, m / k);
    }
  }
  return total;
}

// -------------------------------------------------------------- volumes

VolumeFunction volume_power(double D) {
  if (!(D > 0)) throw std::invalid_argument("power volume needs D > 0");
  return {"power:" + std::to_string(D), [D](double t) { return D * std::log(t); },
          [D](double u) { return std::exp(u / D); }};
}

VolumeFunction volume_exp_power(double a) {
  if (!(a > 0)) throw std::invalid_argument("exp-power volume needs a > 0");
  return {"exp-power:" + std::to_string(a), [a](double t) { return std::pow(t, a); },
          [a](double u) { return std::pow(std::max(u, 0.0), 1.0 / a); }};
}

VolumeFunction volume_wreath(const VolumeFunction& v, double C) {
  if (!(C > 0)) throw std::invalid_argument("wreath volume needs C > 0");
  auto lv = v.log_volume;
  auto inv = v.inverse_log;
  // log W = C V log V = C e^L L with L = log V, so L = W0(log W / C).
  return {"wreath(" + v.tag + ")",
          [lv, C](double t) {
            const double L = lv(t);
            return C * std::exp(L) * L;
          },
          [inv, C](double u) { return inv(boost::math::lambert_w0(std::max(u, 0.0) / C)); }};
}

VolumeFunction parse_volume(std::string_view text) {
  auto number = [&](std::string_view s) {
    const std::string str(s);
    char* end = nullptr;
    const double v = std::strtod(str.c_str(), &end);
    if (end == str.c_str() || *end) throw ParseError("bad number \"" + str + "\" in volume spec");
    return v;
  };
  if (text.rfind("wreath(", 0) == 0 && text.back() == ')') {
    std::string_view inner = text.substr(7, text.size() - 8);
    double C = 1.0;
    if (auto comma = inner.rfind(','); comma != std::string_view::npos) {
      C = number(inner.substr(comma + 1));
      inner = inner.substr(0, comma);
    }
    return volume_wreath(parse_volume(inner), C);
  }
  if (text.rfind("power:", 0) == 0) return volume_power(number(text.substr(6)));
  if (text.rfind("exp-power:", 0) == 0) return volume_exp_power(number(text.substr(10)));
  throw ParseError("unknown volume \"" + std::string(text) + "\" (power:D, exp-power:A, wreath(V[,C]))");
}

namespace {

double volume_integral(const VolumeFunction& v, double u0, double u1) {
  auto f = [&](double u) {
    const double x = v.inverse_log(u);
    return x * x;
  };
  // Unit pieces keep the quadrature honest for steep integrands.
  double total = 0.0;
  for (double a = u0; a < u1;) {
    const double b = std::min(u1, a + 1.0);
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-12);
    a = b;
  }
  return total;
}

}  // namespace

GammaValue gamma_from_volume(const VolumeFunction& v, double t) {
  if (!(t > 0)) throw std::invalid_argument("gamma needs t > 0");
  const double u0 = v.log_volume_at_one();
  // Bracket, then bisect on log gamma. The integral is increasing in the
  // upper limit, so the bracket stays valid.
  double lo = u0, hi = u0 + 1.0;
  double acc_lo = 0.0;  // integral from u0 to lo
  double piece = volume_integral(v, lo, hi);
  while (acc_lo + piece < t) {
    acc_lo += piece;
    lo = hi;
    hi = lo + (hi - u0);
    piece = volume_integral(v, lo, hi);
    if (!std::isfinite(piece) || hi > 1e300) throw std::overflow_error("gamma integral is not finite at t");
  }
  double a = lo, b = hi;
  for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(b)); ++it) {
    const double mid = 0.5 * (a + b);
    if (acc_lo + volume_integral(v, lo, mid) < t) {
      a = mid;
    } else {
      b = mid;
    }
  }
  const double L = 0.5 * (a + b);
  return {t, L, L < 709.0 ? std::exp(L) : std::numeric_limits<double>::infinity()};
}

RegularityReport delta_regular_check(const VolumeFunction& v, double delta, double t_lo, double t_hi, int t_samples,
                                     int s_samples) {
  if (!(t_lo > 0 && t_hi > t_lo)) throw std::invalid_argument("need 0 < t_lo < t_hi");
  // gamma'/gamma = 1 / [V^{-1}(gamma)]^2
  auto rate = [&](double t) {
    const double x = v.inverse_log(gamma_from_volume(v, t).log_gamma);
    return 1.0 / (x * x);
  };
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < t_samples; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (t_samples - 1));
    const double rt = rate(t);
    for (int j = 1; j <= s_samples; ++j) {
      const double s = t * (1.0 + static_cast<double>(j) / (s_samples + 1));
      worst = std::min(worst, rate(s) / rt);
    }
  }
  return {worst >= delta, worst};
}

FolnerCouple folner_zd(int k, int D, int r) {
  if (k < 2) throw std::invalid_argument("Folner couple needs k >= 2");
  if (D < 1 || r < 1) throw std::invalid_argument("Folner couple needs D >= 1 and r >= 1");
  FolnerCouple f{k, D, r, 0, 0, 0, 0, 0};
  const int half = (k + 1) / 2;
  f.omega = std::pow(2.0 * k + 1, D);
  f.omega_prime = std::pow(2.0 * half + 1, D);
  f.distance = k + 1 - half;
  const double v = f.omega;
  // #Theta = v (k v)^{r v}, #Theta' = v' (k v - k)^{r v}
  f.log_theta = std::log(v) + r * v * (std::log(static_cast<double>(k)) + std::log(v));
  f.log_theta_prime = std::log(f.omega_prime) + r * v * std::log(k * v - k);
  return f;
}

// ------------------------------------------------------------------ Dirichlet

std::vector<Element> box_zd(int D, int k) {
  if (D < 1 || k < 0) throw std::invalid_argument("box needs D >= 1 and k >= 0");
  std::vector<Element> out;
  IntCoords c(static_cast<std::size_t>(D), -k);
  for (;;) {
    out.push_back(make_vector(c));
    std::size_t i = 0;
    while (i < c.size() && c[i] == k) c[i++] = -k;
    if (i == c.size()) break;
    ++c[i];
  }
  return out;
}

std::vector<Element> word_ball(const MarkedGroup& g, int radius, std::size_t budget) {
  std::vector<Element> out;
  for (auto& layer : ball(g, radius, budget)) {
    for (auto& e : layer.frontier) out.push_back(std::move(e));
  }
  return out;
}

DirichletResult dirichlet_lambda1(const MeasureSpec& mu, const std::vector<Element>& omega, std::size_t budget) {
  if (omega.empty()) throw std::invalid_argument("Dirichlet region is empty");
  if (omega.size() > budget) throw BudgetExceeded("Dirichlet region has " + std::to_string(omega.size()) + " points");
  const MarkedGroup& g = *mu.group;
  const std::size_t n = omega.size();
  std::unordered_map<Element, std::size_t, ElementHash> index;
  for (std::size_t i = 0; i < n; ++i) {
    if (!index.emplace(omega[i], i).second) throw std::invalid_argument("Dirichlet region has repeated points");
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t i = 0; i < n; ++i) {
    trip.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
    for (const auto& a : mu.atoms) {
      auto it = index.find(g.multiply(omega[i], a.element));
      if (it != index.end()) trip.emplace_back(static_cast<int>(i), static_cast<int>(it->second), -a.weight);
    }
  }
  Eigen::SparseMatrix<double> A(static_cast<int>(n), static_cast<int>(n));
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Dirichlet factorization failed");

  DirichletResult res{0.0, 0.0, n, 0};
  Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<int>(n));
  x.normalize();
  double lambda = x.dot(A * x);
  for (int it = 1; it <= 500; ++it) {
    Eigen::VectorXd y = solver.solve(x);
    y.normalize();
    const double next = y.dot(A * y);
    x = std::move(y);
    res.iterations = it;
    const bool done = std::abs(next - lambda) <= 1e-13 * std::max(1.0, std::abs(next));
    lambda = next;
    if (done) break;
  }
  res.lambda1 = lambda;

  // f = d(., Omega^c) by breadth-first search inward from the boundary.
  std::vector<int> dist(n, -1);
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    for (int j = 0; j < g.rank() && dist[i] < 0; ++j) {
      for (const Element* s : {&g.generator(j), &g.generator_inverse(j)}) {
        if (!index.contains(g.multiply(omega[i], *s))) {
          dist[i] = 1;
          queue.push_back(i);
          break;
        }
      }
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t i = queue[head];
    for (int j = 0; j < g.rank(); ++j) {
      for (const Element* s : {&g.generator(j), &g.generator_inverse(j)}) {
        auto it = index.find(g.multiply(omega[i], *s));
        if (it != index.end() && dist[it->second] < 0) {
          dist[it->second] = dist[i] + 1;
          queue.push_back(it->second);
        }
      }
    }
  }
  Eigen::VectorXd f(static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i) f[static_cast<int>(i)] = dist[i] < 0 ? 0.0 : dist[i];
  const double ff = f.dot(f);
  res.test_function_bound = ff > 0 ? f.dot(A * f) / ff : std::numeric_limits<double>::infinity();
  return res;
}

}  // namespace magnus
