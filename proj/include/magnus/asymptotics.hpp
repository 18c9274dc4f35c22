#ifndef MAGNUS_ASYMPTOTICS_HPP
#define MAGNUS_ASYMPTOTICS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "magnus/measures.hpp"

namespace magnus {

// log_[0](n) = n, log_[i](n) = log(1 + log_[i-1](n)).
double iterated_log(int i, double n);

// Families: polynomial (D), metabelian (r), free-solvable (d, r),
// nilpotent-base (D), log2, lamplighter-base (d), zwr-zd-base (d),
// alpha-metabelian (r, alpha), scdr (d, r, c).
struct ProfileSpec {
  std::string family;
  std::vector<double> params;
};
struct ProfilePoint {
  double exponent;  // profile = exp(-exponent), except polynomial: n^{-D/2}
  double value;
};
ProfileSpec make_profile(const std::string& family, const std::vector<double>& params);
ProfilePoint phi_profile(const ProfileSpec& spec, double n);

int mobius(int n);
std::int64_t witt_degree(int r, int c);

// Volume functions are handled through u = log V so that fast growth stays
// representable. inverse_log(u) = V^{-1}(e^u).
struct VolumeFunction {
  std::string tag;
  std::function<double(double)> log_volume;
  std::function<double(double)> inverse_log;
  double log_volume_at_one() const { return log_volume(1.0); }
};

VolumeFunction volume_power(double D);        // t^D
VolumeFunction volume_exp_power(double a);    // exp(t^a)
// W = exp(C V log V), the volume attached to Z^r wr G over V.
VolumeFunction volume_wreath(const VolumeFunction& v, double C = 1.0);
// power:D | exp-power:A | wreath(power:D[,C]) | wreath(exp-power:A[,C])
VolumeFunction parse_volume(std::string_view text);

struct GammaValue {
  double t;
  double log_gamma;
  double gamma;  // inf when it overflows
};
// Solves int_{V(1)}^{gamma(t)} [V^{-1}(s)]^2 ds/s = t by bisection on
// log gamma with adaptive quadrature.
GammaValue gamma_from_volume(const VolumeFunction& v, double t);

struct RegularityReport {
  bool regular;
  double worst_ratio;  // min over sampled t < s < 2t of (gamma'/gamma)(s) / (gamma'/gamma)(t)
};
RegularityReport delta_regular_check(const VolumeFunction& v, double delta, double t_lo, double t_hi,
                                     int t_samples = 60, int s_samples = 12);

struct FolnerCouple {
  int k, D, r;
  double omega, omega_prime;  // #Omega_k, #Omega'_k
  std::int64_t distance;      // d(Omega'_k, Omega_k^c)
  double log_theta, log_theta_prime;
};
FolnerCouple folner_zd(int k, int D, int r);

struct DirichletResult {
  double lambda1;
  double test_function_bound;
  std::size_t size;
  int iterations;
};
// Smallest eigenvalue of I - P on Omega with Dirichlet boundary, where
// P(x, y) = mu(x^-1 y).
DirichletResult dirichlet_lambda1(const MeasureSpec& mu, const std::vector<Element>& omega,
                                  std::size_t budget = 1'000'000);
std::vector<Element> box_zd(int D, int k);
std::vector<Element> word_ball(const MarkedGroup& g, int radius, std::size_t budget = 1'000'000);

}  // namespace magnus

#endif  // MAGNUS_ASYMPTOTICS_HPP
