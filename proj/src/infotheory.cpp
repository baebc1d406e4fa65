#include "ipe/infotheory.hpp"

#include <cmath>
#include <stdexcept>

namespace ipe::info {

namespace {

constexpr double kDistTol = 1e-12;
constexpr double kEMax = 3.0 / 8.0;

void check_range(double v, double lo, double hi, const char* what) {
  if (!(v >= lo && v <= hi)) throw std::domain_error(std::string(what) + ": out of range");
}

}  // namespace

double shannon_entropy(std::span<const double> p) {
  double sum = 0.0, h = 0.0;
  for (double q : p) {
    if (q < -kDistTol) throw std::invalid_argument("shannon_entropy: negative probability");
    sum += q;
    if (q > 0.0) h -= q * std::log2(q);
  }
  if (std::abs(sum - 1.0) > kDistTol) throw std::invalid_argument("shannon_entropy: probabilities must sum to 1");
  return h;
}

double i_ab(double e) {
  check_range(e, 0.0, 0.75, "i_ab: e");
  const double p[4] = {1.0 - e, e / 3.0, e / 3.0, e / 3.0};
  return 2.0 - shannon_entropy(p);
}

double i_ae_conventional(double e) {
  check_range(e, 0.0, kEMax, "i_ae_conventional: e");
  return 8.0 * e / 3.0;
}

double i_ae_side(double e, double f_fid, double p1) {
  check_range(e, 0.0, kEMax, "i_ae_side: e");
  check_range(f_fid, 0.5, 1.0, "i_ae_side: F");
  check_range(p1, 0.0, 1.0, "i_ae_side: p1");
  const double d = 1.0 - 2.0 * (1.0 - f_fid) * (1.0 - p1);
  if (d <= 0.0) throw std::domain_error("i_ae_side: denominator 1 - 2(1-F)(1-p1) must be positive");
  return (8.0 * e / 3.0) * (1.0 + 2.0 * (1.0 - f_fid) * (1.0 - p1)) / d;
}

double i_ae_from_bell(double e, double b_violation) {
  check_range(e, 0.0, kEMax, "i_ae_from_bell: e");
  if (b_violation <= 0.0) throw std::domain_error("i_ae_from_bell: B must be positive");
  const double sqrt2 = std::sqrt(2.0);
  if (b_violation > 2.0 * sqrt2 + 1e-9) throw std::domain_error("i_ae_from_bell: B exceeds the quantum bound");
  return (8.0 * e / 3.0) * (4.0 * sqrt2 - b_violation) / b_violation;
}

double key_rate(const RateInputs& in) {
  // I(A:E) = I(B:E) in both scenarios, so the min is either one.
  const double iae = in.scenario == Scenario::conventional ? i_ae_conventional(in.e)
                                                           : i_ae_side(in.e, in.f_fid, in.p1);
  return i_ab(in.e) - iae;
}

RateReport rate_report(const RateInputs& in) {
  RateReport r;
  r.i_ab = i_ab(in.e);
  r.i_ae = in.scenario == Scenario::conventional ? i_ae_conventional(in.e) : i_ae_side(in.e, in.f_fid, in.p1);
  r.key_rate = r.i_ab - r.i_ae;
  r.threshold_e = solve_threshold(in.scenario, in.f_fid, in.p1);
  return r;
}

double solve_threshold(Scenario scenario, double f_fid, double p1) {
  auto k = [&](double e) { return key_rate(RateInputs{e, f_fid, p1, scenario}); };
  double lo = 1e-9, hi = kEMax - 1e-9;
  double klo = k(lo), khi = k(hi);
  if (klo <= 0.0) throw std::domain_error("solve_threshold: key rate not positive at e -> 0+");
  if (khi >= 0.0) throw std::domain_error("solve_threshold: no sign change in bracket");
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (k(mid) > 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace ipe::info
