#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "ipe/infotheory.hpp"

using namespace ipe::info;

namespace {

// independent second route: sorted Kahan-style summation
double entropy_by_hand(std::vector<double> p) {
  std::sort(p.begin(), p.end());
  double h = 0.0;
  for (double q : p) {
    if (q > 0) h -= q * std::log(q) / std::log(2.0);
  }
  return h;
}

}  // namespace

TEST_CASE("shannon_entropy") {
  CHECK(shannon_entropy(std::array{1.0, 0.0, 0.0, 0.0}) == doctest::Approx(0.0));
  CHECK(shannon_entropy(std::array{0.25, 0.25, 0.25, 0.25}) == doctest::Approx(2.0).epsilon(1e-12));

  const std::array p{0.73, 0.09, 0.09, 0.09};
  CHECK(shannon_entropy(p) == doctest::Approx(entropy_by_hand({p.begin(), p.end()})).epsilon(1e-12));
  CHECK(shannon_entropy(p) == doctest::Approx(1.269404511403).epsilon(1e-10));

  CHECK_THROWS_AS((void)shannon_entropy(std::array{0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS((void)shannon_entropy(std::array{1.2, -0.2}), std::invalid_argument);

  SUBCASE("permutation invariance and concavity on random distributions") {
    std::mt19937_64 g(53);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
      std::vector<double> p(4), q(4);
      double sp = 0, sq = 0;
      for (int i = 0; i < 4; ++i) { p[i] = uni(g); sp += p[i]; q[i] = uni(g); sq += q[i]; }
      for (int i = 0; i < 4; ++i) { p[i] /= sp; q[i] /= sq; }
      std::vector<double> shuffled = p;
      std::shuffle(shuffled.begin(), shuffled.end(), g);
      CHECK(shannon_entropy(p) == doctest::Approx(shannon_entropy(shuffled)).epsilon(1e-12));
      const double lam = uni(g);
      std::vector<double> m(4);
      for (int i = 0; i < 4; ++i) m[i] = lam * p[i] + (1 - lam) * q[i];
      CHECK(shannon_entropy(m) >= lam * shannon_entropy(p) + (1 - lam) * shannon_entropy(q) - 1e-12);
    }
  }
}

TEST_CASE("i_ab") {
  CHECK(i_ab(0.0) == doctest::Approx(2.0));
  CHECK(i_ab(0.75) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(i_ab(0.27) == doctest::Approx(2.0 - 1.269404511403).epsilon(1e-10));
  CHECK_THROWS_AS((void)i_ab(0.8), std::domain_error);
  CHECK_THROWS_AS((void)i_ab(-0.1), std::domain_error);
}

TEST_CASE("i_ae_conventional") {
  CHECK(i_ae_conventional(0.0) == 0.0);
  CHECK(i_ae_conventional(3.0 / 8.0) == doctest::Approx(1.0));
  CHECK(i_ae_conventional(0.15) == doctest::Approx(0.4));
  CHECK_THROWS_AS((void)i_ae_conventional(0.4), std::domain_error);
}

TEST_CASE("i_ae_side") {
  for (double e : {0.0, 0.1, 0.3}) {
    CHECK(i_ae_side(e, 1.0, 0.3) == doctest::Approx(8.0 * e / 3.0).epsilon(1e-12));
    CHECK(i_ae_side(e, 0.7, 1.0) == doctest::Approx(8.0 * e / 3.0).epsilon(1e-12));
  }
  CHECK(i_ae_side(0.1, 0.5, 0.5) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK_THROWS_AS((void)i_ae_side(0.1, 0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS((void)i_ae_side(0.1, 0.4, 0.5), std::domain_error);

  SUBCASE("monotone nonincreasing in F") {
    for (double e : {0.05, 0.12}) {
      double prev = 1e9;
      for (int k = 0; k <= 10; ++k) {
        const double v = i_ae_side(e, 0.5 + 0.05 * k, 0.5);
        CHECK(v <= prev + 1e-12);
        prev = v;
      }
      CHECK(i_ae_side(e, 1.0, 0.5) == doctest::Approx(i_ae_conventional(e)).epsilon(1e-12));
    }
  }
}

TEST_CASE("i_ae_from_bell") {
  const double s2 = std::sqrt(2.0);
  CHECK(i_ae_from_bell(0.12, 2 * s2) == doctest::Approx(8.0 * 0.12 / 3.0).epsilon(1e-12));
  CHECK(i_ae_from_bell(0.1, s2) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(i_ae_from_bell(0.1, s2) == doctest::Approx(i_ae_side(0.1, 0.5, 0.5)).epsilon(1e-12));
  CHECK(i_ae_from_bell(0.1, 2 * s2 * 0.6) == doctest::Approx(i_ae_side(0.1, 0.6, 0.5)).epsilon(1e-12));
  CHECK_THROWS_AS((void)i_ae_from_bell(0.1, 0.0), std::domain_error);

  // the algebraic identity (4*sqrt2 - 2*sqrt2 F)/(2*sqrt2 F) = (2-F)/F
  for (int k = 0; k <= 50; ++k) {
    const double F = 0.5 + 0.01 * k;
    CHECK(i_ae_from_bell(0.07, 2 * s2 * F) == doctest::Approx(i_ae_side(0.07, F, 0.5)).epsilon(1e-12));
  }
}

TEST_CASE("key_rate") {
  CHECK(key_rate({0.0, 1.0, 0.5, Scenario::conventional}) == doctest::Approx(2.0));
  CHECK(key_rate({0.3, 1.0, 0.5, Scenario::conventional}) < 0.0);
  CHECK(key_rate({0.10, 0.5, 0.5, Scenario::side_channel}) > 0.0);
  CHECK(key_rate({0.16, 0.5, 0.5, Scenario::side_channel}) < 0.0);
}

TEST_CASE("solve_threshold") {
  const double e2 = solve_threshold(Scenario::conventional);
  CHECK(e2 >= 0.26);
  CHECK(e2 <= 0.28);
  CHECK(e2 == doctest::Approx(0.2718655).epsilon(2e-6));

  const double eh = solve_threshold(Scenario::side_channel, 0.5, 0.5);
  CHECK(eh >= 0.140);
  CHECK(eh <= 0.150);
  CHECK(eh == doctest::Approx(0.1460706).epsilon(2e-6));

  // the F = 0.6 crossing lands near the 0.17 mark, not at (3/4)(1-1/sqrt2)
  const double e6 = solve_threshold(Scenario::side_channel, 0.6, 0.5);
  CHECK(e6 == doctest::Approx(0.1714944).epsilon(2e-6));
  CHECK(std::abs(e6 - 0.17) < 0.002);
  CHECK(std::abs(e6 - 0.75 * (1 - 1 / std::sqrt(2.0))) > 0.04);

  CHECK(solve_threshold(Scenario::conventional) == e2);  // deterministic

  SUBCASE("key rate decreases strictly up to the threshold") {
    for (auto [scen, F] : {std::pair{Scenario::conventional, 1.0}, {Scenario::side_channel, 0.5},
                           {Scenario::side_channel, 0.72}}) {
      const double t = solve_threshold(scen, F, 0.5);
      double prev = key_rate({1e-9, F, 0.5, scen});
      for (double e = 1e-3; e < t; e += 1e-3) {
        const double k = key_rate({e, F, 0.5, scen});
        CHECK(k < prev);
        prev = k;
      }
    }
  }
}

TEST_CASE("rate_report is self-consistent") {
  const RateInputs in{0.1, 0.5, 0.5, Scenario::side_channel};
  const RateReport r = rate_report(in);
  CHECK(r.key_rate == doctest::Approx(r.i_ab - r.i_ae).epsilon(1e-12));
  CHECK(r.i_ab >= 0.0);
  CHECK(r.i_ab <= 2.0);
  CHECK(r.threshold_e == doctest::Approx(solve_threshold(Scenario::side_channel, 0.5, 0.5)));
}
