#pragma once

#include <span>

namespace ipe::info {

enum class Scenario { conventional, side_channel };

struct RateInputs {
  double e = 0.0;        // channel error rate, [0, 3/4]
  double f_fid = 1.0;    // verification fidelity F, [1/2, 1]
  double p1 = 0.5;       // probability Alice chooses G1
  Scenario scenario = Scenario::conventional;
};

struct RateReport {
  double i_ab = 0.0;
  double i_ae = 0.0;
  double key_rate = 0.0;
  double threshold_e = 0.0;
};

// -sum p_i log2 p_i with 0 log 0 := 0. Throws on entries < 0 or sum != 1.
double shannon_entropy(std::span<const double> p);

// 2 - H(1-e, e/3, e/3, e/3)
double i_ab(double e);

// 8e/3, valid while the intercepted fraction 8e/3 stays <= 1.
double i_ae_conventional(double e);

// (8e/3) (1 + 2(1-F)(1-p1)) / (1 - 2(1-F)(1-p1)); equals (8e/3)(2-F)/F at p1=1/2.
double i_ae_side(double e, double f_fid, double p1);

// Upper bound (8e/3)(4 sqrt2 - B)/B from an observed violation B.
double i_ae_from_bell(double e, double b_violation);

double key_rate(const RateInputs& in);

RateReport rate_report(const RateInputs& in);

// Bisection root of key_rate(e)=0 on (0, 3/8), tolerance 1e-6.
double solve_threshold(Scenario scenario, double f_fid = 1.0, double p1 = 0.5);

}  // namespace ipe::info
