#pragma once

#include <cstdint>
#include <numbers>
#include <optional>

#include "ipe/qstate.hpp"

namespace ipe::bell {

using qstate::DensityOperator;
using qstate::StateVector;
using Vector3 = Eigen::Vector3d;

struct MeasurementSettings {
  Vector3 a1, a2, b1, b2;
  std::optional<Vector3> a3, b3;
};

// a1=x, a2=y, b1=(x+y)/sqrt2, b2=(-x+y)/sqrt2, plus the unused a3, b3.
MeasurementSettings settings_printed();
// Same but b2=(x-y)/sqrt2, which gives S=-2*sqrt2 on the singlet.
MeasurementSettings settings_corrected();

inline constexpr double kClassicalBound = 2.0;
inline const double kSeparableBound = std::numbers::sqrt2;
inline const double kTsirelsonBound = 2.0 * std::numbers::sqrt2;

struct BellReport {
  double s = 0.0;
  double s_optimal = 0.0;
  MeasurementSettings settings;
  double classical_bound = kClassicalBound;
  double separable_bound = kSeparableBound;
  double tsirelson = kTsirelsonBound;
};

// Canonical two-qubit states.
StateVector phi_plus();  // first element of the entangled basis G2
StateVector singlet();
DensityOperator werner(double e);  // (1-4e/3)|phi+><phi+| + (4e/3) I/4

// Tr[rho (a.sigma)(x)(b.sigma)]
double correlation(const DensityOperator& rho, const Vector3& a, const Vector3& b);

// E(a1,b1) + E(a2,b1) + E(a1,b2) - E(a2,b2)
double chsh(const DensityOperator& rho, const MeasurementSettings& s);

// S at the given settings plus the optimum, bundled with the bounds.
BellReport report(const DensityOperator& rho, const MeasurementSettings& s);

// Maximal |S| over settings via the correlation-matrix criterion
// 2*sqrt(t1+t2), together with settings that attain it.
std::pair<double, MeasurementSettings> chsh_optimal(const DensityOperator& rho);

// Random-restart numerical maximisation of |S|; cross-check for chsh_optimal.
double chsh_search(const DensityOperator& rho, int restarts, std::uint64_t seed);

// Max |S| at the corrected settings over `trials` random product states, with
// local refinement of the best candidates. Result <= sqrt2 + 1e-6.
double separable_bound_search(long trials, std::uint64_t seed = 20230901u);

double threshold_e_LR();   // (3/4)(1 - 1/sqrt2)
double threshold_e_ent();  // 1/2

double werner_s(double e);  // chsh_optimal(werner(e))

}  // namespace ipe::bell
