#include "ipe/bell.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ipe::bell {

namespace {

using Matrix2 = Eigen::Matrix2cd;
using qstate::Complex;
using qstate::Matrix;
constexpr Complex kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

const Matrix2& pauli(int k) {
  static const Matrix2 sx = (Matrix2() << 0, 1, 1, 0).finished();
  static const Matrix2 sy = (Matrix2() << 0, -kI, kI, 0).finished();
  static const Matrix2 sz = (Matrix2() << 1, 0, 0, -1).finished();
  static const Matrix2 p[3] = {sx, sy, sz};
  return p[k];
}

Matrix2 dot_sigma(const Vector3& n) {
  return n.x() * pauli(0) + n.y() * pauli(1) + n.z() * pauli(2);
}

Matrix kron22(const Matrix2& a, const Matrix2& b) {
  Matrix out(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

void require_two_qubit(const DensityOperator& rho, const char* what) {
  if (rho.dims != std::vector<int>{2, 2}) {
    throw std::invalid_argument(std::string(what) + ": requires a two-qubit state");
  }
}

void require_unit(const Vector3& n) {
  if (std::abs(n.norm() - 1.0) > qstate::kStructTol) {
    throw std::invalid_argument("measurement direction is not a unit vector");
  }
}

Eigen::Matrix3d correlation_matrix(const DensityOperator& rho) {
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      t(i, j) = (rho.mat * kron22(pauli(i), pauli(j))).trace().real();
    }
  return t;
}

}  // namespace

MeasurementSettings settings_printed() {
  MeasurementSettings s;
  s.a1 = Vector3(1, 0, 0);
  s.a2 = Vector3(0, 1, 0);
  s.b1 = Vector3(kInvSqrt2, kInvSqrt2, 0);
  s.b2 = Vector3(-kInvSqrt2, kInvSqrt2, 0);
  s.a3 = Vector3(kInvSqrt2, kInvSqrt2, 0);
  s.b3 = Vector3(0, 1, 0);
  return s;
}

MeasurementSettings settings_corrected() {
  MeasurementSettings s = settings_printed();
  s.b2 = Vector3(kInvSqrt2, -kInvSqrt2, 0);
  return s;
}

StateVector phi_plus() {
  // (1/2)(-i, 1, i, 1) in (HR, HT, VR, VT) ordering
  qstate::Vector v(4);
  v << Complex(0, -0.5), Complex(0.5, 0), Complex(0, 0.5), Complex(0.5, 0);
  return StateVector(std::move(v), {2, 2});
}

StateVector singlet() {
  qstate::Vector v(4);
  v << 0.0, kInvSqrt2, -kInvSqrt2, 0.0;
  return StateVector(std::move(v), {2, 2});
}

DensityOperator werner(double e) {
  if (e < 0.0 || e > 0.75) throw std::invalid_argument("werner: e must lie in [0, 3/4]");
  const double w = 1.0 - 4.0 * e / 3.0;
  const DensityOperator p = qstate::to_density(phi_plus());
  return DensityOperator(w * p.mat + (1.0 - w) * Matrix::Identity(4, 4) / 4.0, {2, 2});
}

double correlation(const DensityOperator& rho, const Vector3& a, const Vector3& b) {
  require_two_qubit(rho, "correlation");
  require_unit(a);
  require_unit(b);
  return (rho.mat * kron22(dot_sigma(a), dot_sigma(b))).trace().real();
}

double chsh(const DensityOperator& rho, const MeasurementSettings& s) {
  return correlation(rho, s.a1, s.b1) + correlation(rho, s.a2, s.b1) + correlation(rho, s.a1, s.b2) -
         correlation(rho, s.a2, s.b2);
}

BellReport report(const DensityOperator& rho, const MeasurementSettings& s) {
  BellReport r;
  r.s = chsh(rho, s);
  r.s_optimal = chsh_optimal(rho).first;
  r.settings = s;
  return r;
}

std::pair<double, MeasurementSettings> chsh_optimal(const DensityOperator& rho) {
  require_two_qubit(rho, "chsh_optimal");
  const Eigen::Matrix3d t = correlation_matrix(rho);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double s1 = svd.singularValues()(0);
  const double s2 = svd.singularValues()(1);
  const double smax = 2.0 * std::sqrt(s1 * s1 + s2 * s2);

  // Attaining settings: b1,b2 in the span of the top two right singular
  // vectors, a1,a2 along their images.
  Vector3 c1 = svd.matrixV().col(0);
  Vector3 c2 = svd.matrixV().col(1);
  const double chi = std::atan2(s2, s1);
  MeasurementSettings opt;
  opt.b1 = std::cos(chi) * c1 + std::sin(chi) * c2;
  opt.b2 = std::cos(chi) * c1 - std::sin(chi) * c2;
  opt.a1 = s1 > 1e-300 ? Vector3(svd.matrixU().col(0)) : Vector3(1, 0, 0);
  opt.a2 = s2 > 1e-300 ? Vector3(svd.matrixU().col(1)) : Vector3(0, 1, 0);
  return {smax, opt};
}

double chsh_search(const DensityOperator& rho, int restarts, std::uint64_t seed) {
  require_two_qubit(rho, "chsh_search");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_dir = [&] {
    Vector3 n(gauss(rng), gauss(rng), gauss(rng));
    return Vector3(n / n.norm());
  };
  const Eigen::Matrix3d t = correlation_matrix(rho);
  auto value = [&](const MeasurementSettings& s) {
    return s.a1.dot(t * (s.b1 + s.b2)) + s.a2.dot(t * (s.b1 - s.b2));
  };
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    MeasurementSettings s{random_dir(), random_dir(), random_dir(), random_dir(), {}, {}};
    double cur = std::abs(value(s));
    // alternating closed-form updates: optimal a's given b's and vice versa
    for (int it = 0; it < 60; ++it) {
      Vector3 u = t * (s.b1 + s.b2), v = t * (s.b1 - s.b2);
      if (u.norm() > 1e-14) s.a1 = u / u.norm();
      if (v.norm() > 1e-14) s.a2 = v / v.norm();
      Vector3 p = t.transpose() * s.a1, q = t.transpose() * s.a2;
      Vector3 bp = p + q, bm = p - q;
      if (bp.norm() > 1e-14) s.b1 = bp / bp.norm();
      if (bm.norm() > 1e-14) s.b2 = bm / bm.norm();
      const double next = std::abs(value(s));
      if (next - cur < 1e-13) { cur = next; break; }
      cur = next;
    }
    best = std::max(best, cur);
  }
  return best;
}

double separable_bound_search(long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("separable_bound_search: trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const MeasurementSettings s = settings_corrected();

  // S for product states parameterised by the Bloch angles of the separable-state
  // derivation.
  auto bloch_state = [](double th, double ph) {
    qstate::Vector v(2);
    v << std::cos(th / 2), std::exp(kI * ph) * std::sin(th / 2);
    return v;
  };
  auto chsh_of = [&](double ta, double pa, double tb, double pb) {
    const qstate::Vector a = bloch_state(ta, pa);
    const qstate::Vector b = bloch_state(tb, pb);
    qstate::Vector prod(4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) prod(i * 2 + j) = a(i) * b(j);
    return chsh(qstate::to_density(StateVector(prod, {2, 2})), s);
  };

  double best = 0.0;
  std::array<double, 4> best_p{};
  for (long k = 0; k < trials; ++k) {
    const double ta = std::acos(1.0 - 2.0 * uni(rng));
    const double tb = std::acos(1.0 - 2.0 * uni(rng));
    const double pa = 2.0 * std::numbers::pi * uni(rng);
    const double pb = 2.0 * std::numbers::pi * uni(rng);
    const double v = std::abs(chsh_of(ta, pa, tb, pb));
    if (v > best) {
      best = v;
      best_p = {ta, pa, tb, pb};
    }
  }
  // coordinate-descent refinement from the best sample
  std::array<double, 4> p = best_p;
  double step = 0.1;
  while (step > 1e-9) {
    bool improved = false;
    for (int d = 0; d < 4; ++d) {
      for (double sgn : {+1.0, -1.0}) {
        std::array<double, 4> q = p;
        q[d] += sgn * step;
        const double v = std::abs(chsh_of(q[0], q[1], q[2], q[3]));
        if (v > best) {
          best = v;
          p = q;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

double threshold_e_LR() { return 0.75 * (1.0 - kInvSqrt2); }

double threshold_e_ent() { return 0.5; }

double werner_s(double e) { return chsh_optimal(werner(e)).first; }

}  // namespace ipe::bell
