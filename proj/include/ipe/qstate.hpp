#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace ipe::qstate {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Tolerances used by structural invariants and by eigenvalue sign tests.
inline constexpr double kStructTol = 1e-12;
inline constexpr double kEigTol = 1e-10;

// Subsystem positions by convention: spin-major, then path, then the two
// environment modes of the side channel.
namespace sub {
inline constexpr int spin = 0;
inline constexpr int path = 1;
inline constexpr int env_r = 2;
inline constexpr int env_t = 3;
}  // namespace sub

/// Pure state on a tensor product of small subsystems. dims lists the
/// subsystem dimensions, e.g. {2,2} for spin (x) path; amplitudes are stored
/// row-major over the subsystems in dims order.
struct StateVector {
  Vector amps;
  std::vector<int> dims;

  StateVector() = default;
  StateVector(Vector a, std::vector<int> d);

  int dim() const { return static_cast<int>(amps.size()); }
  int subsystems() const { return static_cast<int>(dims.size()); }
  double norm() const { return amps.norm(); }
  StateVector normalized() const;
  bool is_normalized(double tol = kStructTol) const;
};

/// Mixed state: Hermitian, PSD, unit-trace matrix on the same indexing scheme.
struct DensityOperator {
  Matrix mat;
  std::vector<int> dims;

  DensityOperator() = default;
  DensityOperator(Matrix m, std::vector<int> d);

  int dim() const { return static_cast<int>(mat.rows()); }
  double trace() const { return mat.trace().real(); }
  bool is_hermitian(double tol = kStructTol) const;
  // Hermitian + trace 1 + eigenvalues >= -kEigTol.
  bool is_valid_state(double tol = kStructTol) const;
};

// Computational basis state |index> of a d-dimensional subsystem.
StateVector basis_state(int index, int d);

StateVector tensor(const StateVector& a, const StateVector& b);

// Conjugate-linear in a, linear in b. Throws on dimension mismatch.
Complex inner(const StateVector& a, const StateVector& b);

DensityOperator to_density(const StateVector& v);

// Trace out every subsystem not listed in keep. keep must hold valid,
// strictly increasing positions; the result's dims follow keep's order.
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep);
DensityOperator partial_trace(const StateVector& v, const std::vector<int>& keep);

// Transpose on one subsystem of a two-qubit operator. Throws unless
// dims == {2,2}.
Matrix partial_transpose(const DensityOperator& rho, int subsystem);

// Peres-Horodecki test: true iff the partial transpose has an eigenvalue
// below -kEigTol.
bool is_entangled_ppt(const DensityOperator& rho);

double purity(const DensityOperator& rho);

// |<target|v>|^2
double fidelity_to(const StateVector& v, const StateVector& target);

// <target|rho|target>
double fidelity_to(const DensityOperator& rho, const StateVector& target);

}  // namespace ipe::qstate
