#include "ipe/qstate.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ipe::qstate {

namespace {

int dims_product(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
}

void check_dims(int size, const std::vector<int>& dims, const char* what) {
  if (dims.empty() || dims_product(dims) != size) {
    throw std::invalid_argument(std::string(what) + ": dims do not match amplitude count");
  }
}

// Strides of a row-major multi-index over dims.
std::vector<int> strides_of(const std::vector<int>& dims) {
  std::vector<int> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * dims[k + 1];
  return s;
}

}  // namespace

StateVector::StateVector(Vector a, std::vector<int> d) : amps(std::move(a)), dims(std::move(d)) {
  check_dims(static_cast<int>(amps.size()), dims, "StateVector");
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n <= 0.0) throw std::domain_error("StateVector::normalized: zero vector");
  return StateVector(amps / n, dims);
}

bool StateVector::is_normalized(double tol) const { return std::abs(amps.squaredNorm() - 1.0) <= tol; }

DensityOperator::DensityOperator(Matrix m, std::vector<int> d) : mat(std::move(m)), dims(std::move(d)) {
  if (mat.rows() != mat.cols()) throw std::invalid_argument("DensityOperator: matrix not square");
  check_dims(static_cast<int>(mat.rows()), dims, "DensityOperator");
}

bool DensityOperator::is_hermitian(double tol) const {
  return (mat - mat.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool DensityOperator::is_valid_state(double tol) const {
  if (!is_hermitian(tol)) return false;
  if (std::abs(mat.trace().real() - 1.0) > tol || std::abs(mat.trace().imag()) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(mat, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -kEigTol;
}

StateVector basis_state(int index, int d) {
  if (d < 1 || index < 0 || index >= d) throw std::invalid_argument("basis_state: bad index");
  Vector v = Vector::Zero(d);
  v(index) = 1.0;
  return StateVector(std::move(v), {d});
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  Vector out(a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) out(i * b.dim() + j) = a.amps(i) * b.amps(j);
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  return StateVector(std::move(out), std::move(dims));
}

Complex inner(const StateVector& a, const StateVector& b) {
  if (a.dims != b.dims) throw std::invalid_argument("inner: dimension mismatch");
  return a.amps.dot(b.amps);  // Eigen's dot conjugates the left argument
}

DensityOperator to_density(const StateVector& v) {
  return DensityOperator(v.amps * v.amps.adjoint(), v.dims);
}

namespace {

DensityOperator partial_trace_impl(const Matrix& m, const std::vector<int>& dims,
                                   const std::vector<int>& keep) {
  const int n = static_cast<int>(dims.size());
  for (size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] < 0 || keep[k] >= n) throw std::invalid_argument("partial_trace: invalid subsystem index");
    if (k > 0 && keep[k] <= keep[k - 1]) {
      throw std::invalid_argument("partial_trace: keep must be strictly increasing");
    }
  }
  std::vector<int> traced;
  for (int k = 0; k < n; ++k) {
    if (std::find(keep.begin(), keep.end(), k) == keep.end()) traced.push_back(k);
  }
  const auto strides = strides_of(dims);
  std::vector<int> kdims, tdims;
  for (int k : keep) kdims.push_back(dims[k]);
  for (int t : traced) tdims.push_back(dims[t]);
  const int kd = dims_product(kdims.empty() ? std::vector<int>{1} : kdims);
  const int td = dims_product(tdims.empty() ? std::vector<int>{1} : tdims);

  auto offset = [&](const std::vector<int>& subs, int flat, const std::vector<int>& sdims) {
    int off = 0;
    for (int k = static_cast<int>(subs.size()) - 1; k >= 0; --k) {
      off += (flat % sdims[k]) * strides[subs[k]];
      flat /= sdims[k];
    }
    return off;
  };

  Matrix out = Matrix::Zero(kd, kd);
  for (int i = 0; i < kd; ++i) {
    const int oi = keep.empty() ? 0 : offset(keep, i, kdims);
    for (int j = 0; j < kd; ++j) {
      const int oj = keep.empty() ? 0 : offset(keep, j, kdims);
      Complex sum = 0.0;
      for (int t = 0; t < td; ++t) {
        const int ot = traced.empty() ? 0 : offset(traced, t, tdims);
        sum += m(oi + ot, oj + ot);
      }
      out(i, j) = sum;
    }
  }
  return DensityOperator(std::move(out), kdims.empty() ? std::vector<int>{1} : kdims);
}

}  // namespace

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
  return partial_trace_impl(rho.mat, rho.dims, keep);
}

DensityOperator partial_trace(const StateVector& v, const std::vector<int>& keep) {
  return partial_trace_impl(v.amps * v.amps.adjoint(), v.dims, keep);
}

Matrix partial_transpose(const DensityOperator& rho, int subsystem) {
  if (rho.dims != std::vector<int>{2, 2}) {
    throw std::invalid_argument("partial_transpose: requires a two-qubit operator");
  }
  if (subsystem != 0 && subsystem != 1) throw std::invalid_argument("partial_transpose: bad subsystem");
  Matrix out(4, 4);
  for (int s = 0; s < 2; ++s)
    for (int p = 0; p < 2; ++p)
      for (int sp = 0; sp < 2; ++sp)
        for (int pp = 0; pp < 2; ++pp) {
          // transpose swaps the chosen subsystem's row/column indices
          const int r = subsystem == 0 ? sp * 2 + p : s * 2 + pp;
          const int c = subsystem == 0 ? s * 2 + pp : sp * 2 + p;
          out(r, c) = rho.mat(s * 2 + p, sp * 2 + pp);
        }
  return out;
}

bool is_entangled_ppt(const DensityOperator& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(partial_transpose(rho, sub::path), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() < -kEigTol;
}

double purity(const DensityOperator& rho) { return (rho.mat * rho.mat).trace().real(); }

double fidelity_to(const StateVector& v, const StateVector& target) {
  return std::norm(inner(target, v));
}

double fidelity_to(const DensityOperator& rho, const StateVector& target) {
  if (rho.dims != target.dims) throw std::invalid_argument("fidelity_to: dimension mismatch");
  return (target.amps.adjoint() * rho.mat * target.amps)(0).real();
}

}  // namespace ipe::qstate
