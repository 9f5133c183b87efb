#pragma once

// Dense complex linear algebra for small Hilbert spaces (dim <= 16).
//
// Conventions used throughout the library:
//   * tensor products are big-endian: factor 0 is the most significant index,
//     so for factors of dims (d0, d1) the composite index is i0*d1 + i1;
//   * inner(a, b) = <a|b> is conjugate-linear in the first argument;
//   * eigendecompositions are returned with eigenvalues descending and each
//     eigenvector's phase fixed so its first nonzero component is real
//     positive; exact ties are ordered lexicographically by the real parts
//     of the phase-fixed eigenvector components.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "constants.hpp"

namespace bb84eve {

using cplx = std::complex<double>;

struct StateVector {
  std::vector<cplx> amps;

  StateVector() = default;
  explicit StateVector(int dim) : amps(static_cast<std::size_t>(dim)) {}
  StateVector(std::initializer_list<cplx> list) : amps(list) {}

  int dim() const { return static_cast<int>(amps.size()); }
  cplx& operator[](int i) { return amps[static_cast<std::size_t>(i)]; }
  const cplx& operator[](int i) const { return amps[static_cast<std::size_t>(i)]; }

  double norm_sq() const {
    double s = 0.0;
    for (const cplx& a : amps) s += std::norm(a);
    return s;
  }
  double norm() const { return std::sqrt(norm_sq()); }
  bool is_normalized(double eps = tol::algebraic) const {
    return std::abs(norm() - 1.0) <= eps;
  }
  // Scaled copy with unit norm; zero vectors are rejected.
  StateVector normalized() const {
    double n = norm();
    if (n < 1e-300) throw std::invalid_argument("StateVector::normalized: zero vector");
    StateVector out = *this;
    for (cplx& a : out.amps) a /= n;
    return out;
  }
};

inline cplx inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("inner: dimension mismatch");
  cplx s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline StateVector operator+(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("StateVector +: dimension mismatch");
  StateVector out = a;
  for (int i = 0; i < b.dim(); ++i) out[i] += b[i];
  return out;
}

inline StateVector operator-(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("StateVector -: dimension mismatch");
  StateVector out = a;
  for (int i = 0; i < b.dim(); ++i) out[i] -= b[i];
  return out;
}

inline StateVector operator*(cplx c, const StateVector& a) {
  StateVector out = a;
  for (cplx& x : out.amps) x *= c;
  return out;
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  StateVector out(a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) out[i * b.dim() + j] = a[i] * b[j];
  return out;
}

inline StateVector conj(const StateVector& a) {
  StateVector out = a;
  for (cplx& x : out.amps) x = std::conj(x);
  return out;
}

struct Operator {
  int dim_ = 0;
  std::vector<cplx> e_;  // row-major dim x dim

  Operator() = default;
  explicit Operator(int dim)
      : dim_(dim), e_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {}

  int dim() const { return dim_; }
  cplx& at(int r, int c) { return e_[static_cast<std::size_t>(r) * dim_ + c]; }
  const cplx& at(int r, int c) const { return e_[static_cast<std::size_t>(r) * dim_ + c]; }

  static Operator identity(int dim) {
    Operator m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
  }
  static Operator zero(int dim) { return Operator(dim); }
  static Operator diagonal(const std::vector<double>& d) {
    Operator m(static_cast<int>(d.size()));
    for (int i = 0; i < m.dim(); ++i) m.at(i, i) = d[static_cast<std::size_t>(i)];
    return m;
  }
};

inline Operator operator+(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("Operator +: dimension mismatch");
  Operator out = a;
  for (std::size_t i = 0; i < out.e_.size(); ++i) out.e_[i] += b.e_[i];
  return out;
}

inline Operator operator-(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("Operator -: dimension mismatch");
  Operator out = a;
  for (std::size_t i = 0; i < out.e_.size(); ++i) out.e_[i] -= b.e_[i];
  return out;
}

inline Operator operator*(cplx c, const Operator& a) {
  Operator out = a;
  for (cplx& x : out.e_) x *= c;
  return out;
}

inline Operator operator*(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("Operator *: dimension mismatch");
  const int n = a.dim();
  Operator out(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const cplx aik = a.at(i, k);
      if (aik == cplx{}) continue;
      for (int j = 0; j < n; ++j) out.at(i, j) += aik * b.at(k, j);
    }
  return out;
}

inline StateVector operator*(const Operator& m, const StateVector& v) {
  if (m.dim() != v.dim()) throw std::invalid_argument("Operator * StateVector: dimension mismatch");
  StateVector out(m.dim());
  for (int i = 0; i < m.dim(); ++i) {
    cplx s = 0.0;
    for (int j = 0; j < m.dim(); ++j) s += m.at(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

inline Operator dagger(const Operator& m) {
  Operator out(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out.at(i, j) = std::conj(m.at(j, i));
  return out;
}

inline Operator conj(const Operator& m) {
  Operator out = m;
  for (cplx& x : out.e_) x = std::conj(x);
  return out;
}

// |a><b|
inline Operator outer(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("outer: dimension mismatch");
  Operator out(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) out.at(i, j) = a[i] * std::conj(b[j]);
  return out;
}

inline Operator projector(const StateVector& a) { return outer(a, a); }

inline cplx trace(const Operator& m) {
  cplx s = 0.0;
  for (int i = 0; i < m.dim(); ++i) s += m.at(i, i);
  return s;
}

inline cplx expectation(const Operator& m, const StateVector& v) { return inner(v, m * v); }

inline Operator tensor(const Operator& a, const Operator& b) {
  const int da = a.dim(), db = b.dim();
  Operator out(da * db);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) {
      const cplx aij = a.at(i, j);
      if (aij == cplx{}) continue;
      for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l) out.at(i * db + k, j * db + l) = aij * b.at(k, l);
    }
  return out;
}

inline double max_abs_entry(const Operator& m) {
  double mx = 0.0;
  for (const cplx& x : m.e_) mx = std::max(mx, std::abs(x));
  return mx;
}

inline double frobenius_norm(const Operator& m) {
  double s = 0.0;
  for (const cplx& x : m.e_) s += std::norm(x);
  return std::sqrt(s);
}

inline double hermiticity_defect(const Operator& m) {
  double mx = 0.0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i; j < m.dim(); ++j)
      mx = std::max(mx, std::abs(m.at(i, j) - std::conj(m.at(j, i))));
  return mx;
}

inline bool is_hermitian(const Operator& m, double eps = tol::spectral) {
  return hermiticity_defect(m) <= eps;
}

inline bool is_unitary(const Operator& m, double eps = tol::spectral) {
  return max_abs_entry(dagger(m) * m - Operator::identity(m.dim())) <= eps;
}

// Density matrix with validated invariants (Hermitian, unit trace, PSD).
struct DensityMatrix {
  Operator m;

  int dim() const { return m.dim(); }
  const cplx& at(int r, int c) const { return m.at(r, c); }

  static DensityMatrix from(const Operator& op);                  // validating
  static DensityMatrix trusted(Operator op) { return DensityMatrix{std::move(op)}; }
  static DensityMatrix pure(const StateVector& psi) {
    if (!psi.is_normalized(1e-9))
      throw std::invalid_argument("DensityMatrix::pure: state not normalized");
    return DensityMatrix{projector(psi)};
  }
  static DensityMatrix maximally_mixed(int dim) {
    Operator m = Operator::identity(dim);
    return DensityMatrix{cplx(1.0 / dim) * m};
  }
};

struct EigResult {
  std::vector<double> values;        // descending
  std::vector<StateVector> vectors;  // orthonormal, phase-fixed
};

namespace detail {

inline void phase_fix(StateVector& v) {
  for (const cplx& a : v.amps) {
    if (std::abs(a) > 1e-10) {
      cplx ph = std::conj(a) / std::abs(a);
      for (cplx& x : v.amps) x *= ph;
      return;
    }
  }
}

}  // namespace detail

// Hermitian eigendecomposition with deterministic ordering. Hermiticity of
// the input is enforced up to tol::spectral; the solve itself runs on the
// symmetrized matrix (m + m^dag)/2.
inline EigResult eig_hermitian(const Operator& m) {
  const int n = m.dim();
  if (n <= 0) throw std::invalid_argument("eig_hermitian: empty operator");
  if (hermiticity_defect(m) > tol::spectral)
    throw std::invalid_argument("eig_hermitian: operator is not Hermitian");

  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed");

  EigResult out;
  out.values.resize(static_cast<std::size_t>(n));
  out.vectors.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    out.values[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    StateVector v(n);
    for (int i = 0; i < n; ++i) v[i] = solver.eigenvectors()(i, k);
    detail::phase_fix(v);
    out.vectors[static_cast<std::size_t>(k)] = std::move(v);
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const double scale = std::max(1.0, std::abs(out.values.front()) + std::abs(out.values.back()));
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    const double vx = out.values[static_cast<std::size_t>(x)];
    const double vy = out.values[static_cast<std::size_t>(y)];
    if (std::abs(vx - vy) > 1e-12 * scale) return vx > vy;
    const auto& ax = out.vectors[static_cast<std::size_t>(x)].amps;
    const auto& ay = out.vectors[static_cast<std::size_t>(y)].amps;
    return std::lexicographical_compare(
        ax.begin(), ax.end(), ay.begin(), ay.end(),
        [](const cplx& p, const cplx& q) { return p.real() < q.real(); });
  });

  EigResult sorted;
  sorted.values.reserve(out.values.size());
  sorted.vectors.reserve(out.vectors.size());
  for (int idx : order) {
    sorted.values.push_back(out.values[static_cast<std::size_t>(idx)]);
    sorted.vectors.push_back(std::move(out.vectors[static_cast<std::size_t>(idx)]));
  }
  return sorted;
}

inline DensityMatrix DensityMatrix::from(const Operator& op) {
  if (hermiticity_defect(op) > tol::algebraic * std::max(1.0, max_abs_entry(op)))
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(trace(op) - cplx(1.0)) > 1e-10)
    throw std::invalid_argument("DensityMatrix: trace != 1");
  EigResult eig = eig_hermitian(op);
  if (eig.values.back() < -tol::spectral)
    throw std::invalid_argument("DensityMatrix: not positive semidefinite");
  return DensityMatrix{op};
}

// Principal square root of a PSD Hermitian operator. Small negative
// eigenvalues (>= -tol::spectral) are clipped to zero.
inline Operator sqrt_psd(const Operator& m) {
  EigResult eig = eig_hermitian(m);
  Operator out(m.dim());
  // Eigenvalues within rounding of zero are flushed to zero: the square
  // root would otherwise blow sub-eps noise up to sqrt(eps) scale.
  const double scale = eig.values.empty() ? 0.0 : std::abs(eig.values.front());
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    double v = eig.values[k];
    if (v < -tol::spectral) throw std::invalid_argument("sqrt_psd: negative eigenvalue");
    if (v < 1e-14 * scale) v = 0.0;
    if (v < 0.0) v = 0.0;
    const double s = std::sqrt(v);
    const StateVector& vec = eig.vectors[k];
    for (int i = 0; i < m.dim(); ++i)
      for (int j = 0; j < m.dim(); ++j) out.at(i, j) += s * vec[i] * std::conj(vec[j]);
  }
  return out;
}

// Largest |eigenvalue| of a Hermitian operator (operator norm).
inline double opnorm_hermitian(const Operator& m) {
  if (m.dim() == 0) return 0.0;
  EigResult eig = eig_hermitian(m);
  return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

// Partial trace over the factors NOT listed in `keep`. `dims` gives the
// factor dimensions matching the big-endian composite index; `keep` is a set
// of factor indices (any order, duplicates rejected). The kept factors
// retain their original relative order. An empty `keep` traces everything,
// yielding the 1x1 matrix [tr rho].
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& dims,
                                   const std::vector<int>& keep) {
  const int nf = static_cast<int>(dims.size());
  long long total = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("partial_trace: nonpositive factor dim");
    total *= d;
  }
  if (total != rho.dim()) throw std::invalid_argument("partial_trace: factor dims do not match");

  std::vector<int> k = keep;
  std::sort(k.begin(), k.end());
  if (std::adjacent_find(k.begin(), k.end()) != k.end())
    throw std::invalid_argument("partial_trace: duplicate keep index");
  for (int f : k)
    if (f < 0 || f >= nf) throw std::invalid_argument("partial_trace: keep index out of range");

  std::vector<int> traced;
  for (int f = 0; f < nf; ++f)
    if (!std::binary_search(k.begin(), k.end(), f)) traced.push_back(f);

  std::vector<long long> stride(static_cast<std::size_t>(nf));
  long long s = 1;
  for (int f = nf - 1; f >= 0; --f) {
    stride[static_cast<std::size_t>(f)] = s;
    s *= dims[static_cast<std::size_t>(f)];
  }

  int dk = 1;
  for (int f : k) dk *= dims[static_cast<std::size_t>(f)];
  int dt = 1;
  for (int f : traced) dt *= dims[static_cast<std::size_t>(f)];

  auto offset = [&](const std::vector<int>& factors, int packed) {
    long long off = 0;
    for (int idx = static_cast<int>(factors.size()) - 1; idx >= 0; --idx) {
      const int f = factors[static_cast<std::size_t>(idx)];
      const int d = dims[static_cast<std::size_t>(f)];
      off += static_cast<long long>(packed % d) * stride[static_cast<std::size_t>(f)];
      packed /= d;
    }
    return off;
  };

  Operator out(dk);
  for (int ik = 0; ik < dk; ++ik)
    for (int jk = 0; jk < dk; ++jk) {
      cplx acc = 0.0;
      const long long ro = offset(k, ik);
      const long long co = offset(k, jk);
      for (int t = 0; t < dt; ++t) {
        const long long to = offset(traced, t);
        acc += rho.m.e_[static_cast<std::size_t>((ro + to) * rho.dim() + (co + to))];
      }
      out.at(ik, jk) = acc;
    }
  return DensityMatrix::trusted(std::move(out));
}

}  // namespace bb84eve
