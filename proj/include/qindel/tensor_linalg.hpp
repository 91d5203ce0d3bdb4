#pragma once

// Dense/sparse complex linear algebra over tensor-product spaces C^{l ⊗ n}:
// tensor products, adjoints, modified Gram-Schmidt with rank detection,
// unitary completion and removal of leading qudits.
//
// Basis convention: computational basis index = big-endian digit string, the
// first particle is the most significant digit ("01122" -> 0*81+1*27+1*9+2*3+2).

#include <algorithm>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace qindel {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<std::complex<double>>;
using Index = Eigen::Index;

namespace tolerances {
inline constexpr double orth = 1e-9;  // Gram-Schmidt dependence test (relative)
inline constexpr double num = 1e-10;  // Hermiticity / trace / unitarity checks
inline constexpr double norm = 1e-9;  // state normalization
}  // namespace tolerances

/// Shape of a tensor-product space: n qudits of local dimension l.
struct QuditDims {
  int l = 2;
  int n = 0;

  QuditDims() = default;
  QuditDims(int l_, int n_) : l(l_), n(n_) {
    if (l < 2) throw std::invalid_argument("QuditDims: local dimension must be >= 2");
    if (n < 0) throw std::invalid_argument("QuditDims: particle count must be >= 0");
    dim();
  }

  /// Total dimension l^n. Throws if it does not fit the index type.
  Index dim() const {
    Index d = 1;
    for (int i = 0; i < n; ++i) {
      if (d > std::numeric_limits<Index>::max() / l)
        throw std::overflow_error("QuditDims: l^n overflows the index type");
      d *= l;
    }
    return d;
  }

  friend bool operator==(const QuditDims& a, const QuditDims& b) {
    return a.l == b.l && a.n == b.n;
  }
  friend bool operator!=(const QuditDims& a, const QuditDims& b) { return !(a == b); }
};

inline Index index_of_string(const std::string& digits, int l) {
  Index idx = 0;
  for (char c : digits) {
    if (c < '0' || c >= '0' + l)
      throw std::invalid_argument("index_of_string: symbol out of range for l=" + std::to_string(l));
    idx = idx * l + (c - '0');
  }
  return idx;
}

inline std::string string_of_index(Index idx, const QuditDims& dims) {
  std::string s(static_cast<std::size_t>(dims.n), '0');
  for (int k = dims.n - 1; k >= 0; --k) {
    s[static_cast<std::size_t>(k)] = static_cast<char>('0' + idx % dims.l);
    idx /= dims.l;
  }
  return s;
}

struct StateVector {
  QuditDims dims;
  Vec amp;

  static StateVector zero(const QuditDims& d) { return {d, Vec::Zero(d.dim())}; }

  static StateVector basis(const QuditDims& d, Index idx) {
    StateVector s = zero(d);
    s.amp(idx) = 1.0;
    return s;
  }

  /// Basis ket from a digit string, e.g. from_string("01122", 3).
  static StateVector from_string(const std::string& digits, int l) {
    QuditDims d(l, static_cast<int>(digits.size()));
    return basis(d, index_of_string(digits, l));
  }

  double norm() const { return amp.norm(); }
};

/// <a|b>
inline cplx inner(const StateVector& a, const StateVector& b) {
  if (a.dims != b.dims) throw std::invalid_argument("inner: dimension mismatch");
  return a.amp.dot(b.amp);
}

inline bool is_normalized(const StateVector& v, double tol = tolerances::norm) {
  return std::abs(v.norm() - 1.0) <= tol;
}

struct DensityMatrix {
  QuditDims dims;
  Mat rho;

  static DensityMatrix pure(const StateVector& psi) {
    return {psi.dims, psi.amp * psi.amp.adjoint()};
  }

  double trace_real() const { return rho.trace().real(); }
  double purity() const { return (rho * rho).trace().real(); }
};

/// |<a|b>|^2 for pure states, <a|rho|a> against a density matrix.
inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner(a, b));
}
inline double fidelity(const StateVector& a, const DensityMatrix& rho) {
  if (a.dims != rho.dims) throw std::invalid_argument("fidelity: dimension mismatch");
  return (a.amp.adjoint() * rho.rho * a.amp)(0).real();
}

inline double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Rectangular matrix between tensor-product spaces of possibly different
/// particle counts (same local dimension on both sides). Stored sparse; all
/// operators built in this project are either structurally sparse or small.
struct Operator {
  QuditDims in_dims{2, 0};
  QuditDims out_dims{2, 0};
  SpMat mat;  // out_dims.dim() x in_dims.dim()

  Operator() : mat(1, 1) {}

  Operator(const QuditDims& out, const QuditDims& in, SpMat m)
      : in_dims(in), out_dims(out), mat(std::move(m)) {
    if (in_dims.l != out_dims.l)
      throw std::invalid_argument("Operator: local dimensions differ");
    if (mat.rows() != out_dims.dim() || mat.cols() != in_dims.dim())
      throw std::invalid_argument("Operator: shape inconsistent with declared dims");
  }

  static Operator identity(const QuditDims& d) {
    SpMat m(d.dim(), d.dim());
    m.setIdentity();
    return {d, d, std::move(m)};
  }

  /// |b> as an l x 1 operator (one extra particle on the output side).
  static Operator ket_symbol(int l, int b) {
    if (b < 0 || b >= l) throw std::invalid_argument("ket_symbol: symbol out of range");
    SpMat m(l, 1);
    m.insert(b, 0) = 1.0;
    m.makeCompressed();
    return {QuditDims(l, 1), QuditDims(l, 0), std::move(m)};
  }

  /// <b| as a 1 x l operator.
  static Operator bra_symbol(int l, int b) {
    if (b < 0 || b >= l) throw std::invalid_argument("bra_symbol: symbol out of range");
    SpMat m(1, l);
    m.insert(0, b) = 1.0;
    m.makeCompressed();
    return {QuditDims(l, 0), QuditDims(l, 1), std::move(m)};
  }

  static Operator ket(const StateVector& phi) {
    SpMat m(phi.dims.dim(), 1);
    for (Index i = 0; i < phi.amp.size(); ++i)
      if (phi.amp(i) != cplx(0.0)) m.insert(i, 0) = phi.amp(i);
    m.makeCompressed();
    return {phi.dims, QuditDims(phi.dims.l, 0), std::move(m)};
  }

  static Operator bra(const StateVector& phi) {
    SpMat m(1, phi.dims.dim());
    for (Index i = 0; i < phi.amp.size(); ++i)
      if (phi.amp(i) != cplx(0.0)) m.insert(0, i) = std::conj(phi.amp(i));
    m.makeCompressed();
    return {QuditDims(phi.dims.l, 0), phi.dims, std::move(m)};
  }

  static Operator from_dense(const QuditDims& out, const QuditDims& in, const Mat& d) {
    SpMat m = d.sparseView();
    return {out, in, std::move(m)};
  }

  Mat dense() const { return Mat(mat); }

  Vec apply(const Vec& v) const { return mat * v; }

  StateVector apply(const StateVector& psi) const {
    if (psi.dims != in_dims) throw std::invalid_argument("Operator::apply: dimension mismatch");
    return {out_dims, mat * psi.amp};
  }

  /// A rho A^dagger
  DensityMatrix apply(const DensityMatrix& rho) const {
    if (rho.dims != in_dims) throw std::invalid_argument("Operator::apply: dimension mismatch");
    Mat tmp = mat * rho.rho;
    return {out_dims, Mat(tmp * mat.adjoint())};
  }
};

/// Conjugate transpose. dagger(dagger(a)) == a exactly.
inline Operator dagger(const Operator& a) {
  SpMat m = a.mat.adjoint();
  return {a.in_dims, a.out_dims, std::move(m)};
}

/// Kronecker product with particle counts added; the left factor owns the
/// leading (most significant) qudits.
inline Operator tensor_product(const Operator& a, const Operator& b) {
  if (a.in_dims.l != b.in_dims.l)
    throw std::invalid_argument("tensor_product: mismatched local dimensions");
  QuditDims in(a.in_dims.l, a.in_dims.n + b.in_dims.n);
  QuditDims out(a.out_dims.l, a.out_dims.n + b.out_dims.n);
  SpMat m(out.dim(), in.dim());
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(static_cast<std::size_t>(a.mat.nonZeros()) * b.mat.nonZeros());
  for (int ka = 0; ka < a.mat.outerSize(); ++ka)
    for (SpMat::InnerIterator ia(a.mat, ka); ia; ++ia)
      for (int kb = 0; kb < b.mat.outerSize(); ++kb)
        for (SpMat::InnerIterator ib(b.mat, kb); ib; ++ib)
          trips.emplace_back(ia.row() * b.mat.rows() + ib.row(),
                             ia.col() * b.mat.cols() + ib.col(), ia.value() * ib.value());
  m.setFromTriplets(trips.begin(), trips.end());
  return {out, in, std::move(m)};
}

inline Operator operator*(const Operator& a, const Operator& b) {
  if (a.in_dims != b.out_dims) throw std::invalid_argument("Operator product: shape mismatch");
  SpMat m = a.mat * b.mat;
  return {a.out_dims, b.in_dims, std::move(m)};
}

/// Result of Gram-Schmidt: orthonormal vectors plus the lower-triangular
/// coefficient table expressing each output vector in the kept generators.
struct OrthonormalFamily {
  QuditDims dims{2, 0};
  std::vector<StateVector> vectors;
  Mat coeffs;                 // d x d, vectors[k] = sum_j coeffs(k,j) generators[selected[j]]
  std::vector<int> selected;  // indices of generators kept as linearly independent

  int size() const { return static_cast<int>(vectors.size()); }
};

/// Classical modified Gram-Schmidt, processed in the given order. A generator
/// whose residual norm is <= tol * (its original norm) is skipped and recorded
/// as dependent; it never perturbs the basis. Empty input (or all generators
/// dependent/zero) yields an empty family.
inline OrthonormalFamily gram_schmidt(const std::vector<StateVector>& generators,
                                      double tol = tolerances::orth) {
  if (!(tol > 0)) throw std::invalid_argument("gram_schmidt: tol must be positive");
  OrthonormalFamily fam;
  if (generators.empty()) return fam;
  fam.dims = generators.front().dims;
  for (const auto& g : generators)
    if (g.dims != fam.dims) throw std::invalid_argument("gram_schmidt: mixed dimensions");

  std::vector<Vec> basis;
  std::vector<std::vector<cplx>> rows;
  for (std::size_t t = 0; t < generators.size(); ++t) {
    Vec v = generators[t].amp;
    const double original_norm = v.norm();
    std::vector<cplx> c(basis.size() + 1, cplx(0.0));
    c.back() = 1.0;
    for (std::size_t r = 0; r < basis.size(); ++r) {
      const cplx h = basis[r].dot(v);
      v -= h * basis[r];
      for (std::size_t j = 0; j <= r; ++j) c[j] -= h * rows[r][j];
    }
    const double residual = v.norm();
    if (residual <= tol * original_norm) continue;
    v /= residual;
    for (auto& cj : c) cj /= residual;
    basis.push_back(std::move(v));
    rows.push_back(std::move(c));
    fam.selected.push_back(static_cast<int>(t));
  }

  const int d = static_cast<int>(basis.size());
  fam.coeffs = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k)
    for (int j = 0; j <= k; ++j) fam.coeffs(k, j) = rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
  fam.vectors.reserve(static_cast<std::size_t>(d));
  for (auto& b : basis) fam.vectors.push_back({fam.dims, std::move(b)});
  return fam;
}

/// Unitary built from two Householder frames: U = Q_t^dag * diag(core, I) * Q_v,
/// mapping a small orthonormal family onto an orthonormal target family. The
/// action outside the family span is fixed deterministically by the frames.
/// Applying costs O(m N); nothing of size N^2 is ever stored.
class Unitary {
 public:
  QuditDims dims{2, 0};

  Unitary() = default;

  static Unitary identity(const QuditDims& d) {
    Unitary u;
    u.dims = d;
    u.core_.resize(0, 0);
    return u;
  }

  Vec apply(Vec x) const {
    const auto m = static_cast<Index>(refl_v_.size());
    for (Index c = 0; c < m; ++c) reflect(refl_v_[static_cast<std::size_t>(c)], x);
    if (m > 0) x.head(m) = core_ * x.head(m);
    for (Index c = m - 1; c >= 0; --c) reflect(refl_t_[static_cast<std::size_t>(c)], x);
    return x;
  }

  Vec apply_adjoint(Vec x) const {
    const auto m = static_cast<Index>(refl_t_.size());
    for (Index c = 0; c < m; ++c) reflect(refl_t_[static_cast<std::size_t>(c)], x);
    if (m > 0) x.head(m) = core_.adjoint() * x.head(m);
    for (Index c = m - 1; c >= 0; --c) reflect(refl_v_[static_cast<std::size_t>(c)], x);
    return x;
  }

  StateVector apply(const StateVector& psi) const {
    if (psi.dims != dims) throw std::invalid_argument("Unitary::apply: dimension mismatch");
    return {dims, apply(psi.amp)};
  }

  Mat dense() const {
    const Index n = dims.dim();
    Mat out(n, n);
    Vec e = Vec::Zero(n);
    for (Index j = 0; j < n; ++j) {
      e(j) = 1.0;
      out.col(j) = apply(e);
      e(j) = 0.0;
    }
    return out;
  }

  Operator to_operator() const { return Operator::from_dense(dims, dims, dense()); }

 private:
  struct Reflector {
    Index offset = 0;
    Vec u;  // unit vector over [offset, N); empty means identity
  };

  std::vector<Reflector> refl_v_, refl_t_;
  Mat core_;

  static void reflect(const Reflector& r, Vec& x) {
    if (r.u.size() == 0) return;
    auto tail = x.tail(r.u.size());
    const cplx s = r.u.dot(tail);
    tail -= 2.0 * s * r.u;
  }

  // Householder QR of an N x m column block; returns the reflectors and the
  // upper-triangular top block R such that H_{m-1}..H_0 A = [R; 0].
  static std::vector<Reflector> build_frame(Mat a, Mat& r_out) {
    const Index n = a.rows(), m = a.cols();
    std::vector<Reflector> refl;
    refl.reserve(static_cast<std::size_t>(m));
    for (Index c = 0; c < m; ++c) {
      const Index len = n - c;
      Vec x = a.col(c).tail(len);
      const double xn = x.norm();
      const cplx x0 = x(0);
      const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0);
      const cplx alpha = -phase * xn;
      Vec u = x;
      u(0) -= alpha;
      const double un = u.norm();
      Reflector r;
      r.offset = c;
      if (un > 0.0) {
        r.u = u / un;
        for (Index j = c; j < m; ++j) {
          auto col = a.col(j).tail(len);
          const cplx s = r.u.dot(col);
          col -= 2.0 * s * r.u;
        }
      }
      refl.push_back(std::move(r));
    }
    r_out = a.topRows(m).triangularView<Eigen::Upper>();
    return refl;
  }

  friend Unitary complete_to_unitary(const std::vector<StateVector>&,
                                     const std::vector<StateVector>&, double);
};

/// A unitary U with U vectors[j] = targets[j] for all j. Both inputs must be
/// orthonormal families of equal size. The completion outside the spans is
/// deterministic, so the output is reproducible.
inline Unitary complete_to_unitary(const std::vector<StateVector>& vectors,
                                   const std::vector<StateVector>& targets,
                                   double tol = 1e-8) {
  if (vectors.size() != targets.size())
    throw std::invalid_argument("complete_to_unitary: family/target counts differ");
  Unitary u;
  if (vectors.empty()) return u;
  u.dims = vectors.front().dims;
  const Index n = u.dims.dim();
  const auto m = static_cast<Index>(vectors.size());
  if (m > n) throw std::invalid_argument("complete_to_unitary: more vectors than dimensions");

  Mat v(n, m), t(n, m);
  for (Index j = 0; j < m; ++j) {
    if (vectors[static_cast<std::size_t>(j)].dims != u.dims ||
        targets[static_cast<std::size_t>(j)].dims != u.dims)
      throw std::invalid_argument("complete_to_unitary: dimension mismatch");
    v.col(j) = vectors[static_cast<std::size_t>(j)].amp;
    t.col(j) = targets[static_cast<std::size_t>(j)].amp;
  }
  for (const Mat* cols : {&v, &t}) {
    Mat gram = cols->adjoint() * (*cols);
    if (max_abs(gram - Mat::Identity(m, m)) > tol)
      throw std::invalid_argument("complete_to_unitary: input family is not orthonormal");
  }

  Mat rv, rt;
  u.refl_v_ = Unitary::build_frame(v, rv);
  u.refl_t_ = Unitary::build_frame(t, rt);
  // core = R_t * R_v^{-1}; both are diagonal-up-to-roundoff with unimodular
  // entries, so the solve is well conditioned.
  u.core_ = rv.triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(rt);
  return u;
}

inline Unitary complete_to_unitary(const OrthonormalFamily& family,
                                   const std::vector<StateVector>& targets,
                                   double tol = 1e-8) {
  return complete_to_unitary(family.vectors, targets, tol);
}

/// Partial trace over the first `count` qudits.
inline DensityMatrix drop_leading_qudits(const DensityMatrix& rho, int count) {
  if (count < 0 || count > rho.dims.n)
    throw std::invalid_argument("drop_leading_qudits: count out of range");
  const QuditDims out(rho.dims.l, rho.dims.n - count);
  const Index block = out.dim();
  const Index lead = rho.dims.dim() / block;
  Mat res = Mat::Zero(block, block);
  for (Index g = 0; g < lead; ++g)
    res += rho.rho.block(g * block, g * block, block, block);
  return {out, std::move(res)};
}

/// Removes the first `count` qudits of a pure state. When the state has the
/// product form |0...0> (x) |phi> the tail is returned unchanged as a
/// StateVector; otherwise the partial trace is returned as a DensityMatrix.
inline std::variant<StateVector, DensityMatrix> drop_leading_qudits(
    const StateVector& psi, int count, double tol = tolerances::norm) {
  if (count < 0 || count > psi.dims.n)
    throw std::invalid_argument("drop_leading_qudits: count out of range");
  if (count == 0) return psi;
  const QuditDims out(psi.dims.l, psi.dims.n - count);
  const Index block = out.dim();
  const double outside = psi.amp.tail(psi.amp.size() - block).norm();
  if (outside <= tol) return StateVector{out, psi.amp.head(block)};
  return drop_leading_qudits(DensityMatrix::pure(psi), count);
}

}  // namespace qindel
