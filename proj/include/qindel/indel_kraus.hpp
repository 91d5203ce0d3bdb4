#pragma once

// Kraus sets for single-deletion and single-insertion errors, channel
// application (exact and trajectory-sampled) and the inserted-state spectral
// decomposition.

#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qindel/tensor_linalg.hpp"

namespace qindel {

/// Probability weights over error positions (length n for deletion, n+1 for
/// insertion). Non-negative, summing to 1 within 1e-12.
struct PositionDistribution {
  std::vector<double> weights;

  explicit PositionDistribution(std::vector<double> w) : weights(std::move(w)) {
    double sum = 0.0;
    for (double x : weights) {
      if (x < 0.0) throw std::invalid_argument("PositionDistribution: negative weight");
      sum += x;
    }
    if (weights.empty() || std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("PositionDistribution: weights must sum to 1");
  }

  static PositionDistribution uniform(int len) {
    if (len <= 0) throw std::invalid_argument("PositionDistribution: empty support");
    // exact re-sum so the constructor check is met bit-for-bit
    std::vector<double> w(static_cast<std::size_t>(len), 1.0 / len);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) s += w[i];
    w.back() = 1.0 - s;
    return PositionDistribution(std::move(w));
  }

  /// All mass on 1-based position `pos`.
  static PositionDistribution one_hot(int len, int pos) {
    if (pos < 1 || pos > len) throw std::invalid_argument("PositionDistribution: position out of range");
    std::vector<double> w(static_cast<std::size_t>(len), 0.0);
    w[static_cast<std::size_t>(pos - 1)] = 1.0;
    return PositionDistribution(std::move(w));
  }

  int size() const { return static_cast<int>(weights.size()); }
  double operator()(int pos) const { return weights.at(static_cast<std::size_t>(pos - 1)); }
};

/// Spectral data of the single-qudit state inserted by the insertion channel:
/// sigma = U diag(p) U^dag with U|b> = |phi_b>.
struct InsertedState {
  Mat sigma;
  std::vector<double> probs;
  Mat eigen_unitary;

  int l() const { return static_cast<int>(probs.size()); }

  StateVector eigenvector(int b) const {
    QuditDims d(l(), 1);
    return {d, Vec(eigen_unitary.col(b))};
  }

  /// Diagonal sigma in the computational basis; the given order of the
  /// probabilities is kept (no sorting), U = I.
  static InsertedState from_probs(std::vector<double> p) {
    const int l = static_cast<int>(p.size());
    if (l < 2) throw std::invalid_argument("InsertedState: need at least 2 probabilities");
    double sum = 0.0;
    for (double x : p) {
      if (x < 0.0) throw std::invalid_argument("InsertedState: negative probability");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-10)
      throw std::invalid_argument("InsertedState: probabilities must sum to 1");
    InsertedState s;
    s.sigma = Mat::Zero(l, l);
    for (int b = 0; b < l; ++b) s.sigma(b, b) = p[static_cast<std::size_t>(b)];
    s.probs = std::move(p);
    s.eigen_unitary = Mat::Identity(l, l);
    return s;
  }

  static InsertedState maximally_mixed(int l) {
    return from_probs(std::vector<double>(static_cast<std::size_t>(l), 1.0 / l));
  }

  /// Spectral decomposition of a density matrix. Eigenvalues are sorted in
  /// descending order; inside each (near-)degenerate eigenvalue group the
  /// eigenvector basis is re-fixed by Gram-Schmidt of the projected
  /// computational basis vectors in ascending order, which also pins every
  /// phase. The decomposition is therefore deterministic.
  static InsertedState from_density(const Mat& sigma, double tol = 1e-9) {
    const int l = static_cast<int>(sigma.rows());
    if (l < 2 || sigma.cols() != l) throw std::invalid_argument("InsertedState: bad sigma shape");
    if (max_abs(Mat(sigma - sigma.adjoint())) > 1e-10)
      throw std::invalid_argument("InsertedState: sigma is not Hermitian");
    if (std::abs(sigma.trace().real() - 1.0) > 1e-10 || std::abs(sigma.trace().imag()) > 1e-10)
      throw std::invalid_argument("InsertedState: sigma trace is not 1");

    Eigen::SelfAdjointEigenSolver<Mat> es(sigma);
    if (es.info() != Eigen::Success) throw std::runtime_error("InsertedState: eigensolver failed");
    std::vector<int> order(static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return es.eigenvalues()(a) > es.eigenvalues()(b);
    });

    InsertedState out;
    out.sigma = sigma;
    out.probs.resize(static_cast<std::size_t>(l));
    out.eigen_unitary = Mat::Zero(l, l);
    for (int i = 0; i < l; ++i) {
      double ev = es.eigenvalues()(order[static_cast<std::size_t>(i)]);
      if (ev < 0.0 && ev > -1e-10) ev = 0.0;
      if (ev < 0.0) throw std::invalid_argument("InsertedState: sigma is not positive semi-definite");
      out.probs[static_cast<std::size_t>(i)] = ev;
    }

    int start = 0;
    while (start < l) {
      int stop = start + 1;
      while (stop < l &&
             std::abs(out.probs[static_cast<std::size_t>(stop)] - out.probs[static_cast<std::size_t>(start)]) <= tol)
        ++stop;
      const int width = stop - start;
      Mat group(l, width);
      for (int j = 0; j < width; ++j)
        group.col(j) = es.eigenvectors().col(order[static_cast<std::size_t>(start + j)]);
      // canonical basis of the eigenspace: Gram-Schmidt of P e_0, P e_1, ...
      Mat proj = group * group.adjoint();
      int filled = 0;
      Mat canon(l, width);
      for (int j = 0; j < l && filled < width; ++j) {
        Vec w = proj.col(j);
        for (int r = 0; r < filled; ++r) w -= canon.col(r).dot(w) * canon.col(r);
        const double wn = w.norm();
        if (wn > 1e-6) canon.col(filled++) = w / wn;
      }
      if (filled != width) throw std::runtime_error("InsertedState: eigenspace canonicalization failed");
      out.eigen_unitary.block(0, start, l, width) = canon;
      start = stop;
    }

    Mat recon = Mat::Zero(l, l);
    for (int b = 0; b < l; ++b)
      recon += out.probs[static_cast<std::size_t>(b)] * out.eigen_unitary.col(b) *
               out.eigen_unitary.col(b).adjoint();
    if (max_abs(Mat(recon - sigma)) > 1e-9)
      throw std::runtime_error("InsertedState: spectral reconstruction check failed");
    return out;
  }
};

/// D_{p,|b>}^m = I^{(p-1)} (x) <b| (x) I^{(m-p+1)}, shape l^m x l^{m+1}.
inline Operator deletion_operator(int l, int m, int p, int b) {
  if (m < 0) throw std::invalid_argument("deletion_operator: negative particle count");
  if (p < 1 || p > m + 1) throw std::invalid_argument("deletion_operator: position out of range");
  if (b < 0 || b >= l) throw std::invalid_argument("deletion_operator: symbol out of range");
  Operator left = Operator::identity(QuditDims(l, p - 1));
  Operator right = Operator::identity(QuditDims(l, m - p + 1));
  return tensor_product(tensor_product(left, Operator::bra_symbol(l, b)), right);
}

/// I_{p,|phi>}^m = I^{(p-1)} (x) |phi> (x) I^{(m-p+1)}, shape l^{m+1} x l^m.
inline Operator insertion_operator(int m, int p, const StateVector& phi) {
  if (phi.dims.n != 1) throw std::invalid_argument("insertion_operator: phi must be a single qudit");
  if (!is_normalized(phi, 1e-9)) throw std::invalid_argument("insertion_operator: phi is not normalized");
  if (m < 0) throw std::invalid_argument("insertion_operator: negative particle count");
  if (p < 1 || p > m + 1) throw std::invalid_argument("insertion_operator: position out of range");
  const int l = phi.dims.l;
  Operator left = Operator::identity(QuditDims(l, p - 1));
  Operator right = Operator::identity(QuditDims(l, m - p + 1));
  return tensor_product(tensor_product(left, Operator::ket(phi)), right);
}

enum class ChannelKind { deletion, insertion, custom };

struct KrausElement {
  std::string label;
  int p = 0;       // 1-based position (0 for custom elements)
  int b = 0;       // symbol / eigenvector index
  double weight = 1.0;  // squared scalar prefactor (a probability)
  Operator op;     // unweighted operator
};

/// Weighted family of Kraus operators. Weights are stored as squared
/// prefactors beside unweighted operators: completeness means
/// sum_a weight_a * op_a^dag op_a = I.
class KrausSet {
 public:
  static KrausSet create(ChannelKind kind, std::vector<KrausElement> elements,
                         double tol = 1e-9) {
    if (elements.empty()) throw std::invalid_argument("KrausSet: empty element list");
    KrausSet ks;
    ks.kind_ = kind;
    ks.in_dims_ = elements.front().op.in_dims;
    ks.out_dims_ = elements.front().op.out_dims;
    std::set<std::string> labels;
    for (const auto& e : elements) {
      if (e.op.in_dims != ks.in_dims_ || e.op.out_dims != ks.out_dims_)
        throw std::invalid_argument("KrausSet: operators do not share shapes");
      if (e.weight < 0.0) throw std::invalid_argument("KrausSet: negative weight");
      if (!labels.insert(e.label).second)
        throw std::invalid_argument("KrausSet: duplicate label " + e.label);
    }
    ks.elements_ = std::move(elements);
    const double dev = ks.completeness_deviation();
    if (dev > tol)
      throw std::invalid_argument("KrausSet: completeness violated, max deviation " +
                                  std::to_string(dev));
    return ks;
  }

  const std::vector<KrausElement>& elements() const { return elements_; }
  const KrausElement& element(int a) const { return elements_.at(static_cast<std::size_t>(a)); }
  int size() const { return static_cast<int>(elements_.size()); }
  const QuditDims& in_dims() const { return in_dims_; }
  const QuditDims& out_dims() const { return out_dims_; }
  ChannelKind kind() const { return kind_; }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    out.reserve(elements_.size());
    for (const auto& e : elements_) out.push_back(e.label);
    return out;
  }

  /// max-abs entry of sum_a w_a A_a^dag A_a - I
  double completeness_deviation() const {
    const Index n = in_dims_.dim();
    SpMat acc(n, n);
    for (const auto& e : elements_) {
      if (e.weight == 0.0) continue;
      SpMat term = e.op.mat.adjoint() * e.op.mat;
      acc = acc + SpMat(e.weight * term);
    }
    SpMat eye(n, n);
    eye.setIdentity();
    acc = acc - eye;
    double dev = 0.0;
    for (int k = 0; k < acc.outerSize(); ++k)
      for (SpMat::InnerIterator it(acc, k); it; ++it)
        dev = std::max(dev, std::abs(it.value()));
    return dev;
  }

 private:
  ChannelKind kind_ = ChannelKind::custom;
  QuditDims in_dims_{2, 0}, out_dims_{2, 0};
  std::vector<KrausElement> elements_;
};

/// Kraus set for the single deletion error on n qudits:
/// { sqrt(p^-(p)) D_{p,|b>}^{n-1} : p in [n], b in L }, ordered by (b, p) so
/// that element indices line up with the decoder's outcome numbering.
inline KrausSet build_deletion_kraus(int n, int l, const PositionDistribution& dist) {
  if (n < 1) throw std::invalid_argument("build_deletion_kraus: need n >= 1");
  if (dist.size() != n)
    throw std::invalid_argument("build_deletion_kraus: distribution length must be n");
  std::vector<KrausElement> els;
  els.reserve(static_cast<std::size_t>(n) * l);
  for (int b = 0; b < l; ++b)
    for (int p = 1; p <= n; ++p) {
      KrausElement e;
      e.label = "del[p=" + std::to_string(p) + ",b=" + std::to_string(b) + "]";
      e.p = p;
      e.b = b;
      e.weight = dist(p);
      e.op = deletion_operator(l, n - 1, p, b);
      els.push_back(std::move(e));
    }
  return KrausSet::create(ChannelKind::deletion, std::move(els));
}

/// Kraus set for the single insertion error of `inserted` on n qudits:
/// { sqrt(p^+(p) p_b) I_{p,U|b>}^n : p in [n+1], b in L }, ordered by (b, p).
/// Elements with p_b = 0 are kept with weight 0 so labels are stable across
/// inserted states.
inline KrausSet build_insertion_kraus(int n, const InsertedState& inserted,
                                      const PositionDistribution& dist) {
  if (n < 0) throw std::invalid_argument("build_insertion_kraus: negative n");
  if (dist.size() != n + 1)
    throw std::invalid_argument("build_insertion_kraus: distribution length must be n+1");
  const int l = inserted.l();
  std::vector<KrausElement> els;
  els.reserve(static_cast<std::size_t>(n + 1) * l);
  for (int b = 0; b < l; ++b) {
    const StateVector phi = inserted.eigenvector(b);
    for (int p = 1; p <= n + 1; ++p) {
      KrausElement e;
      e.label = "ins[p=" + std::to_string(p) + ",b=" + std::to_string(b) + "]";
      e.p = p;
      e.b = b;
      e.weight = dist(p) * inserted.probs[static_cast<std::size_t>(b)];
      e.op = insertion_operator(n, p, phi);
      els.push_back(std::move(e));
    }
  }
  return KrausSet::create(ChannelKind::insertion, std::move(els));
}

/// E(rho) = sum_a w_a A_a rho A_a^dag, computed exactly.
inline DensityMatrix apply_channel_exact(const DensityMatrix& rho, const KrausSet& ks) {
  if (rho.dims != ks.in_dims()) throw std::invalid_argument("apply_channel_exact: shape mismatch");
  Mat out = Mat::Zero(ks.out_dims().dim(), ks.out_dims().dim());
  for (const auto& e : ks.elements()) {
    if (e.weight == 0.0) continue;
    Mat tmp = e.op.mat * rho.rho;
    out += e.weight * (tmp * e.op.mat.adjoint());
  }
  return {ks.out_dims(), std::move(out)};
}

/// Pure-input fast path: E(|psi><psi|) accumulated from the branch vectors.
inline DensityMatrix apply_channel_exact(const StateVector& psi, const KrausSet& ks) {
  if (psi.dims != ks.in_dims()) throw std::invalid_argument("apply_channel_exact: shape mismatch");
  Mat out = Mat::Zero(ks.out_dims().dim(), ks.out_dims().dim());
  for (const auto& e : ks.elements()) {
    if (e.weight == 0.0) continue;
    Vec v = e.op.mat * psi.amp;
    out += e.weight * (v * v.adjoint());
  }
  return {ks.out_dims(), std::move(out)};
}

/// Draws one Kraus branch of the channel applied to a pure state. Branch a is
/// chosen with probability w_a ||A_a psi||^2; construction precomputes the
/// branch table so repeated sampling from the same state is cheap.
class TrajectorySampler {
 public:
  struct Draw {
    int element = 0;
    std::string label;
    StateVector state;
    double probability = 0.0;
  };

  TrajectorySampler(const StateVector& psi, const KrausSet& ks) : dims_(ks.out_dims()) {
    if (psi.dims != ks.in_dims())
      throw std::invalid_argument("TrajectorySampler: shape mismatch");
    if (!is_normalized(psi))
      throw std::invalid_argument("TrajectorySampler: state is not normalized");
    double total = 0.0;
    for (const auto& e : ks.elements()) {
      Vec v = e.op.mat * psi.amp;
      const double prob = e.weight * v.squaredNorm();
      branches_.push_back(std::move(v));
      probs_.push_back(prob);
      labels_.push_back(e.label);
      total += prob;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::runtime_error("TrajectorySampler: branch probabilities do not sum to 1");
  }

  const std::vector<double>& probabilities() const { return probs_; }

  Draw sample(std::mt19937_64& rng) const {
    const double r = uniform01(rng);
    double acc = 0.0;
    int pick = -1;
    for (std::size_t a = 0; a < probs_.size(); ++a) {
      if (probs_[a] <= 0.0) continue;
      acc += probs_[a];
      pick = static_cast<int>(a);
      if (r < acc) break;
    }
    if (pick < 0) throw std::runtime_error("TrajectorySampler: no branch with positive probability");
    return draw(pick);
  }

  Draw draw(int a) const {
    const auto ia = static_cast<std::size_t>(a);
    Vec v = branches_[ia] / branches_[ia].norm();
    return {a, labels_[ia], {dims_, std::move(v)}, probs_[ia]};
  }

  /// Fixed 53-bit mapping so sampling is reproducible across standard
  /// libraries (std::uniform_real_distribution is not pinned).
  static double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }

 private:
  QuditDims dims_;
  std::vector<Vec> branches_;
  std::vector<double> probs_;
  std::vector<std::string> labels_;
};

inline TrajectorySampler::Draw sample_trajectory(const StateVector& psi, const KrausSet& ks,
                                                 std::uint64_t seed) {
  TrajectorySampler sampler(psi, ks);
  std::mt19937_64 rng(seed);
  return sampler.sample(rng);
}

}  // namespace qindel
