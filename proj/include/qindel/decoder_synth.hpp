#pragma once

// Constructive decoder synthesis: from logical codewords and a Kraus set,
// build the orthonormal error-syndrome basis {u_k^i}, the measurement
// {M_1..M_d, M_empty}, the correcting unitaries {U_k}, and run decoding
// (exactly on density matrices, or by sampled trajectories).

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qindel/code_model.hpp"
#include "qindel/indel_kraus.hpp"
#include "qindel/tensor_linalg.hpp"

namespace qindel {

struct KlViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SynthesisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Synthesized decoder. Outcomes are numbered 1..d (0 stands for the empty
/// outcome). basis_block(k) holds the columns u_k^0 .. u_k^{l-1}; measurement
/// operators are the rank-l projectors M_k = B_k B_k^dag and the empty-outcome
/// projector is kept in complement form I - W W^dag over the stacked basis W.
struct RecoveryPlan {
  QuditDims code_dims{2, 1};   // l (x) n
  QuditDims error_dims{2, 1};  // l (x) n'
  int d = 0;

  std::vector<std::string> labels;  // element labels of the source Kraus set
  std::vector<int> selected;        // element indices kept by Gram-Schmidt
  Mat coeffs;                       // d x d shared coefficient table c_{k,j}
  Mat beta;                         // d x |labels|, beta_{k,a} = <u_k^i|A_a|i_L> (unweighted)
  Mat codewords;                    // N_in x l, columns |i_L>
  std::vector<Mat> basis;           // per outcome k: N x l block B_k
  std::vector<Unitary> unitaries;   // U_k with U_k u_k^i = |0..0 i>
  double tolerance = 0;

  // audited deviations, filled by synthesize
  double orthonormality_dev = 0;
  double beta_dev = 0;
  double span_residual = 0;
  double unitary_action_dev = 0;
  double completeness_dev = 0;

  int l() const { return code_dims.l; }

  const Mat& basis_block(int k) const { return basis.at(static_cast<std::size_t>(k - 1)); }

  StateVector basis_vector(int k, int i) const {
    return {error_dims, Vec(basis_block(k).col(i))};
  }

  const Unitary& unitary(int k) const { return unitaries.at(static_cast<std::size_t>(k - 1)); }

  /// All u_k^i stacked column-wise: W = [B_1 | ... | B_d], N x (d l).
  Mat stacked_basis() const {
    Mat w(error_dims.dim(), static_cast<Index>(d) * l());
    for (int k = 1; k <= d; ++k) w.middleCols(static_cast<Index>(k - 1) * l(), l()) = basis_block(k);
    return w;
  }

  /// M_k = sum_i |u_k^i><u_k^i|, materialized densely.
  Operator measurement(int k) const {
    const Mat& b = basis_block(k);
    return Operator::from_dense(error_dims, error_dims, Mat(b * b.adjoint()));
  }

  /// M_empty = I - W W^dag, materialized densely.
  Operator measurement_empty() const {
    Mat w = stacked_basis();
    Mat m = Mat::Identity(error_dims.dim(), error_dims.dim()) - w * w.adjoint();
    return Operator::from_dense(error_dims, error_dims, m);
  }

  /// Logical amplitudes of a state in the codespace.
  Vec logical_amplitudes(const StateVector& encoded, double tol = 1e-9) const {
    if (encoded.dims != code_dims)
      throw std::invalid_argument("logical_amplitudes: dimension mismatch");
    Vec alphas = codewords.adjoint() * encoded.amp;
    if (std::abs(alphas.squaredNorm() - encoded.amp.squaredNorm()) > tol)
      throw std::invalid_argument("logical_amplitudes: state lies outside the codespace");
    return alphas;
  }
};

namespace detail {

/// max-abs entry of (M_empty^dag M_empty + sum_k M_k^dag M_k) - I for the
/// projector family defined by the isometry W. With G = W^dag W the whole
/// expression collapses to I + W (G + blockdiag(G) - 2I) W^dag, so it is
/// evaluated in row chunks without ever holding an N x N matrix.
inline double measurement_completeness_dev(const Mat& w, int l) {
  const Index cols = w.cols();
  if (cols == 0) return 0.0;
  Mat g = w.adjoint() * w;
  Mat delta = g - 2.0 * Mat::Identity(cols, cols);
  for (Index k = 0; k < cols / l; ++k)
    delta.block(k * l, k * l, l, l) += g.block(k * l, k * l, l, l);
  Mat wd = w * delta;  // N x cols
  double dev = 0.0;
  const Index chunk = 512;
  for (Index r0 = 0; r0 < w.rows(); r0 += chunk) {
    const Index rows = std::min(chunk, w.rows() - r0);
    Mat block = wd.middleRows(r0, rows) * w.adjoint();
    dev = std::max(dev, max_abs(block));
  }
  return dev;
}

}  // namespace detail

/// Builds the recovery plan. The orthonormal basis comes from Gram-Schmidt
/// over the images A_a|0_L> taken in element order; the same coefficients are
/// then replayed for every logical index (they are i-independent under the KL
/// condition, which is verified on the operator directions up front). Every
/// element of the set participates regardless of its weight, so the plan
/// depends only on the operator directions, never on the error statistics.
inline RecoveryPlan synthesize(const LogicalCodewords& cw, const KrausSet& ks, double tol = 1e-9) {
  if (cw.dims() != ks.in_dims()) throw std::invalid_argument("synthesize: dimension mismatch");
  const int l = cw.code.l;
  const Index n_out = ks.out_dims().dim();

  const KLReport kl = kl_check_directions(cw, ks, tol);
  if (!kl.satisfied)
    throw KlViolation("synthesize: KL condition violated (off-diagonal " +
                      std::to_string(kl.max_offdiag_logical) + ", diagonal spread " +
                      std::to_string(kl.max_diag_spread) + ", tol " + std::to_string(tol) + ")");

  // images[a][i] = A_a |i_L>
  std::vector<std::vector<Vec>> images = detail::kraus_images(cw, ks, /*weighted=*/false);

  std::vector<StateVector> generators;
  generators.reserve(images.size());
  for (const auto& per_i : images) generators.push_back({ks.out_dims(), per_i.front()});
  OrthonormalFamily family = gram_schmidt(generators, tol);
  const int d = family.size();
  if (d == 0) throw SynthesisError("synthesize: channel images span nothing");

  RecoveryPlan plan;
  plan.code_dims = cw.dims();
  plan.error_dims = ks.out_dims();
  plan.d = d;
  plan.labels = ks.labels();
  plan.selected = family.selected;
  plan.coeffs = family.coeffs;
  plan.tolerance = tol;
  plan.codewords = Mat(cw.dims().dim(), l);
  for (int i = 0; i < l; ++i) plan.codewords.col(i) = cw.vectors[static_cast<std::size_t>(i)].amp;

  // rebuild u_k^i for every i from the shared coefficients
  plan.basis.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    Mat block = Mat::Zero(n_out, l);
    for (int i = 0; i < l; ++i) {
      Vec u = Vec::Zero(n_out);
      for (int j = 0; j <= k; ++j)
        u += plan.coeffs(k, j) *
             images[static_cast<std::size_t>(plan.selected[static_cast<std::size_t>(j)])]
                   [static_cast<std::size_t>(i)];
      block.col(i) = u;
    }
    plan.basis.push_back(std::move(block));
  }

  // <u_k^i | u_k'^i'> = delta delta across the whole stacked family
  Mat w = plan.stacked_basis();
  plan.orthonormality_dev = max_abs(Mat(w.adjoint() * w - Mat::Identity(w.cols(), w.cols())));
  if (plan.orthonormality_dev > 10 * tol)
    throw SynthesisError("synthesize: rebuilt basis not orthonormal (deviation " +
                         std::to_string(plan.orthonormality_dev) +
                         "); rank structure differs across logical indices");

  // beta table and its i-independence
  plan.beta = Mat::Zero(d, ks.size());
  for (int k = 1; k <= d; ++k)
    for (int a = 0; a < ks.size(); ++a) {
      cplx ref = 0.0;
      for (int i = 0; i < l; ++i) {
        const cplx val = plan.basis_block(k).col(i).dot(
            images[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)]);
        if (i == 0)
          ref = val;
        else
          plan.beta_dev = std::max(plan.beta_dev, std::abs(val - ref));
      }
      plan.beta(k - 1, a) = ref;
    }
  if (plan.beta_dev > 10 * tol)
    throw SynthesisError("synthesize: coefficients depend on the logical index (deviation " +
                         std::to_string(plan.beta_dev) + ")");

  // every image must lie in the span of its logical slice; this is what makes
  // the empty outcome unreachable on channel outputs
  for (int a = 0; a < ks.size(); ++a)
    for (int i = 0; i < l; ++i) {
      const Vec& g = images[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
      Vec resid = g;
      for (int k = 1; k <= d; ++k) {
        const auto col = plan.basis_block(k).col(i);
        resid -= col.dot(g) * col;
      }
      plan.span_residual = std::max(plan.span_residual, resid.norm());
    }
  if (plan.span_residual > 10 * tol)
    throw SynthesisError("synthesize: channel image escapes the syndrome span");

  // U_k mapping u_k^i -> |0..0 i>
  std::vector<StateVector> targets;
  targets.reserve(static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i) targets.push_back(StateVector::basis(ks.out_dims(), i));
  plan.unitaries.reserve(static_cast<std::size_t>(d));
  for (int k = 1; k <= d; ++k) {
    std::vector<StateVector> fam;
    fam.reserve(static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i) fam.push_back(plan.basis_vector(k, i));
    Unitary u = complete_to_unitary(fam, targets, 10 * tol);
    for (int i = 0; i < l; ++i) {
      Vec mapped = u.apply(Vec(plan.basis_block(k).col(i)));
      plan.unitary_action_dev = std::max(
          plan.unitary_action_dev, (mapped - targets[static_cast<std::size_t>(i)].amp).norm());
    }
    plan.unitaries.push_back(std::move(u));
  }
  if (plan.unitary_action_dev > 10 * tol)
    throw SynthesisError("synthesize: correcting unitary action check failed");

  plan.completeness_dev = detail::measurement_completeness_dev(w, l);
  if (plan.completeness_dev > std::max(tol, 1e-9))
    throw SynthesisError("synthesize: measurement completeness check failed");

  return plan;
}

/// p(k) = sum_a weight_a |beta_{k,a}|^2. Independent of the encoded state.
inline std::vector<double> predicted_probs(const RecoveryPlan& plan, const KrausSet& ks) {
  if (plan.labels != ks.labels())
    throw std::invalid_argument("predicted_probs: plan was built for a different Kraus set");
  std::vector<double> p(static_cast<std::size_t>(plan.d), 0.0);
  for (int k = 0; k < plan.d; ++k)
    for (int a = 0; a < ks.size(); ++a)
      p[static_cast<std::size_t>(k)] += ks.element(a).weight * std::norm(plan.beta(k, a));
  return p;
}

/// One row per outcome k = 1..d plus the empty outcome (outcome = 0).
/// post_state is the recovered single qudit; for the empty outcome (and for
/// unreached outcomes) it is the zero vector with fidelity 0.
struct DecodeResult {
  int outcome = 0;
  StateVector post_state;
  double probability = 0;
  double fidelity = 0;
};

/// Measures the corrupted state, applies the correcting unitary per outcome
/// and discards the leading n'-1 qudits. The per-outcome recovered state is
/// computed from the rank-l post-measurement block, so nothing of size N^2 is
/// formed beyond the input itself.
inline std::vector<DecodeResult> decode_exact(const RecoveryPlan& plan,
                                              const DensityMatrix& corrupted,
                                              const StateVector& reference) {
  if (corrupted.dims != plan.error_dims)
    throw std::invalid_argument("decode_exact: corrupted state has wrong dimensions");
  if (reference.dims.n != 1 || reference.dims.l != plan.l())
    throw std::invalid_argument("decode_exact: reference must be a single qudit");
  const int l = plan.l();

  std::vector<DecodeResult> results;
  results.reserve(static_cast<std::size_t>(plan.d) + 1);
  double total = 0.0;
  for (int k = 1; k <= plan.d; ++k) {
    const Mat& b = plan.basis_block(k);
    Mat s = b.adjoint() * corrupted.rho * b;  // l x l
    const double pk = s.trace().real();
    total += pk;
    DecodeResult r;
    r.outcome = k;
    r.probability = pk;
    r.post_state = StateVector::zero(QuditDims(l, 1));
    if (pk > 1e-14) {
      // U_k (B_k s B_k^dag) U_k^dag followed by the partial trace over the
      // leading qudits, evaluated block-wise on the l columns of U_k B_k.
      Mat y(b.rows(), l);
      for (int i = 0; i < l; ++i) y.col(i) = plan.unitary(k).apply(Vec(b.col(i)));
      Mat rho_out = Mat::Zero(l, l);
      for (Index g = 0; g < y.rows() / l; ++g) {
        Mat yg = y.middleRows(g * l, l);
        rho_out += yg * s * yg.adjoint();
      }
      rho_out /= pk;
      Eigen::SelfAdjointEigenSolver<Mat> es(rho_out);
      Vec principal = es.eigenvectors().col(l - 1);
      Index lead;
      principal.cwiseAbs().maxCoeff(&lead);
      const cplx ph = principal(lead) / std::abs(principal(lead));
      r.post_state = StateVector{QuditDims(l, 1), Vec(principal / ph)};
      r.fidelity = fidelity(reference, DensityMatrix{QuditDims(l, 1), rho_out});
    }
    results.push_back(std::move(r));
  }

  DecodeResult empty;
  empty.outcome = 0;
  empty.probability = corrupted.rho.trace().real() - total;
  empty.post_state = StateVector::zero(QuditDims(l, 1));
  results.push_back(std::move(empty));
  return results;
}

struct TrajectoryLogEntry {
  int trial = 0;
  int element = 0;  // Kraus branch index
  int outcome = 0;  // 1..d, 0 = empty
  double fidelity = 0;
};

/// Outcome statistics of one simulated decode run. For exact mode,
/// outcome_probs are the exact probabilities; for sampled mode they are the
/// empirical frequencies and counts/log are filled in.
struct SimReport {
  enum class Mode { exact, sampled };
  Mode mode = Mode::exact;
  int d = 0;
  std::vector<double> outcome_probs;     // indexed k-1
  std::vector<double> outcome_fidelity;  // indexed k-1 (0 where unreached)
  double p_empty = 0;
  double mean_fidelity = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> counts;  // sampled mode, indexed k-1
  std::int64_t counts_empty = 0;
  std::vector<TrajectoryLogEntry> log;  // sampled mode
  // The insertion Kraus form assumes a pure pre-error state; set when it was
  // applied to a mixed input anyway.
  bool insertion_on_mixed_input = false;
};

namespace detail {

inline SimReport report_from_decode(const RecoveryPlan& plan,
                                    const std::vector<DecodeResult>& results) {
  SimReport rep;
  rep.mode = SimReport::Mode::exact;
  rep.d = plan.d;
  rep.outcome_probs.assign(static_cast<std::size_t>(plan.d), 0.0);
  rep.outcome_fidelity.assign(static_cast<std::size_t>(plan.d), 0.0);
  for (const auto& r : results) {
    if (r.outcome == 0) {
      rep.p_empty = r.probability;
      continue;
    }
    rep.outcome_probs[static_cast<std::size_t>(r.outcome - 1)] = r.probability;
    rep.outcome_fidelity[static_cast<std::size_t>(r.outcome - 1)] = r.fidelity;
    rep.mean_fidelity += r.probability * r.fidelity;
  }
  return rep;
}

}  // namespace detail

/// Full-density-matrix simulation of error + decode for a pure encoded state.
inline SimReport simulate_exact(const RecoveryPlan& plan, const KrausSet& ks,
                                const StateVector& encoded, const StateVector& reference) {
  const DensityMatrix corrupted = apply_channel_exact(encoded, ks);
  return detail::report_from_decode(plan, decode_exact(plan, corrupted, reference));
}

/// As above for a mixed pre-error state; flags the insertion purity caveat.
inline SimReport simulate_exact(const RecoveryPlan& plan, const KrausSet& ks,
                                const DensityMatrix& pre_error, const StateVector& reference) {
  const DensityMatrix corrupted = apply_channel_exact(pre_error, ks);
  SimReport rep = detail::report_from_decode(plan, decode_exact(plan, corrupted, reference));
  rep.insertion_on_mixed_input =
      ks.kind() == ChannelKind::insertion && pre_error.purity() < 1.0 - 1e-9;
  return rep;
}

/// Monte-Carlo decode: per trial, one Kraus trajectory (pure state), then the
/// exact measurement rule on that pure state -- equivalent by linearity to
/// measuring the mixed channel output. Per-branch measurement tables are
/// cached across trials; trial t draws from a generator seeded seed + t.
inline SimReport decode_sampled(const RecoveryPlan& plan, const StateVector& encoded,
                                const StateVector& reference, const KrausSet& ks, int trials,
                                std::uint64_t seed) {
  if (trials <= 0) throw std::invalid_argument("decode_sampled: trials must be positive");
  TrajectorySampler sampler(encoded, ks);
  const int l = plan.l();

  struct BranchTable {
    bool ready = false;
    std::vector<double> probs;  // size d+1, last entry = empty outcome
    std::vector<double> fid;    // size d
  };
  std::vector<BranchTable> cache(static_cast<std::size_t>(ks.size()));

  auto branch_table = [&](int a) -> const BranchTable& {
    auto& tab = cache[static_cast<std::size_t>(a)];
    if (tab.ready) return tab;
    const StateVector v = sampler.draw(a).state;
    tab.probs.assign(static_cast<std::size_t>(plan.d) + 1, 0.0);
    tab.fid.assign(static_cast<std::size_t>(plan.d), 0.0);
    double total = 0.0;
    for (int k = 1; k <= plan.d; ++k) {
      Vec w = plan.basis_block(k).adjoint() * v.amp;
      const double qk = w.squaredNorm();
      tab.probs[static_cast<std::size_t>(k - 1)] = qk;
      total += qk;
      if (qk > 1e-14) {
        Vec big = plan.unitary(k).apply(Vec(plan.basis_block(k) * (w / std::sqrt(qk))));
        StateVector recovered{QuditDims(l, 1), Vec(big.head(l))};
        tab.fid[static_cast<std::size_t>(k - 1)] = fidelity(reference, recovered);
      }
    }
    tab.probs.back() = std::max(0.0, 1.0 - total);
    tab.ready = true;
    return tab;
  };

  SimReport rep;
  rep.mode = SimReport::Mode::sampled;
  rep.d = plan.d;
  rep.trials = trials;
  rep.seed = seed;
  rep.counts.assign(static_cast<std::size_t>(plan.d), 0);
  rep.outcome_fidelity.assign(static_cast<std::size_t>(plan.d), 0.0);
  rep.log.reserve(static_cast<std::size_t>(trials));

  double fid_sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(t));
    const double r1 = TrajectorySampler::uniform01(rng);
    double acc = 0.0;
    int branch = -1;
    const auto& probs = sampler.probabilities();
    for (std::size_t a = 0; a < probs.size(); ++a) {
      if (probs[a] <= 0.0) continue;
      acc += probs[a];
      branch = static_cast<int>(a);
      if (r1 < acc) break;
    }
    const BranchTable& tab = branch_table(branch);
    const double r2 = TrajectorySampler::uniform01(rng);
    double acc2 = 0.0;
    int outcome = 0;
    for (int k = 1; k <= plan.d + 1; ++k) {
      const double q = tab.probs[static_cast<std::size_t>(k - 1)];
      if (q <= 0.0) continue;
      acc2 += q;
      outcome = (k == plan.d + 1) ? 0 : k;
      if (r2 < acc2) break;
    }
    double f = 0.0;
    if (outcome > 0) {
      ++rep.counts[static_cast<std::size_t>(outcome - 1)];
      f = tab.fid[static_cast<std::size_t>(outcome - 1)];
      rep.outcome_fidelity[static_cast<std::size_t>(outcome - 1)] = f;
    } else {
      ++rep.counts_empty;
    }
    fid_sum += f;
    rep.log.push_back({t, branch, outcome, f});
  }

  rep.mean_fidelity = fid_sum / trials;
  rep.outcome_probs.assign(static_cast<std::size_t>(plan.d), 0.0);
  for (int k = 0; k < plan.d; ++k)
    rep.outcome_probs[static_cast<std::size_t>(k)] =
        static_cast<double>(rep.counts[static_cast<std::size_t>(k)]) / trials;
  rep.p_empty = static_cast<double>(rep.counts_empty) / trials;
  return rep;
}

/// Overload deriving the reference from the encoded state's logical
/// amplitudes (requires the state to lie in the codespace).
inline SimReport decode_sampled(const RecoveryPlan& plan, const StateVector& encoded,
                                const KrausSet& ks, int trials, std::uint64_t seed) {
  Vec alphas = plan.logical_amplitudes(encoded);
  StateVector reference{QuditDims(plan.l(), 1), std::move(alphas)};
  return decode_sampled(plan, encoded, reference, ks, trials, seed);
}

}  // namespace qindel
