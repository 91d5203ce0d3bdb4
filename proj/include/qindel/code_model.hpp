#pragma once

// Logical codewords and encoder for a CodeSpec, plus the numerical
// Knill-Laflamme check for arbitrary (possibly non-square) Kraus sets.

#include <string>
#include <vector>

#include "qindel/code_conditions.hpp"
#include "qindel/indel_kraus.hpp"
#include "qindel/tensor_linalg.hpp"

namespace qindel {

/// |i_L> = (1/sqrt(|A_i|)) sum_{a in A_i} |a>
inline StateVector logical_codeword(const CodeSpec& code, int i) {
  if (i < 0 || i >= code.l) throw std::invalid_argument("logical_codeword: index out of range");
  const auto& cls = code.class_at(i);
  if (cls.empty()) throw std::invalid_argument("logical_codeword: empty class");
  StateVector v = StateVector::zero(QuditDims(code.l, code.n));
  const double amp = 1.0 / std::sqrt(static_cast<double>(cls.size()));
  for (const auto& s : cls) v.amp(index_of_string(s, code.l)) += amp;
  return v;
}

struct LogicalCodewords {
  CodeSpec code;
  std::vector<StateVector> vectors;

  static LogicalCodewords build(const CodeSpec& code) {
    LogicalCodewords cw;
    cw.code = code;
    cw.vectors.reserve(static_cast<std::size_t>(code.l));
    for (int i = 0; i < code.l; ++i) cw.vectors.push_back(logical_codeword(code, i));
    return cw;
  }

  QuditDims dims() const { return QuditDims(code.l, code.n); }
};

/// Enc(sum_i alpha_i |i>) = sum_i alpha_i |i_L>. Requires sum |alpha_i|^2 = 1.
inline StateVector encode(const LogicalCodewords& cw, const Vec& alphas) {
  if (alphas.size() != cw.code.l) throw std::invalid_argument("encode: need one amplitude per symbol");
  if (std::abs(alphas.squaredNorm() - 1.0) > 1e-9)
    throw std::invalid_argument("encode: amplitudes are not normalized");
  StateVector out = StateVector::zero(cw.dims());
  for (int i = 0; i < cw.code.l; ++i)
    out.amp += alphas(i) * cw.vectors[static_cast<std::size_t>(i)].amp;
  return out;
}

inline StateVector encode(const CodeSpec& code, const Vec& alphas) {
  return encode(LogicalCodewords::build(code), alphas);
}

/// Numerical verdict on <i_L| A_a^dag A_b |j_L> = mu_{a,b} delta_{i,j}.
struct KLReport {
  Mat mu;                          // |ks| x |ks|, mean over i of the diagonals
  double max_offdiag_logical = 0;  // worst |<i|A^dag A|j>| over i != j
  double max_diag_spread = 0;      // worst |<i|A^dag A|i> - mu| over i
  double tolerance = 0;
  bool satisfied = false;
};

namespace detail {

/// Shared core: images[a][i] must hold the (possibly weighted) vectors A_a|i_L>.
inline KLReport kl_check_images(const std::vector<std::vector<Vec>>& images, double tol) {
  const auto m = static_cast<int>(images.size());
  const auto l = static_cast<int>(images.front().size());
  KLReport report;
  report.tolerance = tol;
  report.mu = Mat::Zero(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      cplx diag_sum = 0.0;
      for (int i = 0; i < l; ++i)
        diag_sum += images[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)].dot(
            images[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)]);
      report.mu(a, b) = diag_sum / static_cast<double>(l);
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) {
          const cplx val = images[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)].dot(
              images[static_cast<std::size_t>(b)][static_cast<std::size_t>(j)]);
          if (i == j)
            report.max_diag_spread = std::max(report.max_diag_spread, std::abs(val - report.mu(a, b)));
          else
            report.max_offdiag_logical = std::max(report.max_offdiag_logical, std::abs(val));
        }
  report.satisfied = report.max_offdiag_logical <= tol && report.max_diag_spread <= tol;
  return report;
}

inline std::vector<std::vector<Vec>> kraus_images(const LogicalCodewords& cw, const KrausSet& ks,
                                                  bool weighted) {
  if (cw.dims() != ks.in_dims()) throw std::invalid_argument("kl_check: dimension mismatch");
  std::vector<std::vector<Vec>> images;
  images.reserve(static_cast<std::size_t>(ks.size()));
  for (const auto& e : ks.elements()) {
    std::vector<Vec> per_i;
    per_i.reserve(cw.vectors.size());
    for (const auto& v : cw.vectors) {
      Vec img = e.op.mat * v.amp;
      if (weighted) img *= std::sqrt(e.weight);
      per_i.push_back(std::move(img));
    }
    images.push_back(std::move(per_i));
  }
  return images;
}

}  // namespace detail

/// Computes the full l^2 |ks|^2 grid of inner products with weights folded
/// into the operators; mu_{a,b} is the mean of the l diagonal entries.
inline KLReport kl_check(const LogicalCodewords& cw, const KrausSet& ks, double tol = 1e-9) {
  return detail::kl_check_images(detail::kraus_images(cw, ks, /*weighted=*/true), tol);
}

/// Same check on the unweighted operator directions. This is the guard the
/// decoder construction needs: its basis is built from every element of the
/// set regardless of the error statistics.
inline KLReport kl_check_directions(const LogicalCodewords& cw, const KrausSet& ks,
                                    double tol = 1e-9) {
  return detail::kl_check_images(detail::kraus_images(cw, ks, /*weighted=*/false), tol);
}

}  // namespace qindel
