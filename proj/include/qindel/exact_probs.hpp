#pragma once

// Exact-rational route to the decoder's outcome distribution. For the indel
// channels every generator inner product is a shadow-intersection count over
// a class size, so the Gram matrix is rational; running Gram-Schmidt on the
// Gram matrix in rational arithmetic yields |beta_{k,a}|^2 and p(k) as exact
// fractions. Serves as an independent oracle for the floating-point decoder
// and feeds the CLI's fraction output.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "qindel/code_conditions.hpp"

namespace qindel {

using BigRat = boost::multiprecision::cpp_rational;

inline std::string to_fraction_string(const BigRat& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline double to_double(const BigRat& r) { return static_cast<double>(r); }

/// Gram matrix <A_a 0_L | A_b 0_L> of the deletion generators in (b, p) order:
/// |Delta^-_{pa,ba}(A_0) ^ Delta^-_{pb,bb}(A_0)| / |A_0|. Under the ratio
/// condition the choice of logical class does not matter.
inline std::vector<std::vector<BigRat>> deletion_gram(const CodeSpec& code) {
  const auto& cls = code.class_at(0);
  std::vector<std::vector<std::string>> shadows;
  for (int b = 0; b < code.l; ++b)
    for (int p = 1; p <= code.n; ++p) shadows.push_back(delta_minus(cls, p, b));
  const auto m = shadows.size();
  std::vector<std::vector<BigRat>> gram(m, std::vector<BigRat>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) {
      BigRat v(static_cast<std::int64_t>(intersection_size(shadows[a], shadows[b])),
               static_cast<std::int64_t>(cls.size()));
      gram[a][b] = v;
      gram[b][a] = v;
    }
  return gram;
}

/// Same for the insertion generators over p in [n+1]. The eigenbasis of the
/// inserted state drops out of these inner products, so the Gram matrix is
/// valid for any inserted sigma.
inline std::vector<std::vector<BigRat>> insertion_gram(const CodeSpec& code) {
  const auto& cls = code.class_at(0);
  std::vector<std::vector<std::string>> shadows;
  for (int b = 0; b < code.l; ++b)
    for (int p = 1; p <= code.n + 1; ++p) shadows.push_back(delta_plus(cls, p, b));
  const auto m = shadows.size();
  std::vector<std::vector<BigRat>> gram(m, std::vector<BigRat>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) {
      BigRat v(static_cast<std::int64_t>(intersection_size(shadows[a], shadows[b])),
               static_cast<std::int64_t>(cls.size()));
      gram[a][b] = v;
      gram[b][a] = v;
    }
  return gram;
}

/// Gram-Schmidt carried out purely on a rational Gram matrix. coeffs holds the
/// unnormalized expansion of each basis vector in the kept generators; the
/// normalized coefficient c_{k,j} equals coeffs[k][j] / sqrt(norm_sq[k]).
struct RationalPlan {
  int d = 0;
  std::vector<int> selected;
  std::vector<std::vector<BigRat>> coeffs;    // row k: length k+1
  std::vector<BigRat> norm_sq;                // ||u~_k||^2
  std::vector<std::vector<BigRat>> beta_sq;   // |beta_{k,a}|^2, d x m

  /// p(k) = sum_a w_a |beta_{k,a}|^2 as exact fractions.
  std::vector<BigRat> outcome_probs(const std::vector<BigRat>& weights) const {
    std::vector<BigRat> p(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      BigRat acc = 0;
      for (std::size_t a = 0; a < weights.size(); ++a)
        acc += weights[a] * beta_sq[static_cast<std::size_t>(k)][a];
      p[static_cast<std::size_t>(k)] = acc;
    }
    return p;
  }

  /// Normalized coefficient as a double, for comparison with the float plan.
  double coeff(int k, int j) const {
    return to_double(coeffs[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]) /
           std::sqrt(to_double(norm_sq[static_cast<std::size_t>(k)]));
  }
};

inline RationalPlan rational_plan(const std::vector<std::vector<BigRat>>& gram) {
  const auto m = gram.size();
  RationalPlan plan;
  for (std::size_t t = 0; t < m; ++t) {
    // h_r = <u~_r, g_t>
    std::vector<BigRat> h(plan.coeffs.size());
    for (std::size_t r = 0; r < plan.coeffs.size(); ++r) {
      BigRat acc = 0;
      for (std::size_t j = 0; j < plan.coeffs[r].size(); ++j)
        acc += plan.coeffs[r][j] * gram[static_cast<std::size_t>(plan.selected[j])][t];
      h[r] = acc;
    }
    BigRat residual_sq = gram[t][t];
    for (std::size_t r = 0; r < h.size(); ++r)
      residual_sq -= h[r] * h[r] / plan.norm_sq[r];
    if (residual_sq == 0) continue;  // exactly dependent

    std::vector<BigRat> row(plan.coeffs.size() + 1);
    row.back() = 1;
    for (std::size_t r = 0; r < h.size(); ++r) {
      const BigRat f = h[r] / plan.norm_sq[r];
      for (std::size_t j = 0; j < plan.coeffs[r].size(); ++j) row[j] -= f * plan.coeffs[r][j];
    }
    plan.coeffs.push_back(std::move(row));
    plan.norm_sq.push_back(residual_sq);
    plan.selected.push_back(static_cast<int>(t));
  }
  plan.d = static_cast<int>(plan.coeffs.size());

  plan.beta_sq.assign(static_cast<std::size_t>(plan.d), std::vector<BigRat>(m));
  for (int k = 0; k < plan.d; ++k)
    for (std::size_t a = 0; a < m; ++a) {
      BigRat bt = 0;
      for (std::size_t j = 0; j < plan.coeffs[static_cast<std::size_t>(k)].size(); ++j)
        bt += plan.coeffs[static_cast<std::size_t>(k)][j] *
              gram[static_cast<std::size_t>(plan.selected[j])][a];
      plan.beta_sq[static_cast<std::size_t>(k)][a] =
          bt * bt / plan.norm_sq[static_cast<std::size_t>(k)];
    }
  return plan;
}

/// Element weights in (b, p) order for the deletion channel.
inline std::vector<BigRat> deletion_weights(int n, int l, const std::vector<BigRat>& p_minus) {
  if (static_cast<int>(p_minus.size()) != n)
    throw std::invalid_argument("deletion_weights: distribution length must be n");
  std::vector<BigRat> w;
  w.reserve(static_cast<std::size_t>(n) * l);
  for (int b = 0; b < l; ++b)
    for (int p = 1; p <= n; ++p) w.push_back(p_minus[static_cast<std::size_t>(p - 1)]);
  return w;
}

/// Element weights in (b, p) order for the insertion channel.
inline std::vector<BigRat> insertion_weights(int n, const std::vector<BigRat>& p_plus,
                                             const std::vector<BigRat>& p_b) {
  if (static_cast<int>(p_plus.size()) != n + 1)
    throw std::invalid_argument("insertion_weights: distribution length must be n+1");
  std::vector<BigRat> w;
  w.reserve(p_plus.size() * p_b.size());
  for (std::size_t b = 0; b < p_b.size(); ++b)
    for (std::size_t p = 0; p < p_plus.size(); ++p) w.push_back(p_plus[p] * p_b[b]);
  return w;
}

/// Parses "3/4", "0.25" or "1" into an exact rational.
inline BigRat parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    boost::multiprecision::cpp_int num(text.substr(0, slash));
    boost::multiprecision::cpp_int den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
    return BigRat(num, den);
  }
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const auto frac_len = text.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
      throw std::invalid_argument("parse_rational: malformed number " + text);
    boost::multiprecision::cpp_int num(digits);
    boost::multiprecision::cpp_int den = 1;
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    return BigRat(num, den);
  }
  return BigRat(boost::multiprecision::cpp_int(text), 1);
}

}  // namespace qindel
