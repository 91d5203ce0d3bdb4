#pragma once

// Shared helpers for the test suites: deterministic random states and codes,
// and max-abs comparisons for complex matrices.

#include <random>
#include <string>
#include <vector>

#include "qindel/code_conditions.hpp"
#include "qindel/tensor_linalg.hpp"

namespace qindel::testing {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline cplx random_cplx(std::mt19937_64& rng) {
  return {2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0};
}

inline StateVector random_state(const QuditDims& dims, std::mt19937_64& rng) {
  Vec v(dims.dim());
  for (Index i = 0; i < v.size(); ++i) v(i) = random_cplx(rng);
  v /= v.norm();
  return {dims, std::move(v)};
}

/// Random normalized logical amplitudes (length l).
inline Vec random_alphas(int l, std::mt19937_64& rng) {
  Vec v(l);
  for (int i = 0; i < l; ++i) v(i) = random_cplx(rng);
  v /= v.norm();
  return v;
}

inline double max_abs_diff(const Mat& a, const Mat& b) { return max_abs(Mat(a - b)); }

inline std::string random_string(int l, int n, std::mt19937_64& rng) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (auto& c : s) c = static_cast<char>('0' + rng() % static_cast<std::uint64_t>(l));
  return s;
}

/// Random code with class sizes <= max_size. Most draws violate the
/// correctability conditions, which is the point for equivalence testing.
inline CodeSpec random_code(int l, int n, int max_size, std::mt19937_64& rng) {
  std::vector<std::vector<std::string>> classes;
  for (int i = 0; i < l; ++i) {
    const int size = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_size));
    std::vector<std::string> cls;
    for (int s = 0; s < size; ++s) cls.push_back(random_string(l, n, rng));
    classes.push_back(std::move(cls));
  }
  return CodeSpec::create(l, n, std::move(classes));
}

/// Code whose classes are orbits of the symbol shift x -> x+1 (mod l);
/// structured candidates that sometimes satisfy the conditions.
inline CodeSpec random_orbit_code(int l, int n, std::mt19937_64& rng) {
  std::vector<std::vector<std::string>> classes;
  for (int i = 0; i < l; ++i) {
    std::string s = random_string(l, n, rng);
    std::vector<std::string> orbit;
    for (int t = 0; t < l; ++t) {
      orbit.push_back(s);
      for (auto& c : s) c = static_cast<char>('0' + (c - '0' + 1) % l);
    }
    classes.push_back(std::move(orbit));
  }
  return CodeSpec::create(l, n, std::move(classes));
}

/// Mixed corpus for the equivalence properties; deterministic for a seed.
inline std::vector<CodeSpec> random_code_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CodeSpec> out;
  out.reserve(count);
  const int ls[] = {2, 3};
  const int ns[] = {2, 3, 4};
  while (out.size() < count) {
    const int l = ls[rng() % 2];
    const int n = ns[rng() % 3];
    if (rng() % 4 == 0)
      out.push_back(random_orbit_code(l, n, rng));
    else
      out.push_back(random_code(l, n, 4, rng));
  }
  return out;
}

}  // namespace qindel::testing
