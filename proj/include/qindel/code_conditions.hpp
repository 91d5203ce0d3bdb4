#pragma once

// Classical combinatorics of the code family: deletion/insertion shadows
// (Delta^- / Delta^+), the ratio and distance conditions, the classical
// deletion/insertion bijection, and brute-force code search. All arithmetic
// here is exact (strings and integer ratios, never floats).

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace qindel {

/// Classical description of the code: l classes of length-n strings over
/// {0,...,l-1}. Classes are stored sorted and deduplicated. Disjointness is a
/// checked condition, not a constructor invariant.
struct CodeSpec {
  int l = 2;
  int n = 1;
  std::vector<std::vector<std::string>> classes;

  static CodeSpec create(int l, int n, std::vector<std::vector<std::string>> classes) {
    if (l < 2) throw std::invalid_argument("CodeSpec: l must be >= 2");
    if (n < 1) throw std::invalid_argument("CodeSpec: n must be >= 1");
    if (static_cast<int>(classes.size()) != l)
      throw std::invalid_argument("CodeSpec: need exactly l classes");
    for (auto& cls : classes) {
      if (cls.empty()) throw std::invalid_argument("CodeSpec: empty class");
      for (const auto& s : cls) {
        if (static_cast<int>(s.size()) != n)
          throw std::invalid_argument("CodeSpec: string length differs from n: " + s);
        for (char c : s)
          if (c < '0' || c >= '0' + l)
            throw std::invalid_argument("CodeSpec: symbol out of range in " + s);
      }
      std::sort(cls.begin(), cls.end());
      cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
    }
    CodeSpec spec;
    spec.l = l;
    spec.n = n;
    spec.classes = std::move(classes);
    return spec;
  }

  const std::vector<std::string>& class_at(int i) const {
    return classes.at(static_cast<std::size_t>(i));
  }
};

/// Strings of A carrying symbol b at position p (1-based), with that symbol
/// removed. Result strings have length n-1; duplicates collapse.
inline std::vector<std::string> delta_minus(const std::vector<std::string>& a, int p, int b) {
  std::vector<std::string> out;
  const char symbol = static_cast<char>('0' + b);
  for (const auto& s : a) {
    if (p < 1 || p > static_cast<int>(s.size()))
      throw std::invalid_argument("delta_minus: position out of range");
    if (s[static_cast<std::size_t>(p - 1)] != symbol) continue;
    std::string t = s;
    t.erase(static_cast<std::size_t>(p - 1), 1);
    out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Every string of A with symbol b inserted before position p (1-based,
/// p in [n+1]). Insertion at a fixed slot is injective, so |result| = |A|.
inline std::vector<std::string> delta_plus(const std::vector<std::string>& a, int p, int b) {
  std::vector<std::string> out;
  const char symbol = static_cast<char>('0' + b);
  for (const auto& s : a) {
    if (p < 1 || p > static_cast<int>(s.size()) + 1)
      throw std::invalid_argument("delta_plus: position out of range");
    std::string t = s;
    t.insert(static_cast<std::size_t>(p - 1), 1, symbol);
    out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::size_t intersection_size(const std::vector<std::string>& a,
                                     const std::vector<std::string>& b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) ++ia;
    else if (*ib < *ia) ++ib;
    else { ++count; ++ia; ++ib; }
  }
  return count;
}

inline const std::string* first_common(const std::vector<std::string>& a,
                                       const std::vector<std::string>& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) ++ia;
    else if (*ib < *ia) ++ib;
    else return &*ia;
  }
  return nullptr;
}

/// Exact ratio num/den; numerator = intersection size, denominator = |A_i|.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  friend bool operator==(const Ratio& a, const Ratio& b) {
    return a.num * b.den == b.num * a.den;
  }
};

struct Violation {
  enum class Kind { ratio, distance };
  Kind kind = Kind::ratio;
  int p1 = 0, b1 = 0, p2 = 0, b2 = 0;
  int i = 0, j = 0;
  std::string witness;  // offending string for distance violations
};

struct ConditionReport {
  bool satisfied = true;
  // (p1,b1,p2,b2) -> common intra-class ratio, keyed with (p1,b1) <= (p2,b2)
  std::map<std::array<int, 4>, Ratio> ratio_table;
  std::vector<Violation> violations;
};

namespace detail {

using ShadowFn = std::vector<std::string> (*)(const std::vector<std::string>&, int, int);

inline ConditionReport check_conditions(const CodeSpec& code, int positions, ShadowFn shadow,
                                        std::size_t max_violations) {
  ConditionReport report;
  const int l = code.l;

  // shadows[i][(p-1)*l + b]
  std::vector<std::vector<std::vector<std::string>>> shadows(static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i) {
    auto& per_class = shadows[static_cast<std::size_t>(i)];
    per_class.reserve(static_cast<std::size_t>(positions) * l);
    for (int p = 1; p <= positions; ++p)
      for (int b = 0; b < l; ++b) per_class.push_back(shadow(code.class_at(i), p, b));
  }
  auto at = [&](int i, int p, int b) -> const std::vector<std::string>& {
    return shadows[static_cast<std::size_t>(i)][static_cast<std::size_t>((p - 1) * l + b)];
  };

  // C1 (ratio condition): |Delta_{p1,b1}(A_i) ^ Delta_{p2,b2}(A_i)| / |A_i|
  // constant over i, compared by exact cross-multiplication.
  for (int p1 = 1; p1 <= positions; ++p1)
    for (int b1 = 0; b1 < l; ++b1)
      for (int p2 = p1; p2 <= positions; ++p2)
        for (int b2 = (p2 == p1 ? b1 : 0); b2 < l; ++b2) {
          Ratio ref;
          for (int i = 0; i < l; ++i) {
            const auto size =
                static_cast<std::int64_t>(intersection_size(at(i, p1, b1), at(i, p2, b2)));
            const auto den = static_cast<std::int64_t>(code.class_at(i).size());
            if (i == 0) {
              ref = {size, den};
              report.ratio_table[{p1, b1, p2, b2}] = ref;
            } else if (!(Ratio{size, den} == ref)) {
              report.satisfied = false;
              if (report.violations.size() < max_violations)
                report.violations.push_back(
                    {Violation::Kind::ratio, p1, b1, p2, b2, 0, i, ""});
              else
                return report;
            }
          }
        }

  // C2 (distance condition): cross-class shadow intersections are all empty.
  for (int i = 0; i < l; ++i)
    for (int j = i + 1; j < l; ++j)
      for (int p1 = 1; p1 <= positions; ++p1)
        for (int b1 = 0; b1 < l; ++b1)
          for (int p2 = 1; p2 <= positions; ++p2)
            for (int b2 = 0; b2 < l; ++b2) {
              const std::string* hit = first_common(at(i, p1, b1), at(j, p2, b2));
              if (hit == nullptr) continue;
              report.satisfied = false;
              if (report.violations.size() < max_violations)
                report.violations.push_back(
                    {Violation::Kind::distance, p1, b1, p2, b2, i, j, *hit});
              else
                return report;
            }

  return report;
}

}  // namespace detail

/// Theorem conditions (C^del): necessary and sufficient for the uniform-
/// superposition code to correct single deletion errors.
inline ConditionReport check_del_conditions(const CodeSpec& code,
                                            std::size_t max_violations = 100) {
  return detail::check_conditions(code, code.n, &delta_minus, max_violations);
}

/// Theorem conditions (C^ins), with insertion shadows over p in [n+1].
inline ConditionReport check_ins_conditions(const CodeSpec& code,
                                            std::size_t max_violations = 100) {
  return detail::check_conditions(code, code.n + 1, &delta_plus, max_violations);
}

/// Checks the classical correspondence behind the deletion/insertion
/// equivalence on a single string set:
///   |Delta^-_{p1,b1} ^ Delta^-_{p2,b2}| == |Delta^+_{p1,b1} ^ Delta^+_{p2+1,b2}|
/// and, for insertions at one common position, the intersection is |A| when
/// b1 == b2 and empty otherwise.
inline bool bijection_witness(const std::vector<std::string>& a, int p1, int b1, int p2, int b2) {
  if (p1 > p2) throw std::invalid_argument("bijection_witness: requires p1 <= p2");
  if (a.empty()) throw std::invalid_argument("bijection_witness: empty set");
  std::vector<std::string> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const int n = static_cast<int>(sorted.front().size());

  const auto del_side = intersection_size(delta_minus(sorted, p1, b1), delta_minus(sorted, p2, b2));
  const auto ins_side =
      intersection_size(delta_plus(sorted, p1, b1), delta_plus(sorted, p2 + 1, b2));
  if (del_side != ins_side) return false;

  for (int p = 1; p <= n + 1; ++p) {
    const auto same_pos = intersection_size(delta_plus(sorted, p, b1), delta_plus(sorted, p, b2));
    const std::size_t expect = (b1 == b2) ? sorted.size() : 0;
    if (same_pos != expect) return false;
  }
  return true;
}

/// Minimal representative of the code under global symbol permutations and
/// coordinate reversal; classes are re-sorted after each transform so the
/// logical labelling is quotiented out.
inline std::string canonical_key(const CodeSpec& code) {
  std::vector<int> perm(static_cast<std::size_t>(code.l));
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  do {
    for (int rev = 0; rev < 2; ++rev) {
      std::vector<std::string> images;
      images.reserve(code.classes.size());
      for (const auto& cls : code.classes) {
        std::vector<std::string> mapped;
        mapped.reserve(cls.size());
        for (const auto& s : cls) {
          std::string t = s;
          for (auto& c : t) c = static_cast<char>('0' + perm[static_cast<std::size_t>(c - '0')]);
          if (rev) std::reverse(t.begin(), t.end());
          mapped.push_back(std::move(t));
        }
        std::sort(mapped.begin(), mapped.end());
        std::string joined;
        for (const auto& s : mapped) {
          joined += s;
          joined += ',';
        }
        images.push_back(std::move(joined));
      }
      std::sort(images.begin(), images.end());
      std::string key;
      for (const auto& s : images) {
        key += s;
        key += '|';
      }
      if (best.empty() || key < best) best = std::move(key);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

struct SearchPolicy {
  enum class Kind { exhaustive, cyclic_orbit };
  Kind kind = Kind::cyclic_orbit;
  int class_size = 0;  // exhaustive: subset size; cyclic_orbit: must be l (or 0)
  std::size_t max_candidates = 50'000'000;  // feasibility guard
};

namespace detail {

inline std::vector<std::string> all_strings(int l, int n) {
  std::vector<std::string> out;
  std::string cur(static_cast<std::size_t>(n), '0');
  while (true) {
    out.push_back(cur);
    int k = n - 1;
    while (k >= 0 && cur[static_cast<std::size_t>(k)] == '0' + l - 1) {
      cur[static_cast<std::size_t>(k)] = '0';
      --k;
    }
    if (k < 0) break;
    ++cur[static_cast<std::size_t>(k)];
  }
  return out;
}

inline double binomial_estimate(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 0; i < k; ++i) r *= static_cast<double>(n - i) / static_cast<double>(i + 1);
  return r;
}

// Enumerates index combinations i_0 < i_1 < ... < i_{k-1} in lexicographic
// order; sink returns false to stop.
inline void for_each_combination(std::size_t n, std::size_t k,
                                 const std::function<bool(const std::vector<std::size_t>&)>& sink) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    if (!sink(idx)) return;
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) return;
    ++idx[pos - 1];
    for (std::size_t q = pos; q < k; ++q) idx[q] = idx[q - 1] + 1;
  }
}

}  // namespace detail

/// Streams codes that pass check_del_conditions, in a deterministic order,
/// deduplicated by canonical form. The sink returns false to stop early.
/// Policies:
///  - cyclic_orbit: classes are orbits of the global symbol shift x -> x+1
///    (mod l); candidates are combinations of l distinct orbits.
///  - exhaustive: classes are size-`class_size` subsets of L^n; candidates are
///    combinations of l distinct subsets.
inline void search_codes(int l, int n, const SearchPolicy& policy, std::size_t limit,
                         const std::function<bool(const CodeSpec&)>& sink) {
  if (l < 2 || n < 1) throw std::invalid_argument("search_codes: need l >= 2, n >= 1");
  if (limit == 0) return;

  std::vector<std::vector<std::string>> pool;
  if (policy.kind == SearchPolicy::Kind::cyclic_orbit) {
    if (policy.class_size != 0 && policy.class_size != l)
      throw std::invalid_argument("search_codes: cyclic orbits have size l");
    std::set<std::string> seen;
    for (const auto& s : detail::all_strings(l, n)) {
      if (seen.count(s)) continue;
      std::vector<std::string> orbit;
      std::string cur = s;
      for (int t = 0; t < l; ++t) {
        orbit.push_back(cur);
        seen.insert(cur);
        for (auto& c : cur) c = static_cast<char>('0' + (c - '0' + 1) % l);
      }
      std::sort(orbit.begin(), orbit.end());
      pool.push_back(std::move(orbit));
    }
    std::sort(pool.begin(), pool.end());
  } else {
    const int s = policy.class_size;
    if (s < 1) throw std::invalid_argument("search_codes: exhaustive policy needs class_size >= 1");
    const auto strings = detail::all_strings(l, n);
    if (detail::binomial_estimate(strings.size(), static_cast<std::size_t>(s)) >
        static_cast<double>(policy.max_candidates))
      throw std::invalid_argument("search_codes: infeasible policy parameters");
    detail::for_each_combination(
        strings.size(), static_cast<std::size_t>(s), [&](const std::vector<std::size_t>& idx) {
          std::vector<std::string> cls;
          cls.reserve(idx.size());
          for (auto q : idx) cls.push_back(strings[q]);
          pool.push_back(std::move(cls));
          return true;
        });
  }

  if (detail::binomial_estimate(pool.size(), static_cast<std::size_t>(l)) >
      static_cast<double>(policy.max_candidates))
    throw std::invalid_argument("search_codes: infeasible policy parameters");

  // Per-candidate shadow tables, computed once. The distance condition over
  // all (p1,b1,p2,b2) pairs is equivalent to disjointness of the per-class
  // shadow unions, which turns the C2 screen into one set intersection per
  // class pair.
  const int cells = n * l;
  std::vector<std::vector<std::vector<std::string>>> shadows(pool.size());
  std::vector<std::vector<std::string>> unions(pool.size());
  for (std::size_t q = 0; q < pool.size(); ++q) {
    auto& per = shadows[q];
    per.reserve(static_cast<std::size_t>(cells));
    std::vector<std::string> all;
    for (int p = 1; p <= n; ++p)
      for (int b = 0; b < l; ++b) {
        per.push_back(delta_minus(pool[q], p, b));
        all.insert(all.end(), per.back().begin(), per.back().end());
      }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    unions[q] = std::move(all);
  }

  // pairwise C2 compatibility, tabulated when the pool is small enough
  const bool tabulate = pool.size() <= 4096;
  std::vector<char> pair_ok;
  if (tabulate) {
    pair_ok.assign(pool.size() * pool.size(), 0);
    for (std::size_t a = 0; a < pool.size(); ++a)
      for (std::size_t b = a + 1; b < pool.size(); ++b) {
        const char ok = first_common(unions[a], unions[b]) == nullptr ? 1 : 0;
        pair_ok[a * pool.size() + b] = ok;
        pair_ok[b * pool.size() + a] = ok;
      }
  }
  auto compatible = [&](std::size_t a, std::size_t b) {
    if (tabulate) return pair_ok[a * pool.size() + b] != 0;
    return first_common(unions[a], unions[b]) == nullptr;
  };

  auto ratio_consistent = [&](const std::vector<std::size_t>& idx) {
    for (int c1 = 0; c1 < cells; ++c1)
      for (int c2 = c1; c2 < cells; ++c2) {
        const auto ref_size = static_cast<std::int64_t>(intersection_size(
            shadows[idx[0]][static_cast<std::size_t>(c1)],
            shadows[idx[0]][static_cast<std::size_t>(c2)]));
        const auto ref_den = static_cast<std::int64_t>(pool[idx[0]].size());
        for (std::size_t i = 1; i < idx.size(); ++i) {
          const auto size = static_cast<std::int64_t>(intersection_size(
              shadows[idx[i]][static_cast<std::size_t>(c1)],
              shadows[idx[i]][static_cast<std::size_t>(c2)]));
          if (size * ref_den != ref_size * static_cast<std::int64_t>(pool[idx[i]].size()))
            return false;
        }
      }
    return true;
  };

  std::unordered_set<std::string> emitted;
  std::size_t count = 0;
  detail::for_each_combination(
      pool.size(), static_cast<std::size_t>(l), [&](const std::vector<std::size_t>& idx) {
        for (std::size_t a = 0; a < idx.size(); ++a)
          for (std::size_t b = a + 1; b < idx.size(); ++b)
            if (!compatible(idx[a], idx[b])) return true;
        if (!ratio_consistent(idx)) return true;
        std::vector<std::vector<std::string>> classes;
        classes.reserve(idx.size());
        for (auto q : idx) classes.push_back(pool[q]);
        CodeSpec code = CodeSpec::create(l, n, std::move(classes));
        if (!emitted.insert(canonical_key(code)).second) return true;
        ++count;
        if (!sink(code)) return false;
        return count < limit;
      });
}

inline std::vector<CodeSpec> search_codes_collect(int l, int n, const SearchPolicy& policy,
                                                  std::size_t limit) {
  std::vector<CodeSpec> out;
  search_codes(l, n, policy, limit, [&](const CodeSpec& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

}  // namespace qindel
