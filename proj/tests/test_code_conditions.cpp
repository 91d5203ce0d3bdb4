#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "paper_values.hpp"
#include "qindel/code_conditions.hpp"
#include "qindel/example_codes.hpp"
#include "test_support.hpp"

using namespace qindel;
using namespace qindel::testing;

TEST_CASE("CodeSpec validation") {
  REQUIRE_THROWS_AS(CodeSpec::create(1, 2, {{"00"}}), std::invalid_argument);
  REQUIRE_THROWS_AS(CodeSpec::create(2, 2, {{"00"}}), std::invalid_argument);       // one class
  REQUIRE_THROWS_AS(CodeSpec::create(2, 2, {{"00"}, {}}), std::invalid_argument);   // empty class
  REQUIRE_THROWS_AS(CodeSpec::create(2, 2, {{"00"}, {"012"}}), std::invalid_argument);
  REQUIRE_THROWS_AS(CodeSpec::create(2, 2, {{"00"}, {"02"}}), std::invalid_argument);
  const CodeSpec ok = CodeSpec::create(2, 2, {{"11", "00", "11"}, {"01"}});
  REQUIRE(ok.class_at(0) == std::vector<std::string>{"00", "11"});  // sorted, deduped
}

TEST_CASE("delta_minus matches the published shadow table") {
  const CodeSpec code = example_code_l3n6();
  REQUIRE(delta_minus(code.class_at(0), 1, 0) == std::vector<std::string>{"01122"});
  REQUIRE(delta_minus(code.class_at(2), 5, 2) == std::vector<std::string>{"22002"});
  const auto& cells = table1_cells();
  for (int i = 0; i < 3; ++i)
    for (int p = 1; p <= 6; ++p)
      for (int b = 0; b < 3; ++b) {
        const auto got = delta_minus(code.class_at(i), p, b);
        REQUIRE(got ==
                std::vector<std::string>{
                    cells[static_cast<std::size_t>(i)][static_cast<std::size_t>(p - 1)]
                         [static_cast<std::size_t>(b)]});
      }
}

TEST_CASE("delta_minus with no matching symbol is empty") {
  REQUIRE(delta_minus({"000"}, 1, 1).empty());
}

TEST_CASE("delta_plus basics") {
  REQUIRE(delta_plus({"00"}, 1, 0) == std::vector<std::string>{"000"});
  const CodeSpec code = example_code_l3n6();
  const auto grown = delta_plus(code.class_at(0), 4, 1);
  REQUIRE(std::find(grown.begin(), grown.end(), "0011122") != grown.end());
}

TEST_CASE("insertion at a fixed slot is injective") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const int l = 2 + static_cast<int>(rng() % 2);
    const int n = 2 + static_cast<int>(rng() % 3);
    std::set<std::string> set;
    const int size = 1 + static_cast<int>(rng() % 6);
    while (static_cast<int>(set.size()) < size) set.insert(random_string(l, n, rng));
    std::vector<std::string> a(set.begin(), set.end());
    for (int p = 1; p <= n + 1; ++p)
      for (int b = 0; b < l; ++b) REQUIRE(delta_plus(a, p, b).size() == a.size());
  }
}

TEST_CASE("the example code satisfies the deletion conditions with ratio 1/3") {
  const auto report = check_del_conditions(example_code_l3n6());
  REQUIRE(report.satisfied);
  REQUIRE(report.violations.empty());
  int nonzero = 0;
  for (const auto& [key, ratio] : report.ratio_table) {
    if (ratio.num == 0) continue;
    ++nonzero;
    REQUIRE(ratio == Ratio{1, 3});
  }
  // per class slice: three key pairs per (position pair-group, symbol)
  REQUIRE(nonzero == 27);
}

TEST_CASE("the example code satisfies the insertion conditions") {
  const auto report = check_ins_conditions(example_code_l3n6());
  REQUIRE(report.satisfied);
}

TEST_CASE("identical classes violate the distance condition") {
  const CodeSpec code = CodeSpec::create(2, 2, {{"00"}, {"00"}});
  const auto report = check_del_conditions(code);
  REQUIRE_FALSE(report.satisfied);
  bool found_distance = false;
  for (const auto& v : report.violations)
    if (v.kind == Violation::Kind::distance) {
      found_distance = true;
      REQUIRE(v.witness == "0");
    }
  REQUIRE(found_distance);
}

TEST_CASE("swapping strings across classes breaks the example code") {
  CodeSpec code = example_code_l3n6();
  // move 001122 into A_1 and 002211 into A_0
  auto classes = code.classes;
  classes[0] = {"002211", "112200", "220011"};
  classes[1] = {"001122", "110022", "221100"};
  const CodeSpec mutated = CodeSpec::create(3, 6, classes);
  const auto report = check_del_conditions(mutated);
  REQUIRE_FALSE(report.satisfied);
  REQUIRE_FALSE(report.violations.empty());
}

TEST_CASE("violation reporting is capped") {
  const CodeSpec code = CodeSpec::create(2, 2, {{"00", "01", "10", "11"}, {"00", "01", "10", "11"}});
  const auto report = check_del_conditions(code, 5);
  REQUIRE_FALSE(report.satisfied);
  REQUIRE(report.violations.size() == 5);
}

TEST_CASE("deletion and insertion conditions agree on random codes") {
  const auto corpus = random_code_corpus(300, 424242);
  for (const auto& code : corpus) {
    const bool del = check_del_conditions(code).satisfied;
    const bool ins = check_ins_conditions(code).satisfied;
    REQUIRE(del == ins);
  }
}

TEST_CASE("bijection witness on the example code and random sets") {
  const CodeSpec code = example_code_l3n6();
  REQUIRE(bijection_witness(code.class_at(0), 1, 0, 3, 1));
  REQUIRE_THROWS_AS(bijection_witness(code.class_at(0), 3, 0, 1, 1), std::invalid_argument);

  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 40; ++rep) {
    const int l = 2 + static_cast<int>(rng() % 2);
    const int n = 2 + static_cast<int>(rng() % 4);
    std::set<std::string> set;
    const int size = 1 + static_cast<int>(rng() % 5);
    while (static_cast<int>(set.size()) < size) set.insert(random_string(l, n, rng));
    std::vector<std::string> a(set.begin(), set.end());
    for (int p1 = 1; p1 <= n; ++p1)
      for (int p2 = p1; p2 <= n; ++p2)
        for (int b1 = 0; b1 < l; ++b1)
          for (int b2 = 0; b2 < l; ++b2) REQUIRE(bijection_witness(a, p1, b1, p2, b2));
  }
}

TEST_CASE("same-position insertion intersections") {
  const CodeSpec code = example_code_l3n6();
  const auto& a = code.class_at(0);
  for (int p = 1; p <= 7; ++p) {
    REQUIRE(intersection_size(delta_plus(a, p, 0), delta_plus(a, p, 1)) == 0);
    REQUIRE(intersection_size(delta_plus(a, p, 1), delta_plus(a, p, 1)) == a.size());
  }
}

TEST_CASE("canonical key is invariant under the symmetry group") {
  const CodeSpec code = example_code_l3n6();
  const std::string base = canonical_key(code);

  // symbol permutation 0->1->2->0
  auto shift = [](std::string s) {
    for (auto& c : s) c = static_cast<char>('0' + (c - '0' + 1) % 3);
    return s;
  };
  std::vector<std::vector<std::string>> mapped;
  for (const auto& cls : code.classes) {
    std::vector<std::string> m;
    for (const auto& s : cls) m.push_back(shift(s));
    mapped.push_back(std::move(m));
  }
  REQUIRE(canonical_key(CodeSpec::create(3, 6, mapped)) == base);

  std::vector<std::vector<std::string>> reversed;
  for (const auto& cls : code.classes) {
    std::vector<std::string> m;
    for (std::string s : cls) {
      std::reverse(s.begin(), s.end());
      m.push_back(std::move(s));
    }
    reversed.push_back(std::move(m));
  }
  REQUIRE(canonical_key(CodeSpec::create(3, 6, reversed)) == base);

  auto rotated = code.classes;
  std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
  REQUIRE(canonical_key(CodeSpec::create(3, 6, rotated)) == base);
}

TEST_CASE("no single-qudit or two-qubit code survives the checks") {
  SearchPolicy policy;
  policy.kind = SearchPolicy::Kind::exhaustive;
  for (int size = 1; size <= 2; ++size) {
    policy.class_size = size;
    REQUIRE(search_codes_collect(2, 1, policy, 10).empty());
  }
  for (int size = 1; size <= 4; ++size) {
    policy.class_size = size;
    REQUIRE(search_codes_collect(2, 2, policy, 10).empty());
  }
}

TEST_CASE("search emits only valid, canonically distinct codes") {
  SearchPolicy policy;  // cyclic orbits
  const auto found = search_codes_collect(3, 3, policy, 50);
  std::set<std::string> keys;
  for (const auto& code : found) {
    REQUIRE(check_del_conditions(code).satisfied);
    REQUIRE(keys.insert(canonical_key(code)).second);
  }
}

TEST_CASE("search limit zero yields an empty stream") {
  SearchPolicy policy;
  REQUIRE(search_codes_collect(3, 3, policy, 0).empty());
}

TEST_CASE("infeasible search parameters are rejected") {
  SearchPolicy policy;
  policy.kind = SearchPolicy::Kind::exhaustive;
  policy.class_size = 20;
  policy.max_candidates = 1000;
  REQUIRE_THROWS_AS(search_codes_collect(3, 4, policy, 1), std::invalid_argument);
}

TEST_CASE("cyclic search finds the example code") {
  bool found = false;
  std::size_t scanned = 0;
  const std::string target = canonical_key(example_code_l3n6());
  SearchPolicy policy;
  search_codes(3, 6, policy, 1000000, [&](const CodeSpec& code) {
    ++scanned;
    if (canonical_key(code) == target) {
      found = true;
      return false;
    }
    return true;
  });
  INFO("codes emitted before the example: " << scanned);
  REQUIRE(found);
}
