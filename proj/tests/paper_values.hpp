#pragma once

// Frozen reference data for the bundled l=3, n=6 example code: the full
// deletion-shadow table, the deletion decoder basis, the insertion decoder
// coefficient rows and the closed-form outcome distributions of both decoders.

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace qindel::testing {

// delta_minus cells, [class][p-1][b]; rows p=1/2, 3/4, 5/6 coincide pairwise.
inline const std::array<std::array<std::array<std::string, 3>, 6>, 3>& table1_cells() {
  static const std::array<std::array<std::array<std::string, 3>, 6>, 3> cells = {{
      {{// A0 = {001122, 112200, 220011}
        {{"01122", "12200", "20011"}},
        {{"01122", "12200", "20011"}},
        {{"22011", "00122", "11200"}},
        {{"22011", "00122", "11200"}},
        {{"11220", "22001", "00112"}},
        {{"11220", "22001", "00112"}}}},
      {{// A1 = {002211, 110022, 221100}
        {{"02211", "10022", "21100"}},
        {{"02211", "10022", "21100"}},
        {{"11022", "22100", "00211"}},
        {{"11022", "22100", "00211"}},
        {{"22110", "00221", "11002"}},
        {{"22110", "00221", "11002"}}}},
      {{// A2 = {001100, 112211, 220022}
        {{"01100", "12211", "20022"}},
        {{"01100", "12211", "20022"}},
        {{"22022", "00100", "11211"}},
        {{"22022", "00100", "11211"}},
        {{"00110", "11221", "22002"}},
        {{"00110", "11221", "22002"}}}},
  }};
  return cells;
}

/// Deletion decoder basis for i = 0, outcomes k = 1..9.
inline const std::vector<std::string>& deletion_u_strings() {
  static const std::vector<std::string> u = {"01122", "22011", "11220", "12200", "00122",
                                             "22001", "20011", "11200", "00112"};
  return u;
}

/// Deletion decoder outcome distribution; p_minus is 1-based by position.
inline double deletion_pk(const std::vector<double>& p_minus, int k) {
  const int group = (k - 1) % 3;  // k = 1,4,7 -> first row, etc.
  return (p_minus[static_cast<std::size_t>(2 * group)] +
          p_minus[static_cast<std::size_t>(2 * group + 1)]) /
         3.0;
}

/// Insertion decoder Gram-Schmidt coefficient rows: row s (1-based) holds the
/// normalized coefficients of u_{7j+s} on the images I_1..I_s.
inline const std::vector<std::vector<double>>& insertion_coeff_rows() {
  static const std::vector<std::vector<double>> rows = [] {
    std::vector<std::vector<double>> r;
    auto scaled = [](double factor, std::vector<double> v) {
      const double f = std::sqrt(factor);
      for (auto& x : v) x *= f;
      return v;
    };
    r.push_back({1.0});
    r.push_back(scaled(9.0 / 8.0, {-1.0 / 3.0, 1.0}));
    r.push_back(scaled(6.0 / 5.0, {-0.25, -0.25, 1.0}));
    r.push_back(scaled(15.0 / 13.0, {0.1, 0.1, -0.4, 1.0}));
    r.push_back(scaled(39.0 / 32.0, {1.0 / 13.0, 1.0 / 13.0, -4.0 / 13.0, -3.0 / 13.0, 1.0}));
    r.push_back(scaled(96.0 / 83.0,
                       {-1.0 / 32.0, -1.0 / 32.0, 1.0 / 8.0, 3.0 / 32.0, -13.0 / 32.0, 1.0}));
    r.push_back(scaled(83.0 / 68.0, {-2.0 / 83.0, -2.0 / 83.0, 8.0 / 83.0, 6.0 / 83.0,
                                     -26.0 / 83.0, -19.0 / 83.0, 1.0}));
    return r;
  }();
  return rows;
}

/// Insertion decoder outcome distribution for k = 7j + s; p_plus is 1-based
/// by position (length 7), p_b are the inserted-state eigenvalues (length 3).
inline double insertion_pk(const std::vector<double>& p_plus, const std::vector<double>& p_b,
                           int k) {
  const int j = (k - 1) / 7;
  const int s = (k - 1) % 7 + 1;
  const double pj = p_b[static_cast<std::size_t>(j)];
  auto pp = [&](int pos) { return p_plus[static_cast<std::size_t>(pos - 1)]; };
  switch (s) {
    case 1: return pj * (pp(1) + pp(2) / 9.0 + pp(3) / 9.0);
    case 2: return pj * (8.0 / 9.0 * pp(2) + pp(3) / 18.0);
    case 3: return pj * (5.0 / 6.0 * pp(3) + 2.0 / 15.0 * pp(4) + 2.0 / 15.0 * pp(5));
    case 4: return pj * (13.0 / 15.0 * pp(4) + 3.0 / 65.0 * pp(5));
    case 5: return pj * (32.0 / 39.0 * pp(5) + 13.0 / 96.0 * (pp(6) + pp(7)));
    case 6: return pj * (83.0 / 96.0 * pp(6) + 361.0 / 7968.0 * pp(7));
    case 7: return pj * (68.0 / 83.0 * pp(7));
    default: return 0.0;
  }
}

}  // namespace qindel::testing
