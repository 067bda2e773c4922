#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "emc/graded_graph.hpp"
#include "emc/numeric.hpp"

namespace emc {

// Schensted row insertion into rows kept weakly increasing; bumped letters
// cascade downward. Returns the 0-based row index of the added box.
template <typename T>
int bump_insert(std::vector<std::vector<T>>& rows, T letter) {
  for (std::size_t r = 0;; ++r) {
    if (r == rows.size()) {
      rows.emplace_back();
      rows.back().push_back(std::move(letter));
      return static_cast<int>(r);
    }
    auto it = std::upper_bound(rows[r].begin(), rows[r].end(), letter);
    if (it == rows[r].end()) {
      rows[r].push_back(std::move(letter));
      return static_cast<int>(r);
    }
    std::swap(*it, letter);
  }
}

struct Tableau {
  std::vector<std::vector<int>> rows;

  std::vector<int> shape() const;
  std::size_t size() const;
  bool is_semistandard() const;
  bool is_standard() const;
};

struct InsertResult {
  Tableau tableau;
  int row = 0;  // 0-based coordinates of the added box
  int col = 0;
};

InsertResult row_insert(Tableau t, int letter);

struct RskPair {
  Tableau p;  // semistandard, content = word multiset
  Tableau q;  // standard, records insertion order
};

RskPair rsk_pair(const std::vector<int>& word);

// A path in the Young graph, stored as the row index of the box added at
// each step.
struct YoungPath {
  std::vector<int> growth_rows;

  int length() const { return static_cast<int>(growth_rows.size()); }
  std::vector<int> shape_at(int k) const;        // shape after k boxes
  std::vector<std::vector<int>> shapes() const;  // all length()+1 shapes
};

bool valid_young_path(const YoungPath& p);

YoungPath q_shape_path(const std::vector<int>& word);

// The same path as a FinitePath on a Young graph of depth > length().
FinitePath young_path_to_finite(const YoungPath& p, const GradedGraph& young);

// Letter measure with point atoms a_1 >= ... >= a_m >= 0 and continuous
// mass gamma = 1 - sum a_i, realized by fresh distinct letters that sort
// above every atom in draw-key order.
class LetterDistribution {
 public:
  explicit LetterDistribution(std::vector<Rational> atoms);

  const std::vector<Rational>& atoms() const { return atoms_; }
  const Rational& gamma() const { return gamma_; }

 private:
  std::vector<Rational> atoms_;
  Rational gamma_;
};

// One i.i.d. word of length n pushed through RSK; the stream is seeded by
// path_seed(seed, 0).
YoungPath pushforward_sample(const LetterDistribution& dist, int n,
                             std::uint64_t seed);

// count independent paths, path i seeded by path_seed(seed, i).
std::vector<YoungPath> sample_young_paths(const LetterDistribution& dist, int n,
                                          std::size_t count, std::uint64_t seed);

struct FrequencyEstimate {
  struct Row {
    int row = 0;  // 1-based
    double frequency = 0;
    double std_error = 0;
  };

  int level = 0;  // common path length of the sample
  std::vector<Row> rows;
};

// Mean of row_i(shape)/n over the sample, rows 1..row_cap, with the
// standard error of each mean.
FrequencyEstimate thoma_frequency_estimate(const std::vector<YoungPath>& paths,
                                           int row_cap = 10);

// Column variant (conjugate shape), for exploration only.
FrequencyEstimate thoma_column_estimate(const std::vector<YoungPath>& paths,
                                        int col_cap = 10);

}  // namespace emc
