#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "emc/equipment.hpp"
#include "emc/markov_measure.hpp"

namespace emc {

// Exact distribution over the vertices of one level.
struct LevelDistribution {
  int level = 0;
  std::vector<Rational> probs;  // indexed by vertex index at that level
};

// Distribution of the backward chain started at w, observed at level n:
// D_N = delta_w, D_k(y) = sum_x D_{k+1}(x) P(y, e | x). Exact; the central
// equipment uses the closed form dim(y) * path_count(y, w) / dim(w).
LevelDistribution backward_distribution(const CotransitionSystem& sys, VertexId w,
                                        int n);

// Martin kernel K(p, w): probability that the backward chain from w follows
// the prefix p, i.e. D_n(endpoint) times the cotransition probability of each
// step of p. p must start at level 0 and end at level n <= level(w).
Rational martin_kernel(const CotransitionSystem& sys, const FinitePath& p,
                       VertexId w);

// All level-n prefixes with positive backward mass from w, with their Martin
// kernel values. The values sum to 1 exactly.
struct MartinTable {
  VertexId terminal{0, 0};
  int level = 0;
  std::vector<std::pair<FinitePath, Rational>> entries;
};

MartinTable martin_table(const CotransitionSystem& sys, VertexId w, int n,
                         std::uint64_t cap = 10000);

// A rule producing terminal vertices w_N for increasing levels N; feeding
// them to martin_kernel approximates a boundary point.
class BoundarySequence {
 public:
  // w_N = (N, k) with k = round(p * N), on a Pascal-shaped graph.
  static BoundarySequence pascal_frequency(std::shared_ptr<const GradedGraph> g,
                                           const Rational& p);
  // The same vertex for every requested N; degenerate but handy as a check.
  static BoundarySequence constant(std::shared_ptr<const GradedGraph> g, int level,
                                   const std::string& label);
  // Explicit vertices at strictly increasing levels.
  static BoundarySequence explicit_list(
      std::shared_ptr<const GradedGraph> g,
      const std::vector<std::pair<int, std::string>>& entries);

  // The terminal vertex for level N; throws std::invalid_argument when the
  // sequence is not defined there.
  VertexId vertex_at(int level) const;
  std::string describe() const;

  const GradedGraph& graph() const { return *graph_; }
  std::shared_ptr<const GradedGraph> graph_ptr() const { return graph_; }

 private:
  enum class Kind { frequency, constant, list };

  explicit BoundarySequence(std::shared_ptr<const GradedGraph> g);

  std::shared_ptr<const GradedGraph> graph_;
  Kind kind_ = Kind::frequency;
  Rational freq_;
  VertexId fixed_{0, 0};
  std::vector<std::pair<int, int>> list_;  // (level, index), levels increasing
};

// K(p, w_N) for each N in n_list, with the raw values, the last value and
// the largest successive delta. No limit is claimed beyond the data.
struct LimitReport {
  std::vector<std::pair<int, Rational>> values;
  Rational last;
  Rational max_delta;
};

LimitReport boundary_limit_estimate(const CotransitionSystem& sys,
                                    const BoundarySequence& seq, const FinitePath& p,
                                    const std::vector<int>& n_list);

// A per-path statistic evaluated at checkpoint levels.
struct StatisticSpec {
  enum class Kind {
    coordinate_fraction,   // endpoint vertex index divided by the level
    indicator_frequency,   // fraction of levels 0..n whose vertex is labeled
  };

  Kind kind = Kind::coordinate_fraction;
  std::vector<std::string> labels;  // indicator_frequency only

  static StatisticSpec coordinate_fraction();
  static StatisticSpec indicator_frequency(std::vector<std::string> labels);
  std::string describe() const;
};

struct ErgodicityRow {
  int n = 0;
  double variance = 0;
  double std_error = 0;
};

// Monte Carlo variance of the statistic at each checkpoint. The verdict is
// "consistent with ergodic" when the final variance is below the threshold
// and has not grown, "inconsistent" when it stays at or above the threshold
// without halving, otherwise "inconclusive". Statistics, never proof.
struct ErgodicityReport {
  std::vector<ErgodicityRow> rows;
  double threshold = 0;
  std::string verdict;
};

ErgodicityReport ergodicity_test(const MarkovMeasure& m, const StatisticSpec& spec,
                                 const std::vector<int>& n_list,
                                 std::uint64_t samples, std::uint64_t seed,
                                 double threshold = 1e-3);

// Exact check that cylinder_prob is constant across all paths sharing a
// level-n endpoint. Reports one witness pair per failing endpoint.
ValidationReport exchangeability_check(const MarkovMeasure& m, int n,
                                       std::uint64_t cap = 20000);

}  // namespace emc
