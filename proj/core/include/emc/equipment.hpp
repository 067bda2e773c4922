#pragma once

#include "emc/graded_graph.hpp"
#include "emc/numeric.hpp"
#include "emc/report.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace emc {

// One slot of a cotransition row at vertex x: the probability that the
// previous vertex is `from` and the step used parallel edge `edge`,
// conditioned on being at x.
struct CotransitionEntry {
  int from = 0;
  std::uint32_t edge = 0;
  Rational p;

  friend bool operator==(const CotransitionEntry&, const CotransitionEntry&) = default;
};

// Cotransition system (equipment): for every vertex x at level >= 1, an
// exact probability row over the in-edge slots of x. Rows list every slot,
// zero entries included, in canonical (from, edge) order. Immutable after
// construction; concurrent reads are safe.
class CotransitionSystem {
 public:
  virtual ~CotransitionSystem() = default;

  const GradedGraph& graph() const { return *graph_; }
  const std::shared_ptr<const GradedGraph>& graph_ptr() const { return graph_; }

  virtual bool is_central() const { return false; }

  // False at vertices flagged unreachable (rows derived from a measure that
  // never visits them).
  virtual bool has_row(VertexId x) const;

  // Appends the full row at x (x.level >= 1). Throws std::invalid_argument
  // when has_row(x) is false.
  virtual void row(VertexId x, std::vector<CotransitionEntry>& out) const = 0;

  Rational prob(VertexId from, std::uint32_t edge, VertexId to) const;

 protected:
  explicit CotransitionSystem(std::shared_ptr<const GradedGraph> g);

  std::shared_ptr<const GradedGraph> graph_;
};

// Row specification used by from_table and the JSON loader. `level` is the
// level of the target vertex `to`; listed entries may omit zero slots.
struct CotransitionRowSpec {
  int level = 0;
  std::string to;
  struct Entry {
    std::string from;
    std::uint32_t edge = 0;
    Rational p;
  };
  std::vector<Entry> entries;
};

// Explicit per-vertex rows; rows may be absent at unreachable vertices.
class TableCotransitions final : public CotransitionSystem {
 public:
  // Internal/loader factory: rows indexed [level][vertex], already canonical.
  static std::shared_ptr<const TableCotransitions> from_rows(
      std::shared_ptr<const GradedGraph> g,
      std::vector<std::vector<std::optional<std::vector<CotransitionEntry>>>> rows);

  bool has_row(VertexId x) const override;
  void row(VertexId x, std::vector<CotransitionEntry>& out) const override;

 private:
  explicit TableCotransitions(std::shared_ptr<const GradedGraph> g);

  std::vector<std::vector<std::optional<std::vector<CotransitionEntry>>>> rows_;
};

// The central equipment: P(y, e | x) = dim(y) / dim(x) for every in-edge
// slot, where dim is the number of paths from level 0. Rows are produced
// lazily; dim values are cached per level behind a mutex.
class CentralEquipment final : public CotransitionSystem {
 public:
  explicit CentralEquipment(std::shared_ptr<const GradedGraph> g);

  bool is_central() const override { return true; }
  void row(VertexId x, std::vector<CotransitionEntry>& out) const override;

  BigInt dim(VertexId v) const;

 private:
  mutable std::mutex mu_;
  mutable std::vector<std::vector<BigInt>> dims_;  // filled level by level
};

std::shared_ptr<const CotransitionSystem> central_equipment(
    std::shared_ptr<const GradedGraph> g);

// Validates coverage (every vertex at levels 1..depth-1), support, and exact
// row sums; throws FormatError naming the offending row otherwise.
std::shared_ptr<const CotransitionSystem> from_table(
    std::shared_ptr<const GradedGraph> g, const std::vector<CotransitionRowSpec>& rows);

// Full row listing in canonical order, suitable for serialization.
std::vector<CotransitionRowSpec> materialize(const CotransitionSystem& sys);

// Strictly positive equipment with integer weights in 1..9 drawn from a
// deterministic stream; useful for randomized exact testing.
std::shared_ptr<const CotransitionSystem> random_equipment(
    std::shared_ptr<const GradedGraph> g, std::uint64_t seed);

// Nonnegative cocycle value; nullopt marks the undefined cases (a zero
// denominator cotransition against a positive numerator, or 0/0).
struct CocycleValue {
  std::optional<Rational> value;

  bool defined() const { return value.has_value(); }
  static CocycleValue undefined() { return {}; }
  static CocycleValue of(Rational r) { return {std::move(r)}; }

  friend bool operator==(const CocycleValue&, const CocycleValue&) = default;
};

// The Markov cocycle of the equipment, evaluated on a tail-equivalent pair:
// the product over the disagreement levels of cotransition ratios. Throws
// std::invalid_argument when p and q are not tail-equivalent within the
// truncation (same start level, same length, a common suffix).
CocycleValue cocycle_eval(const CotransitionSystem& sys, const FinitePath& p,
                          const FinitePath& q);

// All cocycle values over the tail classes at one level: paths grouped by
// terminal vertex, with values[c][i][j] = cocycle(paths[c][i], paths[c][j]).
struct CocycleTable {
  std::vector<std::vector<FinitePath>> classes;
  std::vector<std::vector<std::vector<CocycleValue>>> values;
};

CocycleTable cocycle_table(const CotransitionSystem& sys, int level_bound,
                           std::uint64_t cap = 10000);

// Identity, inverse, and multiplicativity over all enumerated triples,
// with the zero/undefined conventions spelled out in cocycle_eval. Reports
// the first counterexample.
ValidationReport check_cocycle_axioms(const CocycleTable& table,
                                      const GradedGraph& g);

ValidationReport check_cocycle_axioms(const CotransitionSystem& sys,
                                      int level_bound, std::uint64_t cap = 10000);

}  // namespace emc
