#pragma once

#include "emc/equipment.hpp"
#include "emc/graded_graph.hpp"
#include "emc/numeric.hpp"
#include "emc/random.hpp"
#include "emc/report.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace emc {

// One slot of a forward row at vertex x: probability of moving to `to`
// along parallel edge `edge`.
struct ForwardEntry {
  int to = 0;
  std::uint32_t edge = 0;
  Rational p;

  friend bool operator==(const ForwardEntry&, const ForwardEntry&) = default;
};

// Draws paths from the initial level down to a fixed target level.
// Not safe for concurrent use; create one sampler per stream.
class PathSampler {
 public:
  virtual ~PathSampler() = default;
  virtual FinitePath sample(BitStream& bits) = 0;
};

// Markov measure: exact initial distribution over level 0 plus exact forward
// rows. Rows list every out-edge slot, zeros included, in canonical
// (to, edge) order. Immutable; concurrent reads are safe.
class MarkovMeasure {
 public:
  virtual ~MarkovMeasure() = default;

  const GradedGraph& graph() const { return *graph_; }
  const std::shared_ptr<const GradedGraph>& graph_ptr() const { return graph_; }

  virtual Rational initial(int index) const = 0;

  // False where no forward row is stored (only ever at vertices of measure
  // zero). Always true at x.level < depth-1 for generated measures.
  virtual bool has_forward_row(VertexId x) const;

  virtual void forward_row(VertexId x, std::vector<ForwardEntry>& out) const = 0;

  virtual std::unique_ptr<PathSampler> make_sampler(int target_level) const;

 protected:
  explicit MarkovMeasure(std::shared_ptr<const GradedGraph> g);

  std::shared_ptr<const GradedGraph> graph_;
};

// Row specification used by the table builder and the JSON loader.
struct ForwardRowSpec {
  int level = 0;  // level of `from`
  std::string from;
  struct Entry {
    std::string to;
    std::uint32_t edge = 0;
    Rational p;
  };
  std::vector<Entry> entries;
};

struct InitialSpec {
  std::string vertex;
  Rational p;
};

class TableMeasure final : public MarkovMeasure {
 public:
  // Validates: initial sums to 1, rows sum to 1 on actual out-edge slots,
  // and a row exists at every vertex reachable with positive probability.
  static std::shared_ptr<const TableMeasure> create(
      std::shared_ptr<const GradedGraph> g, const std::vector<InitialSpec>& initial,
      const std::vector<ForwardRowSpec>& rows);

  // Internal factory for rows already in canonical slot order.
  static std::shared_ptr<const TableMeasure> from_rows(
      std::shared_ptr<const GradedGraph> g, std::vector<Rational> initial,
      std::vector<std::vector<std::optional<std::vector<ForwardEntry>>>> rows);

  Rational initial(int index) const override;
  bool has_forward_row(VertexId x) const override;
  void forward_row(VertexId x, std::vector<ForwardEntry>& out) const override;

 private:
  explicit TableMeasure(std::shared_ptr<const GradedGraph> g);

  std::vector<Rational> initial_;
  std::vector<std::vector<std::optional<std::vector<ForwardEntry>>>> rows_;
};

// Bernoulli(p) on a Pascal-labeled graph: up-step (k -> k+1) with
// probability p. Rows are generated on demand, so the graph may be deep.
class PascalBernoulli final : public MarkovMeasure {
 public:
  PascalBernoulli(std::shared_ptr<const GradedGraph> g, Rational p);

  Rational initial(int index) const override;
  void forward_row(VertexId x, std::vector<ForwardEntry>& out) const override;
  std::unique_ptr<PathSampler> make_sampler(int target_level) const override;

  const Rational& p() const { return p_; }

 private:
  Rational p_;
};

// Mixture of Bernoulli measures on a Pascal-labeled graph. Exchangeable,
// hence Markov: the up-step probability at (n,k) is f(n+1,k+1)/f(n,k) with
// f(n,k) = sum_i w_i p_i^k (1-p_i)^(n-k). The sampler draws the latent
// component first, which realizes the same law.
class PascalMixture final : public MarkovMeasure {
 public:
  struct Component {
    Rational weight;
    Rational p;
  };

  PascalMixture(std::shared_ptr<const GradedGraph> g,
                std::vector<Component> components);

  Rational initial(int index) const override;
  void forward_row(VertexId x, std::vector<ForwardEntry>& out) const override;
  std::unique_ptr<PathSampler> make_sampler(int target_level) const override;

 private:
  Rational f(int n, int k) const;

  std::vector<Component> components_;
};

// Level-dependent Bernoulli on a Pascal-labeled graph: the step from level n
// uses up-probability ps[n]. Deliberately not exchangeable when the ps
// differ.
class PascalStepwise final : public MarkovMeasure {
 public:
  PascalStepwise(std::shared_ptr<const GradedGraph> g, std::vector<Rational> ps);

  Rational initial(int index) const override;
  void forward_row(VertexId x, std::vector<ForwardEntry>& out) const override;

 private:
  std::vector<Rational> ps_;
};

// Plancherel measure on a Young graph: P(lambda -> Lambda) =
// dim(Lambda) / ((|lambda|+1) dim(lambda)). Materialized eagerly; throws
// std::invalid_argument if the rows do not sum to 1, i.e. the graph does not
// have Young branching.
std::shared_ptr<const MarkovMeasure> plancherel_measure(
    std::shared_ptr<const GradedGraph> young);

std::shared_ptr<const MarkovMeasure> bernoulli_on_pascal(
    std::shared_ptr<const GradedGraph> pascal, const Rational& p);

std::shared_ptr<const MarkovMeasure> mixture_on_pascal(
    std::shared_ptr<const GradedGraph> pascal,
    std::vector<PascalMixture::Component> components);

std::shared_ptr<const MarkovMeasure> stepwise_on_pascal(
    std::shared_ptr<const GradedGraph> pascal, std::vector<Rational> ps);

// mu_1(x_0) * prod P(x_{i+1}, e_i | x_i); exact, 0 off the support.
// The path must start at level 0.
Rational cylinder_prob(const MarkovMeasure& m, const FinitePath& p);

// Exact Bayes inversion over level marginals. Vertices never reached with
// positive probability get no row (has_row false).
std::shared_ptr<const CotransitionSystem> induced_cotransitions(
    const MarkovMeasure& m);

// cylinder_prob(p) / cylinder_prob(q) on a tail-equivalent pair; undefined
// when the denominator vanishes.
CocycleValue rn_cocycle(const MarkovMeasure& m, const FinitePath& p,
                        const FinitePath& q);

// Problem-1 check, both directions: induced rows equal sys rows at every
// reachable vertex up to `depth`, and rn_cocycle equals cocycle_eval on all
// tail-equivalent positive-measure pairs up to `depth`.
ValidationReport matches_equipment(const MarkovMeasure& m,
                                   const CotransitionSystem& sys, int depth,
                                   std::uint64_t cap = 20000);

// Path from level 0 to `target_level`; deterministic in `seed` (stream 0 of
// the seed's family).
FinitePath sample_path(const MarkovMeasure& m, int target_level,
                       std::uint64_t seed);

}  // namespace emc
