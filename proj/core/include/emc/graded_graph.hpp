#pragma once

#include "emc/numeric.hpp"
#include "emc/report.hpp"

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace emc {

struct VertexId {
  int level = 0;
  int index = 0;

  friend bool operator==(const VertexId&, const VertexId&) = default;
  friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

// Adjacency entry: neighbor index at the adjacent level plus the edge
// multiplicity. Parallel edges stay folded; paths address them by slot.
struct HalfEdge {
  int neighbor = 0;
  std::uint32_t mult = 0;
};

// Finite-depth truncation of an N-graded graph. Levels are indexed
// 0..depth()-1; level 0 holds the initial vertices. Implementations must
// append adjacency entries in strictly ascending neighbor order, which fixes
// the canonical slot order (neighbor, edge) used by rows everywhere else.
// Instances are immutable after construction and safe for concurrent reads.
class GradedGraph {
 public:
  virtual ~GradedGraph() = default;

  virtual int depth() const = 0;
  virtual int level_size(int level) const = 0;
  virtual std::string label(VertexId v) const = 0;
  virtual std::optional<int> find_vertex(int level, const std::string& label) const = 0;

  virtual void out_edges(VertexId v, std::vector<HalfEdge>& out) const = 0;
  virtual void in_edges(VertexId v, std::vector<HalfEdge>& out) const = 0;

  // Closed-form path counts where the graph shape provides one.
  virtual std::optional<BigInt> path_count_hint(VertexId v, VertexId w) const;

  // Label lookup that throws FormatError when absent.
  VertexId vertex(int level, const std::string& label) const;

  std::uint32_t multiplicity(VertexId v, VertexId w) const;

  bool contains(VertexId v) const;
};

// A path prefix through consecutive levels. vertices[i] is the index at
// level start_level + i; edge_choices[i] picks one of the parallel edges of
// step i and must be in [0, mult).
struct FinitePath {
  int start_level = 0;
  std::vector<int> vertices;
  std::vector<std::uint32_t> edge_choices;

  int end_level() const {
    return start_level + static_cast<int>(vertices.size()) - 1;
  }

  friend bool operator==(const FinitePath&, const FinitePath&) = default;
};

VertexId path_endpoint(const FinitePath& p);

ValidationReport validate_path(const GradedGraph& g, const FinitePath& p);

// Throws std::invalid_argument with the first violation.
void require_valid_path(const GradedGraph& g, const FinitePath& p);

FinitePath path_from_labels(const GradedGraph& g, int start_level,
                            const std::vector<std::string>& labels,
                            std::vector<std::uint32_t> edge_choices = {});

std::vector<std::string> path_labels(const GradedGraph& g, const FinitePath& p);

// Explicit in-memory graph built level by level.
class ExplicitGraph final : public GradedGraph {
 public:
  class Builder {
   public:
    Builder& add_level(std::vector<std::string> labels);
    Builder& add_edge(int from_level, const std::string& from,
                      const std::string& to, std::uint32_t mult = 1);
    std::shared_ptr<const ExplicitGraph> build();

   private:
    std::vector<std::vector<std::string>> levels_;
    struct EdgeSpec {
      int level;
      std::string from;
      std::string to;
      std::uint32_t mult;
    };
    std::vector<EdgeSpec> edges_;
  };

  int depth() const override;
  int level_size(int level) const override;
  std::string label(VertexId v) const override;
  std::optional<int> find_vertex(int level, const std::string& label) const override;
  void out_edges(VertexId v, std::vector<HalfEdge>& out) const override;
  void in_edges(VertexId v, std::vector<HalfEdge>& out) const override;

 private:
  friend class Builder;
  ExplicitGraph() = default;

  std::vector<std::vector<std::string>> labels_;
  std::vector<std::unordered_map<std::string, int>> index_;
  std::vector<std::vector<std::vector<HalfEdge>>> out_;
  std::vector<std::vector<std::vector<HalfEdge>>> in_;
};

// Pascal graph, generated lazily: level n = {(n,k) : 0 <= k <= n} with
// labels "n,k" and vertex index k; edges (n,k) -> (n+1,k), (n+1,k+1).
class PascalGraph final : public GradedGraph {
 public:
  explicit PascalGraph(int depth);

  int depth() const override { return depth_; }
  int level_size(int level) const override;
  std::string label(VertexId v) const override;
  std::optional<int> find_vertex(int level, const std::string& label) const override;
  void out_edges(VertexId v, std::vector<HalfEdge>& out) const override;
  void in_edges(VertexId v, std::vector<HalfEdge>& out) const override;
  std::optional<BigInt> path_count_hint(VertexId v, VertexId w) const override;

 private:
  int depth_;
};

// Young graph: level n = partitions of n in reverse-lexicographic order,
// labels like "3,1" ("e" for the empty partition); edges add one box.
class YoungGraph final : public GradedGraph {
 public:
  explicit YoungGraph(int depth);

  int depth() const override { return static_cast<int>(parts_.size()); }
  int level_size(int level) const override;
  std::string label(VertexId v) const override;
  std::optional<int> find_vertex(int level, const std::string& label) const override;
  void out_edges(VertexId v, std::vector<HalfEdge>& out) const override;
  void in_edges(VertexId v, std::vector<HalfEdge>& out) const override;

  const std::vector<int>& partition(VertexId v) const;

 private:
  std::vector<std::vector<std::vector<int>>> parts_;
  std::vector<std::unordered_map<std::string, int>> index_;
};

std::shared_ptr<const GradedGraph> pascal_graph(int depth);
std::shared_ptr<const GradedGraph> young_graph(int depth);

// All partitions of n, reverse-lexicographic ((n) first, (1,...,1) last).
std::vector<std::vector<int>> partitions_of(int n);

std::string partition_label(const std::vector<int>& part);
std::vector<int> parse_partition_label(const std::string& label);

// Invariant check: single initial vertex (unless multi_root), no empty
// levels, no vertex without an incoming edge, no non-terminal vertex
// without an outgoing edge.
ValidationReport validate_graph(const GradedGraph& g, bool multi_root = false);

// Number of paths v -> w counted with edge multiplicities; exact.
BigInt path_count(const GradedGraph& g, VertexId v, VertexId w);

// All paths v -> w, parallel edges distinguished, in canonical order.
// Throws CapExceeded when path_count(v, w) > cap.
std::vector<FinitePath> enumerate_paths(const GradedGraph& g, VertexId v,
                                        VertexId w, std::uint64_t cap);

}  // namespace emc
