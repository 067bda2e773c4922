#include "emc/absolute.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace emc {
namespace {

std::string vertex_desc(const GradedGraph& g, VertexId v) {
  return "'" + g.label(v) + "'@" + std::to_string(v.level);
}

std::string format_path_labels(const GradedGraph& g, const FinitePath& p) {
  auto labels = path_labels(g, p);
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += '/';
    out += labels[i];
    if (i < p.edge_choices.size() && p.edge_choices[i] != 0)
      out += ":" + std::to_string(p.edge_choices[i]);
  }
  return out;
}

void require_pascal_shape(const GradedGraph& g) {
  for (int n = 0; n < g.depth(); ++n)
    if (g.level_size(n) != n + 1)
      throw std::invalid_argument("not a Pascal graph: level " + std::to_string(n) +
                                  " has " + std::to_string(g.level_size(n)) +
                                  " vertices");
}

// D_n(endpoint) times the cotransition probability of each step, walking
// from the endpoint down. Returns 0 as soon as the mass vanishes.
Rational walk_prefix(const CotransitionSystem& sys, const FinitePath& p,
                     Rational mass) {
  for (std::size_t i = p.vertices.size() - 1; i > 0; --i) {
    if (mass == 0) return mass;
    VertexId x{static_cast<int>(i), p.vertices[i]};
    if (!sys.has_row(x))
      throw std::invalid_argument("no cotransition row at " +
                                  vertex_desc(sys.graph(), x) +
                                  " needed by the backward chain");
    mass *= sys.prob({static_cast<int>(i) - 1, p.vertices[i - 1]},
                     p.edge_choices[i - 1], x);
  }
  return mass;
}

struct OnlineMoments {
  double n = 0, mean = 0, m2 = 0, m3 = 0, m4 = 0;

  void add(double x) {
    double n1 = n;
    n += 1;
    double delta = x - mean;
    double dn = delta / n;
    double dn2 = dn * dn;
    double term1 = delta * dn * n1;
    mean += dn;
    m4 += term1 * dn2 * (n * n - 3 * n + 3) + 6 * dn2 * m2 - 4 * dn * m3;
    m3 += term1 * dn * (n - 2) - 3 * dn * m2;
    m2 += term1;
  }
};

}  // namespace

LevelDistribution backward_distribution(const CotransitionSystem& sys, VertexId w,
                                        int n) {
  const auto& g = sys.graph();
  if (!g.contains(w))
    throw std::invalid_argument("no vertex at level " + std::to_string(w.level) +
                                ", index " + std::to_string(w.index));
  if (n < 0 || n > w.level)
    throw std::invalid_argument("backward level out of range");

  LevelDistribution out;
  out.level = n;

  if (const auto* central = dynamic_cast<const CentralEquipment*>(&sys)) {
    BigInt dw = central->dim(w);
    if (dw == 0)
      throw std::invalid_argument(vertex_desc(g, w) + " has no path from level 0");
    out.probs.reserve(g.level_size(n));
    for (int y = 0; y < g.level_size(n); ++y) {
      BigInt count = path_count(g, {n, y}, w);
      out.probs.push_back(count == 0 ? Rational(0)
                                     : Rational(central->dim({n, y}) * count, dw));
    }
    return out;
  }

  std::vector<Rational> cur(g.level_size(w.level), Rational(0));
  cur[w.index] = 1;
  std::vector<CotransitionEntry> row;
  for (int k = w.level; k > n; --k) {
    std::vector<Rational> next(g.level_size(k - 1), Rational(0));
    for (int x = 0; x < g.level_size(k); ++x) {
      if (cur[x] == 0) continue;
      VertexId at{k, x};
      if (!sys.has_row(at))
        throw std::invalid_argument("no cotransition row at " + vertex_desc(g, at) +
                                    " needed by the backward chain");
      row.clear();
      sys.row(at, row);
      for (const auto& e : row) next[e.from] += cur[x] * e.p;
    }
    cur = std::move(next);
  }
  out.probs = std::move(cur);
  return out;
}

Rational martin_kernel(const CotransitionSystem& sys, const FinitePath& p,
                       VertexId w) {
  const auto& g = sys.graph();
  require_valid_path(g, p);
  if (p.start_level != 0)
    throw std::invalid_argument("kernel prefixes must start at level 0");
  int n = p.end_level();
  if (n > w.level)
    throw std::invalid_argument("prefix ends above the terminal vertex");
  auto d = backward_distribution(sys, w, n);
  return walk_prefix(sys, p, d.probs[p.vertices.back()]);
}

MartinTable martin_table(const CotransitionSystem& sys, VertexId w, int n,
                         std::uint64_t cap) {
  const auto& g = sys.graph();
  auto d = backward_distribution(sys, w, n);

  MartinTable table;
  table.terminal = w;
  table.level = n;
  for (int y = 0; y < g.level_size(n); ++y) {
    if (d.probs[y] == 0) continue;
    for (int r = 0; r < g.level_size(0); ++r)
      for (auto& path : enumerate_paths(g, {0, r}, {n, y}, cap)) {
        Rational k = walk_prefix(sys, path, d.probs[y]);
        table.entries.emplace_back(std::move(path), std::move(k));
      }
  }
  return table;
}

// ---- BoundarySequence ----

BoundarySequence::BoundarySequence(std::shared_ptr<const GradedGraph> g)
    : graph_(std::move(g)) {
  if (!graph_) throw std::invalid_argument("null graph");
}

BoundarySequence BoundarySequence::pascal_frequency(
    std::shared_ptr<const GradedGraph> g, const Rational& p) {
  BoundarySequence seq(std::move(g));
  require_pascal_shape(seq.graph());
  if (p < 0 || p > 1)
    throw std::invalid_argument("frequency out of [0,1]");
  seq.kind_ = Kind::frequency;
  seq.freq_ = p;
  return seq;
}

BoundarySequence BoundarySequence::constant(std::shared_ptr<const GradedGraph> g,
                                            int level, const std::string& label) {
  BoundarySequence seq(std::move(g));
  auto idx = seq.graph().vertex(level, label);
  seq.kind_ = Kind::constant;
  seq.fixed_ = idx;
  return seq;
}

BoundarySequence BoundarySequence::explicit_list(
    std::shared_ptr<const GradedGraph> g,
    const std::vector<std::pair<int, std::string>>& entries) {
  BoundarySequence seq(std::move(g));
  if (entries.empty()) throw std::invalid_argument("empty vertex list");
  seq.kind_ = Kind::list;
  for (const auto& [level, label] : entries) {
    if (!seq.list_.empty() && level <= seq.list_.back().first)
      throw std::invalid_argument("vertex list levels must strictly increase");
    auto idx = seq.graph().vertex(level, label);
    seq.list_.emplace_back(level, idx.index);
  }
  return seq;
}

VertexId BoundarySequence::vertex_at(int level) const {
  switch (kind_) {
    case Kind::constant:
      return fixed_;
    case Kind::frequency: {
      if (level < 0 || level >= graph_->depth())
        throw std::invalid_argument("sequence level out of range");
      // round(p * N) = floor((2 a N + b) / (2 b)) for p = a/b.
      BigInt k = (2 * numerator(freq_) * level + denominator(freq_)) /
                 (2 * denominator(freq_));
      auto idx = graph_->find_vertex(
          level, std::to_string(level) + "," + k.str());
      if (!idx)
        throw std::invalid_argument("no Pascal vertex at level " +
                                    std::to_string(level));
      return {level, *idx};
    }
    case Kind::list:
      for (const auto& [lvl, idx] : list_)
        if (lvl == level) return {lvl, idx};
      throw std::invalid_argument("sequence has no vertex at level " +
                                  std::to_string(level));
  }
  throw std::logic_error("unreachable");
}

std::string BoundarySequence::describe() const {
  switch (kind_) {
    case Kind::frequency:
      return "Pascal frequency sequence, p = " + format_rational(freq_);
    case Kind::constant:
      return "constant vertex " + vertex_desc(*graph_, fixed_);
    case Kind::list:
      return "explicit list of " + std::to_string(list_.size()) + " vertices";
  }
  return {};
}

LimitReport boundary_limit_estimate(const CotransitionSystem& sys,
                                    const BoundarySequence& seq, const FinitePath& p,
                                    const std::vector<int>& n_list) {
  LimitReport rep;
  for (int n : n_list) {
    VertexId w = seq.vertex_at(n);
    rep.values.emplace_back(n, martin_kernel(sys, p, w));
  }
  if (!rep.values.empty()) rep.last = rep.values.back().second;
  for (std::size_t i = 1; i < rep.values.size(); ++i) {
    Rational delta = rep.values[i].second - rep.values[i - 1].second;
    if (delta < 0) delta = -delta;
    if (delta > rep.max_delta) rep.max_delta = delta;
  }
  return rep;
}

// ---- ergodicity ----

StatisticSpec StatisticSpec::coordinate_fraction() {
  return {Kind::coordinate_fraction, {}};
}

StatisticSpec StatisticSpec::indicator_frequency(std::vector<std::string> labels) {
  return {Kind::indicator_frequency, std::move(labels)};
}

std::string StatisticSpec::describe() const {
  if (kind == Kind::coordinate_fraction) return "endpoint index / level";
  std::string out = "indicator frequency of {";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ",";
    out += labels[i];
  }
  return out + "}";
}

ErgodicityReport ergodicity_test(const MarkovMeasure& m, const StatisticSpec& spec,
                                 const std::vector<int>& n_list,
                                 std::uint64_t samples, std::uint64_t seed,
                                 double threshold) {
  const auto& g = m.graph();
  if (n_list.empty()) throw std::invalid_argument("empty checkpoint list");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1 || n_list[i] >= g.depth())
      throw std::invalid_argument("checkpoint level out of range");
    if (i > 0 && n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("checkpoint levels must strictly increase");
  }
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  const int max_n = n_list.back();

  std::vector<std::vector<char>> member;
  if (spec.kind == StatisticSpec::Kind::indicator_frequency) {
    std::unordered_set<std::string> wanted(spec.labels.begin(), spec.labels.end());
    member.resize(max_n + 1);
    for (int lvl = 0; lvl <= max_n; ++lvl) {
      member[lvl].resize(g.level_size(lvl));
      for (int i = 0; i < g.level_size(lvl); ++i)
        member[lvl][i] = wanted.count(g.label({lvl, i})) != 0;
    }
  }

  auto sampler = m.make_sampler(max_n);
  std::vector<OnlineMoments> moments(n_list.size());
  for (std::uint64_t s = 0; s < samples; ++s) {
    BitStream bits(path_seed(seed, s));
    FinitePath path = sampler->sample(bits);
    if (spec.kind == StatisticSpec::Kind::coordinate_fraction) {
      for (std::size_t ci = 0; ci < n_list.size(); ++ci)
        moments[ci].add(static_cast<double>(path.vertices[n_list[ci]]) /
                        n_list[ci]);
    } else {
      std::size_t ci = 0;
      long long count = 0;
      for (int lvl = 0; lvl <= max_n; ++lvl) {
        count += member[lvl][path.vertices[lvl]];
        if (ci < n_list.size() && lvl == n_list[ci]) {
          moments[ci].add(static_cast<double>(count) / (lvl + 1));
          ++ci;
        }
      }
    }
  }

  ErgodicityReport rep;
  rep.threshold = threshold;
  for (std::size_t ci = 0; ci < n_list.size(); ++ci) {
    const auto& mo = moments[ci];
    double var_pop = mo.m2 / mo.n;
    double m4 = mo.m4 / mo.n;
    ErgodicityRow row;
    row.n = n_list[ci];
    row.variance = mo.m2 / (mo.n - 1);
    row.std_error = std::sqrt(std::max(0.0, m4 - var_pop * var_pop) / mo.n);
    rep.rows.push_back(row);
  }

  double first = rep.rows.front().variance;
  double final = rep.rows.back().variance;
  if (final < threshold && final <= first)
    rep.verdict = "consistent with ergodic";
  else if (final >= threshold && final >= 0.5 * first)
    rep.verdict = "inconsistent";
  else
    rep.verdict = "inconclusive";
  return rep;
}

ValidationReport exchangeability_check(const MarkovMeasure& m, int n,
                                       std::uint64_t cap) {
  const auto& g = m.graph();
  if (n < 0 || n >= g.depth())
    throw std::invalid_argument("level out of range");

  ValidationReport rep;
  for (int y = 0; y < g.level_size(n); ++y) {
    std::optional<Rational> first;
    FinitePath first_path;
    bool reported = false;
    for (int r = 0; r < g.level_size(0) && !reported; ++r)
      for (auto& path : enumerate_paths(g, {0, r}, {n, y}, cap)) {
        Rational prob = cylinder_prob(m, path);
        if (!first) {
          first = std::move(prob);
          first_path = std::move(path);
        } else if (prob != *first) {
          rep.add("vertex " + vertex_desc(g, {n, y}),
                  "path " + format_path_labels(g, first_path) +
                      " has cylinder probability " + format_rational(*first) +
                      " but " + format_path_labels(g, path) + " has " +
                      format_rational(prob));
          reported = true;
          break;
        }
      }
  }
  return rep;
}

}  // namespace emc
