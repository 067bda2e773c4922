#include "emc/graded_graph.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <utility>

namespace emc {
namespace {

std::string vertex_desc(const GradedGraph& g, VertexId v) {
  return "'" + g.label(v) + "'@" + std::to_string(v.level);
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty() || s.size() > 9) return false;
  int val = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    val = val * 10 + (c - '0');
  }
  out = val;
  return true;
}

}  // namespace

std::optional<BigInt> GradedGraph::path_count_hint(VertexId, VertexId) const {
  return std::nullopt;
}

VertexId GradedGraph::vertex(int level, const std::string& lbl) const {
  if (level < 0 || level >= depth())
    throw FormatError("level " + std::to_string(level) + " out of range");
  auto idx = find_vertex(level, lbl);
  if (!idx)
    throw FormatError("no vertex '" + lbl + "' at level " + std::to_string(level));
  return {level, *idx};
}

std::uint32_t GradedGraph::multiplicity(VertexId v, VertexId w) const {
  if (w.level != v.level + 1) return 0;
  std::vector<HalfEdge> buf;
  out_edges(v, buf);
  for (const auto& e : buf)
    if (e.neighbor == w.index) return e.mult;
  return 0;
}

bool GradedGraph::contains(VertexId v) const {
  return v.level >= 0 && v.level < depth() && v.index >= 0 &&
         v.index < level_size(v.level);
}

VertexId path_endpoint(const FinitePath& p) {
  if (p.vertices.empty()) throw std::invalid_argument("empty path");
  return {p.end_level(), p.vertices.back()};
}

ValidationReport validate_path(const GradedGraph& g, const FinitePath& p) {
  ValidationReport rep;
  if (p.vertices.empty()) {
    rep.add("path", "no vertices");
    return rep;
  }
  if (p.start_level < 0 || p.end_level() >= g.depth()) {
    rep.add("path", "levels " + std::to_string(p.start_level) + ".." +
                        std::to_string(p.end_level()) + " out of range");
    return rep;
  }
  if (p.edge_choices.size() != p.vertices.size() - 1) {
    rep.add("path", "edge_choices size " + std::to_string(p.edge_choices.size()) +
                        " does not match " + std::to_string(p.vertices.size() - 1) +
                        " steps");
    return rep;
  }
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    VertexId v{p.start_level + static_cast<int>(i), p.vertices[i]};
    if (!g.contains(v)) {
      rep.add("path step " + std::to_string(i),
              "vertex index " + std::to_string(v.index) + " out of range at level " +
                  std::to_string(v.level));
      return rep;
    }
  }
  for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
    VertexId v{p.start_level + static_cast<int>(i), p.vertices[i]};
    VertexId w{v.level + 1, p.vertices[i + 1]};
    auto mult = g.multiplicity(v, w);
    if (mult == 0) {
      rep.add("path step " + std::to_string(i),
              vertex_desc(g, v) + " and " + vertex_desc(g, w) + " are not adjacent");
      return rep;
    }
    if (p.edge_choices[i] >= mult) {
      rep.add("path step " + std::to_string(i),
              "edge choice " + std::to_string(p.edge_choices[i]) +
                  " out of range for multiplicity " + std::to_string(mult));
      return rep;
    }
  }
  return rep;
}

void require_valid_path(const GradedGraph& g, const FinitePath& p) {
  auto rep = validate_path(g, p);
  if (!rep.ok())
    throw std::invalid_argument("invalid path: " + rep.violations.front().where +
                                ": " + rep.violations.front().what);
}

FinitePath path_from_labels(const GradedGraph& g, int start_level,
                            const std::vector<std::string>& labels,
                            std::vector<std::uint32_t> edge_choices) {
  FinitePath p;
  p.start_level = start_level;
  p.vertices.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    p.vertices.push_back(g.vertex(start_level + static_cast<int>(i), labels[i]).index);
  if (edge_choices.empty() && labels.size() > 1)
    edge_choices.assign(labels.size() - 1, 0);
  p.edge_choices = std::move(edge_choices);
  require_valid_path(g, p);
  return p;
}

std::vector<std::string> path_labels(const GradedGraph& g, const FinitePath& p) {
  std::vector<std::string> out;
  out.reserve(p.vertices.size());
  for (std::size_t i = 0; i < p.vertices.size(); ++i)
    out.push_back(g.label({p.start_level + static_cast<int>(i), p.vertices[i]}));
  return out;
}

// ---- ExplicitGraph ----

ExplicitGraph::Builder& ExplicitGraph::Builder::add_level(
    std::vector<std::string> labels) {
  levels_.push_back(std::move(labels));
  return *this;
}

ExplicitGraph::Builder& ExplicitGraph::Builder::add_edge(int from_level,
                                                         const std::string& from,
                                                         const std::string& to,
                                                         std::uint32_t mult) {
  edges_.push_back({from_level, from, to, mult});
  return *this;
}

std::shared_ptr<const ExplicitGraph> ExplicitGraph::Builder::build() {
  if (levels_.empty()) throw FormatError("graph has no levels");
  auto g = std::shared_ptr<ExplicitGraph>(new ExplicitGraph());
  g->labels_ = levels_;
  g->index_.resize(levels_.size());
  for (std::size_t n = 0; n < levels_.size(); ++n) {
    for (std::size_t i = 0; i < levels_[n].size(); ++i) {
      auto [it, fresh] =
          g->index_[n].emplace(levels_[n][i], static_cast<int>(i));
      if (!fresh)
        throw FormatError("duplicate label '" + levels_[n][i] + "' at level " +
                          std::to_string(n));
    }
  }
  g->out_.resize(levels_.size());
  g->in_.resize(levels_.size());
  for (std::size_t n = 0; n < levels_.size(); ++n) {
    g->out_[n].resize(levels_[n].size());
    g->in_[n].resize(levels_[n].size());
  }
  for (const auto& e : edges_) {
    if (e.level < 0 || e.level + 1 >= static_cast<int>(levels_.size()))
      throw FormatError("edge level " + std::to_string(e.level) + " out of range");
    if (e.mult == 0)
      throw FormatError("edge '" + e.from + "'->'" + e.to + "' has multiplicity 0");
    auto fit = g->index_[e.level].find(e.from);
    if (fit == g->index_[e.level].end())
      throw FormatError("edge from unknown vertex '" + e.from + "' at level " +
                        std::to_string(e.level));
    auto tit = g->index_[e.level + 1].find(e.to);
    if (tit == g->index_[e.level + 1].end())
      throw FormatError("edge to unknown vertex '" + e.to + "' at level " +
                        std::to_string(e.level + 1));
    auto& row = g->out_[e.level][fit->second];
    for (const auto& he : row)
      if (he.neighbor == tit->second)
        throw FormatError("duplicate edge '" + e.from + "'->'" + e.to + "'");
    row.push_back({tit->second, e.mult});
    g->in_[e.level + 1][tit->second].push_back({fit->second, e.mult});
  }
  auto by_neighbor = [](const HalfEdge& a, const HalfEdge& b) {
    return a.neighbor < b.neighbor;
  };
  for (auto& lvl : g->out_)
    for (auto& row : lvl) std::sort(row.begin(), row.end(), by_neighbor);
  for (auto& lvl : g->in_)
    for (auto& row : lvl) std::sort(row.begin(), row.end(), by_neighbor);
  return g;
}

int ExplicitGraph::depth() const { return static_cast<int>(labels_.size()); }

int ExplicitGraph::level_size(int level) const {
  if (level < 0 || level >= depth()) throw std::invalid_argument("level out of range");
  return static_cast<int>(labels_[level].size());
}

std::string ExplicitGraph::label(VertexId v) const {
  if (!contains(v)) throw std::invalid_argument("vertex out of range");
  return labels_[v.level][v.index];
}

std::optional<int> ExplicitGraph::find_vertex(int level, const std::string& lbl) const {
  if (level < 0 || level >= depth()) return std::nullopt;
  auto it = index_[level].find(lbl);
  if (it == index_[level].end()) return std::nullopt;
  return it->second;
}

void ExplicitGraph::out_edges(VertexId v, std::vector<HalfEdge>& out) const {
  if (!contains(v)) throw std::invalid_argument("vertex out of range");
  if (v.level + 1 >= depth()) return;
  const auto& row = out_[v.level][v.index];
  out.insert(out.end(), row.begin(), row.end());
}

void ExplicitGraph::in_edges(VertexId v, std::vector<HalfEdge>& out) const {
  if (!contains(v)) throw std::invalid_argument("vertex out of range");
  if (v.level == 0) return;
  const auto& row = in_[v.level][v.index];
  out.insert(out.end(), row.begin(), row.end());
}

// ---- PascalGraph ----

PascalGraph::PascalGraph(int depth) : depth_(depth) {
  if (depth < 1) throw std::invalid_argument("pascal graph needs depth >= 1");
}

int PascalGraph::level_size(int level) const {
  if (level < 0 || level >= depth_) throw std::invalid_argument("level out of range");
  return level + 1;
}

std::string PascalGraph::label(VertexId v) const {
  if (!contains(v)) throw std::invalid_argument("vertex out of range");
  return std::to_string(v.level) + "," + std::to_string(v.index);
}

std::optional<int> PascalGraph::find_vertex(int level, const std::string& lbl) const {
  if (level < 0 || level >= depth_) return std::nullopt;
  auto comma = lbl.find(',');
  if (comma == std::string::npos) return std::nullopt;
  int n = 0, k = 0;
  if (!parse_int(lbl.substr(0, comma), n) || !parse_int(lbl.substr(comma + 1), k))
    return std::nullopt;
  if (n != level || k > level) return std::nullopt;
  return k;
}

void PascalGraph::out_edges(VertexId v, std::vector<HalfEdge>& out) const {
  if (!contains(v)) throw std::invalid_argument("vertex out of range");
  if (v.level + 1 >= depth_) return;
  out.push_back({v.index, 1});
  out.push_back({v.index + 1, 1});
}

void PascalGraph::in_edges(VertexId v, std::vector<HalfEdge>& out) const {
  if (!contains(v)) throw std::invalid_argument("vertex out of range");
  if (v.level == 0) return;
  if (v.index >= 1) out.push_back({v.index - 1, 1});
  if (v.index <= v.level - 1) out.push_back({v.index, 1});
}

std::optional<BigInt> PascalGraph::path_count_hint(VertexId v, VertexId w) const {
  return binomial(w.level - v.level, w.index - v.index);
}

// ---- YoungGraph ----

YoungGraph::YoungGraph(int depth) {
  if (depth < 1) throw std::invalid_argument("young graph needs depth >= 1");
  parts_.reserve(depth);
  index_.resize(depth);
  for (int n = 0; n < depth; ++n) {
    parts_.push_back(partitions_of(n));
    for (std::size_t i = 0; i < parts_[n].size(); ++i)
      index_[n].emplace(partition_label(parts_[n][i]), static_cast<int>(i));
  }
}

int YoungGraph::level_size(int level) const {
  if (level < 0 || level >= depth()) throw std::invalid_argument("level out of range");
  return static_cast<int>(parts_[level].size());
}

std::string YoungGraph::label(VertexId v) const {
  return partition_label(partition(v));
}

std::optional<int> YoungGraph::find_vertex(int level, const std::string& lbl) const {
  if (level < 0 || level >= depth()) return std::nullopt;
  auto it = index_[level].find(lbl);
  if (it == index_[level].end()) return std::nullopt;
  return it->second;
}

const std::vector<int>& YoungGraph::partition(VertexId v) const {
  if (!contains(v)) throw std::invalid_argument("vertex out of range");
  return parts_[v.level][v.index];
}

void YoungGraph::out_edges(VertexId v, std::vector<HalfEdge>& out) const {
  const auto& part = partition(v);
  if (v.level + 1 >= depth()) return;
  const auto& next = index_[v.level + 1];
  std::vector<int> grown = part;
  for (std::size_t r = 0; r <= part.size(); ++r) {
    if (r < part.size()) {
      if (r > 0 && part[r - 1] == part[r]) continue;
      grown[r] += 1;
      out.push_back({next.at(partition_label(grown)), 1});
      grown[r] -= 1;
    } else {
      grown.push_back(1);
      out.push_back({next.at(partition_label(grown)), 1});
      grown.pop_back();
    }
  }
}

void YoungGraph::in_edges(VertexId v, std::vector<HalfEdge>& out) const {
  const auto& part = partition(v);
  if (v.level == 0) return;
  const auto& prev = index_[v.level - 1];
  std::vector<int> shrunk = part;
  // Last removable row first: removing from a later row gives the
  // reverse-lexicographically earlier (smaller-index) parent.
  for (int r = static_cast<int>(part.size()) - 1; r >= 0; --r) {
    if (r + 1 < static_cast<int>(part.size()) && part[r] == part[r + 1]) continue;
    if (shrunk[r] == 1) {
      shrunk.pop_back();
      out.push_back({prev.at(partition_label(shrunk)), 1});
      shrunk.push_back(1);
    } else {
      shrunk[r] -= 1;
      out.push_back({prev.at(partition_label(shrunk)), 1});
      shrunk[r] += 1;
    }
  }
}

std::shared_ptr<const GradedGraph> pascal_graph(int depth) {
  return std::make_shared<const PascalGraph>(depth);
}

std::shared_ptr<const GradedGraph> young_graph(int depth) {
  return std::make_shared<const YoungGraph>(depth);
}

std::vector<std::vector<int>> partitions_of(int n) {
  if (n < 0) throw std::invalid_argument("negative partition size");
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  // Reverse-lexicographic order: largest first part first.
  auto gen = [&](auto&& self, int left, int max_part) -> void {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int first = std::min(left, max_part); first >= 1; --first) {
      cur.push_back(first);
      self(self, left - first, first);
      cur.pop_back();
    }
  };
  gen(gen, n, n);
  return out;
}

std::string partition_label(const std::vector<int>& part) {
  if (part.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < part.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(part[i]);
  }
  return out;
}

std::vector<int> parse_partition_label(const std::string& label) {
  if (label == "e") return {};
  std::vector<int> part;
  std::size_t pos = 0;
  while (pos <= label.size()) {
    auto comma = label.find(',', pos);
    auto piece = label.substr(pos, comma == std::string::npos ? std::string::npos
                                                              : comma - pos);
    int val = 0;
    if (!parse_int(piece, val) || val < 1)
      throw FormatError("bad partition label '" + label + "'");
    part.push_back(val);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  for (std::size_t i = 0; i + 1 < part.size(); ++i)
    if (part[i] < part[i + 1])
      throw FormatError("partition label '" + label + "' is not weakly decreasing");
  return part;
}

ValidationReport validate_graph(const GradedGraph& g, bool multi_root) {
  ValidationReport rep;
  if (g.depth() < 1) {
    rep.add("graph", "no levels");
    return rep;
  }
  if (!multi_root && g.level_size(0) != 1)
    rep.add("level 0", "expected a single initial vertex, found " +
                           std::to_string(g.level_size(0)));
  std::vector<HalfEdge> buf;
  for (int n = 0; n < g.depth(); ++n) {
    if (g.level_size(n) < 1) {
      rep.add("level " + std::to_string(n), "empty level");
      continue;
    }
    for (int i = 0; i < g.level_size(n); ++i) {
      VertexId v{n, i};
      if (n + 1 < g.depth()) {
        buf.clear();
        g.out_edges(v, buf);
        if (buf.empty())
          rep.add("vertex " + vertex_desc(g, v), "no outgoing edge");
      }
      if (n > 0) {
        buf.clear();
        g.in_edges(v, buf);
        if (buf.empty())
          rep.add("vertex " + vertex_desc(g, v), "no incoming edge");
      }
    }
  }
  return rep;
}

BigInt path_count(const GradedGraph& g, VertexId v, VertexId w) {
  if (!g.contains(v) || !g.contains(w))
    throw std::invalid_argument("path_count: vertex out of range");
  if (v.level > w.level)
    throw std::invalid_argument("path_count: start level above end level");
  if (v.level == w.level) return v.index == w.index ? 1 : 0;
  if (auto hint = g.path_count_hint(v, w)) return *hint;

  std::vector<BigInt> cur(g.level_size(v.level));
  cur[v.index] = 1;
  std::vector<HalfEdge> buf;
  for (int n = v.level; n < w.level; ++n) {
    std::vector<BigInt> next(g.level_size(n + 1));
    for (int i = 0; i < g.level_size(n); ++i) {
      if (cur[i] == 0) continue;
      buf.clear();
      g.out_edges({n, i}, buf);
      for (const auto& e : buf) next[e.neighbor] += cur[i] * e.mult;
    }
    cur = std::move(next);
  }
  return cur[w.index];
}

std::vector<FinitePath> enumerate_paths(const GradedGraph& g, VertexId v,
                                        VertexId w, std::uint64_t cap) {
  BigInt count = path_count(g, v, w);
  if (count > cap)
    throw CapExceeded("path count " + count.str() + " from " + vertex_desc(g, v) +
                      " to " + vertex_desc(g, w) + " exceeds cap " +
                      std::to_string(cap));
  std::vector<FinitePath> out;
  out.reserve(count.convert_to<std::size_t>());
  FinitePath cur;
  cur.start_level = v.level;
  cur.vertices.push_back(v.index);
  std::vector<HalfEdge> buf;
  auto dfs = [&](auto&& self, VertexId at) -> void {
    if (at.level == w.level) {
      if (at.index == w.index) out.push_back(cur);
      return;
    }
    buf.clear();
    g.out_edges(at, buf);
    auto edges = buf;
    for (const auto& e : edges) {
      for (std::uint32_t slot = 0; slot < e.mult; ++slot) {
        cur.vertices.push_back(e.neighbor);
        cur.edge_choices.push_back(slot);
        self(self, {at.level + 1, e.neighbor});
        cur.vertices.pop_back();
        cur.edge_choices.pop_back();
      }
    }
  };
  dfs(dfs, v);
  return out;
}

}  // namespace emc
