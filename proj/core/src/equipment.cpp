#include "emc/equipment.hpp"

#include "emc/random.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

namespace emc {
namespace {

std::string vertex_desc(const GradedGraph& g, VertexId v) {
  return "'" + g.label(v) + "'@" + std::to_string(v.level);
}

std::string row_desc(int level, const std::string& to) {
  return "row (" + std::to_string(level) + ", '" + to + "')";
}

std::string format_path(const GradedGraph& g, const FinitePath& p) {
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

std::string format_value(const CocycleValue& v) {
  return v.defined() ? format_rational(*v.value) : "undefined";
}

}  // namespace

CotransitionSystem::CotransitionSystem(std::shared_ptr<const GradedGraph> g)
    : graph_(std::move(g)) {
  if (!graph_) throw std::invalid_argument("null graph");
}

bool CotransitionSystem::has_row(VertexId x) const {
  return graph_->contains(x) && x.level >= 1;
}

Rational CotransitionSystem::prob(VertexId from, std::uint32_t edge,
                                  VertexId to) const {
  if (from.level + 1 != to.level)
    throw std::invalid_argument("cotransition levels are not adjacent");
  std::vector<CotransitionEntry> entries;
  row(to, entries);
  for (const auto& e : entries)
    if (e.from == from.index && e.edge == edge) return e.p;
  throw std::invalid_argument("no edge slot between " + vertex_desc(*graph_, from) +
                              " and " + vertex_desc(*graph_, to));
}

// ---- TableCotransitions ----

TableCotransitions::TableCotransitions(std::shared_ptr<const GradedGraph> g)
    : CotransitionSystem(std::move(g)) {}

std::shared_ptr<const TableCotransitions> TableCotransitions::from_rows(
    std::shared_ptr<const GradedGraph> g,
    std::vector<std::vector<std::optional<std::vector<CotransitionEntry>>>> rows) {
  auto sys = std::shared_ptr<TableCotransitions>(new TableCotransitions(std::move(g)));
  if (static_cast<int>(rows.size()) != sys->graph().depth())
    throw std::invalid_argument("row table does not match graph depth");
  sys->rows_ = std::move(rows);
  return sys;
}

bool TableCotransitions::has_row(VertexId x) const {
  if (!CotransitionSystem::has_row(x)) return false;
  return rows_[x.level][x.index].has_value();
}

void TableCotransitions::row(VertexId x, std::vector<CotransitionEntry>& out) const {
  if (!has_row(x))
    throw std::invalid_argument("no cotransition row at " + vertex_desc(*graph_, x));
  const auto& r = *rows_[x.level][x.index];
  out.insert(out.end(), r.begin(), r.end());
}

// ---- CentralEquipment ----

CentralEquipment::CentralEquipment(std::shared_ptr<const GradedGraph> g)
    : CotransitionSystem(std::move(g)) {}

BigInt CentralEquipment::dim(VertexId v) const {
  if (!graph_->contains(v)) throw std::invalid_argument("vertex out of range");
  if (graph_->level_size(0) == 1) {
    if (auto hint = graph_->path_count_hint({0, 0}, v)) return *hint;
  }
  std::lock_guard<std::mutex> lock(mu_);
  if (dims_.empty())
    dims_.push_back(std::vector<BigInt>(graph_->level_size(0), BigInt(1)));
  std::vector<HalfEdge> buf;
  while (static_cast<int>(dims_.size()) <= v.level) {
    int n = static_cast<int>(dims_.size()) - 1;
    std::vector<BigInt> next(graph_->level_size(n + 1));
    for (int i = 0; i < graph_->level_size(n); ++i) {
      if (dims_[n][i] == 0) continue;
      buf.clear();
      graph_->out_edges({n, i}, buf);
      for (const auto& e : buf) next[e.neighbor] += dims_[n][i] * e.mult;
    }
    dims_.push_back(std::move(next));
  }
  return dims_[v.level][v.index];
}

void CentralEquipment::row(VertexId x, std::vector<CotransitionEntry>& out) const {
  if (!has_row(x))
    throw std::invalid_argument("no cotransition row at level " +
                                std::to_string(x.level));
  BigInt dx = dim(x);
  if (dx == 0)
    throw std::invalid_argument("vertex " + vertex_desc(*graph_, x) +
                                " has no path from level 0");
  std::vector<HalfEdge> buf;
  graph_->in_edges(x, buf);
  for (const auto& e : buf) {
    Rational p(dim({x.level - 1, e.neighbor}), dx);
    for (std::uint32_t slot = 0; slot < e.mult; ++slot)
      out.push_back({e.neighbor, slot, p});
  }
}

std::shared_ptr<const CotransitionSystem> central_equipment(
    std::shared_ptr<const GradedGraph> g) {
  return std::make_shared<const CentralEquipment>(std::move(g));
}

// ---- from_table / materialize / random_equipment ----

std::shared_ptr<const CotransitionSystem> from_table(
    std::shared_ptr<const GradedGraph> g,
    const std::vector<CotransitionRowSpec>& specs) {
  const auto& graph = *g;
  const int d = graph.depth();
  std::vector<std::vector<std::optional<std::vector<CotransitionEntry>>>> rows(d);
  for (int n = 0; n < d; ++n)
    rows[n].resize(graph.level_size(n));

  std::vector<HalfEdge> buf;
  for (const auto& spec : specs) {
    if (spec.level < 1 || spec.level >= d)
      throw FormatError(row_desc(spec.level, spec.to) + ": level out of range");
    auto to = graph.find_vertex(spec.level, spec.to);
    if (!to)
      throw FormatError(row_desc(spec.level, spec.to) + ": unknown vertex");
    if (rows[spec.level][*to])
      throw FormatError(row_desc(spec.level, spec.to) + ": duplicate row");

    buf.clear();
    graph.in_edges({spec.level, *to}, buf);
    std::vector<CotransitionEntry> row;
    std::map<std::pair<int, std::uint32_t>, std::size_t> slot_of;
    for (const auto& e : buf)
      for (std::uint32_t slot = 0; slot < e.mult; ++slot) {
        slot_of[{e.neighbor, slot}] = row.size();
        row.push_back({e.neighbor, slot, Rational(0)});
      }

    std::vector<bool> seen(row.size(), false);
    Rational sum = 0;
    for (const auto& ent : spec.entries) {
      auto from = graph.find_vertex(spec.level - 1, ent.from);
      if (!from)
        throw FormatError(row_desc(spec.level, spec.to) + ": '" + ent.from +
                          "' is not a vertex at level " + std::to_string(spec.level - 1));
      auto slot = slot_of.find({*from, ent.edge});
      if (slot == slot_of.end())
        throw FormatError(row_desc(spec.level, spec.to) + ": probability on non-edge '" +
                          ent.from + "' (edge " + std::to_string(ent.edge) + ")");
      if (seen[slot->second])
        throw FormatError(row_desc(spec.level, spec.to) + ": duplicate entry for '" +
                          ent.from + "'");
      if (ent.p < 0)
        throw FormatError(row_desc(spec.level, spec.to) + ": negative probability");
      seen[slot->second] = true;
      row[slot->second].p = ent.p;
      sum += ent.p;
    }
    if (sum != 1)
      throw FormatError(row_desc(spec.level, spec.to) + " sums to " +
                        format_rational(sum) + ", expected 1");
    rows[spec.level][*to] = std::move(row);
  }

  for (int n = 1; n < d; ++n)
    for (int i = 0; i < graph.level_size(n); ++i)
      if (!rows[n][i])
        throw FormatError("missing cotransition row for " +
                          vertex_desc(graph, {n, i}));

  return TableCotransitions::from_rows(std::move(g), std::move(rows));
}

std::vector<CotransitionRowSpec> materialize(const CotransitionSystem& sys) {
  const auto& g = sys.graph();
  std::vector<CotransitionRowSpec> out;
  std::vector<CotransitionEntry> entries;
  for (int n = 1; n < g.depth(); ++n)
    for (int i = 0; i < g.level_size(n); ++i) {
      VertexId x{n, i};
      if (!sys.has_row(x)) continue;
      entries.clear();
      sys.row(x, entries);
      CotransitionRowSpec spec;
      spec.level = n;
      spec.to = g.label(x);
      for (const auto& e : entries)
        spec.entries.push_back({g.label({n - 1, e.from}), e.edge, e.p});
      out.push_back(std::move(spec));
    }
  return out;
}

std::shared_ptr<const CotransitionSystem> random_equipment(
    std::shared_ptr<const GradedGraph> g, std::uint64_t seed) {
  const auto& graph = *g;
  BitStream bits(seed);
  const int d = graph.depth();
  std::vector<std::vector<std::optional<std::vector<CotransitionEntry>>>> rows(d);
  for (int n = 0; n < d; ++n) rows[n].resize(graph.level_size(n));

  std::vector<HalfEdge> buf;
  for (int n = 1; n < d; ++n)
    for (int i = 0; i < graph.level_size(n); ++i) {
      buf.clear();
      graph.in_edges({n, i}, buf);
      std::vector<std::uint32_t> weights;
      std::uint64_t total = 0;
      for (const auto& e : buf)
        for (std::uint32_t slot = 0; slot < e.mult; ++slot) {
          (void)slot;
          std::uint32_t w = 1 + static_cast<std::uint32_t>(bits.next_u64() % 9);
          weights.push_back(w);
          total += w;
        }
      std::vector<CotransitionEntry> row;
      std::size_t at = 0;
      for (const auto& e : buf)
        for (std::uint32_t slot = 0; slot < e.mult; ++slot)
          row.push_back({e.neighbor, slot,
                         Rational(BigInt(weights[at++]), BigInt(total))});
      rows[n][i] = std::move(row);
    }
  return TableCotransitions::from_rows(std::move(g), std::move(rows));
}

// ---- cocycle ----

CocycleValue cocycle_eval(const CotransitionSystem& sys, const FinitePath& p,
                          const FinitePath& q) {
  const auto& g = sys.graph();
  require_valid_path(g, p);
  require_valid_path(g, q);
  if (p.start_level != q.start_level || p.vertices.size() != q.vertices.size())
    throw std::invalid_argument(
        "paths are not tail-equivalent: different level spans");

  const std::size_t len = p.vertices.size();
  // First position from which vertices and edge choices all coincide.
  std::size_t t = len;
  while (t > 0) {
    std::size_t i = t - 1;
    if (p.vertices[i] != q.vertices[i]) break;
    if (i < len - 1 && p.edge_choices[i] != q.edge_choices[i]) break;
    t = i;
  }
  if (t == len)
    throw std::invalid_argument(
        "paths are not tail-equivalent: endpoints differ");

  Rational num = 1, den = 1;
  for (std::size_t j = 0; j < t; ++j) {
    VertexId pt{p.start_level + static_cast<int>(j) + 1, p.vertices[j + 1]};
    VertexId qt{pt.level, q.vertices[j + 1]};
    if (!sys.has_row(pt) || !sys.has_row(qt)) return CocycleValue::undefined();
    num *= sys.prob({pt.level - 1, p.vertices[j]}, p.edge_choices[j], pt);
    den *= sys.prob({qt.level - 1, q.vertices[j]}, q.edge_choices[j], qt);
  }
  if (den == 0) return CocycleValue::undefined();
  if (num == 0) return CocycleValue::of(Rational(0));
  return CocycleValue::of(num / den);
}

CocycleTable cocycle_table(const CotransitionSystem& sys, int level_bound,
                           std::uint64_t cap) {
  const auto& g = sys.graph();
  if (level_bound < 0 || level_bound >= g.depth())
    throw std::invalid_argument("level bound out of range");

  CocycleTable table;
  for (int wi = 0; wi < g.level_size(level_bound); ++wi) {
    VertexId w{level_bound, wi};
    BigInt count = 0;
    for (int r = 0; r < g.level_size(0); ++r)
      count += path_count(g, {0, r}, w);
    if (count > cap)
      throw CapExceeded("class of '" + g.label(w) + "' has " + count.str() +
                        " paths, cap " + std::to_string(cap));
    std::vector<FinitePath> paths;
    for (int r = 0; r < g.level_size(0); ++r) {
      auto part = enumerate_paths(g, {0, r}, w, cap);
      paths.insert(paths.end(), part.begin(), part.end());
    }
    if (paths.empty()) continue;
    std::vector<std::vector<CocycleValue>> values(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
      values[i].resize(paths.size());
      for (std::size_t j = 0; j < paths.size(); ++j)
        values[i][j] = cocycle_eval(sys, paths[i], paths[j]);
    }
    table.classes.push_back(std::move(paths));
    table.values.push_back(std::move(values));
  }
  return table;
}

ValidationReport check_cocycle_axioms(const CocycleTable& table,
                                      const GradedGraph& g) {
  ValidationReport rep;
  for (std::size_t c = 0; c < table.classes.size(); ++c) {
    const auto& paths = table.classes[c];
    const auto& v = table.values[c];
    const std::string cls =
        "class " + vertex_desc(g, path_endpoint(paths.front()));
    const std::size_t m = paths.size();

    for (std::size_t i = 0; i < m; ++i) {
      if (!v[i][i].defined() || *v[i][i].value != 1) {
        rep.add(cls, "rho(p,p) = " + format_value(v[i][i]) + " for p = " +
                         format_path(g, paths[i]) + ", expected 1");
        return rep;
      }
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const auto& a = v[i][j];
        const auto& b = v[j][i];
        if (!a.defined()) continue;
        if (*a.value > 0) {
          if (!b.defined() || *a.value * *b.value != 1) {
            rep.add(cls, "rho(p,q) = " + format_value(a) + " but rho(q,p) = " +
                             format_value(b) + " for p = " + format_path(g, paths[i]) +
                             ", q = " + format_path(g, paths[j]));
            return rep;
          }
        } else if (b.defined()) {
          rep.add(cls, "rho(p,q) = 0 but rho(q,p) = " + format_value(b) +
                           " is defined for p = " + format_path(g, paths[i]) +
                           ", q = " + format_path(g, paths[j]));
          return rep;
        }
      }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        if (!v[i][j].defined()) continue;
        for (std::size_t k = 0; k < m; ++k) {
          if (!v[j][k].defined()) continue;
          const auto& c3 = v[i][k];
          Rational expect = *v[i][j].value * *v[j][k].value;
          if (!c3.defined() || *c3.value != expect) {
            rep.add(cls,
                    "rho(p,q)*rho(q,r) = " + format_rational(expect) +
                        " but rho(p,r) = " + format_value(c3) + " for p = " +
                        format_path(g, paths[i]) + ", q = " + format_path(g, paths[j]) +
                        ", r = " + format_path(g, paths[k]));
            return rep;
          }
        }
      }
  }
  return rep;
}

ValidationReport check_cocycle_axioms(const CotransitionSystem& sys,
                                      int level_bound, std::uint64_t cap) {
  return check_cocycle_axioms(cocycle_table(sys, level_bound, cap), sys.graph());
}

}  // namespace emc
