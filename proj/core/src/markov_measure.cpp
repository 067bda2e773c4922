#include "emc/markov_measure.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace emc {
namespace {

std::string vertex_desc(const GradedGraph& g, VertexId v) {
  return "'" + g.label(v) + "'@" + std::to_string(v.level);
}

std::string row_desc(int level, const std::string& from) {
  return "forward row (" + std::to_string(level) + ", '" + from + "')";
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

bool parse_pascal_label(const std::string& lbl, int& n, int& k) {
  auto comma = lbl.find(',');
  if (comma == std::string::npos) return false;
  auto piece = [&](const std::string& s, int& out) {
    if (s.empty() || s.size() > 9) return false;
    int val = 0;
    for (char c : s) {
      if (c < '0' || c > '9') return false;
      val = val * 10 + (c - '0');
    }
    out = val;
    return true;
  };
  return piece(lbl.substr(0, comma), n) && piece(lbl.substr(comma + 1), k);
}

void require_pascal_shape(const GradedGraph& g) {
  if (g.level_size(0) != 1)
    throw std::invalid_argument("not a Pascal graph: level 0 is not a single vertex");
  for (int n = 0; n < g.depth(); ++n)
    if (g.level_size(n) != n + 1)
      throw std::invalid_argument("not a Pascal graph: level " + std::to_string(n) +
                                  " has " + std::to_string(g.level_size(n)) +
                                  " vertices");
}

int pascal_k(const GradedGraph& g, VertexId v) {
  int n = 0, k = 0;
  if (!parse_pascal_label(g.label(v), n, k) || n != v.level || k > v.level)
    throw std::invalid_argument("not a Pascal graph: bad label at " +
                                vertex_desc(g, v));
  return k;
}

// Lazily caches one ExactCategorical per visited vertex.
class GenericSampler final : public PathSampler {
 public:
  GenericSampler(const MarkovMeasure& m, int target) : m_(m), target_(target) {}

  FinitePath sample(BitStream& bits) override {
    FinitePath path;
    path.start_level = 0;
    int at = initial_index(bits);
    path.vertices.push_back(at);
    for (int n = 0; n < target_; ++n) {
      const auto& step = step_at({n, at});
      auto [to, edge] = step.slots[step.cat.sample(bits)];
      path.vertices.push_back(to);
      path.edge_choices.push_back(edge);
      at = to;
    }
    return path;
  }

 private:
  struct Step {
    ExactCategorical cat;
    std::vector<std::pair<int, std::uint32_t>> slots;
  };

  int initial_index(BitStream& bits) {
    if (!init_) {
      std::vector<Rational> probs;
      std::vector<int> map;
      for (int i = 0; i < m_.graph().level_size(0); ++i) {
        Rational p = m_.initial(i);
        if (p > 0) {
          probs.push_back(std::move(p));
          map.push_back(i);
        }
      }
      init_.emplace(Step{ExactCategorical(std::move(probs)), {}});
      init_map_ = std::move(map);
    }
    return init_map_[init_->cat.sample(bits)];
  }

  const Step& step_at(VertexId v) {
    std::uint64_t key =
        (static_cast<std::uint64_t>(v.level) << 32) | static_cast<std::uint32_t>(v.index);
    auto it = steps_.find(key);
    if (it != steps_.end()) return it->second;
    std::vector<ForwardEntry> row;
    m_.forward_row(v, row);
    std::vector<Rational> probs;
    std::vector<std::pair<int, std::uint32_t>> slots;
    for (auto& e : row)
      if (e.p > 0) {
        probs.push_back(std::move(e.p));
        slots.emplace_back(e.to, e.edge);
      }
    if (probs.empty())
      throw std::invalid_argument("all-zero forward row at " +
                                  vertex_desc(m_.graph(), v));
    auto [ins, ok] =
        steps_.emplace(key, Step{ExactCategorical(std::move(probs)), std::move(slots)});
    (void)ok;
    return ins->second;
  }

  const MarkovMeasure& m_;
  int target_;
  std::optional<Step> init_;
  std::vector<int> init_map_;
  std::unordered_map<std::uint64_t, Step> steps_;
};

// Walks (n, k) coordinates directly; valid only on PascalGraph, where the
// vertex index at level n is k.
class PascalWalkSampler final : public PathSampler {
 public:
  PascalWalkSampler(std::vector<ExactCategorical> step_alternatives,
                    std::optional<ExactCategorical> latent, int target)
      : steps_(std::move(step_alternatives)),
        latent_(std::move(latent)),
        target_(target) {}

  FinitePath sample(BitStream& bits) override {
    std::size_t comp = 0;
    if (latent_) comp = static_cast<std::size_t>(latent_->sample(bits));
    FinitePath path;
    path.start_level = 0;
    path.vertices.reserve(target_ + 1);
    path.edge_choices.reserve(target_);
    int k = 0;
    path.vertices.push_back(0);
    for (int n = 0; n < target_; ++n) {
      k += steps_[comp].sample(bits);
      path.vertices.push_back(k);
      path.edge_choices.push_back(0);
    }
    return path;
  }

 private:
  std::vector<ExactCategorical> steps_;
  std::optional<ExactCategorical> latent_;
  int target_;
};

}  // namespace

MarkovMeasure::MarkovMeasure(std::shared_ptr<const GradedGraph> g)
    : graph_(std::move(g)) {
  if (!graph_) throw std::invalid_argument("null graph");
}

bool MarkovMeasure::has_forward_row(VertexId x) const {
  return graph_->contains(x) && x.level + 1 < graph_->depth();
}

std::unique_ptr<PathSampler> MarkovMeasure::make_sampler(int target_level) const {
  if (target_level < 0 || target_level >= graph_->depth())
    throw std::invalid_argument("sampler target level out of range");
  return std::make_unique<GenericSampler>(*this, target_level);
}

// ---- TableMeasure ----

TableMeasure::TableMeasure(std::shared_ptr<const GradedGraph> g)
    : MarkovMeasure(std::move(g)) {}

std::shared_ptr<const TableMeasure> TableMeasure::from_rows(
    std::shared_ptr<const GradedGraph> g, std::vector<Rational> initial,
    std::vector<std::vector<std::optional<std::vector<ForwardEntry>>>> rows) {
  auto m = std::shared_ptr<TableMeasure>(new TableMeasure(std::move(g)));
  if (static_cast<int>(initial.size()) != m->graph().level_size(0) ||
      static_cast<int>(rows.size()) != m->graph().depth())
    throw std::invalid_argument("measure table does not match graph shape");
  m->initial_ = std::move(initial);
  m->rows_ = std::move(rows);
  return m;
}

std::shared_ptr<const TableMeasure> TableMeasure::create(
    std::shared_ptr<const GradedGraph> g, const std::vector<InitialSpec>& initial,
    const std::vector<ForwardRowSpec>& rows) {
  const auto& graph = *g;
  const int d = graph.depth();

  std::vector<Rational> init(graph.level_size(0), Rational(0));
  std::vector<bool> init_seen(init.size(), false);
  Rational init_sum = 0;
  for (const auto& spec : initial) {
    auto idx = graph.find_vertex(0, spec.vertex);
    if (!idx)
      throw FormatError("initial distribution: unknown vertex '" + spec.vertex + "'");
    if (init_seen[*idx])
      throw FormatError("initial distribution: duplicate vertex '" + spec.vertex + "'");
    if (spec.p < 0)
      throw FormatError("initial distribution: negative probability");
    init_seen[*idx] = true;
    init[*idx] = spec.p;
    init_sum += spec.p;
  }
  if (init_sum != 1)
    throw FormatError("initial distribution sums to " + format_rational(init_sum) +
                      ", expected 1");

  std::vector<std::vector<std::optional<std::vector<ForwardEntry>>>> table(d);
  for (int n = 0; n < d; ++n) table[n].resize(graph.level_size(n));

  std::vector<HalfEdge> buf;
  for (const auto& spec : rows) {
    if (spec.level < 0 || spec.level + 1 >= d)
      throw FormatError(row_desc(spec.level, spec.from) + ": level out of range");
    auto from = graph.find_vertex(spec.level, spec.from);
    if (!from)
      throw FormatError(row_desc(spec.level, spec.from) + ": unknown vertex");
    if (table[spec.level][*from])
      throw FormatError(row_desc(spec.level, spec.from) + ": duplicate row");

    buf.clear();
    graph.out_edges({spec.level, *from}, buf);
    std::vector<ForwardEntry> row;
    std::map<std::pair<int, std::uint32_t>, std::size_t> slot_of;
    for (const auto& e : buf)
      for (std::uint32_t slot = 0; slot < e.mult; ++slot) {
        slot_of[{e.neighbor, slot}] = row.size();
        row.push_back({e.neighbor, slot, Rational(0)});
      }

    std::vector<bool> seen(row.size(), false);
    Rational sum = 0;
    for (const auto& ent : spec.entries) {
      auto to = graph.find_vertex(spec.level + 1, ent.to);
      if (!to)
        throw FormatError(row_desc(spec.level, spec.from) + ": '" + ent.to +
                          "' is not a vertex at level " + std::to_string(spec.level + 1));
      auto slot = slot_of.find({*to, ent.edge});
      if (slot == slot_of.end())
        throw FormatError(row_desc(spec.level, spec.from) +
                          ": probability on non-edge '" + ent.to + "' (edge " +
                          std::to_string(ent.edge) + ")");
      if (seen[slot->second])
        throw FormatError(row_desc(spec.level, spec.from) + ": duplicate entry for '" +
                          ent.to + "'");
      if (ent.p < 0)
        throw FormatError(row_desc(spec.level, spec.from) + ": negative probability");
      seen[slot->second] = true;
      row[slot->second].p = ent.p;
      sum += ent.p;
    }
    if (sum != 1)
      throw FormatError(row_desc(spec.level, spec.from) + " sums to " +
                        format_rational(sum) + ", expected 1");
    table[spec.level][*from] = std::move(row);
  }

  // Every vertex carrying positive mass needs a forward row.
  std::vector<Rational> mass = init;
  for (int n = 0; n + 1 < d; ++n) {
    std::vector<Rational> next(graph.level_size(n + 1), Rational(0));
    for (int i = 0; i < graph.level_size(n); ++i) {
      if (mass[i] == 0) continue;
      if (!table[n][i])
        throw FormatError("missing " + row_desc(n, graph.label({n, i})) +
                          " at a vertex of positive measure");
      for (const auto& e : *table[n][i]) next[e.to] += mass[i] * e.p;
    }
    mass = std::move(next);
  }

  return from_rows(std::move(g), std::move(init), std::move(table));
}

Rational TableMeasure::initial(int index) const {
  if (index < 0 || index >= static_cast<int>(initial_.size()))
    throw std::invalid_argument("initial index out of range");
  return initial_[index];
}

bool TableMeasure::has_forward_row(VertexId x) const {
  if (!MarkovMeasure::has_forward_row(x)) return false;
  return rows_[x.level][x.index].has_value();
}

void TableMeasure::forward_row(VertexId x, std::vector<ForwardEntry>& out) const {
  if (!has_forward_row(x))
    throw std::invalid_argument("no forward row at " + vertex_desc(*graph_, x));
  const auto& r = *rows_[x.level][x.index];
  out.insert(out.end(), r.begin(), r.end());
}

// ---- PascalBernoulli ----

PascalBernoulli::PascalBernoulli(std::shared_ptr<const GradedGraph> g, Rational p)
    : MarkovMeasure(std::move(g)), p_(std::move(p)) {
  if (p_ < 0 || p_ > 1)
    throw std::invalid_argument("Bernoulli parameter out of [0,1]");
  require_pascal_shape(*graph_);
}

Rational PascalBernoulli::initial(int index) const {
  if (index != 0) throw std::invalid_argument("initial index out of range");
  return Rational(1);
}

void PascalBernoulli::forward_row(VertexId x, std::vector<ForwardEntry>& out) const {
  if (!has_forward_row(x))
    throw std::invalid_argument("no forward row at level " + std::to_string(x.level));
  int k = pascal_k(*graph_, x);
  auto down = graph_->find_vertex(x.level + 1,
                                  std::to_string(x.level + 1) + "," + std::to_string(k));
  auto up = graph_->find_vertex(
      x.level + 1, std::to_string(x.level + 1) + "," + std::to_string(k + 1));
  if (!down || !up)
    throw std::invalid_argument("not a Pascal graph near " + vertex_desc(*graph_, x));
  std::vector<ForwardEntry> row{{*down, 0, 1 - p_}, {*up, 0, p_}};
  if (row[0].to > row[1].to) std::swap(row[0], row[1]);
  out.insert(out.end(), row.begin(), row.end());
}

std::unique_ptr<PathSampler> PascalBernoulli::make_sampler(int target_level) const {
  if (target_level < 0 || target_level >= graph_->depth())
    throw std::invalid_argument("sampler target level out of range");
  if (!dynamic_cast<const PascalGraph*>(graph_.get()))
    return MarkovMeasure::make_sampler(target_level);
  std::vector<ExactCategorical> steps;
  steps.emplace_back(std::vector<Rational>{1 - p_, p_});
  return std::make_unique<PascalWalkSampler>(std::move(steps), std::nullopt,
                                             target_level);
}

// ---- PascalMixture ----

PascalMixture::PascalMixture(std::shared_ptr<const GradedGraph> g,
                             std::vector<Component> components)
    : MarkovMeasure(std::move(g)), components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("empty mixture");
  Rational total = 0;
  for (const auto& c : components_) {
    if (c.weight < 0) throw std::invalid_argument("negative mixture weight");
    if (c.p < 0 || c.p > 1)
      throw std::invalid_argument("Bernoulli parameter out of [0,1]");
    total += c.weight;
  }
  if (total != 1) throw std::invalid_argument("mixture weights must sum to 1");
  require_pascal_shape(*graph_);
}

Rational PascalMixture::f(int n, int k) const {
  Rational sum = 0;
  for (const auto& c : components_)
    sum += c.weight * rational_pow(c.p, static_cast<unsigned>(k)) *
           rational_pow(1 - c.p, static_cast<unsigned>(n - k));
  return sum;
}

Rational PascalMixture::initial(int index) const {
  if (index != 0) throw std::invalid_argument("initial index out of range");
  return Rational(1);
}

void PascalMixture::forward_row(VertexId x, std::vector<ForwardEntry>& out) const {
  if (!has_forward_row(x))
    throw std::invalid_argument("no forward row at level " + std::to_string(x.level));
  int k = pascal_k(*graph_, x);
  Rational fn = f(x.level, k);
  if (fn == 0)
    throw std::invalid_argument("vertex " + vertex_desc(*graph_, x) +
                                " is unreachable under the mixture");
  auto down = graph_->find_vertex(x.level + 1,
                                  std::to_string(x.level + 1) + "," + std::to_string(k));
  auto up = graph_->find_vertex(
      x.level + 1, std::to_string(x.level + 1) + "," + std::to_string(k + 1));
  if (!down || !up)
    throw std::invalid_argument("not a Pascal graph near " + vertex_desc(*graph_, x));
  std::vector<ForwardEntry> row{{*down, 0, f(x.level + 1, k) / fn},
                                {*up, 0, f(x.level + 1, k + 1) / fn}};
  if (row[0].to > row[1].to) std::swap(row[0], row[1]);
  out.insert(out.end(), row.begin(), row.end());
}

std::unique_ptr<PathSampler> PascalMixture::make_sampler(int target_level) const {
  if (target_level < 0 || target_level >= graph_->depth())
    throw std::invalid_argument("sampler target level out of range");
  if (!dynamic_cast<const PascalGraph*>(graph_.get()))
    return MarkovMeasure::make_sampler(target_level);
  std::vector<Rational> weights;
  std::vector<ExactCategorical> steps;
  for (const auto& c : components_) {
    weights.push_back(c.weight);
    steps.emplace_back(std::vector<Rational>{1 - c.p, c.p});
  }
  return std::make_unique<PascalWalkSampler>(
      std::move(steps), ExactCategorical(std::move(weights)), target_level);
}

// ---- PascalStepwise ----

PascalStepwise::PascalStepwise(std::shared_ptr<const GradedGraph> g,
                               std::vector<Rational> ps)
    : MarkovMeasure(std::move(g)), ps_(std::move(ps)) {
  require_pascal_shape(*graph_);
  if (static_cast<int>(ps_.size()) < graph_->depth() - 1)
    throw std::invalid_argument("stepwise measure needs one parameter per level");
  for (const auto& p : ps_)
    if (p < 0 || p > 1)
      throw std::invalid_argument("Bernoulli parameter out of [0,1]");
}

Rational PascalStepwise::initial(int index) const {
  if (index != 0) throw std::invalid_argument("initial index out of range");
  return Rational(1);
}

void PascalStepwise::forward_row(VertexId x, std::vector<ForwardEntry>& out) const {
  if (!has_forward_row(x))
    throw std::invalid_argument("no forward row at level " + std::to_string(x.level));
  int k = pascal_k(*graph_, x);
  const Rational& p = ps_[x.level];
  auto down = graph_->find_vertex(x.level + 1,
                                  std::to_string(x.level + 1) + "," + std::to_string(k));
  auto up = graph_->find_vertex(
      x.level + 1, std::to_string(x.level + 1) + "," + std::to_string(k + 1));
  if (!down || !up)
    throw std::invalid_argument("not a Pascal graph near " + vertex_desc(*graph_, x));
  std::vector<ForwardEntry> row{{*down, 0, 1 - p}, {*up, 0, p}};
  if (row[0].to > row[1].to) std::swap(row[0], row[1]);
  out.insert(out.end(), row.begin(), row.end());
}

// ---- builders ----

std::shared_ptr<const MarkovMeasure> plancherel_measure(
    std::shared_ptr<const GradedGraph> young) {
  const auto& g = *young;
  if (g.level_size(0) != 1)
    throw std::invalid_argument("Plancherel needs a single root");
  const int d = g.depth();

  std::vector<std::vector<BigInt>> dims;
  dims.push_back({BigInt(1)});
  std::vector<HalfEdge> buf;
  for (int n = 0; n + 1 < d; ++n) {
    std::vector<BigInt> next(g.level_size(n + 1));
    for (int i = 0; i < g.level_size(n); ++i) {
      buf.clear();
      g.out_edges({n, i}, buf);
      for (const auto& e : buf) next[e.neighbor] += dims[n][i] * e.mult;
    }
    dims.push_back(std::move(next));
  }

  std::vector<std::vector<std::optional<std::vector<ForwardEntry>>>> rows(d);
  for (int n = 0; n < d; ++n) rows[n].resize(g.level_size(n));
  for (int n = 0; n + 1 < d; ++n)
    for (int i = 0; i < g.level_size(n); ++i) {
      buf.clear();
      g.out_edges({n, i}, buf);
      std::vector<ForwardEntry> row;
      Rational sum = 0;
      BigInt denom = BigInt(n + 1) * dims[n][i];
      for (const auto& e : buf)
        for (std::uint32_t slot = 0; slot < e.mult; ++slot) {
          Rational p(dims[n + 1][e.neighbor], denom);
          sum += p;
          row.push_back({e.neighbor, slot, std::move(p)});
        }
      if (sum != 1)
        throw std::invalid_argument(
            "graph does not have Young branching at " + vertex_desc(g, {n, i}) +
            ": Plancherel row sums to " + format_rational(sum));
      rows[n][i] = std::move(row);
    }

  return TableMeasure::from_rows(std::move(young), {Rational(1)}, std::move(rows));
}

std::shared_ptr<const MarkovMeasure> bernoulli_on_pascal(
    std::shared_ptr<const GradedGraph> pascal, const Rational& p) {
  return std::make_shared<const PascalBernoulli>(std::move(pascal), p);
}

std::shared_ptr<const MarkovMeasure> mixture_on_pascal(
    std::shared_ptr<const GradedGraph> pascal,
    std::vector<PascalMixture::Component> components) {
  return std::make_shared<const PascalMixture>(std::move(pascal),
                                               std::move(components));
}

std::shared_ptr<const MarkovMeasure> stepwise_on_pascal(
    std::shared_ptr<const GradedGraph> pascal, std::vector<Rational> ps) {
  return std::make_shared<const PascalStepwise>(std::move(pascal), std::move(ps));
}

// ---- path functionals ----

Rational cylinder_prob(const MarkovMeasure& m, const FinitePath& p) {
  const auto& g = m.graph();
  require_valid_path(g, p);
  if (p.start_level != 0)
    throw std::invalid_argument("cylinder paths must start at level 0");
  Rational mass = m.initial(p.vertices[0]);
  std::vector<ForwardEntry> row;
  for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
    if (mass == 0) return mass;
    VertexId at{static_cast<int>(i), p.vertices[i]};
    row.clear();
    m.forward_row(at, row);
    bool found = false;
    for (const auto& e : row)
      if (e.to == p.vertices[i + 1] && e.edge == p.edge_choices[i]) {
        mass *= e.p;
        found = true;
        break;
      }
    if (!found)
      throw std::invalid_argument("forward row at " + vertex_desc(g, at) +
                                  " is missing an edge slot");
  }
  return mass;
}

std::shared_ptr<const CotransitionSystem> induced_cotransitions(
    const MarkovMeasure& m) {
  const auto& g = m.graph();
  const int d = g.depth();

  std::vector<std::vector<std::optional<std::vector<CotransitionEntry>>>> rows(d);
  for (int n = 0; n < d; ++n) rows[n].resize(g.level_size(n));

  std::vector<Rational> mass(g.level_size(0));
  for (int i = 0; i < g.level_size(0); ++i) mass[i] = m.initial(i);

  std::vector<ForwardEntry> fbuf;
  std::vector<HalfEdge> ebuf;
  for (int n = 0; n + 1 < d; ++n) {
    // Contributions mass(y) * P(x,e | y) keyed by (x, (y, e)).
    std::vector<std::map<std::pair<int, std::uint32_t>, Rational>> contrib(
        g.level_size(n + 1));
    std::vector<Rational> next(g.level_size(n + 1), Rational(0));
    for (int i = 0; i < g.level_size(n); ++i) {
      if (mass[i] == 0) continue;
      fbuf.clear();
      m.forward_row({n, i}, fbuf);
      for (const auto& e : fbuf) {
        if (e.p == 0) continue;
        Rational part = mass[i] * e.p;
        contrib[e.to][{i, e.edge}] += part;
        next[e.to] += part;
      }
    }
    for (int x = 0; x < g.level_size(n + 1); ++x) {
      if (next[x] == 0) continue;
      ebuf.clear();
      g.in_edges({n + 1, x}, ebuf);
      std::vector<CotransitionEntry> row;
      for (const auto& e : ebuf)
        for (std::uint32_t slot = 0; slot < e.mult; ++slot) {
          Rational p = 0;
          auto it = contrib[x].find({e.neighbor, slot});
          if (it != contrib[x].end()) p = it->second / next[x];
          row.push_back({e.neighbor, slot, std::move(p)});
        }
      rows[n + 1][x] = std::move(row);
    }
    mass = std::move(next);
  }

  return TableCotransitions::from_rows(m.graph_ptr(), std::move(rows));
}

CocycleValue rn_cocycle(const MarkovMeasure& m, const FinitePath& p,
                        const FinitePath& q) {
  const auto& g = m.graph();
  require_valid_path(g, p);
  require_valid_path(g, q);
  if (p.start_level != q.start_level || p.vertices.size() != q.vertices.size())
    throw std::invalid_argument(
        "paths are not tail-equivalent: different level spans");
  const std::size_t len = p.vertices.size();
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

  Rational den = cylinder_prob(m, q);
  if (den == 0) return CocycleValue::undefined();
  return CocycleValue::of(cylinder_prob(m, p) / den);
}

ValidationReport matches_equipment(const MarkovMeasure& m,
                                   const CotransitionSystem& sys, int depth,
                                   std::uint64_t cap) {
  const auto& g = m.graph();
  if (&g != &sys.graph())
    throw std::invalid_argument("measure and equipment use different graphs");
  if (depth < 1 || depth >= g.depth())
    throw std::invalid_argument("depth out of range");

  ValidationReport rep;

  auto induced = induced_cotransitions(m);
  std::vector<CotransitionEntry> a, b;
  for (int n = 1; n <= depth && rep.ok(); ++n)
    for (int i = 0; i < g.level_size(n); ++i) {
      VertexId x{n, i};
      if (!induced->has_row(x)) continue;
      if (!sys.has_row(x)) {
        rep.add("vertex " + vertex_desc(g, x),
                "reachable under the measure but the equipment has no row");
        break;
      }
      a.clear();
      b.clear();
      induced->row(x, a);
      sys.row(x, b);
      for (std::size_t s = 0; s < a.size(); ++s)
        if (!(a[s] == b[s])) {
          rep.add("vertex " + vertex_desc(g, x),
                  "induced cotransition from '" + g.label({n - 1, a[s].from}) +
                      "' (edge " + std::to_string(a[s].edge) + ") is " +
                      format_rational(a[s].p) + " but the equipment has " +
                      format_rational(b[s].p));
          break;
        }
      if (!rep.ok()) break;
    }

  for (int n = 1; n <= depth && rep.ok(); ++n) {
    for (int wi = 0; wi < g.level_size(n) && rep.ok(); ++wi) {
      VertexId w{n, wi};
      std::vector<FinitePath> paths;
      for (int r = 0; r < g.level_size(0); ++r) {
        auto part = enumerate_paths(g, {0, r}, w, cap);
        paths.insert(paths.end(), part.begin(), part.end());
      }
      std::vector<FinitePath> positive;
      for (auto& path : paths)
        if (cylinder_prob(m, path) > 0) positive.push_back(std::move(path));
      for (std::size_t i = 0; i < positive.size() && rep.ok(); ++i)
        for (std::size_t j = i + 1; j < positive.size(); ++j) {
          auto lhs = rn_cocycle(m, positive[i], positive[j]);
          auto rhs = cocycle_eval(sys, positive[i], positive[j]);
          if (!(lhs == rhs)) {
            rep.add("witness pair p = " + format_path_labels(g, positive[i]) +
                        ", q = " + format_path_labels(g, positive[j]),
                    "RN ratio " +
                        (lhs.defined() ? format_rational(*lhs.value) : "undefined") +
                        " but equipment cocycle " +
                        (rhs.defined() ? format_rational(*rhs.value) : "undefined"));
            break;
          }
        }
    }
  }
  return rep;
}

FinitePath sample_path(const MarkovMeasure& m, int target_level,
                       std::uint64_t seed) {
  auto sampler = m.make_sampler(target_level);
  BitStream bits(path_seed(seed, 0));
  return sampler->sample(bits);
}

}  // namespace emc
