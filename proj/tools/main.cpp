#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "emc/absolute.hpp"
#include "emc/equipment.hpp"
#include "emc/graded_graph.hpp"
#include "emc/json_io.hpp"
#include "emc/markov_measure.hpp"
#include "emc/numeric.hpp"
#include "emc/rsk.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;
using namespace emc;

// Relative --out paths land under $EMC_OUT_DIR when it is set.
std::string resolve_out(const std::string& path) {
  const char* dir = std::getenv("EMC_OUT_DIR");
  if (!dir || !*dir || path.empty() || path.front() == '/') return path;
  return std::string(dir) + "/" + path;
}

void emit_file(const std::string& path, const std::string& content) {
  write_text_atomic(resolve_out(path), content);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) pos = s.size();
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  for (const auto& part : split(s, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      out.push_back(v);
    } catch (const std::exception&) {
      throw FormatError(std::string("bad ") + what + " '" + part + "'");
    }
  }
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_rational(part));
  return out;
}

// Labels are unique across levels (builtins by construction, files by the
// loader), so a bare label identifies a vertex.
VertexId find_vertex_anywhere(const GradedGraph& g, const std::string& label) {
  for (int n = 0; n < g.depth(); ++n)
    if (auto idx = g.find_vertex(n, label)) return {n, *idx};
  throw FormatError("no vertex labeled '" + label + "'");
}

// Path syntax: LABEL[:EDGE]/LABEL[:EDGE]/.../LABEL, starting at level 0.
// The edge suffix picks the parallel edge used to leave that vertex.
FinitePath parse_path(const GradedGraph& g, const std::string& text) {
  std::vector<std::string> labels;
  std::vector<std::uint32_t> edges;
  auto segments = split(text, '/');
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const std::string& seg = segments[i];
    std::size_t colon = seg.rfind(':');
    bool has_edge = colon != std::string::npos && colon + 1 < seg.size();
    if (has_edge)
      for (std::size_t j = colon + 1; j < seg.size(); ++j)
        if (seg[j] < '0' || seg[j] > '9') {
          has_edge = false;
          break;
        }
    if (has_edge) {
      if (i + 1 == segments.size())
        throw FormatError("edge choice on the final path vertex");
      labels.push_back(seg.substr(0, colon));
      edges.push_back(static_cast<std::uint32_t>(
          std::strtoul(seg.c_str() + colon + 1, nullptr, 10)));
    } else {
      labels.push_back(seg);
      edges.push_back(0);
    }
  }
  if (!edges.empty()) edges.pop_back();
  return path_from_labels(g, 0, labels, std::move(edges));
}

std::string path_to_string(const GradedGraph& g, const FinitePath& p) {
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

json report_json(const ValidationReport& rep) {
  json violations = json::array();
  for (const auto& v : rep.violations)
    violations.push_back({{"where", v.where}, {"what", v.what}});
  return {{"ok", rep.ok()}, {"violations", std::move(violations)}};
}

void print_json(const json& doc) { std::cout << doc.dump(2) << "\n"; }

int finish_report(const ValidationReport& rep, bool as_json, json extra = {}) {
  if (as_json) {
    json doc = report_json(rep);
    doc.update(extra);
    print_json(doc);
  } else {
    std::cout << rep.to_string() << "\n";
  }
  return rep.ok() ? 0 : 1;
}

// ---- graph ----

struct GraphValidateOpts {
  std::string graph;
  bool multi_root = false;
  bool as_json = false;
};

int cmd_graph_validate(const GraphValidateOpts& o) {
  auto g = resolve_graph(o.graph);
  auto rep = validate_graph(*g, o.multi_root);
  return finish_report(rep, o.as_json);
}

struct GraphBuiltinOpts {
  std::string kind;
  int depth = 1;
  std::string out;
  bool as_json = false;
};

int cmd_graph_builtin(const GraphBuiltinOpts& o) {
  auto g = resolve_graph("builtin:" + o.kind + ":" + std::to_string(o.depth));
  std::string doc = graph_to_json(*g);
  if (!o.out.empty())
    emit_file(o.out, doc);
  else
    std::cout << doc;
  return 0;
}

// ---- equip ----

struct EquipCentralOpts {
  std::string graph;
  std::string out;
  bool as_json = false;
};

int cmd_equip_central(const EquipCentralOpts& o) {
  auto g = resolve_graph(o.graph);
  auto sys = central_equipment(g);
  std::string doc = equipment_to_json(*sys);
  if (!o.out.empty())
    emit_file(o.out, doc);
  else
    std::cout << doc;
  return 0;
}

struct EquipCheckOpts {
  std::string graph;
  std::string equip;
  int depth = 0;
  std::uint64_t cap = 10000;
  bool as_json = false;
};

int cmd_equip_check(const EquipCheckOpts& o) {
  auto g = resolve_graph(o.graph);
  auto sys = resolve_equipment(g, o.equip);
  int depth = o.depth > 0 ? o.depth : g->depth() - 1;
  auto rep = check_cocycle_axioms(*sys, depth, o.cap);
  return finish_report(rep, o.as_json, {{"depth", depth}});
}

// ---- measure ----

struct MeasureCylinderOpts {
  std::string graph;
  std::string measure;
  std::string path;
  bool as_json = false;
};

int cmd_measure_cylinder(const MeasureCylinderOpts& o) {
  auto g = resolve_graph(o.graph);
  auto m = resolve_measure(g, o.measure);
  auto p = parse_path(*g, o.path);
  Rational prob = cylinder_prob(*m, p);
  if (o.as_json)
    print_json({{"path", path_to_string(*g, p)}, {"prob", format_rational(prob)}});
  else
    std::cout << format_rational(prob) << "\n";
  return 0;
}

struct MeasureCheckOpts {
  std::string graph;
  std::string measure;
  std::string equip;
  int depth = 0;
  std::uint64_t cap = 20000;
  bool as_json = false;
};

int cmd_measure_check(const MeasureCheckOpts& o) {
  auto g = resolve_graph(o.graph);
  auto m = resolve_measure(g, o.measure);
  auto sys = resolve_equipment(g, o.equip);
  int depth = o.depth > 0 ? o.depth : g->depth() - 1;
  auto rep = matches_equipment(*m, *sys, depth, o.cap);
  return finish_report(rep, o.as_json, {{"depth", depth}});
}

struct MeasureSampleOpts {
  std::string graph;
  std::string measure;
  int level = 0;
  std::uint64_t count = 1;
  std::uint64_t seed = 0;
  std::string out;
  bool as_json = false;
};

int cmd_measure_sample(const MeasureSampleOpts& o) {
  auto g = resolve_graph(o.graph);
  auto m = resolve_measure(g, o.measure);
  auto sampler = m->make_sampler(o.level);
  std::vector<FinitePath> paths;
  paths.reserve(o.count);
  for (std::uint64_t i = 0; i < o.count; ++i) {
    BitStream bits(path_seed(o.seed, i));
    paths.push_back(sampler->sample(bits));
  }
  if (!o.out.empty()) {
    std::string csv = "path_id,level,vertex\n";
    for (std::uint64_t i = 0; i < paths.size(); ++i)
      for (std::size_t n = 0; n < paths[i].vertices.size(); ++n)
        csv += std::to_string(i) + "," + std::to_string(n) + "," +
               csv_quote(g->label({static_cast<int>(n), paths[i].vertices[n]})) +
               "\n";
    emit_file(o.out, csv);
  }
  if (o.as_json) {
    json arr = json::array();
    for (const auto& p : paths) arr.push_back(path_to_string(*g, p));
    print_json({{"count", o.count},
                {"level", o.level},
                {"paths", std::move(arr)},
                {"seed", o.seed}});
  } else {
    for (const auto& p : paths) std::cout << path_to_string(*g, p) << "\n";
  }
  return 0;
}

struct MeasureEmitOpts {
  std::string graph;
  std::string p;  // bernoulli only
  std::string out;
  bool as_json = false;
};

int cmd_measure_emit(const MeasureEmitOpts& o, const std::string& kind) {
  auto g = resolve_graph(o.graph);
  auto m = resolve_measure(g, kind.empty() ? "bernoulli:" + o.p : kind);
  std::string doc = measure_to_json(*m);
  if (!o.out.empty())
    emit_file(o.out, doc);
  else
    std::cout << doc;
  return 0;
}

// ---- absolute ----

struct BackwardOpts {
  std::string graph;
  std::string equip;
  std::string at;
  int level = 0;
  bool as_json = false;
};

int cmd_absolute_backward(const BackwardOpts& o) {
  auto g = resolve_graph(o.graph);
  auto sys = resolve_equipment(g, o.equip);
  VertexId w = find_vertex_anywhere(*g, o.at);
  auto dist = backward_distribution(*sys, w, o.level);
  if (o.as_json) {
    json probs = json::object();
    for (int i = 0; i < g->level_size(dist.level); ++i)
      if (dist.probs[i] != 0)
        probs[g->label({dist.level, i})] = format_rational(dist.probs[i]);
    print_json({{"level", dist.level},
                {"probs", std::move(probs)},
                {"terminal", o.at}});
  } else {
    for (int i = 0; i < g->level_size(dist.level); ++i)
      if (dist.probs[i] != 0)
        std::cout << g->label({dist.level, i}) << " "
                  << format_rational(dist.probs[i]) << "\n";
  }
  return 0;
}

struct KernelOpts {
  std::string graph;
  std::string equip;
  std::string path;
  std::string at;
  bool as_json = false;
};

int cmd_absolute_kernel(const KernelOpts& o) {
  auto g = resolve_graph(o.graph);
  auto sys = resolve_equipment(g, o.equip);
  auto p = parse_path(*g, o.path);
  VertexId w = find_vertex_anywhere(*g, o.at);
  Rational k = martin_kernel(*sys, p, w);
  if (o.as_json)
    print_json({{"kernel", format_rational(k)},
                {"path", path_to_string(*g, p)},
                {"terminal", o.at}});
  else
    std::cout << format_rational(k) << "\n";
  return 0;
}

struct LimitOpts {
  std::string graph;
  std::string equip;
  std::string path;
  std::string freq;
  std::string constant;
  std::string vertices;
  std::string levels;
  double delta = 1e-3;
  std::string out;
  bool as_json = false;
};

int cmd_absolute_limit(const LimitOpts& o) {
  auto g = resolve_graph(o.graph);
  auto sys = resolve_equipment(g, o.equip);
  auto p = parse_path(*g, o.path);
  int picked = !o.freq.empty() + !o.constant.empty() + !o.vertices.empty();
  if (picked != 1)
    throw FormatError("pick exactly one of --freq, --constant, --vertices");
  std::unique_ptr<BoundarySequence> seq;
  if (!o.freq.empty()) {
    seq = std::make_unique<BoundarySequence>(
        BoundarySequence::pascal_frequency(g, parse_rational(o.freq)));
  } else if (!o.constant.empty()) {
    VertexId w = find_vertex_anywhere(*g, o.constant);
    seq = std::make_unique<BoundarySequence>(
        BoundarySequence::constant(g, w.level, o.constant));
  } else {
    std::vector<std::pair<int, std::string>> entries;
    for (const auto& label : split(o.vertices, '/')) {
      VertexId w = find_vertex_anywhere(*g, label);
      entries.emplace_back(w.level, label);
    }
    seq = std::make_unique<BoundarySequence>(
        BoundarySequence::explicit_list(g, entries));
  }

  auto levels = parse_int_list(o.levels, "level");
  auto rep = boundary_limit_estimate(*sys, *seq, p, levels);
  bool within = to_double(rep.max_delta) < o.delta && rep.values.size() > 1;

  if (!o.out.empty()) {
    std::string csv = "N,value\n";
    for (const auto& [n, v] : rep.values)
      csv += std::to_string(n) + "," + decimal_string(v) + "\n";
    emit_file(o.out, csv);
  }
  if (o.as_json) {
    json values = json::array();
    for (const auto& [n, v] : rep.values)
      values.push_back({{"level", n}, {"value", format_rational(v)}});
    print_json({{"delta", o.delta},
                {"last", format_rational(rep.last)},
                {"max_delta", format_rational(rep.max_delta)},
                {"sequence", seq->describe()},
                {"values", std::move(values)},
                {"within_delta", within}});
  } else {
    for (const auto& [n, v] : rep.values)
      std::cout << n << " " << format_rational(v) << "\n";
    std::cout << "last " << format_rational(rep.last) << "\n";
    std::cout << "max successive delta " << format_rational(rep.max_delta) << "\n";
    std::cout << "within delta " << fmt_double(o.delta) << ": "
              << (within ? "yes" : "no") << "\n";
  }
  return 0;
}

struct ErgodicOpts {
  std::string graph;
  std::string measure;
  std::string levels;
  std::string statistic = "coordinate";
  std::string labels;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  double threshold = 1e-3;
  std::string out;
  bool as_json = false;
};

int cmd_absolute_ergodic(const ErgodicOpts& o) {
  auto g = resolve_graph(o.graph);
  auto m = resolve_measure(g, o.measure);
  StatisticSpec spec;
  if (o.statistic == "coordinate") {
    spec = StatisticSpec::coordinate_fraction();
  } else if (o.statistic == "indicator") {
    if (o.labels.empty())
      throw FormatError("--statistic indicator needs --labels");
    spec = StatisticSpec::indicator_frequency(split(o.labels, '/'));
  } else {
    throw FormatError("unknown statistic '" + o.statistic + "'");
  }
  auto levels = parse_int_list(o.levels, "level");
  auto rep = ergodicity_test(*m, spec, levels, o.samples, o.seed, o.threshold);

  if (!o.out.empty()) {
    std::string csv = "n,variance,stderr\n";
    for (const auto& r : rep.rows)
      csv += std::to_string(r.n) + "," + fmt_double(r.variance) + "," +
             fmt_double(r.std_error) + "\n";
    emit_file(o.out, csv);
  }
  if (o.as_json) {
    json rows = json::array();
    for (const auto& r : rep.rows)
      rows.push_back(
          {{"n", r.n}, {"stderr", r.std_error}, {"variance", r.variance}});
    print_json({{"rows", std::move(rows)},
                {"samples", o.samples},
                {"seed", o.seed},
                {"statistic", spec.describe()},
                {"threshold", rep.threshold},
                {"verdict", rep.verdict}});
  } else {
    for (const auto& r : rep.rows)
      std::cout << "n=" << r.n << " variance=" << fmt_double(r.variance)
                << " stderr=" << fmt_double(r.std_error) << "\n";
    std::cout << "verdict: " << rep.verdict << "\n";
  }
  return 0;
}

struct ExchangeOpts {
  std::string graph;
  std::string measure;
  int level = 0;
  std::uint64_t cap = 20000;
  bool as_json = false;
};

int cmd_absolute_exchange(const ExchangeOpts& o) {
  auto g = resolve_graph(o.graph);
  auto m = resolve_measure(g, o.measure);
  auto rep = exchangeability_check(*m, o.level, o.cap);
  return finish_report(rep, o.as_json, {{"level", o.level}});
}

// ---- rsk ----

struct RskWordOpts {
  std::vector<int> letters;
  bool as_json = false;
};

int cmd_rsk_word(const RskWordOpts& o) {
  auto pair = rsk_pair(o.letters);
  auto path = q_shape_path(o.letters);
  auto shapes = path.shapes();
  if (o.as_json) {
    json shape_arr = json::array();
    for (const auto& s : shapes) shape_arr.push_back(s);
    print_json(
        {{"p", pair.p.rows}, {"q", pair.q.rows}, {"shapes", std::move(shape_arr)}});
    return 0;
  }
  auto print_tableau = [](const char* name, const Tableau& t) {
    std::cout << name << ":\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        std::cout << (i ? " " : "") << row[i];
      std::cout << "\n";
    }
  };
  print_tableau("P", pair.p);
  print_tableau("Q", pair.q);
  std::cout << "shapes:";
  for (const auto& s : shapes) std::cout << " " << partition_label(s);
  std::cout << "\n";
  return 0;
}

struct RskPushOpts {
  std::string atoms;
  int n = 0;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  int rows = 10;
  bool columns = false;  // freq only
  std::string out;
  bool as_json = false;
};

int cmd_rsk_push(const RskPushOpts& o) {
  LetterDistribution dist(o.atoms.empty() ? std::vector<Rational>{}
                                          : parse_rational_list(o.atoms));
  auto paths = sample_young_paths(dist, o.n, o.samples, o.seed);
  auto est = o.columns ? thoma_column_estimate(paths, o.rows)
                       : thoma_frequency_estimate(paths, o.rows);

  if (!o.out.empty()) {
    std::string csv = "row,frequency,stderr\n";
    for (const auto& r : est.rows)
      csv += std::to_string(r.row) + "," + fmt_double(r.frequency) + "," +
             fmt_double(r.std_error) + "\n";
    emit_file(o.out, csv);
  }
  if (o.as_json) {
    json atoms = json::array();
    for (const auto& a : dist.atoms()) atoms.push_back(format_rational(a));
    json rows = json::array();
    for (const auto& r : est.rows)
      rows.push_back(
          {{"frequency", r.frequency}, {"row", r.row}, {"stderr", r.std_error}});
    print_json({{"atoms", std::move(atoms)},
                {"columns", o.columns},
                {"gamma", format_rational(dist.gamma())},
                {"n", o.n},
                {"rows", std::move(rows)},
                {"samples", o.samples},
                {"seed", o.seed}});
  } else {
    for (const auto& r : est.rows)
      std::cout << (o.columns ? "col " : "row ") << r.row << " frequency "
                << fmt_double(r.frequency) << " stderr "
                << fmt_double(r.std_error) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equipped Markov compacta: graded graphs, cotransition systems, "
               "Markov measures, boundary approximation, RSK"};
  app.require_subcommand(1);
  int code = 0;

  auto* graph = app.add_subcommand("graph", "graded graph operations");
  graph->require_subcommand(1);
  {
    auto o = std::make_shared<GraphValidateOpts>();
    auto* c = graph->add_subcommand("validate", "check graph structure");
    c->add_option("graph", o->graph, "graph file or builtin spec")->required();
    c->add_flag("--multi-root", o->multi_root, "allow several level-0 vertices");
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_graph_validate(*o); });
  }
  {
    auto o = std::make_shared<GraphBuiltinOpts>();
    auto* c = graph->add_subcommand("builtin", "emit a built-in graph");
    c->add_option("kind", o->kind, "pascal or young")->required();
    c->add_option("--depth", o->depth, "number of levels")->required();
    c->add_option("--out", o->out, "output file (default stdout)");
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_graph_builtin(*o); });
  }

  auto* equip = app.add_subcommand("equip", "cotransition systems");
  equip->require_subcommand(1);
  {
    auto o = std::make_shared<EquipCentralOpts>();
    auto* c = equip->add_subcommand("central", "emit the central equipment");
    c->add_option("graph", o->graph, "graph file or builtin spec")->required();
    c->add_option("--out", o->out, "output file (default stdout)");
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_equip_central(*o); });
  }
  {
    auto o = std::make_shared<EquipCheckOpts>();
    auto* c = equip->add_subcommand("check", "check the cocycle axioms");
    c->add_option("graph", o->graph, "graph file or builtin spec")->required();
    c->add_option("equip", o->equip, "equipment file or 'central'")->required();
    c->add_option("--depth", o->depth, "check up to this level (default depth-1)");
    c->add_option("--cap", o->cap, "path enumeration cap");
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_equip_check(*o); });
  }

  auto* measure = app.add_subcommand("measure", "Markov measures");
  measure->require_subcommand(1);
  {
    auto o = std::make_shared<MeasureCylinderOpts>();
    auto* c = measure->add_subcommand("cylinder", "exact cylinder probability");
    c->add_option("graph", o->graph, "graph file or builtin spec")->required();
    c->add_option("measure", o->measure, "measure file or spec")->required();
    c->add_option("--path", o->path, "path LABEL[:EDGE]/.../LABEL")->required();
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_measure_cylinder(*o); });
  }
  {
    auto o = std::make_shared<MeasureCheckOpts>();
    auto* c = measure->add_subcommand(
        "check", "check the measure against an equipment");
    c->add_option("graph", o->graph, "graph file or builtin spec")->required();
    c->add_option("measure", o->measure, "measure file or spec")->required();
    c->add_option("equip", o->equip, "equipment file or 'central'")->required();
    c->add_option("--depth", o->depth, "check up to this level (default depth-1)");
    c->add_option("--cap", o->cap, "path enumeration cap");
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_measure_check(*o); });
  }
  {
    auto o = std::make_shared<MeasureSampleOpts>();
    auto* c = measure->add_subcommand("sample", "sample paths");
    c->add_option("graph", o->graph, "graph file or builtin spec")->required();
    c->add_option("measure", o->measure, "measure file or spec")->required();
    c->add_option("--level", o->level, "target level")->required();
    c->add_option("--count", o->count, "number of paths");
    c->add_option("--seed", o->seed, "64-bit seed");
    c->add_option("--out", o->out, "CSV file path_id,level,vertex");
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_measure_sample(*o); });
  }
  {
    auto o = std::make_shared<MeasureEmitOpts>();
    auto* c = measure->add_subcommand("plancherel", "emit the Plancherel measure");
    c->add_option("graph", o->graph, "Young graph file or builtin spec")
        ->required();
    c->add_option("--out", o->out, "output file (default stdout)");
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_measure_emit(*o, "plancherel"); });
  }
  {
    auto o = std::make_shared<MeasureEmitOpts>();
    auto* c = measure->add_subcommand("bernoulli", "emit a Bernoulli measure");
    c->add_option("graph", o->graph, "Pascal graph file or builtin spec")
        ->required();
    c->add_option("--p", o->p, "up-step probability (rational)")->required();
    c->add_option("--out", o->out, "output file (default stdout)");
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_measure_emit(*o, ""); });
  }

  auto* absolute = app.add_subcommand("absolute", "boundary approximation");
  absolute->require_subcommand(1);
  {
    auto o = std::make_shared<BackwardOpts>();
    auto* c = absolute->add_subcommand("backward", "backward-chain distribution");
    c->add_option("graph", o->graph, "graph file or builtin spec")->required();
    c->add_option("equip", o->equip, "equipment file or 'central'")->required();
    c->add_option("--at", o->at, "terminal vertex label")->required();
    c->add_option("--level", o->level, "observation level")->required();
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_absolute_backward(*o); });
  }
  {
    auto o = std::make_shared<KernelOpts>();
    auto* c = absolute->add_subcommand("kernel", "Martin kernel of a prefix");
    c->add_option("graph", o->graph, "graph file or builtin spec")->required();
    c->add_option("equip", o->equip, "equipment file or 'central'")->required();
    c->add_option("--path", o->path, "prefix LABEL[:EDGE]/.../LABEL")->required();
    c->add_option("--at", o->at, "terminal vertex label")->required();
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_absolute_kernel(*o); });
  }
  {
    auto o = std::make_shared<LimitOpts>();
    auto* c = absolute->add_subcommand("limit", "kernel values along a sequence");
    c->add_option("graph", o->graph, "graph file or builtin spec")->required();
    c->add_option("equip", o->equip, "equipment file or 'central'")->required();
    c->add_option("--path", o->path, "prefix LABEL[:EDGE]/.../LABEL")->required();
    c->add_option("--freq", o->freq, "Pascal frequency sequence parameter");
    c->add_option("--constant", o->constant, "fixed terminal vertex label");
    c->add_option("--vertices", o->vertices, "explicit labels LAB/LAB/...");
    c->add_option("--levels", o->levels, "levels N1,N2,...")->required();
    c->add_option("--delta", o->delta, "reporting delta (default 1e-3)");
    c->add_option("--out", o->out, "CSV file N,value");
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_absolute_limit(*o); });
  }
  {
    auto o = std::make_shared<ErgodicOpts>();
    auto* c = absolute->add_subcommand("ergodic", "statistical ergodicity test");
    c->add_option("graph", o->graph, "graph file or builtin spec")->required();
    c->add_option("measure", o->measure, "measure file or spec")->required();
    c->add_option("--levels", o->levels, "checkpoints N1,N2,...")->required();
    c->add_option("--statistic", o->statistic, "coordinate or indicator");
    c->add_option("--labels", o->labels, "indicator labels LAB/LAB/...");
    c->add_option("--samples", o->samples, "Monte Carlo sample count");
    c->add_option("--seed", o->seed, "64-bit seed");
    c->add_option("--threshold", o->threshold, "variance threshold (default 1e-3)");
    c->add_option("--out", o->out, "CSV file n,variance,stderr");
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_absolute_ergodic(*o); });
  }
  {
    auto o = std::make_shared<ExchangeOpts>();
    auto* c = absolute->add_subcommand(
        "exchange", "endpoint determines cylinder probability");
    c->add_option("graph", o->graph, "graph file or builtin spec")->required();
    c->add_option("measure", o->measure, "measure file or spec")->required();
    c->add_option("--level", o->level, "endpoint level")->required();
    c->add_option("--cap", o->cap, "path enumeration cap");
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_absolute_exchange(*o); });
  }

  auto* rsk = app.add_subcommand("rsk", "RSK correspondence");
  rsk->require_subcommand(1);
  {
    auto o = std::make_shared<RskWordOpts>();
    auto* c = rsk->add_subcommand("word", "insert a word, print P, Q, shapes");
    c->add_option("letters", o->letters, "word letters")->required()->expected(-1);
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_rsk_word(*o); });
  }
  {
    auto o = std::make_shared<RskPushOpts>();
    auto* c = rsk->add_subcommand("push", "pushforward sampling, row frequencies");
    c->add_option("--atoms", o->atoms, "atom masses A1,A2,... (may be empty)");
    c->add_option("--n", o->n, "word length")->required();
    c->add_option("--samples", o->samples, "number of sampled paths");
    c->add_option("--seed", o->seed, "64-bit seed");
    c->add_option("--rows", o->rows, "row cap (default 10)");
    c->add_option("--out", o->out, "CSV file row,frequency,stderr");
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_rsk_push(*o); });
  }
  {
    auto o = std::make_shared<RskPushOpts>();
    auto* c = rsk->add_subcommand(
        "freq", "frequency estimation with row or column statistics");
    c->add_option("--atoms", o->atoms, "atom masses A1,A2,... (may be empty)");
    c->add_option("--n", o->n, "word length")->required();
    c->add_option("--samples", o->samples, "number of sampled paths");
    c->add_option("--seed", o->seed, "64-bit seed");
    c->add_option("--rows", o->rows, "row/column cap (default 10)");
    c->add_flag("--columns", o->columns, "estimate column frequencies");
    c->add_option("--out", o->out, "CSV file row,frequency,stderr");
    c->add_flag("--json", o->as_json, "JSON output");
    c->callback([o, &code] { code = cmd_rsk_push(*o); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int parse_code = app.exit(e);
    return parse_code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}
