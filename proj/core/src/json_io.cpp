#include "emc/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace emc {
namespace {

using nlohmann::json;

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw FormatError(std::string("missing key \"") + key + "\"");
  return *it;
}

std::string string_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string())
    throw FormatError(std::string("key \"") + key + "\" must be a string");
  return v.get<std::string>();
}

long long int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer())
    throw FormatError(std::string("key \"") + key + "\" must be an integer");
  return v.get<long long>();
}

Rational rational_field(const json& j, const char* key) {
  return parse_rational(string_field(j, key));
}

const json& array_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array())
    throw FormatError(std::string("key \"") + key + "\" must be an array");
  return v;
}

std::uint32_t edge_field(const json& j) {
  if (!j.contains("edge")) return 0;
  long long e = int_field(j, "edge");
  if (e < 0) throw FormatError("edge index must be nonnegative");
  return static_cast<std::uint32_t>(e);
}

bool parse_positive_int(const std::string& s, int& out) {
  if (s.empty() || s.size() > 8) return false;
  int val = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    val = val * 10 + (c - '0');
  }
  out = val;
  return val >= 1;
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

}  // namespace

std::shared_ptr<const GradedGraph> parse_graph_json(const std::string& text) {
  json doc = parse_document(text);
  const json& levels = array_field(doc, "levels");
  if (levels.empty()) throw FormatError("graph needs at least one level");

  ExplicitGraph::Builder builder;
  std::unordered_map<std::string, int> level_of;
  int level = 0;
  for (const json& lvl : levels) {
    if (!lvl.is_array()) throw FormatError("each level must be an array");
    std::vector<std::string> labels;
    for (const json& v : lvl) {
      if (!v.is_string()) throw FormatError("vertex labels must be strings");
      auto label = v.get<std::string>();
      if (!level_of.emplace(label, level).second)
        throw FormatError("duplicate label '" + label +
                          "'; edge endpoints would be ambiguous");
      labels.push_back(std::move(label));
    }
    builder.add_level(std::move(labels));
    ++level;
  }

  if (doc.contains("edges")) {
    const json& edges = array_field(doc, "edges");
    for (const json& e : edges) {
      std::string from = string_field(e, "from");
      std::string to = string_field(e, "to");
      long long mult = e.contains("mult") ? int_field(e, "mult") : 1;
      if (mult < 1) throw FormatError("edge multiplicity must be positive");
      auto fit = level_of.find(from);
      auto tit = level_of.find(to);
      if (fit == level_of.end()) throw FormatError("unknown vertex '" + from + "'");
      if (tit == level_of.end()) throw FormatError("unknown vertex '" + to + "'");
      if (fit->second + 1 != tit->second)
        throw FormatError("edge '" + from + "' -> '" + to +
                          "' does not connect consecutive levels");
      builder.add_edge(fit->second, from, to, static_cast<std::uint32_t>(mult));
    }
  }
  return builder.build();
}

std::shared_ptr<const GradedGraph> load_graph(const std::string& path) {
  return parse_graph_json(read_text(path));
}

std::string graph_to_json(const GradedGraph& g) {
  json levels = json::array();
  for (int n = 0; n < g.depth(); ++n) {
    json lvl = json::array();
    for (int i = 0; i < g.level_size(n); ++i) lvl.push_back(g.label({n, i}));
    levels.push_back(std::move(lvl));
  }
  json edges = json::array();
  std::vector<HalfEdge> buf;
  for (int n = 0; n + 1 < g.depth(); ++n)
    for (int i = 0; i < g.level_size(n); ++i) {
      buf.clear();
      g.out_edges({n, i}, buf);
      for (const auto& e : buf)
        edges.push_back({{"from", g.label({n, i})},
                         {"to", g.label({n + 1, e.neighbor})},
                         {"mult", e.mult}});
    }
  json doc{{"levels", std::move(levels)}, {"edges", std::move(edges)}};
  return doc.dump(2) + "\n";
}

void save_graph(const GradedGraph& g, const std::string& path) {
  write_text_atomic(path, graph_to_json(g));
}

std::shared_ptr<const CotransitionSystem> parse_equipment_json(
    std::shared_ptr<const GradedGraph> g, const std::string& text) {
  json doc = parse_document(text);
  std::vector<CotransitionRowSpec> specs;
  for (const json& r : array_field(doc, "cotransitions")) {
    CotransitionRowSpec spec;
    spec.level = static_cast<int>(int_field(r, "level"));
    spec.to = string_field(r, "to");
    for (const json& e : array_field(r, "rows"))
      spec.entries.push_back({string_field(e, "from"), edge_field(e),
                              rational_field(e, "p")});
    specs.push_back(std::move(spec));
  }
  return from_table(std::move(g), specs);
}

std::shared_ptr<const CotransitionSystem> load_equipment(
    std::shared_ptr<const GradedGraph> g, const std::string& path) {
  return parse_equipment_json(std::move(g), read_text(path));
}

std::string equipment_to_json(const CotransitionSystem& sys) {
  json rows = json::array();
  for (const auto& spec : materialize(sys)) {
    json entries = json::array();
    for (const auto& e : spec.entries)
      entries.push_back(
          {{"from", e.from}, {"edge", e.edge}, {"p", format_rational(e.p)}});
    rows.push_back(
        {{"level", spec.level}, {"to", spec.to}, {"rows", std::move(entries)}});
  }
  json doc{{"cotransitions", std::move(rows)}};
  return doc.dump(2) + "\n";
}

void save_equipment(const CotransitionSystem& sys, const std::string& path) {
  write_text_atomic(path, equipment_to_json(sys));
}

std::shared_ptr<const MarkovMeasure> parse_measure_json(
    std::shared_ptr<const GradedGraph> g, const std::string& text) {
  json doc = parse_document(text);
  std::vector<InitialSpec> initial;
  for (const json& e : array_field(doc, "initial"))
    initial.push_back({string_field(e, "vertex"), rational_field(e, "p")});
  std::vector<ForwardRowSpec> rows;
  if (doc.contains("forward"))
    for (const json& r : array_field(doc, "forward")) {
      ForwardRowSpec spec;
      spec.level = static_cast<int>(int_field(r, "level"));
      spec.from = string_field(r, "from");
      for (const json& e : array_field(r, "rows"))
        spec.entries.push_back({string_field(e, "to"), edge_field(e),
                                rational_field(e, "p")});
      rows.push_back(std::move(spec));
    }
  return TableMeasure::create(std::move(g), initial, rows);
}

std::shared_ptr<const MarkovMeasure> load_measure(
    std::shared_ptr<const GradedGraph> g, const std::string& path) {
  return parse_measure_json(std::move(g), read_text(path));
}

std::string measure_to_json(const MarkovMeasure& m) {
  const auto& g = m.graph();
  json initial = json::array();
  for (int i = 0; i < g.level_size(0); ++i)
    initial.push_back(
        {{"vertex", g.label({0, i})}, {"p", format_rational(m.initial(i))}});
  json forward = json::array();
  std::vector<ForwardEntry> buf;
  for (int n = 0; n + 1 < g.depth(); ++n)
    for (int i = 0; i < g.level_size(n); ++i) {
      VertexId x{n, i};
      if (!m.has_forward_row(x)) continue;
      buf.clear();
      m.forward_row(x, buf);
      json entries = json::array();
      for (const auto& e : buf)
        entries.push_back({{"to", g.label({n + 1, e.to})},
                           {"edge", e.edge},
                           {"p", format_rational(e.p)}});
      forward.push_back(
          {{"level", n}, {"from", g.label(x)}, {"rows", std::move(entries)}});
    }
  json doc{{"initial", std::move(initial)}, {"forward", std::move(forward)}};
  return doc.dump(2) + "\n";
}

void save_measure(const MarkovMeasure& m, const std::string& path) {
  write_text_atomic(path, measure_to_json(m));
}

std::shared_ptr<const GradedGraph> resolve_graph(const std::string& spec) {
  if (spec.rfind("builtin:", 0) == 0) {
    std::string rest = spec.substr(8);
    auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw FormatError("builtin graphs are builtin:pascal:N or builtin:young:N");
    std::string kind = rest.substr(0, colon);
    int depth = 0;
    if (!parse_positive_int(rest.substr(colon + 1), depth))
      throw FormatError("bad builtin graph depth '" + rest.substr(colon + 1) + "'");
    if (kind == "pascal") return pascal_graph(depth);
    if (kind == "young") return young_graph(depth);
    throw FormatError("unknown builtin graph '" + kind + "'");
  }
  return load_graph(spec);
}

std::shared_ptr<const CotransitionSystem> resolve_equipment(
    std::shared_ptr<const GradedGraph> g, const std::string& spec) {
  if (spec == "central") return central_equipment(std::move(g));
  return load_equipment(std::move(g), spec);
}

std::shared_ptr<const MarkovMeasure> resolve_measure(
    std::shared_ptr<const GradedGraph> g, const std::string& spec) {
  if (spec == "plancherel") return plancherel_measure(std::move(g));
  if (spec.rfind("bernoulli:", 0) == 0)
    return bernoulli_on_pascal(std::move(g), parse_rational(spec.substr(10)));
  if (spec.rfind("mixture:", 0) == 0) {
    std::vector<PascalMixture::Component> components;
    for (const std::string& part : split(spec.substr(8), ',')) {
      auto colon = part.find(':');
      if (colon == std::string::npos)
        throw FormatError("mixture components are WEIGHT:PARAM");
      components.push_back({parse_rational(part.substr(0, colon)),
                            parse_rational(part.substr(colon + 1))});
    }
    return mixture_on_pascal(std::move(g), std::move(components));
  }
  if (spec.rfind("stepwise:", 0) == 0) {
    std::vector<Rational> ps;
    for (const std::string& part : split(spec.substr(9), ','))
      ps.push_back(parse_rational(part));
    return stepwise_on_pascal(std::move(g), std::move(ps));
  }
  return load_measure(std::move(g), spec);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw FormatError("cannot read file: " + path);
  return buf.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open file for writing: " + tmp);
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("cannot write file: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename " + tmp + " to " + path + ": " +
                             ec.message());
  }
}

}  // namespace emc
