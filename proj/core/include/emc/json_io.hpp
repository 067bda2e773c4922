#pragma once

#include <memory>
#include <string>

#include "emc/equipment.hpp"
#include "emc/graded_graph.hpp"
#include "emc/markov_measure.hpp"

namespace emc {

// Graph files: {"levels": [["v", ...], ...], "edges": [{"from": "v",
// "to": "w", "mult": k}, ...]}. Level index is the array position; labels
// must be unique across the whole graph so that edge endpoints resolve.
std::shared_ptr<const GradedGraph> parse_graph_json(const std::string& text);
std::shared_ptr<const GradedGraph> load_graph(const std::string& path);
std::string graph_to_json(const GradedGraph& g);
void save_graph(const GradedGraph& g, const std::string& path);

// Equipment files: {"cotransitions": [{"level": n, "to": "x", "rows":
// [{"from": "y", "edge": e, "p": "a/b"}, ...]}, ...]} with `level` the
// level of `to`. Rationals are strings.
std::shared_ptr<const CotransitionSystem> parse_equipment_json(
    std::shared_ptr<const GradedGraph> g, const std::string& text);
std::shared_ptr<const CotransitionSystem> load_equipment(
    std::shared_ptr<const GradedGraph> g, const std::string& path);
std::string equipment_to_json(const CotransitionSystem& sys);
void save_equipment(const CotransitionSystem& sys, const std::string& path);

// Measure files: {"initial": [{"vertex": "v", "p": "a/b"}, ...],
// "forward": [{"level": n, "from": "x", "rows": [{"to": "y", "edge": e,
// "p": "a/b"}, ...]}, ...]} with `level` the level of `from`.
std::shared_ptr<const MarkovMeasure> parse_measure_json(
    std::shared_ptr<const GradedGraph> g, const std::string& text);
std::shared_ptr<const MarkovMeasure> load_measure(
    std::shared_ptr<const GradedGraph> g, const std::string& path);
std::string measure_to_json(const MarkovMeasure& m);
void save_measure(const MarkovMeasure& m, const std::string& path);

// Spec strings accepted wherever a file path is expected:
//   graphs:     builtin:pascal:N, builtin:young:N, or a file path
//   equipment:  central, or a file path
//   measures:   bernoulli:P, plancherel, mixture:W:P[,W:P...],
//               stepwise:P[,P...], or a file path
// Spec strings take precedence over files of the same name.
std::shared_ptr<const GradedGraph> resolve_graph(const std::string& spec);
std::shared_ptr<const CotransitionSystem> resolve_equipment(
    std::shared_ptr<const GradedGraph> g, const std::string& spec);
std::shared_ptr<const MarkovMeasure> resolve_measure(
    std::shared_ptr<const GradedGraph> g, const std::string& spec);

std::string read_text(const std::string& path);

// Writes to a sibling temp file, then renames over the target.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace emc
