#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "doctest.h"
#include "emc/graded_graph.hpp"
#include "emc/json_io.hpp"
#include "emc/markov_measure.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace emc;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("emc_test_" + name);
}

struct FileGuard {
  std::filesystem::path path;
  ~FileGuard() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
};

}  // namespace

TEST_CASE("graph JSON round-trips structure and text") {
  auto g = ExplicitGraph::Builder()
               .add_level({"a"})
               .add_level({"b", "c"})
               .add_level({"d"})
               .add_edge(0, "a", "b", 2)
               .add_edge(0, "a", "c", 1)
               .add_edge(1, "b", "d", 1)
               .add_edge(1, "c", "d", 3)
               .build();
  auto text = graph_to_json(*g);
  auto back = parse_graph_json(text);

  REQUIRE(back->depth() == 3);
  CHECK(back->level_size(1) == 2);
  CHECK(back->label({1, 1}) == "c");
  CHECK(path_count(*back, {0, 0}, {2, 0}) == 5);
  CHECK(graph_to_json(*back) == text);
}

TEST_CASE("young graph survives a file round-trip") {
  auto g = young_graph(5);
  FileGuard file{temp_file("young.json")};
  save_graph(*g, file.path.string());
  auto back = load_graph(file.path.string());
  REQUIRE(back->depth() == 5);
  for (int n = 0; n < 5; ++n) {
    REQUIRE(back->level_size(n) == g->level_size(n));
    for (int i = 0; i < g->level_size(n); ++i)
      CHECK(back->label({n, i}) == g->label({n, i}));
  }
  CHECK(validate_graph(*back).ok());
}

TEST_CASE("graph parse errors name the offense") {
  CHECK_THROWS_WITH_AS(parse_graph_json("{oops"), doctest::Contains("invalid JSON"),
                       FormatError);
  CHECK_THROWS_WITH_AS(parse_graph_json(R"({"edges": []})"),
                       doctest::Contains("levels"), FormatError);
  CHECK_THROWS_WITH_AS(
      parse_graph_json(R"({"levels": [["a", "a"]], "edges": []})"),
      doctest::Contains("duplicate label"), FormatError);
  CHECK_THROWS_WITH_AS(
      parse_graph_json(
          R"({"levels": [["a"], ["b"]],
              "edges": [{"from": "a", "to": "b", "mult": 0}]})"),
      doctest::Contains("multiplicity"), FormatError);
  CHECK_THROWS_WITH_AS(
      parse_graph_json(
          R"({"levels": [["a"], ["b"]],
              "edges": [{"from": "a", "to": "z", "mult": 1}]})"),
      doctest::Contains("unknown vertex"), FormatError);
  CHECK_THROWS_AS(
      parse_graph_json(
          R"({"levels": [["a"], ["b"], ["c"]],
              "edges": [{"from": "a", "to": "c", "mult": 1}]})"),
      FormatError);
}

TEST_CASE("equipment JSON round-trips exactly") {
  auto g = young_graph(4);
  auto sys = random_equipment(g, 23);
  auto text = equipment_to_json(*sys);
  auto back = parse_equipment_json(g, text);

  std::vector<CotransitionEntry> a, b;
  for (int n = 1; n < 4; ++n)
    for (int i = 0; i < g->level_size(n); ++i) {
      a.clear();
      b.clear();
      sys->row({n, i}, a);
      back->row({n, i}, b);
      CHECK(a == b);
    }
  CHECK(equipment_to_json(*back) == text);

  FileGuard file{temp_file("equip.json")};
  save_equipment(*sys, file.path.string());
  auto loaded = load_equipment(g, file.path.string());
  CHECK(equipment_to_json(*loaded) == text);
}

TEST_CASE("equipment parse errors carry the row position") {
  auto g = pascal_graph(3);
  auto central = central_equipment(g);
  auto doc = nlohmann::json::parse(equipment_to_json(*central));
  doc["cotransitions"][0]["rows"][0]["p"] = "2/3";
  SUBCASE("row sums are validated") {
    CHECK_THROWS_AS(parse_equipment_json(g, doc.dump()), FormatError);
  }
  SUBCASE("rationals must parse") {
    doc["cotransitions"][0]["rows"][0]["p"] = "x/y";
    CHECK_THROWS_AS(parse_equipment_json(g, doc.dump()), FormatError);
  }
  SUBCASE("unknown vertices are rejected") {
    doc["cotransitions"][0]["to"] = "9,9";
    CHECK_THROWS_AS(parse_equipment_json(g, doc.dump()), FormatError);
  }
}

TEST_CASE("measure JSON round-trips cylinder probabilities") {
  auto g = young_graph(4);
  auto m = plancherel_measure(g);
  auto text = measure_to_json(*m);
  auto back = parse_measure_json(g, text);

  for (int i = 0; i < g->level_size(3); ++i)
    for (const auto& p : oracle::dfs_paths_from_roots(*g, {3, i}))
      CHECK(cylinder_prob(*back, p) == cylinder_prob(*m, p));
  CHECK(measure_to_json(*back) == text);

  FileGuard file{temp_file("measure.json")};
  save_measure(*m, file.path.string());
  CHECK(measure_to_json(*load_measure(g, file.path.string())) == text);
}

TEST_CASE("measure parse validation rejects broken tables") {
  auto g = pascal_graph(3);
  auto m = bernoulli_on_pascal(g, Rational(1, 3));
  auto doc = nlohmann::json::parse(measure_to_json(*m));
  SUBCASE("initial must sum to 1") {
    doc["initial"][0]["p"] = "1/2";
    CHECK_THROWS_AS(parse_measure_json(g, doc.dump()), FormatError);
  }
  SUBCASE("forward rows must sum to 1") {
    doc["forward"][0]["rows"][0]["p"] = "1";
    CHECK_THROWS_AS(parse_measure_json(g, doc.dump()), FormatError);
  }
  SUBCASE("rows only on edges") {
    doc["forward"][0]["rows"][0]["to"] = "1,0";
    doc["forward"][0]["rows"][1]["to"] = "1,0";
    CHECK_THROWS_AS(parse_measure_json(g, doc.dump()), FormatError);
  }
}

TEST_CASE("resolve_graph understands builtin specs") {
  auto pascal = resolve_graph("builtin:pascal:4");
  CHECK(pascal->depth() == 4);
  CHECK(pascal->level_size(3) == 4);
  auto young = resolve_graph("builtin:young:5");
  CHECK(young->level_size(4) == 5);

  CHECK_THROWS_AS(resolve_graph("builtin:pascal:x"), FormatError);
  CHECK_THROWS_AS(resolve_graph("builtin:pascal"), FormatError);
  CHECK_THROWS_AS(resolve_graph("builtin:cube:3"), FormatError);

  auto g = pascal_graph(3);
  FileGuard file{temp_file("resolve.json")};
  save_graph(*g, file.path.string());
  CHECK(resolve_graph(file.path.string())->depth() == 3);
  CHECK_THROWS_WITH_AS(resolve_graph(temp_file("absent.json").string()),
                       doctest::Contains("cannot open"), FormatError);
}

TEST_CASE("resolve_equipment prefers spec strings over files") {
  auto g = pascal_graph(4);
  auto sys = resolve_equipment(g, "central");
  CHECK(sys->prob({1, 0}, 0, {2, 1}) == Rational(1, 2));

  {
    std::ofstream out("central");
    out << "not json";
  }
  FileGuard cwd_file{std::filesystem::path("central")};
  CHECK(resolve_equipment(g, "central")->has_row({1, 0}));

  FileGuard file{temp_file("equip2.json")};
  save_equipment(*random_equipment(g, 9), file.path.string());
  auto loaded = resolve_equipment(g, file.path.string());
  CHECK(loaded->has_row({2, 1}));
}

TEST_CASE("resolve_measure understands the measure spec strings") {
  auto pascal = pascal_graph(4);
  auto bern = resolve_measure(pascal, "bernoulli:1/3");
  auto p = path_from_labels(*pascal, 0, {"0,0", "1,1", "2,1"});
  CHECK(cylinder_prob(*bern, p) == Rational(2, 9));

  auto mix = resolve_measure(pascal, "mixture:1/2:1/4,1/2:3/4");
  Rational up = Rational(1, 2) * Rational(1, 4) + Rational(1, 2) * Rational(3, 4);
  CHECK(cylinder_prob(*mix, path_from_labels(*pascal, 0, {"0,0", "1,1"})) == up);

  auto step = resolve_measure(pascal, "stepwise:1/2,1/3,1/4");
  // Up at level 0, down at level 1: p_1 * (1 - p_2).
  CHECK(cylinder_prob(*step, p) == Rational(1, 2) * Rational(2, 3));

  auto young = young_graph(4);
  CHECK(resolve_measure(young, "plancherel")->has_forward_row({1, 0}));

  CHECK_THROWS_WITH_AS(resolve_measure(pascal, "mixture:1/2"),
                       doctest::Contains("WEIGHT:PARAM"), FormatError);
  CHECK_THROWS_AS(resolve_measure(pascal, "bernoulli:a/b"), FormatError);
  CHECK_THROWS_AS(resolve_measure(pascal, "mystery"), FormatError);
}

TEST_CASE("read_text and write_text_atomic round-trip") {
  FileGuard file{temp_file("text.txt")};
  write_text_atomic(file.path.string(), "line one\nline two\n");
  CHECK(read_text(file.path.string()) == "line one\nline two\n");
  write_text_atomic(file.path.string(), "replaced");
  CHECK(read_text(file.path.string()) == "replaced");
  CHECK_THROWS_WITH_AS(read_text(temp_file("nope.txt").string()),
                       doctest::Contains("cannot open"), FormatError);
}
