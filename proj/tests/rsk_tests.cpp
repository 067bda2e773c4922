#include <cmath>
#include <map>
#include <stdexcept>

#include "doctest.h"
#include "emc/graded_graph.hpp"
#include "emc/numeric.hpp"
#include "emc/rsk.hpp"
#include "oracles.hpp"

using namespace emc;

namespace {

std::vector<std::vector<int>> all_words(int length, int alphabet) {
  std::vector<std::vector<int>> out;
  std::vector<int> word(length, 1);
  while (true) {
    out.push_back(word);
    int i = length - 1;
    while (i >= 0 && word[i] == alphabet) word[i--] = 1;
    if (i < 0) return out;
    ++word[i];
  }
}

std::vector<int> word_content(const std::vector<int>& word, int alphabet) {
  std::vector<int> counts(alphabet + 1, 0);
  for (int letter : word) ++counts[letter];
  return counts;
}

std::vector<int> tableau_content(const Tableau& t, int alphabet) {
  std::vector<int> counts(alphabet + 1, 0);
  for (const auto& row : t.rows)
    for (int letter : row) ++counts[letter];
  return counts;
}

}  // namespace

TEST_CASE("row_insert bumps a larger entry into the next row") {
  Tableau t{{{2}}};
  auto r = row_insert(t, 1);
  CHECK(r.tableau.rows == std::vector<std::vector<int>>{{1}, {2}});
  CHECK(r.row == 1);
  CHECK(r.col == 0);
}

TEST_CASE("row_insert into an empty tableau makes a single cell") {
  auto r = row_insert(Tableau{}, 5);
  CHECK(r.tableau.rows == std::vector<std::vector<int>>{{5}});
  CHECK(r.row == 0);
  CHECK(r.col == 0);
}

TEST_CASE("row_insert appends a maximal entry to the first row") {
  Tableau t{{{1, 2}}};
  auto r = row_insert(t, 3);
  CHECK(r.tableau.rows == std::vector<std::vector<int>>{{1, 2, 3}});
  CHECK(r.row == 0);
  CHECK(r.col == 2);
}

TEST_CASE("rsk_pair of (2,1,1) gives the worked P and Q") {
  auto pair = rsk_pair({2, 1, 1});
  CHECK(pair.p.rows == std::vector<std::vector<int>>{{1, 1}, {2}});
  CHECK(pair.q.rows == std::vector<std::vector<int>>{{1, 3}, {2}});
}

TEST_CASE("an increasing word maps to one-row tableaux") {
  auto pair = rsk_pair({1, 2, 3, 4, 5});
  CHECK(pair.p.rows == std::vector<std::vector<int>>{{1, 2, 3, 4, 5}});
  CHECK(pair.q.rows == std::vector<std::vector<int>>{{1, 2, 3, 4, 5}});
}

TEST_CASE("RSK invariants hold for every short word on {1,2,3}") {
  for (int length = 0; length <= 6; ++length)
    for (const auto& word : all_words(length, 3)) {
      auto pair = rsk_pair(word);
      CHECK(pair.p.shape() == pair.q.shape());
      CHECK(pair.p.is_semistandard());
      CHECK(pair.q.is_standard());
      CHECK(pair.p.size() == word.size());
      CHECK(tableau_content(pair.p, 3) == word_content(word, 3));
    }
}

TEST_CASE("q_shape_path of (2,1,1) grows as the worked example") {
  auto path = q_shape_path({2, 1, 1});
  auto shapes = path.shapes();
  REQUIRE(shapes.size() == 4);
  CHECK(shapes[0].empty());
  CHECK(shapes[1] == std::vector<int>{1});
  CHECK(shapes[2] == std::vector<int>{1, 1});
  CHECK(shapes[3] == std::vector<int>{2, 1});
  CHECK(path.shape_at(2) == std::vector<int>{1, 1});
}

TEST_CASE("constant words grow one row, decreasing words one column") {
  auto flat = q_shape_path({4, 4, 4, 4});
  CHECK(flat.shape_at(4) == std::vector<int>{4});
  CHECK(flat.growth_rows == std::vector<int>{0, 0, 0, 0});

  auto drop = q_shape_path({3, 2, 1});
  CHECK(drop.shape_at(3) == std::vector<int>{1, 1, 1});
  CHECK(drop.growth_rows == std::vector<int>{0, 1, 2});
}

TEST_CASE("q_shape_path always yields a valid Young path") {
  for (int length = 0; length <= 5; ++length)
    for (const auto& word : all_words(length, 3)) {
      auto path = q_shape_path(word);
      CHECK(valid_young_path(path));
      CHECK(path.length() == length);
      for (int k = 0; k <= length; ++k) {
        std::vector<int> prefix(word.begin(), word.begin() + k);
        CHECK(path.shape_at(k) == rsk_pair(prefix).q.shape());
      }
    }
}

TEST_CASE("valid_young_path rejects malformed growth sequences") {
  CHECK(valid_young_path(YoungPath{{}}));
  CHECK(valid_young_path(YoungPath{{0, 0, 1}}));
  CHECK_FALSE(valid_young_path(YoungPath{{1}}));
  CHECK_FALSE(valid_young_path(YoungPath{{0, 2}}));
  CHECK_FALSE(valid_young_path(YoungPath{{0, -1}}));
  CHECK_THROWS_AS((YoungPath{{0, 2}}.shape_at(2)), std::invalid_argument);
}

TEST_CASE("young_path_to_finite lands on the labeled vertices") {
  auto g = young_graph(5);
  auto path = q_shape_path({2, 1, 1, 3});
  auto fin = young_path_to_finite(path, *g);
  REQUIRE_NOTHROW(require_valid_path(*g, fin));
  CHECK(fin.start_level == 0);
  auto labels = path_labels(*g, fin);
  CHECK(labels == std::vector<std::string>{"e", "1", "1,1", "2,1", "3,1"});

  CHECK_THROWS_AS(young_path_to_finite(path, *young_graph(4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(young_path_to_finite(YoungPath{{0, 2}}, *g),
                  std::invalid_argument);
}

TEST_CASE("LetterDistribution validates the Thoma constraints") {
  LetterDistribution plain({Rational(3, 5), Rational(2, 5)});
  CHECK(plain.gamma() == 0);
  LetterDistribution mixed({Rational(1, 2)});
  CHECK(mixed.gamma() == Rational(1, 2));
  LetterDistribution continuous({});
  CHECK(continuous.gamma() == 1);

  CHECK_THROWS_AS(LetterDistribution({Rational(-1, 4)}), std::invalid_argument);
  CHECK_THROWS_AS(LetterDistribution({Rational(1, 4), Rational(1, 2)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(LetterDistribution({Rational(3, 4), Rational(1, 2)}),
                  std::invalid_argument);
}

TEST_CASE("a single full-mass atom always yields the one-row shape") {
  LetterDistribution dist({Rational(1)});
  for (std::uint64_t seed : {0, 7}) {
    auto path = pushforward_sample(dist, 6, seed);
    CHECK(path.shape_at(6) == std::vector<int>{6});
  }
}

TEST_CASE("pushforward sampling is deterministic per seed") {
  LetterDistribution dist({Rational(1, 2), Rational(1, 4)});
  auto a = pushforward_sample(dist, 40, 11);
  auto b = pushforward_sample(dist, 40, 11);
  CHECK(a.growth_rows == b.growth_rows);

  auto batch = sample_young_paths(dist, 40, 3, 11);
  REQUIRE(batch.size() == 3);
  CHECK(batch[0].growth_rows == a.growth_rows);
  CHECK(valid_young_path(batch[1]));
  CHECK(valid_young_path(batch[2]));
}

TEST_CASE("two equal atoms split level-2 shapes 3:1") {
  LetterDistribution dist({Rational(1, 2), Rational(1, 2)});
  const int samples = 10000;
  int columns = 0;
  auto paths = sample_young_paths(dist, 2, samples, 21);
  for (const auto& p : paths)
    if (p.shape_at(2) == std::vector<int>{1, 1}) ++columns;
  double freq = static_cast<double>(columns) / samples;
  double sigma = std::sqrt(0.25 * 0.75 / samples);
  CHECK(std::abs(freq - 0.25) < 4 * sigma);
}

TEST_CASE("purely continuous letters reproduce the level-4 Plancherel law") {
  LetterDistribution dist({});
  const int samples = 20000;
  auto paths = sample_young_paths(dist, 4, samples, 33);
  std::map<std::vector<int>, int> counts;
  for (const auto& p : paths) ++counts[p.shape_at(4)];

  std::map<std::vector<int>, double> law = {{{4}, 1.0 / 24},
                                            {{3, 1}, 9.0 / 24},
                                            {{2, 2}, 4.0 / 24},
                                            {{2, 1, 1}, 9.0 / 24},
                                            {{1, 1, 1, 1}, 1.0 / 24}};
  for (const auto& [shape, expect] : law) {
    double freq = static_cast<double>(counts[shape]) / samples;
    double sigma = std::sqrt(expect * (1 - expect) / samples);
    CHECK(std::abs(freq - expect) < 4 * sigma);
  }
}

TEST_CASE("pushforward masses on {1,2} words are Schur values per Q-path") {
  Rational x(1, 3), y(2, 3);
  for (int n = 1; n <= 4; ++n) {
    std::map<std::vector<int>, Rational> mass;
    for (const auto& word : all_words(n, 2)) {
      Rational p = 1;
      for (int letter : word) p *= letter == 1 ? x : y;
      mass[q_shape_path(word).growth_rows] += p;
    }
    Rational total = 0;
    for (const auto& [rows, p] : mass) {
      auto shape = YoungPath{rows}.shape_at(n);
      REQUIRE(shape.size() <= 2);
      int a = shape[0];
      int b = shape.size() == 2 ? shape[1] : 0;
      CHECK(p == oracle::schur_2row(a, b, x, y));
      total += p;
    }
    CHECK(total == 1);
  }
}

TEST_CASE("thoma_frequency_estimate is exact on deterministic samples") {
  LetterDistribution dist({Rational(1)});
  auto paths = sample_young_paths(dist, 8, 5, 3);
  auto est = thoma_frequency_estimate(paths, 4);
  CHECK(est.level == 8);
  REQUIRE(est.rows.size() == 4);
  CHECK(est.rows[0].row == 1);
  CHECK(est.rows[0].frequency == 1.0);
  CHECK(est.rows[0].std_error == 0.0);
  for (std::size_t i = 1; i < est.rows.size(); ++i) {
    CHECK(est.rows[i].frequency == 0.0);
    CHECK(est.rows[i].std_error == 0.0);
  }
}

TEST_CASE("row and column estimates are conjugate on a one-column path") {
  std::vector<YoungPath> paths = {q_shape_path({3, 2, 1})};
  auto rows = thoma_frequency_estimate(paths, 4);
  for (int i = 0; i < 3; ++i)
    CHECK(rows.rows[i].frequency == doctest::Approx(1.0 / 3));
  CHECK(rows.rows[3].frequency == 0.0);

  auto cols = thoma_column_estimate(paths, 2);
  CHECK(cols.rows[0].frequency == doctest::Approx(1.0));
  CHECK(cols.rows[1].frequency == 0.0);
}

TEST_CASE("atom frequencies are recovered within the stated tolerance") {
  LetterDistribution dist({Rational(3, 5), Rational(2, 5)});
  auto paths = sample_young_paths(dist, 2000, 100, 13);
  auto est = thoma_frequency_estimate(paths, 3);
  CHECK(std::abs(est.rows[0].frequency - 0.6) < 0.02);
  CHECK(std::abs(est.rows[1].frequency - 0.4) < 0.02);
  CHECK(est.rows[2].frequency < 0.01);
}

TEST_CASE("thoma_frequency_estimate validates its input") {
  CHECK_THROWS_AS(thoma_frequency_estimate({}, 4), std::invalid_argument);
  CHECK_THROWS_AS(thoma_frequency_estimate({q_shape_path({1, 2})}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(thoma_frequency_estimate({YoungPath{{}}}, 4),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      thoma_frequency_estimate({q_shape_path({1}), q_shape_path({1, 2})}, 4),
      std::invalid_argument);
}
