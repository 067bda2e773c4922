#include "emc/rsk.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

#include "emc/random.hpp"

namespace emc {
namespace {

// An atom or a fresh continuous letter; fresh letters carry a random
// 128-bit key plus a draw counter, so they are pairwise distinct and
// totally ordered above all atoms.
struct RealizedLetter {
  int atom = -1;  // >= 0 for atoms
  std::uint64_t hi = 0, lo = 0, ctr = 0;

  friend bool operator<(const RealizedLetter& a, const RealizedLetter& b) {
    if (a.atom >= 0 || b.atom >= 0) {
      if (a.atom >= 0 && b.atom >= 0) return a.atom < b.atom;
      return a.atom >= 0;
    }
    return std::tie(a.hi, a.lo, a.ctr) < std::tie(b.hi, b.lo, b.ctr);
  }
};

YoungPath run_word(const LetterDistribution& dist, const ExactCategorical& cat,
                   int n, BitStream& bits) {
  const int fresh_cell = static_cast<int>(dist.atoms().size());
  std::vector<std::vector<RealizedLetter>> rows;
  YoungPath path;
  path.growth_rows.reserve(n);
  std::uint64_t ctr = 0;
  for (int t = 0; t < n; ++t) {
    int cell = cat.sample(bits);
    RealizedLetter letter;
    if (cell < fresh_cell) {
      letter.atom = cell;
    } else {
      letter.hi = bits.next_u64();
      letter.lo = bits.next_u64();
      letter.ctr = ctr++;
    }
    path.growth_rows.push_back(bump_insert(rows, letter));
  }
  return path;
}

struct Welford {
  double n = 0, mean = 0, m2 = 0;

  void add(double x) {
    n += 1;
    double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }

  double std_error() const {
    if (n < 2) return 0;
    return std::sqrt(m2 / (n - 1) / n);
  }
};

FrequencyEstimate estimate(const std::vector<YoungPath>& paths, int cap,
                           bool columns) {
  if (paths.empty()) throw std::invalid_argument("empty path sample");
  if (cap < 1) throw std::invalid_argument("row cap must be positive");
  const int n = paths[0].length();
  if (n < 1) throw std::invalid_argument("paths must have positive length");
  for (const auto& p : paths)
    if (p.length() != n)
      throw std::invalid_argument("paths must have equal length");

  std::vector<Welford> stats(cap);
  for (const auto& p : paths) {
    auto shape = p.shape_at(n);
    for (int i = 0; i < cap; ++i) {
      int len;
      if (columns)
        len = static_cast<int>(std::count_if(shape.begin(), shape.end(),
                                             [&](int l) { return l > i; }));
      else
        len = i < static_cast<int>(shape.size()) ? shape[i] : 0;
      stats[i].add(static_cast<double>(len) / n);
    }
  }

  FrequencyEstimate out;
  out.level = n;
  for (int i = 0; i < cap; ++i)
    out.rows.push_back({i + 1, stats[i].mean, stats[i].std_error()});
  return out;
}

}  // namespace

std::vector<int> Tableau::shape() const {
  std::vector<int> lens;
  lens.reserve(rows.size());
  for (const auto& r : rows) lens.push_back(static_cast<int>(r.size()));
  return lens;
}

std::size_t Tableau::size() const {
  std::size_t total = 0;
  for (const auto& r : rows) total += r.size();
  return total;
}

bool Tableau::is_semistandard() const {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].empty()) return false;
    if (r > 0 && rows[r].size() > rows[r - 1].size()) return false;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (c > 0 && rows[r][c] < rows[r][c - 1]) return false;
      if (r > 0 && rows[r][c] <= rows[r - 1][c]) return false;
    }
  }
  return true;
}

bool Tableau::is_standard() const {
  if (!is_semistandard()) return false;
  std::vector<char> seen(size() + 1, 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) {
      int v = row[c];
      if (c > 0 && v <= row[c - 1]) return false;
      if (v < 1 || v > static_cast<int>(seen.size()) - 1 || seen[v]) return false;
      seen[v] = 1;
    }
  return true;
}

InsertResult row_insert(Tableau t, int letter) {
  int row = bump_insert(t.rows, letter);
  int col = static_cast<int>(t.rows[row].size()) - 1;
  return {std::move(t), row, col};
}

RskPair rsk_pair(const std::vector<int>& word) {
  RskPair pair;
  for (std::size_t i = 0; i < word.size(); ++i) {
    int row = bump_insert(pair.p.rows, word[i]);
    if (row == static_cast<int>(pair.q.rows.size())) pair.q.rows.emplace_back();
    pair.q.rows[row].push_back(static_cast<int>(i) + 1);
  }
  return pair;
}

std::vector<int> YoungPath::shape_at(int k) const {
  if (k < 0 || k > length())
    throw std::invalid_argument("shape index out of range");
  std::vector<int> lens;
  for (int i = 0; i < k; ++i) {
    int r = growth_rows[i];
    if (r < 0 || r > static_cast<int>(lens.size()))
      throw std::invalid_argument("invalid Young path");
    if (r == static_cast<int>(lens.size()))
      lens.push_back(1);
    else
      ++lens[r];
  }
  return lens;
}

std::vector<std::vector<int>> YoungPath::shapes() const {
  std::vector<std::vector<int>> out;
  out.reserve(growth_rows.size() + 1);
  std::vector<int> lens;
  out.push_back(lens);
  for (int r : growth_rows) {
    if (r < 0 || r > static_cast<int>(lens.size()))
      throw std::invalid_argument("invalid Young path");
    if (r == static_cast<int>(lens.size()))
      lens.push_back(1);
    else
      ++lens[r];
    out.push_back(lens);
  }
  return out;
}

bool valid_young_path(const YoungPath& p) {
  std::vector<int> lens;
  for (int r : p.growth_rows) {
    if (r < 0 || r > static_cast<int>(lens.size())) return false;
    if (r == static_cast<int>(lens.size())) {
      lens.push_back(1);
    } else {
      if (r > 0 && lens[r - 1] == lens[r]) return false;
      ++lens[r];
    }
  }
  return true;
}

YoungPath q_shape_path(const std::vector<int>& word) {
  std::vector<std::vector<int>> rows;
  YoungPath path;
  path.growth_rows.reserve(word.size());
  for (int letter : word) path.growth_rows.push_back(bump_insert(rows, letter));
  return path;
}

FinitePath young_path_to_finite(const YoungPath& p, const GradedGraph& young) {
  if (!valid_young_path(p)) throw std::invalid_argument("invalid Young path");
  if (p.length() >= young.depth())
    throw std::invalid_argument("graph too shallow for this path");
  FinitePath out;
  out.start_level = 0;
  std::vector<int> lens;
  for (int k = 0; k <= p.length(); ++k) {
    auto idx = young.find_vertex(k, partition_label(lens));
    if (!idx)
      throw std::invalid_argument("graph has no vertex '" + partition_label(lens) +
                                  "' at level " + std::to_string(k));
    out.vertices.push_back(*idx);
    if (k < p.length()) {
      out.edge_choices.push_back(0);
      int r = p.growth_rows[k];
      if (r == static_cast<int>(lens.size()))
        lens.push_back(1);
      else
        ++lens[r];
    }
  }
  return out;
}

LetterDistribution::LetterDistribution(std::vector<Rational> atoms)
    : atoms_(std::move(atoms)) {
  Rational sum = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (atoms_[i] < 0) throw std::invalid_argument("negative atom");
    if (i > 0 && atoms_[i] > atoms_[i - 1])
      throw std::invalid_argument("atoms must be weakly decreasing");
    sum += atoms_[i];
  }
  if (sum > 1) throw std::invalid_argument("atoms sum to more than 1");
  gamma_ = 1 - sum;
}

YoungPath pushforward_sample(const LetterDistribution& dist, int n,
                             std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("negative word length");
  std::vector<Rational> probs = dist.atoms();
  probs.push_back(dist.gamma());
  ExactCategorical cat(std::move(probs));
  BitStream bits(path_seed(seed, 0));
  return run_word(dist, cat, n, bits);
}

std::vector<YoungPath> sample_young_paths(const LetterDistribution& dist, int n,
                                          std::size_t count, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("negative word length");
  std::vector<Rational> probs = dist.atoms();
  probs.push_back(dist.gamma());
  ExactCategorical cat(std::move(probs));
  std::vector<YoungPath> paths;
  paths.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    BitStream bits(path_seed(seed, i));
    paths.push_back(run_word(dist, cat, n, bits));
  }
  return paths;
}

FrequencyEstimate thoma_frequency_estimate(const std::vector<YoungPath>& paths,
                                           int row_cap) {
  return estimate(paths, row_cap, false);
}

FrequencyEstimate thoma_column_estimate(const std::vector<YoungPath>& paths,
                                        int col_cap) {
  return estimate(paths, col_cap, true);
}

}  // namespace emc
