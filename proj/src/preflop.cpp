#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <string>

#include "eval_core.hpp"
#include "pidpoker/handeval.hpp"

namespace pidpoker::cards {

namespace detail {
extern const std::string_view kPreflopTableText;
}

namespace {

constexpr std::string_view kRankChars = "23456789TJQKA";

// (high, low) rank -> 0-based index among the 78 unpaired rank combinations,
// ordered AK, AQ, ..., A2, KQ, ..., 32.
struct UnpairedIndex {
  std::array<std::array<int, 15>, 15> index{};
  std::array<std::pair<int, int>, 78> ranks{};
  UnpairedIndex() {
    int k = 0;
    for (int hi = 14; hi >= 3; --hi)
      for (int lo = hi - 1; lo >= 2; --lo) {
        index[hi][lo] = k;
        ranks[k] = {hi, lo};
        ++k;
      }
  }
};

const UnpairedIndex& unpaired() {
  static const UnpairedIndex table;
  return table;
}

std::uint64_t choose(int n, int k) {
  if (k < 0 || n < k) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

void unrank_board(std::uint64_t rank, std::array<int, 5>& c) {
  for (int i = 4; i >= 0; --i) {
    int v = i;
    while (choose(v + 1, i + 1) <= rank) ++v;
    c[i] = v;
    rank -= choose(v, i + 1);
  }
}

void next_board(std::array<int, 5>& c) {
  int i = 0;
  while (i < 4 && c[i] + 1 == c[i + 1]) ++i;
  ++c[i];
  for (int j = 0; j < i; ++j) c[j] = j;
}

constexpr int kRemaining = 47;
constexpr int kPairs = kRemaining * (kRemaining - 1) / 2;
constexpr std::uint64_t kOpponents = 990;  // C(45, 2)

struct BoardScratch {
  std::array<std::uint32_t, kPairs> scores{};
  std::array<std::uint32_t, kPairs> sorted{};
  std::array<std::array<std::uint32_t, kRemaining - 1>, kRemaining> by_card{};
  std::array<int, kRemaining> fill{};
};

// Adds one board's contribution to the tallies of every hole disjoint from it.
void tally_board(const std::array<int, 5>& board, BoardScratch& s,
                 std::uint64_t* half_wins, std::uint64_t* contests) {
  detail::RankState base;
  std::uint64_t used = 0;
  for (int c : board) {
    base.add(Card::from_index(c));
    used |= std::uint64_t{1} << c;
  }
  std::array<int, kRemaining> rem{};
  int n = 0;
  for (int c = 0; c < kDeckSize; ++c)
    if (!(used & (std::uint64_t{1} << c))) rem[n++] = c;

  s.fill.fill(0);
  int p = 0;
  for (int a = 0; a < kRemaining; ++a) {
    detail::RankState with_a = base;
    with_a.add(Card::from_index(rem[a]));
    for (int b = a + 1; b < kRemaining; ++b, ++p) {
      detail::RankState st = with_a;
      st.add(Card::from_index(rem[b]));
      const std::uint32_t v = detail::evaluate_state(st);
      s.scores[p] = v;
      s.by_card[a][s.fill[a]++] = v;
      s.by_card[b][s.fill[b]++] = v;
    }
  }
  s.sorted = s.scores;
  std::sort(s.sorted.begin(), s.sorted.end());
  for (auto& row : s.by_card) std::sort(row.begin(), row.end());

  auto less_eq = [](const auto& v, std::uint32_t x) {
    const auto lo = std::lower_bound(v.begin(), v.end(), x);
    const auto hi = std::upper_bound(lo, v.end(), x);
    return std::pair<std::uint64_t, std::uint64_t>(lo - v.begin(), hi - lo);
  };

  p = 0;
  for (int a = 0; a < kRemaining; ++a) {
    for (int b = a + 1; b < kRemaining; ++b, ++p) {
      const std::uint32_t v = s.scores[p];
      const auto [less_all, eq_all] = less_eq(s.sorted, v);
      const auto [less_a, eq_a] = less_eq(s.by_card[a], v);
      const auto [less_b, eq_b] = less_eq(s.by_card[b], v);
      const std::uint64_t less = less_all - less_a - less_b;
      const std::uint64_t ties = eq_all - eq_a - eq_b + 1;
      const int id = hole_id(Card::from_index(rem[a]), Card::from_index(rem[b]));
      half_wins[id] += 2 * less + ties;
      contests[id] += kOpponents;
    }
  }
}

EquityTally empty_tally() {
  return EquityTally{std::vector<std::uint64_t>(kHoleCount, 0),
                     std::vector<std::uint64_t>(kHoleCount, 0)};
}

}  // namespace

int hole_id(Card a, Card b) {
  int i = a.index(), j = b.index();
  if (i > j) std::swap(i, j);
  return j * (j - 1) / 2 + i;
}

std::pair<Card, Card> hole_from_id(int id) {
  int j = 1;
  while ((j + 1) * j / 2 <= id) ++j;
  const int i = id - j * (j - 1) / 2;
  return {Card::from_index(i), Card::from_index(j)};
}

int preflop_class_id(Card a, Card b) {
  if (a == b) throw CardError(CardErrc::DuplicateCard, a.to_string());
  const int hi = std::max(a.rank(), b.rank());
  const int lo = std::min(a.rank(), b.rank());
  if (hi == lo) return 15 - hi;
  const int k = unpaired().index[hi][lo];
  return a.suit() == b.suit() ? 14 + k : 92 + k;
}

std::string preflop_class_label(int class_id) {
  if (class_id < 1 || class_id > 169) {
    throw CardError(CardErrc::InvalidTable, "class id " + std::to_string(class_id));
  }
  if (class_id <= 13) {
    const char r = kRankChars[15 - class_id - 2];
    return {r, r};
  }
  const bool suited = class_id <= 91;
  const auto [hi, lo] = unpaired().ranks[suited ? class_id - 14 : class_id - 92];
  return {kRankChars[hi - 2], kRankChars[lo - 2], suited ? 's' : 'o'};
}

std::pair<Card, Card> preflop_class_representative(int class_id) {
  if (class_id < 1 || class_id > 169) {
    throw CardError(CardErrc::InvalidTable, "class id " + std::to_string(class_id));
  }
  if (class_id <= 13) {
    const int r = 15 - class_id;
    return {Card(r, Suit::Spades), Card(r, Suit::Hearts)};
  }
  const bool suited = class_id <= 91;
  const auto [hi, lo] = unpaired().ranks[suited ? class_id - 14 : class_id - 92];
  return {Card(hi, Suit::Spades), Card(lo, suited ? Suit::Spades : Suit::Hearts)};
}

std::string format_preflop_table(std::span<const PreflopClass> table) {
  std::ostringstream out;
  out << "# pidpoker preflop ranking\n"
      << "# version 1\n"
      << "# heads-up all-in equity against a uniformly random hole, exhaustive over all boards\n"
      << "# label rank equity\n";
  char buf[64];
  for (const auto& cls : table) {
    std::snprintf(buf, sizeof buf, "%s %d %.10f\n", cls.label.c_str(), cls.rank,
                  cls.equity);
    out << buf;
  }
  return out.str();
}

std::vector<PreflopClass> parse_preflop_table(std::string_view text) {
  std::map<std::string, int> ids;
  for (int id = 1; id <= 169; ++id) ids[preflop_class_label(id)] = id;

  std::vector<PreflopClass> table;
  std::vector<bool> seen_id(170, false), seen_rank(170, false);
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    PreflopClass cls;
    if (!(fields >> cls.label >> cls.rank >> cls.equity)) {
      throw CardError(CardErrc::InvalidTable, "bad line \"" + line + "\"");
    }
    const auto it = ids.find(cls.label);
    if (it == ids.end() || cls.rank < 1 || cls.rank > 169 ||
        seen_id[it->second] || seen_rank[cls.rank]) {
      throw CardError(CardErrc::InvalidTable, "bad entry \"" + line + "\"");
    }
    cls.id = it->second;
    seen_id[cls.id] = seen_rank[cls.rank] = true;
    table.push_back(cls);
  }
  if (table.size() != 169) {
    throw CardError(CardErrc::InvalidTable,
                    std::to_string(table.size()) + " classes, expected 169");
  }
  std::sort(table.begin(), table.end(),
            [](const auto& a, const auto& b) { return a.rank < b.rank; });
  return table;
}

const std::vector<PreflopClass>& preflop_table() {
  static const std::vector<PreflopClass> table =
      parse_preflop_table(detail::kPreflopTableText);
  return table;
}

PreflopClass preflop_class(Card a, Card b) {
  static const std::vector<int> rank_of_id = [] {
    std::vector<int> r(170, 0);
    for (const auto& cls : preflop_table()) r[cls.id] = cls.rank;
    return r;
  }();
  const int id = preflop_class_id(a, b);
  return preflop_table()[rank_of_id[id] - 1];
}

EquityTally enumerate_equity_serial(std::uint64_t board_begin,
                                    std::uint64_t board_end) {
  EquityTally tally = empty_tally();
  board_end = std::min(board_end, kBoardCount);
  if (board_begin >= board_end) return tally;
  auto scratch = std::make_unique<BoardScratch>();
  std::array<int, 5> board{};
  unrank_board(board_begin, board);
  for (std::uint64_t r = board_begin; r < board_end; ++r) {
    tally_board(board, *scratch, tally.half_wins.data(), tally.contests.data());
    if (r + 1 < board_end) next_board(board);
  }
  return tally;
}

EquityTally enumerate_equity(std::uint64_t board_begin, std::uint64_t board_end) {
  EquityTally tally = empty_tally();
  board_end = std::min(board_end, kBoardCount);
  if (board_begin >= board_end) return tally;
  constexpr std::uint64_t kChunk = 2048;
  const std::int64_t chunks =
      static_cast<std::int64_t>((board_end - board_begin + kChunk - 1) / kChunk);
  std::mutex merge;

#pragma omp parallel
  {
    EquityTally local = empty_tally();
    auto scratch = std::make_unique<BoardScratch>();
#pragma omp for schedule(dynamic)
    for (std::int64_t ch = 0; ch < chunks; ++ch) {
      const std::uint64_t lo = board_begin + static_cast<std::uint64_t>(ch) * kChunk;
      const std::uint64_t hi = std::min(lo + kChunk, board_end);
      std::array<int, 5> board{};
      unrank_board(lo, board);
      for (std::uint64_t r = lo; r < hi; ++r) {
        tally_board(board, *scratch, local.half_wins.data(), local.contests.data());
        if (r + 1 < hi) next_board(board);
      }
    }
    // Integer sums, so the merge order does not matter.
    std::lock_guard<std::mutex> lock(merge);
    for (int i = 0; i < kHoleCount; ++i) {
      tally.half_wins[i] += local.half_wins[i];
      tally.contests[i] += local.contests[i];
    }
  }
  return tally;
}

std::vector<PreflopClass> rank_classes(const EquityTally& tally) {
  std::vector<std::uint64_t> half(170, 0), total(170, 0);
  for (int id = 0; id < kHoleCount; ++id) {
    const auto [a, b] = hole_from_id(id);
    const int cls = preflop_class_id(a, b);
    half[cls] += tally.half_wins[id];
    total[cls] += tally.contests[id];
  }
  std::vector<PreflopClass> out;
  for (int id = 1; id <= 169; ++id) {
    PreflopClass cls;
    cls.id = id;
    cls.label = preflop_class_label(id);
    cls.equity = total[id] ? static_cast<double>(half[id]) / (2.0 * total[id]) : 0.0;
    out.push_back(cls);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.equity > b.equity;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
  return out;
}

}  // namespace pidpoker::cards
