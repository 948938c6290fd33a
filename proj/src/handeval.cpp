#include <array>
#include <string>

#include "eval_core.hpp"
#include "pidpoker/handeval.hpp"

namespace pidpoker::cards {

const char* to_string(Category c) {
  switch (c) {
    case Category::HighCard: return "high card";
    case Category::Pair: return "pair";
    case Category::TwoPair: return "two pair";
    case Category::Trips: return "trips";
    case Category::Straight: return "straight";
    case Category::Flush: return "flush";
    case Category::FullHouse: return "full house";
    case Category::Quads: return "quads";
    case Category::StraightFlush: return "straight flush";
  }
  return "unknown";
}

std::strong_ordering compare(const HandScore& a, const HandScore& b) {
  if (a.scale != b.scale) return a.scale <=> b.scale;
  return a.ordinal <=> b.ordinal;
}

std::uint32_t evaluate_ordinal(std::span<const Card> cards) {
  detail::RankState state;
  for (const Card c : cards) state.add(c);
  return detail::evaluate_state(state);
}

HandScore evaluate(std::span<const Card> cards) {
  const std::uint32_t ord = evaluate_ordinal(cards);
  return HandScore{Scale::Showdown, static_cast<Category>(ord >> 20), ord};
}

HandScore score_hand(std::span<const Card> hole, std::span<const Card> community) {
  if (hole.size() != 2) {
    throw CardError(CardErrc::InvalidCard, "a hand needs exactly two hole cards");
  }
  const std::size_t n = community.size();
  if (n != 0 && n != 3 && n != 4 && n != 5) {
    throw CardError(CardErrc::InvalidCommunitySize,
                    std::to_string(n) + " community cards");
  }
  std::uint64_t seen = 0;
  auto mark = [&seen](Card c) {
    const std::uint64_t bit = std::uint64_t{1} << c.index();
    if (seen & bit) throw CardError(CardErrc::DuplicateCard, c.to_string());
    seen |= bit;
  };
  for (const Card c : hole) mark(c);
  for (const Card c : community) mark(c);

  if (n == 0) {
    const PreflopClass cls = preflop_class(hole[0], hole[1]);
    const Category cat =
        hole[0].rank() == hole[1].rank() ? Category::Pair : Category::HighCard;
    return HandScore{Scale::Preflop, cat, static_cast<std::uint32_t>(170 - cls.rank)};
  }
  std::array<Card, 7> all{};
  std::size_t k = 0;
  for (const Card c : hole) all[k++] = c;
  for (const Card c : community) all[k++] = c;
  return evaluate(std::span<const Card>(all.data(), k));
}

std::uint32_t max_pair_ordinal(int pair_rank) {
  int kickers[3];
  int k = 0;
  for (int r = 14; r >= 2 && k < 3; --r) {
    if (r != pair_rank) kickers[k++] = r;
  }
  return detail::encode(Category::Pair, pair_rank, kickers[0], kickers[1],
                        kickers[2]);
}

namespace {

std::string rank_name(int rank) {
  static constexpr std::array<const char*, 13> kNames = {
      "2", "3", "4", "5", "6", "7", "8", "9", "T", "J", "Q", "K", "A"};
  return kNames[rank - 2];
}

}  // namespace

std::string describe(const HandScore& score) {
  if (score.scale == Scale::Preflop) {
    const int rank = 170 - static_cast<int>(score.ordinal);
    for (const auto& cls : preflop_table()) {
      if (cls.rank == rank) return "preflop " + cls.label;
    }
    return "preflop rank " + std::to_string(rank);
  }
  const int r1 = (score.ordinal >> 16) & 0xF;
  const int r2 = (score.ordinal >> 12) & 0xF;
  switch (score.category) {
    case Category::HighCard: return "high card " + rank_name(r1);
    case Category::Pair: return "pair " + rank_name(r1) + "s";
    case Category::TwoPair: return "two pair " + rank_name(r1) + "s and " + rank_name(r2) + "s";
    case Category::Trips: return "trips " + rank_name(r1) + "s";
    case Category::Straight: return "straight, " + rank_name(r1) + " high";
    case Category::Flush: return "flush, " + rank_name(r1) + " high";
    case Category::FullHouse: return "full house " + rank_name(r1) + "s over " + rank_name(r2) + "s";
    case Category::Quads: return "quads " + rank_name(r1) + "s";
    case Category::StraightFlush: return "straight flush, " + rank_name(r1) + " high";
  }
  return "unknown";
}

}  // namespace pidpoker::cards
