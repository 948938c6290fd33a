#pragma once

// Card model, ordinal showdown scoring, and the 169-class preflop ranking.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pidpoker::cards {

enum class CardErrc { DuplicateCard, InvalidCommunitySize, InvalidCard, InvalidTable };

const char* to_string(CardErrc code);

class CardError : public std::runtime_error {
 public:
  CardError(CardErrc code, const std::string& detail);
  CardErrc code() const noexcept { return code_; }

 private:
  CardErrc code_;
};

// Suits carry no ordering in Hold'em; the index only identifies the card.
enum class Suit : std::uint8_t { Clubs = 0, Diamonds = 1, Hearts = 2, Spades = 3 };

class Card {
 public:
  constexpr Card() = default;
  // rank 2..14 (ace high)
  constexpr Card(int rank, Suit suit)
      : index_(static_cast<std::uint8_t>((rank - 2) * 4 + static_cast<int>(suit))) {}
  static constexpr Card from_index(int index) {
    Card c;
    c.index_ = static_cast<std::uint8_t>(index);
    return c;
  }
  // "As", "Td", "7c". Throws InvalidCard.
  static Card parse(std::string_view text);

  constexpr int index() const { return index_; }
  constexpr int rank() const { return index_ / 4 + 2; }
  constexpr Suit suit() const { return static_cast<Suit>(index_ % 4); }
  std::string to_string() const;

  constexpr auto operator<=>(const Card&) const = default;

 private:
  std::uint8_t index_ = 0;
};

inline constexpr int kDeckSize = 52;

std::vector<Card> parse_cards(std::string_view text);  // space separated
std::string format_cards(std::span<const Card> cards);

enum class Category : std::uint8_t {
  HighCard = 0,
  Pair,
  TwoPair,
  Trips,
  Straight,
  Flush,
  FullHouse,
  Quads,
  StraightFlush,
};

const char* to_string(Category c);

// Showdown scores and preflop-class scores live on separate ordinal scales.
enum class Scale : std::uint8_t { Preflop = 0, Showdown = 1 };

struct HandScore {
  Scale scale = Scale::Showdown;
  Category category = Category::HighCard;
  // Showdown: category << 20 | five tie-break ranks, 4 bits each, most
  // significant first. Preflop: 170 - class rank, so larger is stronger.
  std::uint32_t ordinal = 0;

  bool operator==(const HandScore&) const = default;
};

// Total order; scores on different scales order by scale first.
std::strong_ordering compare(const HandScore& a, const HandScore& b);

// Human-readable label, e.g. "pair 4s", "flush, ace high", "preflop AKs".
std::string describe(const HandScore& score);

// Best five-card hand out of 5..7 cards; no validation.
std::uint32_t evaluate_ordinal(std::span<const Card> cards);
HandScore evaluate(std::span<const Card> cards);

// Hole cards plus 0, 3, 4 or 5 community cards. With no community cards
// the result is on the preflop scale.
HandScore score_hand(std::span<const Card> hole, std::span<const Card> community);

// Largest showdown ordinal of a pair of the given rank (any kickers).
std::uint32_t max_pair_ordinal(int pair_rank);

struct PreflopClass {
  int id = 0;    // 1..169: pairs AA..22, suited AKs..32s, offsuit AKo..32o
  int rank = 0;  // 1 = strongest
  double equity = 0.0;
  std::string label;  // "AA", "AKs", "72o"
};

PreflopClass preflop_class(Card a, Card b);
// Class id without the ranking lookup.
int preflop_class_id(Card a, Card b);
std::string preflop_class_label(int class_id);
// A representative hole for the class.
std::pair<Card, Card> preflop_class_representative(int class_id);

// Entries ordered by rank.
const std::vector<PreflopClass>& preflop_table();

// Exhaustive heads-up all-in equity of every 2-card hole against a uniformly
// random opponent hole, accumulated over boards. Tallies are exact integers
// in half-pot units (win = 2, tie = 1).
struct EquityTally {
  std::vector<std::uint64_t> half_wins;   // indexed by hole id (0..1325)
  std::vector<std::uint64_t> contests;
};

inline constexpr int kHoleCount = 1326;
int hole_id(Card a, Card b);
std::pair<Card, Card> hole_from_id(int id);
inline constexpr std::uint64_t kBoardCount = 2598960;

// Boards are enumerated in colex order; [begin, end) restricts to a slice.
EquityTally enumerate_equity(std::uint64_t board_begin, std::uint64_t board_end);
EquityTally enumerate_equity_serial(std::uint64_t board_begin,
                                    std::uint64_t board_end);

// Aggregates a full tally into the 169 classes, ranked by equity.
std::vector<PreflopClass> rank_classes(const EquityTally& tally);

std::string format_preflop_table(std::span<const PreflopClass> table);
std::vector<PreflopClass> parse_preflop_table(std::string_view text);

}  // namespace pidpoker::cards
