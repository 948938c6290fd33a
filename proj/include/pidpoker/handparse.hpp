#pragma once

// Hand-history records: tolerant parsing of raw room text, rendering back to
// that text, and the strict line-delimited normalized format.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pidpoker/handeval.hpp"

namespace pidpoker::hh {

using Cents = std::int64_t;

enum class Street : std::uint8_t { Preflop = 0, Flop, Turn, River };
inline constexpr int kStreetCount = 4;
const char* to_string(Street s);
std::optional<Street> street_from_string(std::string_view name);

enum class ActionKind : std::uint8_t { PostBlind, Fold, Check, Call, Bet, Raise };
const char* to_string(ActionKind k);
std::optional<ActionKind> action_kind_from_string(std::string_view name);

struct ActionRecord {
  std::string player;
  ActionKind kind = ActionKind::Check;
  // Chips this action moved into the pot (0 for fold and check).
  Cents amount = 0;

  bool operator==(const ActionRecord&) const = default;
};

struct SeatRecord {
  std::string player;
  int seat = 0;
  Cents stack = 0;
  // Chips returned to the player at the end of the hand: pot share plus any
  // uncalled bet.
  Cents won = 0;

  bool operator==(const SeatRecord&) const = default;
};

struct StreetRecord {
  Street name = Street::Preflop;
  // Cumulative community cards: 0, 3, 4, 5.
  std::vector<cards::Card> board;
  std::vector<ActionRecord> actions;

  bool operator==(const StreetRecord&) const = default;
};

struct Reveal {
  std::string player;
  std::array<cards::Card, 2> cards{};

  bool operator==(const Reveal&) const = default;
};

struct HandRecord {
  std::string hand_id;
  std::string timestamp;
  Cents blind = 0;  // big blind
  std::vector<SeatRecord> seats;
  std::vector<StreetRecord> streets;
  std::vector<Reveal> showdown;
  Cents pot = 0;
  Cents rake = 0;

  bool operator==(const HandRecord&) const = default;

  const SeatRecord* seat_of(std::string_view player) const;
  const Reveal* reveal_of(std::string_view player) const;
  // Sum of the player's action amounts, blinds included.
  Cents contributed(std::string_view player) const;
};

enum class ParseErrc {
  MalformedHeader,
  UnknownActionVerb,
  ChipImbalance,
  TruncatedHand,
  InvalidAction,
  MalformedLine,
};
const char* to_string(ParseErrc code);

struct ParseError {
  ParseErrc code = ParseErrc::MalformedLine;
  int line = 0;  // 1-based line of the first offending line
  std::string message;

  bool operator==(const ParseError&) const = default;
};

using ParseResult = std::variant<HandRecord, ParseError>;

// Parses one hand block. Lines are numbered from first_line.
ParseResult parse_hand(std::string_view text, int first_line = 1);

struct FailureEntry {
  int line = 0;
  ParseErrc code = ParseErrc::MalformedLine;
  std::string message;

  bool operator==(const FailureEntry&) const = default;
};

struct ParseReport {
  std::size_t attempted = 0;
  std::size_t parsed = 0;
  std::vector<FailureEntry> failures;

  double failure_fraction() const {
    return attempted ? static_cast<double>(attempted - parsed) / attempted : 0.0;
  }
  bool operator==(const ParseReport&) const = default;
};

struct StreamResult {
  std::vector<HandRecord> hands;
  ParseReport report;
};

// Hand blocks are separated by blank lines. A bad block is recorded in the
// report and skipped. Blocks are parsed in parallel; results keep input
// order.
StreamResult parse_stream(std::istream& in);
StreamResult parse_stream_serial(std::istream& in);

struct TextBlock {
  int first_line = 1;
  std::string text;
};
std::vector<TextBlock> split_blocks(std::istream& in);

// Raw room-format text for a record; parse_hand(render_hand(r)) == r.
std::string render_hand(const HandRecord& record, std::string_view table_name = "Synthetic");

// --- normalized line format ----------------------------------------------

inline constexpr int kSchemaVersion = 1;
std::string schema_header();

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string normalize(const HandRecord& record);
HandRecord read_normalized(std::string_view line);

// meta_json, when given, is a JSON object stored under "meta" in the header
// line (tool version, resolved configuration).
void write_records(std::ostream& out, const std::vector<HandRecord>& records,
                   std::string_view meta_json = {});
// Expects a schema header as the first line; its "meta" member is ignored.
std::vector<HandRecord> read_records(std::istream& in);

// Chip conservation and board-size invariants. Returns a message on failure.
std::optional<std::string> check_invariants(const HandRecord& record);

}  // namespace pidpoker::hh
