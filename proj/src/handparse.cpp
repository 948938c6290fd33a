#include <algorithm>
#include <istream>
#include <map>
#include <sstream>

#include "money.hpp"
#include "pidpoker/handparse.hpp"

namespace pidpoker::hh {

const char* to_string(Street s) {
  switch (s) {
    case Street::Preflop: return "preflop";
    case Street::Flop: return "flop";
    case Street::Turn: return "turn";
    case Street::River: return "river";
  }
  return "unknown";
}

std::optional<Street> street_from_string(std::string_view name) {
  for (int i = 0; i < kStreetCount; ++i) {
    const auto s = static_cast<Street>(i);
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

const char* to_string(ActionKind k) {
  switch (k) {
    case ActionKind::PostBlind: return "post-blind";
    case ActionKind::Fold: return "fold";
    case ActionKind::Check: return "check";
    case ActionKind::Call: return "call";
    case ActionKind::Bet: return "bet";
    case ActionKind::Raise: return "raise";
  }
  return "unknown";
}

std::optional<ActionKind> action_kind_from_string(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ActionKind::Raise); ++i) {
    const auto k = static_cast<ActionKind>(i);
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

const char* to_string(ParseErrc code) {
  switch (code) {
    case ParseErrc::MalformedHeader: return "MalformedHeader";
    case ParseErrc::UnknownActionVerb: return "UnknownActionVerb";
    case ParseErrc::ChipImbalance: return "ChipImbalance";
    case ParseErrc::TruncatedHand: return "TruncatedHand";
    case ParseErrc::InvalidAction: return "InvalidAction";
    case ParseErrc::MalformedLine: return "MalformedLine";
  }
  return "Unknown";
}

const SeatRecord* HandRecord::seat_of(std::string_view player) const {
  for (const auto& s : seats)
    if (s.player == player) return &s;
  return nullptr;
}

const Reveal* HandRecord::reveal_of(std::string_view player) const {
  for (const auto& r : showdown)
    if (r.player == player) return &r;
  return nullptr;
}

Cents HandRecord::contributed(std::string_view player) const {
  Cents total = 0;
  for (const auto& st : streets)
    for (const auto& a : st.actions)
      if (a.player == player) total += a.amount;
  return total;
}

namespace {

struct Failure {
  ParseErrc code;
  int line;
  std::string message;
};

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t'))
    s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

// Strips a trailing " and is all-in".
std::string_view strip_all_in(std::string_view s) {
  constexpr std::string_view kAllIn = " and is all-in";
  if (s.size() >= kAllIn.size() && s.substr(s.size() - kAllIn.size()) == kAllIn)
    s.remove_suffix(kAllIn.size());
  return s;
}

// Cards inside every [...] group of the line, in order.
std::vector<cards::Card> bracket_cards(std::string_view line) {
  std::vector<cards::Card> out;
  std::size_t pos = 0;
  while ((pos = line.find('[', pos)) != std::string_view::npos) {
    const auto end = line.find(']', pos);
    if (end == std::string_view::npos) throw cards::CardError(cards::CardErrc::InvalidCard, "unclosed [");
    for (const auto c : cards::parse_cards(line.substr(pos + 1, end - pos - 1)))
      out.push_back(c);
    pos = end + 1;
  }
  return out;
}

constexpr std::string_view kStatusPhrases[] = {
    "is sitting out", "sits out", "has timed out", "is disconnected",
    "is connected", "has returned", "leaves the table", "joins the table",
    "mucks hand", "doesn't show hand", "will be allowed to play after the button",
    "has timed out while disconnected", "was removed from the table"};

class HandParser {
 public:
  HandParser(std::string_view text, int first_line) : first_line_(first_line) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      lines_.push_back(trim(text.substr(pos, end - pos)));
      pos = end + 1;
    }
    while (!lines_.empty() && lines_.back().empty()) lines_.pop_back();
  }

  ParseResult run() {
    try {
      parse();
    } catch (const Failure& f) {
      return ParseError{f.code, f.line, f.message};
    }
    return std::move(record_);
  }

 private:
  [[noreturn]] void fail(ParseErrc code, std::size_t idx, std::string msg) const {
    throw Failure{code, first_line_ + static_cast<int>(idx), std::move(msg)};
  }

  Cents money_or_fail(std::string_view text, std::size_t idx) const {
    const auto v = parse_money(text);
    if (!v) fail(ParseErrc::MalformedLine, idx, "bad amount \"" + std::string(text) + "\"");
    return *v;
  }

  void parse() {
    if (lines_.empty() || std::all_of(lines_.begin(), lines_.end(),
                                      [](auto l) { return l.empty(); })) {
      fail(ParseErrc::TruncatedHand, 0, "empty hand block");
    }
    parse_header(lines_[0]);
    bool in_summary = false;
    bool have_total = false;
    for (std::size_t i = 1; i < lines_.size(); ++i) {
      const std::string_view line = lines_[i];
      if (line.empty()) continue;
      if (in_summary) {
        if (starts_with(line, "Total pot ")) {
          parse_totals(line, i);
          have_total = true;
        }
        continue;
      }
      if (starts_with(line, "*** ")) {
        if (starts_with(line, "*** SUMMARY ***")) {
          in_summary = true;
        } else {
          parse_marker(line, i);
        }
        continue;
      }
      if (starts_with(line, "Seat ") && record_.streets.empty()) {
        parse_seat(line, i);
        continue;
      }
      if (starts_with(line, "Uncalled bet (")) {
        parse_uncalled(line, i);
        continue;
      }
      if (const auto* name = match_player(line, ": ")) {
        parse_action(*name, line.substr(name->size() + 2), i);
        continue;
      }
      if (const auto pos = line.find(" collected $"); pos != std::string_view::npos) {
        const std::string name(line.substr(0, pos));
        if (!record_.seat_of(name)) fail(ParseErrc::MalformedLine, i, "collect by unseated player");
        auto rest = line.substr(pos + 11);
        rest = rest.substr(0, rest.find(' '));
        collected_[name] += money_or_fail(rest, i);
        continue;
      }
      // Anything else (chat, table notices, dealt cards) is ignored.
    }
    const std::size_t last = lines_.size() - 1;
    if (!in_summary || !have_total) fail(ParseErrc::TruncatedHand, last, "missing summary totals");
    if (record_.streets.empty()) fail(ParseErrc::TruncatedHand, last, "no betting rounds");
    finish(last);
  }

  void parse_header(std::string_view line) {
    const auto bad = [&] { fail(ParseErrc::MalformedHeader, 0, "unrecognized header"); };
    if (!starts_with(line, "PokerStars ")) bad();
    const auto hash = line.find('#');
    const auto colon = line.find(':', hash == std::string_view::npos ? 0 : hash);
    if (hash == std::string_view::npos || colon == std::string_view::npos || colon == hash + 1) bad();
    record_.hand_id = std::string(line.substr(hash + 1, colon - hash - 1));
    if (record_.hand_id.find(' ') != std::string::npos) bad();
    const auto game = line.find("Hold'em No Limit (", colon);
    if (game == std::string_view::npos) bad();
    const auto open = line.find('(', game);
    const auto close = line.find(')', open);
    const auto slash = line.find('/', open);
    if (close == std::string_view::npos || slash == std::string_view::npos || slash > close) bad();
    auto big = line.substr(slash + 1, close - slash - 1);
    if (const auto sp = big.find(' '); sp != std::string_view::npos) big = big.substr(0, sp);
    const auto bb = parse_money(big);
    const auto sb = parse_money(line.substr(open + 1, slash - open - 1));
    if (!bb || !sb || *bb <= 0) bad();
    record_.blind = *bb;
    const auto dash = line.find(" - ", close);
    if (dash == std::string_view::npos) bad();
    record_.timestamp = std::string(trim(line.substr(dash + 3)));
    if (record_.timestamp.empty()) bad();
  }

  void parse_seat(std::string_view line, std::size_t idx) {
    const auto colon = line.find(": ");
    const auto paren = line.rfind(" ($");
    if (colon == std::string_view::npos || paren == std::string_view::npos || paren <= colon) {
      fail(ParseErrc::MalformedLine, idx, "bad seat line");
    }
    if (line.find("is sitting out", paren) != std::string_view::npos) return;
    SeatRecord seat;
    try {
      seat.seat = std::stoi(std::string(line.substr(5, colon - 5)));
    } catch (const std::exception&) {
      fail(ParseErrc::MalformedLine, idx, "bad seat number");
    }
    seat.player = std::string(line.substr(colon + 2, paren - colon - 2));
    auto chips = line.substr(paren + 2);
    chips = chips.substr(0, chips.find(' '));
    seat.stack = money_or_fail(chips, idx);
    if (seat.player.empty() || record_.seat_of(seat.player)) {
      fail(ParseErrc::MalformedLine, idx, "duplicate or empty player");
    }
    record_.seats.push_back(std::move(seat));
  }

  void open_street(Street s, std::vector<cards::Card> board, std::size_t idx) {
    const std::size_t expected = s == Street::Preflop ? 0 : static_cast<std::size_t>(s) + 2;
    if (board.size() != expected) fail(ParseErrc::MalformedLine, idx, "wrong board size");
    if (!record_.streets.empty()) {
      const auto& prev = record_.streets.back();
      if (static_cast<int>(s) != static_cast<int>(prev.name) + 1 ||
          !std::equal(prev.board.begin(), prev.board.end(), board.begin())) {
        fail(ParseErrc::MalformedLine, idx, "street out of order");
      }
    } else if (s != Street::Preflop) {
      fail(ParseErrc::MalformedLine, idx, "street out of order");
    }
    record_.streets.push_back(StreetRecord{s, std::move(board), {}});
    committed_.clear();
    highest_ = 0;
  }

  void parse_marker(std::string_view line, std::size_t idx) {
    try {
      if (starts_with(line, "*** HOLE CARDS ***")) {
        if (record_.streets.empty()) open_street(Street::Preflop, {}, idx);
      } else if (starts_with(line, "*** FLOP ***")) {
        open_street(Street::Flop, bracket_cards(line), idx);
      } else if (starts_with(line, "*** TURN ***")) {
        open_street(Street::Turn, bracket_cards(line), idx);
      } else if (starts_with(line, "*** RIVER ***")) {
        open_street(Street::River, bracket_cards(line), idx);
      } else if (starts_with(line, "*** SHOW DOWN ***")) {
        showdown_ = true;
      }
    } catch (const cards::CardError& e) {
      fail(ParseErrc::MalformedLine, idx, e.what());
    }
  }

  void parse_uncalled(std::string_view line, std::size_t idx) {
    const auto close = line.find(')');
    const auto to = line.find(" returned to ");
    if (close == std::string_view::npos || to == std::string_view::npos) {
      fail(ParseErrc::MalformedLine, idx, "bad uncalled bet line");
    }
    const std::string name(line.substr(to + 13));
    if (!record_.seat_of(name)) fail(ParseErrc::MalformedLine, idx, "uncalled bet to unseated player");
    returned_[name] += money_or_fail(line.substr(14, close - 14), idx);
  }

  const std::string* match_player(std::string_view line, std::string_view sep) const {
    const std::string* best = nullptr;
    for (const auto& s : record_.seats) {
      if (line.size() > s.player.size() + sep.size() && starts_with(line, s.player) &&
          line.substr(s.player.size(), sep.size()) == sep) {
        if (!best || s.player.size() > best->size()) best = &s.player;
      }
    }
    return best;
  }

  void add_action(const std::string& player, ActionKind kind, Cents amount, std::size_t idx) {
    if (record_.streets.empty()) {
      if (kind != ActionKind::PostBlind) fail(ParseErrc::InvalidAction, idx, "action before hole cards");
      open_street(Street::Preflop, {}, idx);
    }
    if (showdown_) fail(ParseErrc::InvalidAction, idx, "betting after showdown");
    Cents& mine = committed_[player];
    const Cents after = mine + amount;
    switch (kind) {
      case ActionKind::PostBlind:
      case ActionKind::Fold:
        break;
      case ActionKind::Check:
        if (mine != highest_) fail(ParseErrc::InvalidAction, idx, "check facing a bet");
        break;
      case ActionKind::Call:
        if (amount <= 0 || after > highest_) fail(ParseErrc::InvalidAction, idx, "call does not match the bet");
        break;
      case ActionKind::Bet:
        if (amount <= 0 || highest_ != 0) fail(ParseErrc::InvalidAction, idx, "bet into an open bet");
        break;
      case ActionKind::Raise:
        if (after <= highest_) fail(ParseErrc::InvalidAction, idx, "raise does not exceed the bet");
        break;
    }
    mine = after;
    highest_ = std::max(highest_, after);
    record_.streets.back().actions.push_back(ActionRecord{player, kind, amount});
  }

  void parse_action(const std::string& player, std::string_view verb, std::size_t idx) {
    verb = strip_all_in(verb);
    if (starts_with(verb, "posts ")) {
      const auto dollar = verb.rfind('$');
      if (dollar == std::string_view::npos ||
          !(starts_with(verb, "posts small blind") || starts_with(verb, "posts big blind") ||
            starts_with(verb, "posts small & big blinds"))) {
        fail(ParseErrc::UnknownActionVerb, idx, "unknown post \"" + std::string(verb) + "\"");
      }
      add_action(player, ActionKind::PostBlind, money_or_fail(verb.substr(dollar), idx), idx);
    } else if (verb == "folds" || starts_with(verb, "folds [")) {
      add_action(player, ActionKind::Fold, 0, idx);
    } else if (verb == "checks") {
      add_action(player, ActionKind::Check, 0, idx);
    } else if (starts_with(verb, "calls ")) {
      add_action(player, ActionKind::Call, money_or_fail(verb.substr(6), idx), idx);
    } else if (starts_with(verb, "bets ")) {
      add_action(player, ActionKind::Bet, money_or_fail(verb.substr(5), idx), idx);
    } else if (starts_with(verb, "raises ")) {
      const auto to = verb.find(" to ");
      if (to == std::string_view::npos) fail(ParseErrc::MalformedLine, idx, "raise without target");
      const Cents target = money_or_fail(verb.substr(to + 4), idx);
      if (record_.streets.empty()) fail(ParseErrc::InvalidAction, idx, "action before hole cards");
      add_action(player, ActionKind::Raise, target - committed_[player], idx);
    } else if (starts_with(verb, "shows [")) {
      std::vector<cards::Card> hole;
      try {
        hole = bracket_cards(verb.substr(0, verb.find(']') + 1));
      } catch (const cards::CardError& e) {
        fail(ParseErrc::MalformedLine, idx, e.what());
      }
      if (hole.size() != 2) fail(ParseErrc::MalformedLine, idx, "reveal needs two cards");
      if (record_.reveal_of(player)) fail(ParseErrc::MalformedLine, idx, "duplicate reveal");
      record_.showdown.push_back(Reveal{player, {hole[0], hole[1]}});
    } else if (std::any_of(std::begin(kStatusPhrases), std::end(kStatusPhrases),
                           [&](std::string_view p) { return starts_with(verb, p); })) {
      // status notices carry no chips
    } else {
      fail(ParseErrc::UnknownActionVerb, idx, "unknown action \"" + std::string(verb) + "\"");
    }
  }

  void parse_totals(std::string_view line, std::size_t idx) {
    auto pot = line.substr(10);
    pot = pot.substr(0, pot.find(' '));
    total_pot_ = money_or_fail(pot, idx);
    const auto rake = line.find("Rake ");
    if (rake == std::string_view::npos) fail(ParseErrc::MalformedLine, idx, "missing rake");
    auto r = line.substr(rake + 5);
    r = r.substr(0, r.find(' '));
    record_.rake = money_or_fail(r, idx);
  }

  void finish(std::size_t last) {
    Cents returned_total = 0;
    for (const auto& [name, v] : returned_) returned_total += v;
    record_.pot = total_pot_ + returned_total;

    Cents contributed = 0;
    for (const auto& st : record_.streets)
      for (const auto& a : st.actions) contributed += a.amount;
    if (contributed != record_.pot) {
      fail(ParseErrc::ChipImbalance, last,
           "contributions " + std::to_string(contributed) + " != pot " + std::to_string(record_.pot));
    }
    Cents won_total = 0;
    for (auto& seat : record_.seats) {
      seat.won = collected_[seat.player] + returned_[seat.player];
      won_total += seat.won;
    }
    if (won_total != record_.pot - record_.rake) {
      fail(ParseErrc::ChipImbalance, last,
           "winnings " + std::to_string(won_total) + " != pot - rake " +
               std::to_string(record_.pot - record_.rake));
    }
    if (const auto msg = check_invariants(record_)) fail(ParseErrc::MalformedLine, last, *msg);
  }

  std::vector<std::string_view> lines_;
  int first_line_;
  HandRecord record_;
  std::map<std::string, Cents> committed_;
  std::map<std::string, Cents> returned_;
  std::map<std::string, Cents> collected_;
  Cents highest_ = 0;
  Cents total_pot_ = 0;
  bool showdown_ = false;
};

std::vector<ParseResult> parse_blocks_parallel(const std::vector<TextBlock>& blocks) {
  std::vector<ParseResult> results(blocks.size());
  const auto n = static_cast<std::int64_t>(blocks.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < n; ++i) {
    results[i] = parse_hand(blocks[i].text, blocks[i].first_line);
  }
  return results;
}

StreamResult merge(std::vector<ParseResult> results) {
  StreamResult out;
  out.report.attempted = results.size();
  for (auto& r : results) {
    if (auto* rec = std::get_if<HandRecord>(&r)) {
      out.hands.push_back(std::move(*rec));
    } else {
      const auto& e = std::get<ParseError>(r);
      out.report.failures.push_back(FailureEntry{e.line, e.code, e.message});
    }
  }
  out.report.parsed = out.hands.size();
  return out;
}

}  // namespace

ParseResult parse_hand(std::string_view text, int first_line) {
  return HandParser(text, first_line).run();
}

std::vector<TextBlock> split_blocks(std::istream& in) {
  std::vector<TextBlock> blocks;
  std::string line;
  int line_no = 0;
  TextBlock current;
  bool open = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      if (open) blocks.push_back(std::move(current));
      current = TextBlock{};
      open = false;
      continue;
    }
    if (!open) {
      current.first_line = line_no;
      open = true;
    }
    current.text += line;
    current.text += '\n';
  }
  if (open) blocks.push_back(std::move(current));
  if (in.bad()) throw std::runtime_error("read failure on hand-history input");
  return blocks;
}

StreamResult parse_stream(std::istream& in) {
  return merge(parse_blocks_parallel(split_blocks(in)));
}

StreamResult parse_stream_serial(std::istream& in) {
  const auto blocks = split_blocks(in);
  std::vector<ParseResult> results;
  results.reserve(blocks.size());
  for (const auto& b : blocks) results.push_back(parse_hand(b.text, b.first_line));
  return merge(std::move(results));
}

std::optional<std::string> check_invariants(const HandRecord& r) {
  Cents contributed = 0;
  for (std::size_t i = 0; i < r.streets.size(); ++i) {
    const auto& st = r.streets[i];
    if (static_cast<std::size_t>(st.name) != i) return "streets out of order";
    const std::size_t expected = i == 0 ? 0 : i + 2;
    if (st.board.size() != expected) return "board has wrong size";
    if (i > 0 && !std::equal(r.streets[i - 1].board.begin(), r.streets[i - 1].board.end(),
                             st.board.begin())) {
      return "board is not cumulative";
    }
    for (const auto& a : st.actions) {
      if (a.amount < 0) return "negative amount";
      if ((a.kind == ActionKind::Fold || a.kind == ActionKind::Check) && a.amount != 0) {
        return "fold or check with chips";
      }
      if (!r.seat_of(a.player)) return "action by unseated player";
      contributed += a.amount;
    }
  }
  if (contributed != r.pot) return "contributions do not match pot";
  Cents won = 0;
  for (const auto& s : r.seats) won += s.won;
  if (r.rake < 0 || won != r.pot - r.rake) return "winnings do not match pot minus rake";

  std::uint64_t seen = 0;
  auto mark = [&seen](cards::Card c) {
    const std::uint64_t bit = std::uint64_t{1} << c.index();
    const bool dup = seen & bit;
    seen |= bit;
    return dup;
  };
  if (!r.streets.empty())
    for (const auto c : r.streets.back().board)
      if (mark(c)) return "duplicate card";
  for (const auto& rev : r.showdown) {
    if (!r.seat_of(rev.player)) return "reveal by unseated player";
    for (const auto c : rev.cards)
      if (mark(c)) return "duplicate card";
  }
  return std::nullopt;
}

}  // namespace pidpoker::hh
