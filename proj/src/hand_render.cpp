#include <algorithm>
#include <map>
#include <sstream>

#include "money.hpp"
#include "pidpoker/handparse.hpp"

namespace pidpoker::hh {

namespace {

std::string bracket(std::span<const cards::Card> cs) {
  return "[" + cards::format_cards(cs) + "]";
}

}  // namespace

std::string render_hand(const HandRecord& r, std::string_view table_name) {
  Cents small_blind = r.blind / 2;
  if (!r.streets.empty()) {
    for (const auto& a : r.streets.front().actions) {
      if (a.kind == ActionKind::PostBlind && a.amount < r.blind) {
        small_blind = a.amount;
        break;
      }
    }
  }
  std::ostringstream out;
  out << "PokerStars Hand #" << r.hand_id << ": Hold'em No Limit ("
      << format_money(small_blind) << '/' << format_money(r.blind) << " USD) - "
      << r.timestamp << '\n';
  out << "Table '" << table_name << "' " << r.seats.size() << "-max Seat #"
      << (r.seats.empty() ? 1 : r.seats.front().seat) << " is the button\n";
  for (const auto& s : r.seats) {
    out << "Seat " << s.seat << ": " << s.player << " (" << format_money(s.stack)
        << " in chips)\n";
  }

  // The largest contributor gets back whatever nobody matched.
  std::map<std::string, Cents> totals;
  for (const auto& s : r.seats) totals[s.player] = r.contributed(s.player);
  std::string top_player;
  Cents top = -1, second = 0;
  for (const auto& s : r.seats) {
    const Cents c = totals[s.player];
    if (c > top) {
      second = std::max(second, top);
      top = c;
      top_player = s.player;
    } else {
      second = std::max(second, c);
    }
  }
  const Cents uncalled = top > second ? top - second : 0;

  bool hole_marker = false;
  for (const auto& st : r.streets) {
    if (st.name == Street::Flop) {
      out << "*** FLOP *** " << bracket(st.board) << '\n';
    } else if (st.name != Street::Preflop) {
      const auto n = st.board.size();
      out << "*** " << (st.name == Street::Turn ? "TURN" : "RIVER") << " *** "
          << bracket(std::span(st.board).first(n - 1)) << ' '
          << bracket(std::span(st.board).last(1)) << '\n';
    }
    std::map<std::string, Cents> committed;
    Cents highest = 0;
    bool seen_big = false;
    for (const auto& a : st.actions) {
      if (a.kind != ActionKind::PostBlind && !hole_marker) {
        out << "*** HOLE CARDS ***\n";
        hole_marker = true;
      }
      Cents& mine = committed[a.player];
      const bool all_in = a.amount > 0 && a.amount == r.seat_of(a.player)->stack - [&] {
        Cents before = 0;
        for (const auto& prev : r.streets) {
          if (&prev == &st) break;
          for (const auto& pa : prev.actions)
            if (pa.player == a.player) before += pa.amount;
        }
        return before + mine;
      }();
      out << a.player << ": ";
      switch (a.kind) {
        case ActionKind::PostBlind:
          if (a.amount >= r.blind && !seen_big) {
            out << "posts big blind " << format_money(a.amount);
            seen_big = true;
          } else {
            out << "posts small blind " << format_money(a.amount);
          }
          break;
        case ActionKind::Fold: out << "folds"; break;
        case ActionKind::Check: out << "checks"; break;
        case ActionKind::Call: out << "calls " << format_money(a.amount); break;
        case ActionKind::Bet: out << "bets " << format_money(a.amount); break;
        case ActionKind::Raise:
          out << "raises " << format_money(mine + a.amount - highest) << " to "
              << format_money(mine + a.amount);
          break;
      }
      if (all_in) out << " and is all-in";
      out << '\n';
      mine += a.amount;
      highest = std::max(highest, mine);
    }
  }
  if (!hole_marker) out << "*** HOLE CARDS ***\n";
  if (uncalled > 0) {
    out << "Uncalled bet (" << format_money(uncalled) << ") returned to " << top_player << '\n';
  }

  std::size_t folded = 0;
  for (const auto& st : r.streets)
    for (const auto& a : st.actions) folded += a.kind == ActionKind::Fold;
  if (!r.showdown.empty() && folded + 1 < r.seats.size()) out << "*** SHOW DOWN ***\n";
  for (const auto& rev : r.showdown) {
    out << rev.player << ": shows " << bracket(rev.cards) << '\n';
  }
  for (const auto& s : r.seats) {
    const Cents collected = s.won - (s.player == top_player ? uncalled : 0);
    if (collected > 0) {
      out << s.player << " collected " << format_money(collected) << " from pot\n";
    }
  }
  out << "*** SUMMARY ***\n";
  out << "Total pot " << format_money(r.pot - uncalled) << " | Rake " << format_money(r.rake)
      << '\n';
  if (!r.streets.empty() && !r.streets.back().board.empty()) {
    out << "Board " << bracket(r.streets.back().board) << '\n';
  }
  return out.str();
}

}  // namespace pidpoker::hh
