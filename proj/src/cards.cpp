#include <string>

#include "pidpoker/handeval.hpp"

namespace pidpoker::cards {

const char* to_string(CardErrc code) {
  switch (code) {
    case CardErrc::DuplicateCard: return "DuplicateCard";
    case CardErrc::InvalidCommunitySize: return "InvalidCommunitySize";
    case CardErrc::InvalidCard: return "InvalidCard";
    case CardErrc::InvalidTable: return "InvalidTable";
  }
  return "Unknown";
}

CardError::CardError(CardErrc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code) {}

namespace {

constexpr std::string_view kRankChars = "23456789TJQKA";
constexpr std::string_view kSuitChars = "cdhs";

}  // namespace

Card Card::parse(std::string_view text) {
  if (text.size() != 2) {
    throw CardError(CardErrc::InvalidCard, "\"" + std::string(text) + "\"");
  }
  const auto r = kRankChars.find(text[0]);
  const auto s = kSuitChars.find(text[1]);
  if (r == std::string_view::npos || s == std::string_view::npos) {
    throw CardError(CardErrc::InvalidCard, "\"" + std::string(text) + "\"");
  }
  return Card(static_cast<int>(r) + 2, static_cast<Suit>(s));
}

std::string Card::to_string() const {
  return {kRankChars[rank() - 2], kSuitChars[static_cast<int>(suit())]};
}

std::vector<Card> parse_cards(std::string_view text) {
  std::vector<Card> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto start = text.find_first_not_of(' ', pos);
    if (start == std::string_view::npos) break;
    auto end = text.find(' ', start);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(Card::parse(text.substr(start, end - start)));
    pos = end;
  }
  return out;
}

std::string format_cards(std::span<const Card> cards) {
  std::string out;
  for (const Card c : cards) {
    if (!out.empty()) out += ' ';
    out += c.to_string();
  }
  return out;
}

}  // namespace pidpoker::cards
