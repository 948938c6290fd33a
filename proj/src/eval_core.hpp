#pragma once

// Rank-mask evaluator shared by score_hand and the equity enumerator.

#include <array>
#include <bit>
#include <cstdint>

#include "pidpoker/handeval.hpp"

namespace pidpoker::cards::detail {

// Bit (rank - 2) set for each rank present.
struct RankState {
  std::array<std::uint16_t, 4> suit_masks{};
  std::array<std::uint8_t, 13> counts{};

  void add(Card c) {
    suit_masks[static_cast<int>(c.suit())] |=
        static_cast<std::uint16_t>(1u << (c.rank() - 2));
    ++counts[c.rank() - 2];
  }
};

inline constexpr std::uint32_t encode(Category cat, int r1, int r2 = 0,
                                      int r3 = 0, int r4 = 0, int r5 = 0) {
  return (static_cast<std::uint32_t>(cat) << 20) |
         (static_cast<std::uint32_t>(r1) << 16) |
         (static_cast<std::uint32_t>(r2) << 12) |
         (static_cast<std::uint32_t>(r3) << 8) |
         (static_cast<std::uint32_t>(r4) << 4) | static_cast<std::uint32_t>(r5);
}

// Highest straight in the mask as its top rank, or 0. The ace also plays low.
inline int straight_high(std::uint16_t mask) {
  const std::uint32_t x = (static_cast<std::uint32_t>(mask) << 1) |
                          ((mask >> 12) & 1u);
  for (int top = 13; top >= 4; --top) {
    const std::uint32_t window = 0x1Fu << (top - 4);
    if ((x & window) == window) return top + 1;
  }
  return 0;
}

// Up to n highest ranks of a mask, most significant first.
inline void top_ranks(std::uint16_t mask, int n, int* out) {
  int k = 0;
  for (int b = 12; b >= 0 && k < n; --b) {
    if (mask & (1u << b)) out[k++] = b + 2;
  }
  for (; k < n; ++k) out[k] = 0;
}

inline std::uint32_t evaluate_state(const RankState& s) {
  for (const std::uint16_t sm : s.suit_masks) {
    if (std::popcount(sm) >= 5) {
      if (const int hi = straight_high(sm)) {
        return encode(Category::StraightFlush, hi);
      }
      int r[5];
      top_ranks(sm, 5, r);
      return encode(Category::Flush, r[0], r[1], r[2], r[3], r[4]);
    }
  }

  int quad = 0, trip1 = 0, trip2 = 0, pair1 = 0, pair2 = 0, pair3 = 0;
  std::uint16_t singles = 0;
  for (int i = 12; i >= 0; --i) {
    const int rank = i + 2;
    switch (s.counts[i]) {
      case 4: quad = rank; break;
      case 3: (trip1 ? trip2 : trip1) = rank; break;
      case 2: (pair1 ? (pair2 ? pair3 : pair2) : pair1) = rank; break;
      case 1: singles |= static_cast<std::uint16_t>(1u << i); break;
      default: break;
    }
  }
  const std::uint16_t all = s.suit_masks[0] | s.suit_masks[1] |
                            s.suit_masks[2] | s.suit_masks[3];

  if (quad) {
    int k[1];
    top_ranks(static_cast<std::uint16_t>(all & ~(1u << (quad - 2))), 1, k);
    return encode(Category::Quads, quad, k[0]);
  }
  if (trip1 && (trip2 || pair1)) {
    const int pair = trip2 > pair1 ? trip2 : pair1;
    return encode(Category::FullHouse, trip1, pair);
  }
  if (const int hi = straight_high(all)) {
    return encode(Category::Straight, hi);
  }
  if (trip1) {
    int k[2];
    top_ranks(singles, 2, k);
    return encode(Category::Trips, trip1, k[0], k[1]);
  }
  if (pair2) {
    std::uint16_t rest = singles;
    if (pair3) rest |= static_cast<std::uint16_t>(1u << (pair3 - 2));
    int k[1];
    top_ranks(rest, 1, k);
    return encode(Category::TwoPair, pair1, pair2, k[0]);
  }
  if (pair1) {
    int k[3];
    top_ranks(singles, 3, k);
    return encode(Category::Pair, pair1, k[0], k[1], k[2]);
  }
  int r[5];
  top_ranks(singles, 5, r);
  return encode(Category::HighCard, r[0], r[1], r[2], r[3], r[4]);
}

}  // namespace pidpoker::cards::detail
