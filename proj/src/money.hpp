#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace pidpoker::hh {

// "$1,234.5" -> 123450. A leading '$' and thousands separators are optional.
inline std::optional<std::int64_t> parse_money(std::string_view s) {
  if (!s.empty() && s.front() == '$') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  std::int64_t whole = 0;
  std::int64_t frac = 0;
  int frac_digits = -1;
  bool any = false;
  for (const char c : s) {
    if (c == ',' && frac_digits < 0) continue;
    if (c == '.' && frac_digits < 0) {
      frac_digits = 0;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    any = true;
    if (frac_digits < 0) {
      if (whole > 100'000'000'000LL) return std::nullopt;
      whole = whole * 10 + (c - '0');
    } else {
      if (++frac_digits > 2) return std::nullopt;
      frac = frac * 10 + (c - '0');
    }
  }
  if (!any) return std::nullopt;
  if (frac_digits == 1) frac *= 10;
  return whole * 100 + frac;
}

inline std::string format_money(std::int64_t cents) {
  char buf[32];
  if (cents % 100 == 0) {
    std::snprintf(buf, sizeof buf, "$%lld", static_cast<long long>(cents / 100));
  } else {
    std::snprintf(buf, sizeof buf, "$%lld.%02lld", static_cast<long long>(cents / 100),
                  static_cast<long long>(cents % 100));
  }
  return buf;
}

}  // namespace pidpoker::hh
