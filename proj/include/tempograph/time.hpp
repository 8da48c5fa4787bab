// Copyright 2026 The tempograph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace tempograph {

/// UTC instant with microsecond resolution.
using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

inline double to_seconds(std::chrono::microseconds d) {
  return static_cast<double>(d.count()) / 1e6;
}

inline std::chrono::microseconds from_seconds(double s) {
  return std::chrono::microseconds(static_cast<std::int64_t>(s * 1e6 + (s >= 0 ? 0.5 : -0.5)));
}

/// Timestamp at `s` seconds after the Unix epoch. Handy for fixtures.
inline Timestamp at_seconds(double s) { return Timestamp(from_seconds(s)); }

namespace detail {

inline bool read_digits(std::string_view s, std::size_t& pos, std::size_t count, int& out) {
  if (pos + count > s.size()) return false;
  int v = 0;
  for (std::size_t i = 0; i < count; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  pos += count;
  out = v;
  return true;
}

}  // namespace detail

/// Parses RFC-3339 / ISO-8601 date-times such as
/// `2011-10-01T00:38:44.546+02:00`, `2020-01-01T00:00:00Z` or `...+0200`.
/// A missing offset is read as UTC. Fractions beyond microseconds are truncated.
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
  using namespace std::chrono;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);

  std::size_t pos = 0;
  int y, mo, d, h = 0, mi = 0, sec = 0;
  if (!detail::read_digits(s, pos, 4, y)) return std::nullopt;
  if (pos >= s.size() || s[pos++] != '-') return std::nullopt;
  if (!detail::read_digits(s, pos, 2, mo)) return std::nullopt;
  if (pos >= s.size() || s[pos++] != '-') return std::nullopt;
  if (!detail::read_digits(s, pos, 2, d)) return std::nullopt;

  std::int64_t micros = 0;
  if (pos < s.size() && (s[pos] == 'T' || s[pos] == 't' || s[pos] == ' ')) {
    ++pos;
    if (!detail::read_digits(s, pos, 2, h)) return std::nullopt;
    if (pos >= s.size() || s[pos++] != ':') return std::nullopt;
    if (!detail::read_digits(s, pos, 2, mi)) return std::nullopt;
    if (pos < s.size() && s[pos] == ':') {
      ++pos;
      if (!detail::read_digits(s, pos, 2, sec)) return std::nullopt;
    }
    if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
      ++pos;
      int ndigits = 0;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
        if (ndigits < 6) micros = micros * 10 + (s[pos] - '0');
        ++ndigits;
        ++pos;
      }
      if (ndigits == 0) return std::nullopt;
      for (int i = ndigits; i < 6; ++i) micros *= 10;
    }
  }

  int offset_minutes = 0;
  if (pos < s.size()) {
    char c = s[pos];
    if (c == 'Z' || c == 'z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      ++pos;
      int oh = 0, om = 0;
      if (!detail::read_digits(s, pos, 2, oh)) return std::nullopt;
      if (pos < s.size() && s[pos] == ':') ++pos;
      if (pos < s.size() && !detail::read_digits(s, pos, 2, om)) return std::nullopt;
      offset_minutes = (c == '+' ? 1 : -1) * (oh * 60 + om);
    } else {
      return std::nullopt;
    }
  }
  if (pos != s.size()) return std::nullopt;

  if (mo < 1 || mo > 12 || h > 23 || mi > 59 || sec > 60) return std::nullopt;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;

  auto tp = sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
  return Timestamp(duration_cast<microseconds>(tp.time_since_epoch()) + microseconds{micros} -
                   minutes{offset_minutes});
}

/// Canonical UTC rendering: `YYYY-MM-DDTHH:MM:SS[.fff|.ffffff]Z`.
/// Only as many fraction digits as needed (0, 3 or 6) are emitted, so
/// parse_timestamp(format_timestamp(t)) == t.
inline std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  auto day_point = floor<days>(t);
  year_month_day ymd{day_point};
  auto tod = t - day_point;
  auto h = duration_cast<hours>(tod);
  tod -= h;
  auto mi = duration_cast<minutes>(tod);
  tod -= mi;
  auto s = duration_cast<seconds>(tod);
  tod -= s;
  auto us = tod.count();

  char buf[48];
  int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                        static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                        static_cast<int>(h.count()), static_cast<int>(mi.count()),
                        static_cast<int>(s.count()));
  std::string out(buf, static_cast<std::size_t>(n));
  if (us != 0) {
    if (us % 1000 == 0) {
      std::snprintf(buf, sizeof buf, ".%03lld", static_cast<long long>(us / 1000));
    } else {
      std::snprintf(buf, sizeof buf, ".%06lld", static_cast<long long>(us));
    }
    out += buf;
  }
  out += 'Z';
  return out;
}

}  // namespace tempograph
