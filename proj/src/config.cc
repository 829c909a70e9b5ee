#include "blift/config.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "blift/errors.h"

namespace blift {
namespace {

// Days since 1970-01-01 in the proleptic Gregorian calendar.
std::int64_t DaysFromCivil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void CivilFromDays(std::int64_t z, std::int64_t* y, unsigned* m, unsigned* d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  *d = doy - (153 * mp + 2) / 5 + 1;
  *m = mp < 10 ? mp + 3 : mp - 9;
  *y = static_cast<std::int64_t>(yoe) + era * 400 + (*m <= 2);
}

bool ParseFixed(std::string_view s, std::size_t pos, std::size_t len,
                unsigned* out) {
  if (pos + len > s.size()) return false;
  unsigned v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + static_cast<unsigned>(s[i] - '0');
  }
  *out = v;
  return true;
}

template <typename T>
bool ParseNumber(std::string_view s, T* out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, *out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::string_view Trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

KeyValueConfig KeyValueConfig::Parse(std::istream& in,
                                     std::string_view source) {
  KeyValueConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = Trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    const auto key = Trim(body.substr(0, eq));
    if (key.empty()) {
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) +
                        ": empty key");
    }
    config.Set(std::string(key), std::string(Trim(body.substr(eq + 1))));
  }
  if (in.bad()) throw IoError("cannot read config " + std::string(source));
  return config;
}

KeyValueConfig KeyValueConfig::ParseFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return Parse(in, path.string());
}

void KeyValueConfig::Set(std::string key, std::string value) {
  entries_[std::move(key)] = std::move(value);
}

bool KeyValueConfig::Has(std::string_view key) const {
  return entries_.find(key) != entries_.end();
}

std::optional<std::string> KeyValueConfig::Get(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::GetString(std::string_view key,
                                      std::string fallback) const {
  auto v = Get(key);
  return v ? *v : std::move(fallback);
}

std::int64_t KeyValueConfig::GetInt(std::string_view key,
                                    std::int64_t fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  std::int64_t out;
  if (!ParseNumber(Trim(*v), &out)) {
    throw ConfigError(std::string(key) + ": expected an integer, got '" + *v +
                      "'");
  }
  return out;
}

double KeyValueConfig::GetDouble(std::string_view key, double fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  const auto t = Trim(*v);
  if (t == "inf" || t == "infinity") return HUGE_VAL;
  double out;
  if (!ParseNumber(t, &out)) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + *v +
                      "'");
  }
  return out;
}

bool KeyValueConfig::GetBool(std::string_view key, bool fallback) const {
  auto v = Get(key);
  if (!v) return fallback;
  const auto t = Trim(*v);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(std::string(key) + ": expected a boolean, got '" + *v +
                    "'");
}

std::vector<std::string> KeyValueConfig::GetList(std::string_view key) const {
  std::vector<std::string> out;
  auto v = Get(key);
  if (!v) return out;
  std::string_view rest = *v;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = Trim(rest.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::int64_t UtcSeconds(int year, unsigned month, unsigned day) {
  return DaysFromCivil(year, month, day) * 86400;
}

std::int64_t ParseUtcTimestamp(std::string_view text) {
  const auto s = Trim(text);
  std::int64_t epoch;
  if (ParseNumber(s, &epoch)) return epoch;

  unsigned y, mo, d, h = 0, mi = 0, sec = 0;
  auto bad = [&] {
    return ConfigError("bad UTC timestamp '" + std::string(text) + "'");
  };
  if (s.size() < 10 || !ParseFixed(s, 0, 4, &y) || s[4] != '-' ||
      !ParseFixed(s, 5, 2, &mo) || s[7] != '-' || !ParseFixed(s, 8, 2, &d)) {
    throw bad();
  }
  std::size_t pos = 10;
  if (pos < s.size() && (s[pos] == 'T' || s[pos] == ' ')) {
    if (!ParseFixed(s, pos + 1, 2, &h) || pos + 3 >= s.size() ||
        s[pos + 3] != ':' || !ParseFixed(s, pos + 4, 2, &mi)) {
      throw bad();
    }
    pos += 6;
    if (pos < s.size() && s[pos] == ':') {
      if (!ParseFixed(s, pos + 1, 2, &sec)) throw bad();
      pos += 3;
    }
  }
  if (pos < s.size() && s[pos] == 'Z') ++pos;
  if (pos != s.size()) throw bad();
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || sec > 60) {
    throw bad();
  }
  return UtcSeconds(static_cast<int>(y), mo, d) + h * 3600 + mi * 60 + sec;
}

std::string FormatUtcTimestamp(std::int64_t seconds) {
  std::int64_t days = seconds / 86400;
  std::int64_t rem = seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    --days;
  }
  std::int64_t y;
  unsigned m, d;
  CivilFromDays(days, &y, &m, &d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), m, d,
                static_cast<long long>(rem / 3600),
                static_cast<long long>(rem / 60 % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

}  // namespace blift
