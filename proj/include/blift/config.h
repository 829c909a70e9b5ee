#ifndef BLIFT_CONFIG_H_
#define BLIFT_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace blift {

// Flat `key = value` configuration. Blank lines and lines starting with '#'
// are ignored; a later assignment to the same key wins. Typed getters throw
// ConfigError naming the key when a value does not parse.
class KeyValueConfig {
 public:
  static KeyValueConfig Parse(std::istream& in, std::string_view source = "");
  static KeyValueConfig ParseFile(const std::filesystem::path& path);

  void Set(std::string key, std::string value);
  bool Has(std::string_view key) const;
  std::optional<std::string> Get(std::string_view key) const;

  std::string GetString(std::string_view key, std::string fallback) const;
  std::int64_t GetInt(std::string_view key, std::int64_t fallback) const;
  double GetDouble(std::string_view key, double fallback) const;
  bool GetBool(std::string_view key, bool fallback) const;
  // Comma-separated, whitespace-trimmed, empty items dropped.
  std::vector<std::string> GetList(std::string_view key) const;

  const std::map<std::string, std::string, std::less<>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

// Accepts integer epoch seconds or an ISO-8601 UTC date/time such as
// "2018-01-01", "2015-02-01T00:00Z" or "2019-03-01T12:30:05Z".
std::int64_t ParseUtcTimestamp(std::string_view text);
std::string FormatUtcTimestamp(std::int64_t seconds);
std::int64_t UtcSeconds(int year, unsigned month, unsigned day);

std::string_view Trim(std::string_view s);

}  // namespace blift

#endif  // BLIFT_CONFIG_H_
