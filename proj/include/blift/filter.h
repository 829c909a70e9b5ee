#ifndef BLIFT_FILTER_H_
#define BLIFT_FILTER_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blift/config.h"
#include "blift/dedup.h"
#include "blift/ingest.h"

namespace blift {


// Lowercase terms matched against whole tokens. A multi-word term matches a
// contiguous run of tokens.
class NsfwVocabulary {
 public:
  NsfwVocabulary() = default;
  explicit NsfwVocabulary(const std::vector<std::string>& terms);

  // One term per line; '#' starts a comment line.
  static NsfwVocabulary Load(std::istream& in);
  static NsfwVocabulary LoadFile(const std::string& path);

  bool Matches(const std::vector<std::string>& tokens) const;
  bool MatchesText(std::string_view text) const;

  std::size_t size() const { return words_.size() + phrases_.size(); }
  bool empty() const { return size() == 0; }

 private:
  std::set<std::string, std::less<>> words_;
  std::vector<std::vector<std::string>> phrases_;
};

struct FilterPolicy {
  Platform platform = Platform::kReddit;
  std::int64_t min_posted_at = 0;
  // Reddit images only.
  std::optional<std::int64_t> pics_overlay_cutoff;
  std::uint64_t min_views = 0;  // YouTube keeps views > min_views
  double max_duration_s = 0;
  std::size_t min_comment_words = 1;
  std::optional<std::size_t> max_comment_words;
  std::size_t min_comments_per_post = 2;
  double dedup_threshold = 1.0;
  NsfwVocabulary nsfw_vocab;
  std::set<std::string> excluded_categories;
  std::optional<std::string> required_language;

  // Platform constants without a vocabulary; Validate() fails until one is
  // supplied.
  static FilterPolicy Defaults(Platform platform);

  // Throws ConfigError.
  void Validate() const;
};

// Starts from Defaults(platform) and applies keys named after the
// FilterPolicy fields. `nsfw_vocab` is a path to a vocabulary file. The
// result is validated.
FilterPolicy LoadFilterPolicy(const KeyValueConfig& config, Platform platform);

struct Decision {
  bool keep = true;
  std::string reason;

  static Decision Keep() { return {}; }
  static Decision Drop(std::string reason) { return {false, std::move(reason)}; }
};

Decision FilterTime(const MediaPost& post, const FilterPolicy& policy);
Decision FilterCategory(const MediaPost& post, const FilterPolicy& policy);
Decision FilterNsfw(const MediaPost& post, const FilterPolicy& policy);
Decision FilterComment(const CommentRecord& comment,
                       const FilterPolicy& policy);
// Expects the post's comments to be the ones surviving comment filtering.
Decision FilterEngagement(const MediaPost& post, const FilterPolicy& policy);

struct StageCount {
  std::string stage;
  std::size_t input_count = 0;
  std::size_t output_count = 0;
  std::size_t comments_in = 0;
  std::size_t comments_out = 0;

  bool operator==(const StageCount&) const = default;
};

struct FilterReport {
  std::vector<StageCount> stages;
  std::size_t images = 0;
  std::size_t videos = 0;
  std::size_t retained_comments = 0;

  nlohmann::ordered_json ToJson() const;
  static FilterReport FromJson(const nlohmann::json& j);
  // Aligned text table, one row per stage plus a totals line.
  std::string ToTable() const;

  bool operator==(const FilterReport&) const = default;
};

// Stage names in execution order.
inline const std::vector<std::string>& CascadeStages() {
  static const std::vector<std::string> kStages = {
      "time",          "category",      "nsfw",      "media_dedup",
      "comment_filter", "comment_dedup", "engagement"};
  return kStages;
}

struct CascadeOptions {
  DedupMode dedup_mode = DedupMode::kIndexed;
  int workers = 1;
};

struct CascadeResult {
  std::vector<MediaPost> retained;  // sorted by post id
  FilterReport report;
};

// Runs time -> category -> nsfw -> media dedup -> comment filters ->
// comment dedup -> engagement, then truncates each survivor to its top
// kMaxCommentsPerPost comments. Output bytes do not depend on the input
// order of posts or on the worker count.
CascadeResult RunCascade(std::vector<MediaPost> posts,
                         const FilterPolicy& policy,
                         const CascadeOptions& options = {});

}  // namespace blift

#endif  // BLIFT_FILTER_H_
