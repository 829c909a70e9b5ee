#ifndef BLIFT_INGEST_H_
#define BLIFT_INGEST_H_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "blift/errors.h"

namespace blift {

enum class Platform { kReddit, kYoutube };
enum class MediaKind { kImage, kVideo };
enum class AuthorKind { kHuman, kBot, kDeleted };

std::string_view ToString(Platform platform);
std::string_view ToString(MediaKind kind);
std::string_view ToString(AuthorKind kind);
std::optional<Platform> ParsePlatform(std::string_view name);
std::optional<MediaKind> ParseMediaKind(std::string_view name);
std::optional<AuthorKind> ParseAuthorKind(std::string_view name);

inline constexpr std::size_t kReplaySamples = 100;
// Comments kept per post after filtering ("top-5").
inline constexpr std::size_t kMaxCommentsPerPost = 5;

struct CommentRecord {
  std::string id;
  AuthorKind author_kind = AuthorKind::kHuman;
  std::string text;
  std::int64_t score = 0;
  std::size_t word_count = 0;  // derived from text

  bool operator==(const CommentRecord&) const = default;
};

CommentRecord MakeComment(std::string id, AuthorKind author_kind,
                          std::string text, std::int64_t score);

// Score descending, id ascending.
bool CommentRanksBefore(const CommentRecord& a, const CommentRecord& b);
void SortComments(std::vector<CommentRecord>* comments);

struct MediaPost {
  std::string id;
  Platform platform = Platform::kYoutube;
  MediaKind media_kind = MediaKind::kImage;
  std::string title;
  std::string channel_or_subreddit;
  std::int64_t posted_at = 0;  // UTC seconds
  std::optional<double> duration_s;  // videos only
  std::optional<std::uint64_t> views;
  std::optional<std::uint64_t> likes;
  std::optional<std::uint64_t> upvotes;
  std::optional<double> upvote_ratio;
  bool nsfw_flag = false;
  bool comments_disabled = false;
  std::vector<std::string> category_tags;
  std::string language;
  std::optional<std::string> asr_text;
  std::uint64_t media_hash = 0;
  std::vector<CommentRecord> comments;
  // Audience replay curve, kReplaySamples values in [0, 1].
  std::optional<std::vector<double>> replay;

  bool operator==(const MediaPost&) const = default;
};

// Throws ValidationError naming the first violated field or invariant.
// Uniqueness of ids is a dump-level property and is not checked here.
void ValidateMediaPost(const MediaPost& post);

// Parses one dump line. `platform` is used when the line has no "platform"
// key; a conflicting key is a validation error. Comments come back sorted.
MediaPost ParseMediaPost(std::string_view line, Platform platform);

// Canonical single-line JSON with a fixed key order and no trailing newline.
std::string SerializeMediaPost(const MediaPost& post);

// Streams a line-delimited media dump. Bad lines are recorded and skipped;
// only a failing stream throws (IoError carrying the line number).
class MediaDumpReader {
 public:
  MediaDumpReader(std::istream& in, Platform platform);

  std::optional<MediaPost> Next();

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
  std::size_t lines_read() const { return line_; }
  std::size_t yielded() const { return yielded_; }
  std::size_t skipped() const { return diagnostics_.size(); }

 private:
  std::istream& in_;
  Platform platform_;
  std::size_t line_ = 0;
  std::size_t yielded_ = 0;
  std::unordered_set<std::string> seen_ids_;
  std::vector<Diagnostic> diagnostics_;
};

struct MediaDump {
  std::vector<MediaPost> posts;
  std::vector<Diagnostic> diagnostics;
  std::size_t lines = 0;
};

// Reads the whole dump, parsing lines on `workers` threads. The result is
// identical to draining a MediaDumpReader for any worker count.
MediaDump ReadMediaDump(std::istream& in, Platform platform, int workers = 1);

struct SceneAnnotation {
  std::string post_id;
  int scene_index = 0;  // 1-based
  std::string caption;
  std::vector<std::string> fg_colors;
  std::vector<std::string> bg_colors;
  std::string tone;
  std::vector<std::string> tags;

  bool operator==(const SceneAnnotation&) const = default;
};

std::string SerializeSceneAnnotation(const SceneAnnotation& annotation);

struct AnnotationSet {
  // Scenes sorted by index and contiguous from 1.
  std::map<std::string, std::vector<SceneAnnotation>> by_post;
  std::vector<Diagnostic> diagnostics;
};

AnnotationSet ParseAnnotationSidecar(std::istream& in);

struct FrameDescriptor {
  double timestamp_s = 0;
  std::vector<double> descriptor;  // unit L2 norm
};

struct FrameDescriptorTrack {
  std::string post_id;
  std::vector<FrameDescriptor> entries;  // strictly increasing timestamps
};

struct DescriptorSet {
  std::size_t dim = 0;
  std::map<std::string, FrameDescriptorTrack> tracks;
  std::vector<Diagnostic> diagnostics;
  std::size_t renormalized = 0;
};

// First nonempty line must be the header {"dim": d}. Vectors whose norm is
// off by more than 1e-6 are rescaled and counted; a track whose timestamps
// are not strictly increasing is dropped whole.
DescriptorSet ParseDescriptorTracks(std::istream& in);

}  // namespace blift

#endif  // BLIFT_INGEST_H_
