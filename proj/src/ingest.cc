#include "blift/ingest.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <utility>

#include <nlohmann/json.hpp>

#include "blift/parallel.h"
#include "blift/text.h"

namespace blift {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr double kUnitNormTolerance = 1e-6;
constexpr double kReplayMaxTolerance = 1e-9;

[[noreturn]] void Fail(const std::string& message) {
  throw ValidationError(message);
}

const json& Require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) Fail(std::string("missing ") + key);
  return *it;
}

std::string GetString(const json& obj, const char* key) {
  const json& v = Require(obj, key);
  if (!v.is_string()) Fail(std::string(key) + " must be a string");
  return v.get<std::string>();
}

std::optional<std::uint64_t> GetOptionalCount(const json& obj,
                                              const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_unsigned()) {
    Fail(std::string(key) + " must be a nonnegative integer");
  }
  return it->get<std::uint64_t>();
}

std::optional<double> GetOptionalReal(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) Fail(std::string(key) + " must be a number");
  return it->get<double>();
}

bool GetBool(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return false;
  if (!it->is_boolean()) Fail(std::string(key) + " must be a boolean");
  return it->get<bool>();
}

std::vector<std::string> GetStringList(const json& obj, const char* key) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) Fail(std::string(key) + " must be an array");
  for (const auto& v : *it) {
    if (!v.is_string()) Fail(std::string(key) + " must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::uint64_t ParseDigest(const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (!v.is_string()) Fail("media_hash must be a hex string");
  const auto s = v.get<std::string>();
  if (s.empty() || s.size() > 16) Fail("media_hash must be 1-16 hex digits");
  std::uint64_t value = 0;
  for (char c : s) {
    int digit;
    if (c >= '0' && c <= '9') {
      digit = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      digit = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      digit = c - 'A' + 10;
    } else {
      Fail("media_hash must be a hex string");
    }
    value = (value << 4) | static_cast<std::uint64_t>(digit);
  }
  return value;
}

std::string FormatDigest(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(digest));
  return buf;
}

CommentRecord ParseComment(const json& c) {
  if (!c.is_object()) Fail("comment must be an object");
  std::string id = GetString(c, "id");
  if (id.empty()) Fail("comment id is empty");
  AuthorKind kind = AuthorKind::kHuman;
  if (auto it = c.find("author_kind"); it != c.end() && !it->is_null()) {
    if (!it->is_string()) Fail("author_kind must be a string");
    auto parsed = ParseAuthorKind(it->get<std::string>());
    if (!parsed) Fail("unknown author_kind " + it->get<std::string>());
    kind = *parsed;
  }
  std::string text = GetString(c, "text");
  std::int64_t score = 0;
  if (auto it = c.find("score"); it != c.end() && !it->is_null()) {
    if (!it->is_number_integer()) Fail("comment score must be an integer");
    score = it->get<std::int64_t>();
  }
  return MakeComment(std::move(id), kind, std::move(text), score);
}

std::optional<std::string> ReadLine(std::istream& in, std::size_t line_no) {
  std::string line;
  if (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }
  if (in.bad()) throw IoError("stream read failed", line_no);
  return std::nullopt;
}

bool IsBlank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

json ParseObject(std::string_view line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    Fail(std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) Fail("line is not a JSON object");
  return obj;
}

}  // namespace

std::string_view ToString(Platform platform) {
  return platform == Platform::kReddit ? "reddit" : "youtube";
}

std::string_view ToString(MediaKind kind) {
  return kind == MediaKind::kImage ? "image" : "video";
}

std::string_view ToString(AuthorKind kind) {
  switch (kind) {
    case AuthorKind::kHuman:
      return "human";
    case AuthorKind::kBot:
      return "bot";
    case AuthorKind::kDeleted:
      return "deleted";
  }
  return "human";
}

std::optional<Platform> ParsePlatform(std::string_view name) {
  if (name == "reddit") return Platform::kReddit;
  if (name == "youtube") return Platform::kYoutube;
  return std::nullopt;
}

std::optional<MediaKind> ParseMediaKind(std::string_view name) {
  if (name == "image") return MediaKind::kImage;
  if (name == "video") return MediaKind::kVideo;
  return std::nullopt;
}

std::optional<AuthorKind> ParseAuthorKind(std::string_view name) {
  if (name == "human") return AuthorKind::kHuman;
  if (name == "bot") return AuthorKind::kBot;
  if (name == "deleted") return AuthorKind::kDeleted;
  return std::nullopt;
}

CommentRecord MakeComment(std::string id, AuthorKind author_kind,
                          std::string text, std::int64_t score) {
  CommentRecord c;
  c.id = std::move(id);
  c.author_kind = author_kind;
  c.word_count = CountWords(text);
  c.text = std::move(text);
  c.score = score;
  return c;
}

bool CommentRanksBefore(const CommentRecord& a, const CommentRecord& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

void SortComments(std::vector<CommentRecord>* comments) {
  std::stable_sort(comments->begin(), comments->end(), CommentRanksBefore);
}

void ValidateMediaPost(const MediaPost& post) {
  if (post.id.empty()) Fail("id is empty");
  const bool is_video = post.media_kind == MediaKind::kVideo;
  if (is_video && !post.duration_s) Fail("video without duration_s");
  if (!is_video && post.duration_s) Fail("image with duration_s");
  if (post.duration_s && !(*post.duration_s >= 0.0)) {
    Fail("duration_s must be nonnegative");
  }
  if (post.views && post.likes && *post.views < *post.likes) {
    Fail("views < likes");
  }
  if (post.upvote_ratio &&
      !(*post.upvote_ratio >= 0.0 && *post.upvote_ratio <= 1.0)) {
    Fail("upvote_ratio outside [0,1]");
  }
  std::set<std::string_view> comment_ids;
  for (const auto& c : post.comments) {
    if (c.id.empty()) Fail("comment id is empty");
    if (!comment_ids.insert(c.id).second) Fail("duplicate comment id " + c.id);
  }
  if (!std::is_sorted(post.comments.begin(), post.comments.end(),
                      CommentRanksBefore)) {
    Fail("comments not sorted by score");
  }
  if (post.replay) {
    const auto& r = *post.replay;
    if (r.size() != kReplaySamples) {
      Fail("replay must have " + std::to_string(kReplaySamples) + " samples");
    }
    double peak = 0.0;
    for (double v : r) {
      if (!(v >= 0.0 && v <= 1.0)) Fail("replay sample outside [0,1]");
      peak = std::max(peak, v);
    }
    if (peak > 0.0 && std::abs(peak - 1.0) > kReplayMaxTolerance) {
      Fail("replay graph is not peak-normalized");
    }
  }
}

MediaPost ParseMediaPost(std::string_view line, Platform platform) {
  const json obj = ParseObject(line);
  MediaPost post;
  post.id = GetString(obj, "id");
  post.platform = platform;
  if (auto it = obj.find("platform"); it != obj.end() && !it->is_null()) {
    auto parsed = it->is_string() ? ParsePlatform(it->get<std::string>())
                                  : std::nullopt;
    if (!parsed) Fail("unknown platform");
    if (*parsed != platform) Fail("platform does not match dump platform");
  }
  {
    auto kind = ParseMediaKind(GetString(obj, "media_kind"));
    if (!kind) Fail("unknown media_kind");
    post.media_kind = *kind;
  }
  post.title = GetString(obj, "title");
  if (auto it = obj.find("channel_or_subreddit");
      it != obj.end() && !it->is_null()) {
    if (!it->is_string()) Fail("channel_or_subreddit must be a string");
    post.channel_or_subreddit = it->get<std::string>();
  }
  {
    const json& t = Require(obj, "posted_at");
    if (!t.is_number_integer()) Fail("posted_at must be integer seconds");
    post.posted_at = t.get<std::int64_t>();
  }
  post.duration_s = GetOptionalReal(obj, "duration_s");
  post.views = GetOptionalCount(obj, "views");
  post.likes = GetOptionalCount(obj, "likes");
  post.upvotes = GetOptionalCount(obj, "upvotes");
  post.upvote_ratio = GetOptionalReal(obj, "upvote_ratio");
  post.nsfw_flag = GetBool(obj, "nsfw_flag");
  post.comments_disabled = GetBool(obj, "comments_disabled");
  post.category_tags = GetStringList(obj, "category_tags");
  for (auto& tag : post.category_tags) {
    std::transform(tag.begin(), tag.end(), tag.begin(), [](unsigned char c) {
      return static_cast<char>(std::tolower(c));
    });
  }
  if (auto it = obj.find("language"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) Fail("language must be a string");
    post.language = it->get<std::string>();
  }
  if (auto it = obj.find("asr_text"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) Fail("asr_text must be a string");
    post.asr_text = it->get<std::string>();
  }
  post.media_hash = ParseDigest(Require(obj, "media_hash"));
  if (auto it = obj.find("comments"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) Fail("comments must be an array");
    for (const auto& c : *it) post.comments.push_back(ParseComment(c));
  }
  SortComments(&post.comments);
  if (auto it = obj.find("replay"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) Fail("replay must be an array");
    std::vector<double> samples;
    for (const auto& v : *it) {
      if (!v.is_number()) Fail("replay samples must be numbers");
      samples.push_back(v.get<double>());
    }
    post.replay = std::move(samples);
  }
  ValidateMediaPost(post);
  return post;
}

std::string SerializeMediaPost(const MediaPost& post) {
  ordered_json obj;
  obj["id"] = post.id;
  obj["platform"] = ToString(post.platform);
  obj["media_kind"] = ToString(post.media_kind);
  obj["title"] = post.title;
  obj["channel_or_subreddit"] = post.channel_or_subreddit;
  obj["posted_at"] = post.posted_at;
  if (post.duration_s) obj["duration_s"] = *post.duration_s;
  if (post.views) obj["views"] = *post.views;
  if (post.likes) obj["likes"] = *post.likes;
  if (post.upvotes) obj["upvotes"] = *post.upvotes;
  if (post.upvote_ratio) obj["upvote_ratio"] = *post.upvote_ratio;
  obj["nsfw_flag"] = post.nsfw_flag;
  obj["comments_disabled"] = post.comments_disabled;
  obj["category_tags"] = post.category_tags;
  obj["language"] = post.language;
  if (post.asr_text) obj["asr_text"] = *post.asr_text;
  obj["media_hash"] = FormatDigest(post.media_hash);
  ordered_json comments = ordered_json::array();
  for (const auto& c : post.comments) {
    ordered_json jc;
    jc["id"] = c.id;
    jc["author_kind"] = ToString(c.author_kind);
    jc["text"] = c.text;
    jc["score"] = c.score;
    comments.push_back(std::move(jc));
  }
  obj["comments"] = std::move(comments);
  if (post.replay) obj["replay"] = *post.replay;
  return obj.dump();
}

MediaDumpReader::MediaDumpReader(std::istream& in, Platform platform)
    : in_(in), platform_(platform) {}

std::optional<MediaPost> MediaDumpReader::Next() {
  while (true) {
    auto line = ReadLine(in_, line_ + 1);
    if (!line) return std::nullopt;
    ++line_;
    if (IsBlank(*line)) {
      diagnostics_.push_back({line_, "empty line"});
      continue;
    }
    try {
      MediaPost post = ParseMediaPost(*line, platform_);
      if (!seen_ids_.insert(post.id).second) {
        diagnostics_.push_back({line_, "duplicate post id " + post.id});
        continue;
      }
      ++yielded_;
      return post;
    } catch (const ValidationError& e) {
      diagnostics_.push_back({line_, e.what()});
    }
  }
}

MediaDump ReadMediaDump(std::istream& in, Platform platform, int workers) {
  std::vector<std::string> lines;
  while (auto line = ReadLine(in, lines.size() + 1)) {
    lines.push_back(std::move(*line));
  }

  struct Parsed {
    std::optional<MediaPost> post;
    std::string error;
  };
  std::vector<Parsed> parsed(lines.size());
  ParallelFor(lines.size(), workers, [&](std::size_t i) {
    if (IsBlank(lines[i])) {
      parsed[i].error = "empty line";
      return;
    }
    try {
      parsed[i].post = ParseMediaPost(lines[i], platform);
    } catch (const ValidationError& e) {
      parsed[i].error = e.what();
    }
  });

  MediaDump dump;
  dump.lines = lines.size();
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (!parsed[i].post) {
      dump.diagnostics.push_back({i + 1, std::move(parsed[i].error)});
      continue;
    }
    if (!seen.insert(parsed[i].post->id).second) {
      dump.diagnostics.push_back(
          {i + 1, "duplicate post id " + parsed[i].post->id});
      continue;
    }
    dump.posts.push_back(std::move(*parsed[i].post));
  }
  return dump;
}

std::string SerializeSceneAnnotation(const SceneAnnotation& a) {
  ordered_json obj;
  obj["post_id"] = a.post_id;
  obj["scene_index"] = a.scene_index;
  obj["caption"] = a.caption;
  obj["fg_colors"] = a.fg_colors;
  obj["bg_colors"] = a.bg_colors;
  obj["tone"] = a.tone;
  obj["tags"] = a.tags;
  return obj.dump();
}

AnnotationSet ParseAnnotationSidecar(std::istream& in) {
  AnnotationSet result;
  // First line seen per post, for positioning post-level diagnostics.
  std::map<std::string, std::size_t> first_line;
  std::set<std::pair<std::string, int>> seen;
  std::size_t line_no = 0;
  while (auto line = ReadLine(in, line_no + 1)) {
    ++line_no;
    if (IsBlank(*line)) continue;
    try {
      const json obj = ParseObject(*line);
      SceneAnnotation a;
      a.post_id = GetString(obj, "post_id");
      if (a.post_id.empty()) Fail("post_id is empty");
      const json& idx = Require(obj, "scene_index");
      if (!idx.is_number_integer() || idx.get<std::int64_t>() < 1) {
        Fail("scene_index must be a positive integer");
      }
      a.scene_index = idx.get<int>();
      a.caption = GetString(obj, "caption");
      a.fg_colors = GetStringList(obj, "fg_colors");
      a.bg_colors = GetStringList(obj, "bg_colors");
      if (auto it = obj.find("tone"); it != obj.end() && !it->is_null()) {
        if (!it->is_string()) Fail("tone must be a string");
        a.tone = it->get<std::string>();
      }
      a.tags = GetStringList(obj, "tags");
      if (!seen.emplace(a.post_id, a.scene_index).second) {
        Fail("duplicate scene " + std::to_string(a.scene_index) +
             " for post " + a.post_id);
      }
      first_line.emplace(a.post_id, line_no);
      result.by_post[a.post_id].push_back(std::move(a));
    } catch (const ValidationError& e) {
      result.diagnostics.push_back({line_no, e.what()});
    }
  }

  for (auto it = result.by_post.begin(); it != result.by_post.end();) {
    auto& scenes = it->second;
    std::sort(scenes.begin(), scenes.end(),
              [](const SceneAnnotation& a, const SceneAnnotation& b) {
                return a.scene_index < b.scene_index;
              });
    bool contiguous = true;
    for (std::size_t i = 0; i < scenes.size(); ++i) {
      if (scenes[i].scene_index != static_cast<int>(i + 1)) {
        contiguous = false;
        break;
      }
    }
    if (!contiguous) {
      result.diagnostics.push_back(
          {first_line[it->first],
           "scene indices for post " + it->first + " are not contiguous"});
      it = result.by_post.erase(it);
    } else {
      ++it;
    }
  }
  std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return a.line < b.line;
                   });
  return result;
}

DescriptorSet ParseDescriptorTracks(std::istream& in) {
  DescriptorSet result;
  std::size_t line_no = 0;
  bool have_header = false;
  std::set<std::string> rejected;
  std::map<std::string, std::size_t> first_line;

  while (auto line = ReadLine(in, line_no + 1)) {
    ++line_no;
    if (IsBlank(*line)) continue;
    if (!have_header) {
      json header;
      try {
        header = ParseObject(*line);
      } catch (const ValidationError& e) {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": bad descriptor header: " + e.what());
      }
      auto dim = header.find("dim");
      if (dim == header.end() || !dim->is_number_unsigned() ||
          dim->get<std::size_t>() == 0) {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": descriptor header must be {\"dim\": d}");
      }
      result.dim = dim->get<std::size_t>();
      have_header = true;
      continue;
    }
    try {
      const json obj = ParseObject(*line);
      std::string post_id = GetString(obj, "post_id");
      if (post_id.empty()) Fail("post_id is empty");
      const json& t = Require(obj, "t");
      if (!t.is_number()) Fail("t must be a number");
      const json& vec = Require(obj, "vec");
      if (!vec.is_array()) Fail("vec must be an array");
      if (vec.size() != result.dim) {
        Fail("vec has dimension " + std::to_string(vec.size()) +
             ", expected " + std::to_string(result.dim));
      }
      FrameDescriptor frame;
      frame.timestamp_s = t.get<double>();
      if (!std::isfinite(frame.timestamp_s)) Fail("t must be finite");
      double sq = 0.0;
      for (const auto& v : vec) {
        if (!v.is_number()) Fail("vec must hold numbers");
        const double x = v.get<double>();
        frame.descriptor.push_back(x);
        sq += x * x;
      }
      const double norm = std::sqrt(sq);
      if (!(norm > 0.0) || !std::isfinite(norm)) Fail("vec has zero norm");
      if (std::abs(norm - 1.0) > kUnitNormTolerance) {
        for (double& x : frame.descriptor) x /= norm;
        ++result.renormalized;
      }
      if (rejected.count(post_id)) continue;
      auto& track = result.tracks[post_id];
      track.post_id = post_id;
      first_line.emplace(post_id, line_no);
      if (!track.entries.empty() &&
          !(frame.timestamp_s > track.entries.back().timestamp_s)) {
        result.diagnostics.push_back(
            {line_no, "timestamps for post " + post_id +
                          " are not strictly increasing; track rejected"});
        rejected.insert(post_id);
        result.tracks.erase(post_id);
        continue;
      }
      track.entries.push_back(std::move(frame));
    } catch (const ValidationError& e) {
      result.diagnostics.push_back({line_no, e.what()});
    }
  }
  if (!have_header && line_no > 0) {
    throw ValidationError("descriptor file has no {\"dim\": d} header");
  }
  return result;
}

}  // namespace blift
