#include "blift/filter.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "blift/errors.h"
#include "blift/parallel.h"
#include "blift/text.h"

namespace blift {

NsfwVocabulary::NsfwVocabulary(const std::vector<std::string>& terms) {
  for (const auto& term : terms) {
    auto tokens = Tokenize(term);
    if (tokens.empty()) continue;
    if (tokens.size() == 1) {
      words_.insert(std::move(tokens.front()));
    } else {
      phrases_.push_back(std::move(tokens));
    }
  }
  std::sort(phrases_.begin(), phrases_.end());
  phrases_.erase(std::unique(phrases_.begin(), phrases_.end()),
                 phrases_.end());
}

NsfwVocabulary NsfwVocabulary::Load(std::istream& in) {
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    const auto term = Trim(line);
    if (term.empty() || term.front() == '#') continue;
    terms.emplace_back(term);
  }
  if (in.bad()) throw IoError("cannot read NSFW vocabulary");
  return NsfwVocabulary(terms);
}

NsfwVocabulary NsfwVocabulary::LoadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open NSFW vocabulary " + path);
  return Load(in);
}

bool NsfwVocabulary::Matches(const std::vector<std::string>& tokens) const {
  for (const auto& t : tokens) {
    if (words_.count(t)) return true;
  }
  for (const auto& phrase : phrases_) {
    if (std::search(tokens.begin(), tokens.end(), phrase.begin(),
                    phrase.end()) != tokens.end()) {
      return true;
    }
  }
  return false;
}

bool NsfwVocabulary::MatchesText(std::string_view text) const {
  return Matches(Tokenize(text));
}

FilterPolicy FilterPolicy::Defaults(Platform platform) {
  FilterPolicy p;
  p.platform = platform;
  p.min_posted_at = UtcSeconds(2018, 1, 1);
  p.min_comments_per_post = 2;
  if (platform == Platform::kReddit) {
    p.pics_overlay_cutoff = UtcSeconds(2015, 2, 1);
    p.min_views = 0;
    p.max_duration_s = 500.0;
    p.min_comment_words = 3;
    p.dedup_threshold = 0.6;
  } else {
    p.min_views = 10000;
    p.max_duration_s = std::numeric_limits<double>::infinity();
    p.min_comment_words = 4;
    p.max_comment_words = 100;
    p.dedup_threshold = 0.7;
    p.excluded_categories = {"music", "gaming", "sports",
                             "anime", "memes",  "news"};
    p.required_language = "en";
  }
  return p;
}

void FilterPolicy::Validate() const {
  if (!(dedup_threshold > 0.0 && dedup_threshold <= 1.0)) {
    throw ConfigError("dedup_threshold must be in (0, 1]");
  }
  if (min_comment_words < 1) {
    throw ConfigError("min_comment_words must be at least 1");
  }
  if (max_comment_words && *max_comment_words < min_comment_words) {
    throw ConfigError("max_comment_words is below min_comment_words");
  }
  if (!(max_duration_s > 0.0)) {
    throw ConfigError("max_duration_s must be positive");
  }
  if (min_comments_per_post > kMaxCommentsPerPost) {
    throw ConfigError("min_comments_per_post cannot exceed " +
                      std::to_string(kMaxCommentsPerPost));
  }
  if (nsfw_vocab.empty()) throw ConfigError("NSFW vocabulary is empty");
}

FilterPolicy LoadFilterPolicy(const KeyValueConfig& config, Platform platform) {
  if (auto name = config.Get("platform")) {
    auto parsed = ParsePlatform(Trim(*name));
    if (!parsed) throw ConfigError("platform: unknown value '" + *name + "'");
    platform = *parsed;
  }
  FilterPolicy p = FilterPolicy::Defaults(platform);
  auto is_none = [](const std::string& v) {
    const auto t = Trim(v);
    return t.empty() || t == "none";
  };
  auto non_negative = [&](std::string_view key, std::int64_t value) {
    if (value < 0) throw ConfigError(std::string(key) + " must be >= 0");
    return value;
  };

  if (auto v = config.Get("min_posted_at")) {
    p.min_posted_at = ParseUtcTimestamp(*v);
  }
  if (auto v = config.Get("pics_overlay_cutoff")) {
    if (is_none(*v)) {
      p.pics_overlay_cutoff.reset();
    } else {
      p.pics_overlay_cutoff = ParseUtcTimestamp(*v);
    }
  }
  p.min_views = static_cast<std::uint64_t>(non_negative(
      "min_views",
      config.GetInt("min_views", static_cast<std::int64_t>(p.min_views))));
  p.max_duration_s = config.GetDouble("max_duration_s", p.max_duration_s);
  p.min_comment_words = static_cast<std::size_t>(non_negative(
      "min_comment_words",
      config.GetInt("min_comment_words",
                    static_cast<std::int64_t>(p.min_comment_words))));
  if (auto v = config.Get("max_comment_words")) {
    if (is_none(*v)) {
      p.max_comment_words.reset();
    } else {
      p.max_comment_words = static_cast<std::size_t>(
          non_negative("max_comment_words", config.GetInt("max_comment_words", 0)));
    }
  }
  p.min_comments_per_post = static_cast<std::size_t>(non_negative(
      "min_comments_per_post",
      config.GetInt("min_comments_per_post",
                    static_cast<std::int64_t>(p.min_comments_per_post))));
  p.dedup_threshold = config.GetDouble("dedup_threshold", p.dedup_threshold);
  if (config.Has("excluded_categories")) {
    p.excluded_categories.clear();
    for (auto item : config.GetList("excluded_categories")) {
      std::transform(item.begin(), item.end(), item.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      p.excluded_categories.insert(std::move(item));
    }
  }
  if (auto v = config.Get("required_language")) {
    if (is_none(*v)) {
      p.required_language.reset();
    } else {
      p.required_language = std::string(Trim(*v));
    }
  }
  if (auto v = config.Get("nsfw_vocab"); v && !is_none(*v)) {
    p.nsfw_vocab = NsfwVocabulary::LoadFile(std::string(Trim(*v)));
  }
  p.Validate();
  return p;
}

Decision FilterTime(const MediaPost& post, const FilterPolicy& policy) {
  if (post.platform == Platform::kReddit &&
      post.media_kind == MediaKind::kImage && policy.pics_overlay_cutoff &&
      post.posted_at < *policy.pics_overlay_cutoff) {
    return Decision::Drop("pre-overlay-rule");
  }
  if (post.posted_at < policy.min_posted_at) {
    return Decision::Drop("before-min-posted-at");
  }
  return Decision::Keep();
}

Decision FilterCategory(const MediaPost& post, const FilterPolicy& policy) {
  for (const auto& tag : post.category_tags) {
    if (policy.excluded_categories.count(tag)) {
      return Decision::Drop("excluded-category:" + tag);
    }
  }
  if (policy.required_language &&
      post.language != *policy.required_language) {
    return Decision::Drop("language");
  }
  return Decision::Keep();
}

Decision FilterNsfw(const MediaPost& post, const FilterPolicy& policy) {
  if (post.nsfw_flag) return Decision::Drop("nsfw-flag");
  if (policy.nsfw_vocab.MatchesText(post.title)) {
    return Decision::Drop("nsfw-title");
  }
  for (const auto& c : post.comments) {
    if (policy.nsfw_vocab.MatchesText(c.text)) {
      return Decision::Drop("nsfw-comment");
    }
  }
  return Decision::Keep();
}

Decision FilterComment(const CommentRecord& comment,
                       const FilterPolicy& policy) {
  if (comment.author_kind == AuthorKind::kBot) return Decision::Drop("bot");
  if (comment.author_kind == AuthorKind::kDeleted) {
    return Decision::Drop("deleted");
  }
  if (comment.word_count < policy.min_comment_words) {
    return Decision::Drop("too-short");
  }
  if (policy.max_comment_words &&
      comment.word_count > *policy.max_comment_words) {
    return Decision::Drop("too-long");
  }
  return Decision::Keep();
}

Decision FilterEngagement(const MediaPost& post, const FilterPolicy& policy) {
  if (post.comments_disabled) return Decision::Drop("comments-disabled");
  if (post.platform == Platform::kYoutube &&
      post.views.value_or(0) <= policy.min_views) {
    return Decision::Drop("views");
  }
  if (post.media_kind == MediaKind::kVideo &&
      post.duration_s.value_or(0.0) > policy.max_duration_s) {
    return Decision::Drop("duration");
  }
  if (post.comments.size() < policy.min_comments_per_post) {
    return Decision::Drop("too-few-comments");
  }
  return Decision::Keep();
}

nlohmann::ordered_json FilterReport::ToJson() const {
  nlohmann::ordered_json j;
  auto stage_array = nlohmann::ordered_json::array();
  for (const auto& s : stages) {
    nlohmann::ordered_json row;
    row["stage"] = s.stage;
    row["input_count"] = s.input_count;
    row["output_count"] = s.output_count;
    row["comments_in"] = s.comments_in;
    row["comments_out"] = s.comments_out;
    stage_array.push_back(std::move(row));
  }
  j["stages"] = std::move(stage_array);
  j["images"] = images;
  j["videos"] = videos;
  j["retained_comments"] = retained_comments;
  return j;
}

FilterReport FilterReport::FromJson(const nlohmann::json& j) {
  FilterReport r;
  try {
    for (const auto& row : j.at("stages")) {
      StageCount s;
      s.stage = row.at("stage").get<std::string>();
      s.input_count = row.at("input_count").get<std::size_t>();
      s.output_count = row.at("output_count").get<std::size_t>();
      s.comments_in = row.value("comments_in", std::size_t{0});
      s.comments_out = row.value("comments_out", std::size_t{0});
      r.stages.push_back(std::move(s));
    }
    r.images = j.at("images").get<std::size_t>();
    r.videos = j.at("videos").get<std::size_t>();
    r.retained_comments = j.at("retained_comments").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad filter report: ") + e.what());
  }
  return r;
}

std::string FilterReport::ToTable() const {
  std::size_t name_width = 5;
  for (const auto& s : stages) name_width = std::max(name_width, s.stage.size());
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-*s %12s %12s %12s %12s\n",
                static_cast<int>(name_width), "stage", "posts_in", "posts_out",
                "comments_in", "comments_out");
  out << buf;
  for (const auto& s : stages) {
    std::snprintf(buf, sizeof(buf), "%-*s %12zu %12zu %12zu %12zu\n",
                  static_cast<int>(name_width), s.stage.c_str(), s.input_count,
                  s.output_count, s.comments_in, s.comments_out);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "retained: %zu images, %zu videos, %zu comments\n", images,
                videos, retained_comments);
  out << buf;
  return out.str();
}

namespace {

std::size_t CountComments(const std::vector<MediaPost>& posts) {
  std::size_t n = 0;
  for (const auto& p : posts) n += p.comments.size();
  return n;
}

template <typename Pred>
std::vector<MediaPost> KeepIf(std::vector<MediaPost> posts, int workers,
                              Pred&& keep) {
  std::vector<char> flags(posts.size());
  ParallelFor(posts.size(), workers,
              [&](std::size_t i) { flags[i] = keep(posts[i]) ? 1 : 0; });
  std::vector<MediaPost> out;
  out.reserve(posts.size());
  for (std::size_t i = 0; i < posts.size(); ++i) {
    if (flags[i]) out.push_back(std::move(posts[i]));
  }
  return out;
}

}  // namespace

CascadeResult RunCascade(std::vector<MediaPost> posts,
                         const FilterPolicy& policy,
                         const CascadeOptions& options) {
  policy.Validate();
  const int workers = options.workers;
  std::sort(posts.begin(), posts.end(),
            [](const MediaPost& a, const MediaPost& b) { return a.id < b.id; });
  ParallelFor(posts.size(), workers,
              [&](std::size_t i) { SortComments(&posts[i].comments); });

  CascadeResult result;
  auto& stages = result.report.stages;
  auto record = [&](const std::string& name, std::size_t posts_in,
                    std::size_t comments_in) {
    stages.push_back(
        {name, posts_in, posts.size(), comments_in, CountComments(posts)});
  };
  auto post_stage = [&](const std::string& name, auto&& predicate) {
    const std::size_t in = posts.size();
    const std::size_t comments_in = CountComments(posts);
    posts = KeepIf(std::move(posts), workers, [&](const MediaPost& p) {
      return predicate(p, policy).keep;
    });
    record(name, in, comments_in);
  };

  post_stage("time", FilterTime);
  post_stage("category", FilterCategory);
  post_stage("nsfw", FilterNsfw);
  {
    const std::size_t in = posts.size();
    const std::size_t comments_in = CountComments(posts);
    posts = DedupMedia(std::move(posts));
    record("media_dedup", in, comments_in);
  }
  {
    const std::size_t in = posts.size();
    const std::size_t comments_in = CountComments(posts);
    ParallelFor(posts.size(), workers, [&](std::size_t i) {
      std::erase_if(posts[i].comments, [&](const CommentRecord& c) {
        return !FilterComment(c, policy).keep;
      });
    });
    record("comment_filter", in, comments_in);
  }
  {
    const std::size_t in = posts.size();
    const std::size_t comments_in = CountComments(posts);
    ParallelFor(posts.size(), workers, [&](std::size_t i) {
      posts[i].comments = DedupComments(
          posts[i].comments, policy.dedup_threshold, options.dedup_mode);
    });
    record("comment_dedup", in, comments_in);
  }
  post_stage("engagement", FilterEngagement);

  for (auto& p : posts) {
    if (p.comments.size() > kMaxCommentsPerPost) {
      p.comments.resize(kMaxCommentsPerPost);
    }
    if (p.media_kind == MediaKind::kImage) {
      ++result.report.images;
    } else {
      ++result.report.videos;
    }
    result.report.retained_comments += p.comments.size();
  }
  result.retained = std::move(posts);
  return result;
}

}  // namespace blift
