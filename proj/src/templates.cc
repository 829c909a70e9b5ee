#include "blift/templates.h"

#include <algorithm>
#include <set>

#include "blift/errors.h"
#include "blift/parallel.h"

namespace blift {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string Join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

std::size_t CountOccurrences(std::string_view haystack,
                             std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::string Verbalize(const SceneAnnotation& a, std::string_view subject) {
  if (a.caption.empty()) throw ValidationError("scene caption is empty");
  std::string_view caption = a.caption;
  while (!caption.empty() && caption.back() == '.') caption.remove_suffix(1);

  std::string out = "The ";
  out += subject;
  out += " shows ";
  out += caption;
  out += ".";
  const std::string fg = Join(a.fg_colors, ", ");
  const std::string bg = Join(a.bg_colors, ", ");
  if (!fg.empty() && !bg.empty()) {
    out += " The foreground colors of the " + std::string(subject) + " are " +
           fg + ", and the background colors are " + bg + ".";
  } else if (!fg.empty()) {
    out += " The foreground colors of the " + std::string(subject) + " are " +
           fg + ".";
  } else if (!bg.empty()) {
    out += " The background colors of the " + std::string(subject) + " are " +
           bg + ".";
  }
  if (!a.tone.empty()) {
    out += " The dominant tone of the " + std::string(subject) + " is " +
           a.tone + ".";
  }
  if (!a.tags.empty()) {
    std::vector<std::string> tags = a.tags;
    std::sort(tags.begin(), tags.end());
    out += " This " + std::string(subject) + " is categorized by the tags: " +
           Join(tags, ", ") + ".";
  }
  return out;
}

std::string RecordId(std::string_view id, RecordSource source) {
  return std::string(id) + ":" + std::string(ToString(source));
}

std::string MediaRef(const std::string& user, std::string_view token) {
  return std::string(token) + "@" + std::to_string(user.find(token));
}

}  // namespace

std::string_view ToString(RecordSource source) {
  switch (source) {
    case RecordSource::kBliftVideo:
      return "blift_video";
    case RecordSource::kBliftImage:
      return "blift_image";
    case RecordSource::kAdControl:
      return "ad_control";
    case RecordSource::kSaliconObject:
      return "salicon_object";
    case RecordSource::kSaliconRegion:
      return "salicon_region";
  }
  return "blift_video";
}

std::optional<RecordSource> ParseRecordSource(std::string_view name) {
  for (auto s : {RecordSource::kBliftVideo, RecordSource::kBliftImage,
                 RecordSource::kAdControl, RecordSource::kSaliconObject,
                 RecordSource::kSaliconRegion}) {
    if (ToString(s) == name) return s;
  }
  return std::nullopt;
}

void ValidateRecord(const InstructionRecord& r) {
  if (r.record_id.empty()) throw ValidationError("record_id is empty");
  if (r.system.empty() || r.user.empty() || r.assistant.empty()) {
    throw ValidationError("record " + r.record_id + " has an empty turn");
  }
  const std::size_t tokens = CountOccurrences(r.user, kVideoToken) +
                             CountOccurrences(r.user, kImageToken);
  if (tokens != 1) {
    throw ValidationError("record " + r.record_id +
                          " must hold exactly one media token");
  }
  const bool has_marker =
      r.assistant.find(kBehaviorMarker) != std::string::npos;
  const bool is_blift = r.source == RecordSource::kBliftVideo ||
                        r.source == RecordSource::kBliftImage;
  if (has_marker != is_blift) {
    throw ValidationError("record " + r.record_id +
                          (is_blift ? " lacks" : " must not contain") +
                          " the behavior marker");
  }
}

std::string VerbalizeScene(const SceneAnnotation& annotation) {
  return "Scene " + std::to_string(annotation.scene_index) + ": " +
         Verbalize(annotation, "scene");
}

std::string VerbalizeImage(const SceneAnnotation& annotation) {
  return Verbalize(annotation, "image");
}

std::optional<std::string> LikeLinePercentage(const MediaPost& post) {
  if (post.platform == Platform::kYoutube) {
    if (post.likes && post.views && *post.views > 0) {
      return LikePercentage(*post.likes, *post.views);
    }
    return std::nullopt;
  }
  if (post.upvote_ratio) {
    return FormatFixed(100.0 * *post.upvote_ratio, 1) + "%";
  }
  return std::nullopt;
}

InstructionRecord BuildBliftRecord(
    const MediaPost& post, const std::vector<std::string>& descriptions,
    const std::optional<std::string>& like_pct,
    const std::vector<CommentRecord>& top_comments,
    const std::optional<std::vector<double>>& replay_values,
    bool include_behavior) {
  const bool video = post.media_kind == MediaKind::kVideo;
  const std::string kind(ToString(post.media_kind));
  if (descriptions.empty()) {
    throw ValidationError("post " + post.id + " has no description");
  }
  if (!video && descriptions.size() != 1) {
    throw ValidationError("image post " + post.id +
                          " needs exactly one description");
  }
  const bool with_replay = include_behavior && video && replay_values;
  if (with_replay && replay_values->size() != descriptions.size()) {
    throw ValidationError("replay values do not align with scenes for post " +
                          post.id);
  }
  if (include_behavior && (top_comments.size() < 2 ||
                           top_comments.size() > kMaxCommentsPerPost)) {
    throw ValidationError("post " + post.id + " needs 2-5 comments, has " +
                          std::to_string(top_comments.size()));
  }

  InstructionRecord r;
  r.source = !include_behavior ? RecordSource::kAdControl
             : video           ? RecordSource::kBliftVideo
                               : RecordSource::kBliftImage;
  r.record_id = RecordId(post.id, r.source);
  r.system = std::string(kBehaviorSystemPrompt);

  // User turn.
  std::string& u = r.user;
  if (post.platform == Platform::kYoutube) {
    u = "The " + kind + " advertisement is titled \"" + post.title +
        "\" for the brand " + post.channel_or_subreddit + ".";
  } else {
    u = "The " + kind + " is titled \"" + post.title + "\"";
    if (!post.channel_or_subreddit.empty()) {
      u += " and was posted on r/" + post.channel_or_subreddit;
    }
    u += ".";
  }
  if (video && post.asr_text) {
    u += post.platform == Platform::kYoutube ? " The audio in the ad says \""
                                             : " The audio in the video says \"";
    u += *post.asr_text + "\".";
  }
  u += " Analyze this " + kind + " deeply, then write ";
  u += video ? "scene by scene description of the video"
             : "a description of the image";
  if (include_behavior) {
    u += " and answer the following questions.";
    if (like_pct) {
      u += " What percentage of viewers would like this " + kind +
           ", and what would be the top-5 popular comments on this " + kind +
           "?";
    } else {
      u += " What would be the top-5 popular comments on this " + kind + "?";
    }
    if (with_replay) u += " What would the replay graph values for each scene be?";
  } else {
    u += ".";
  }
  const std::string_view token = video ? kVideoToken : kImageToken;
  u += "\n";
  u += token;
  r.media_ref = MediaRef(u, token);

  // Assistant turn.
  std::string& a = r.assistant;
  a = video ? "The scene-by-scene descriptions are:\n\n"
            : "The description of the image is:\n\n";
  a += Join(descriptions, "\n");
  if (include_behavior) {
    a += "\n\n";
    a += kBehaviorMarker;
    a += "\n\n";
    if (like_pct) {
      a += "The " +
           std::string(post.platform == Platform::kYoutube ? kind : "post") +
           " will be liked by " + *like_pct + "\n";
    }
    for (std::size_t i = 0; i < top_comments.size(); ++i) {
      if (i > 0) a += "\n";
      a += std::to_string(i + 1) + ". \"" + top_comments[i].text + "\"";
    }
    if (with_replay) {
      a += "\n\nThe replay values for each scene would be:";
      for (std::size_t i = 0; i < replay_values->size(); ++i) {
        a += "\nScene " + std::to_string(i + 1) + ": " +
             FormatFixed((*replay_values)[i], 2);
      }
    }
  }

  r.meta["platform"] = ToString(post.platform);
  r.meta["post_id"] = post.id;
  if (include_behavior && like_pct) {
    r.meta["like_pct"] = *like_pct;
  } else {
    r.meta["like_pct"] = nullptr;
  }
  r.meta["n_comments"] = include_behavior ? top_comments.size() : 0;
  r.meta["n_scenes"] = video ? descriptions.size() : 0;
  r.meta["template"] = kTemplateVersion;
  ValidateRecord(r);
  return r;
}

InstructionRecord BuildBliftRecordForPost(
    const MediaPost& post, const std::vector<SceneAnnotation>& annotations,
    const std::vector<Scene>* scenes, bool include_behavior) {
  if (annotations.empty()) {
    throw ValidationError("post " + post.id + " has no scene annotations");
  }
  std::vector<std::string> descriptions;
  std::optional<std::vector<double>> replay;
  if (post.media_kind == MediaKind::kImage) {
    if (annotations.size() != 1) {
      throw ValidationError("image post " + post.id +
                            " needs exactly one annotation");
    }
    descriptions.push_back(VerbalizeImage(annotations.front()));
  } else {
    for (const auto& a : annotations) descriptions.push_back(VerbalizeScene(a));
    if (scenes && post.replay && post.duration_s) {
      if (scenes->size() != annotations.size()) {
        throw ValidationError(
            "post " + post.id + " has " + std::to_string(scenes->size()) +
            " timed scenes but " + std::to_string(annotations.size()) +
            " annotations");
      }
      replay = ResampleReplay(*post.replay, *scenes, *post.duration_s);
    }
  }
  std::vector<CommentRecord> top(
      post.comments.begin(),
      post.comments.begin() +
          static_cast<std::ptrdiff_t>(
              std::min(post.comments.size(), kMaxCommentsPerPost)));
  return BuildBliftRecord(post, descriptions, LikeLinePercentage(post), top,
                          replay, include_behavior);
}

InstructionRecord BuildSaliencyObjectRecord(
    const std::string& image_id, const std::vector<std::string>& objects,
    const std::vector<std::string>& saliency_order) {
  if (objects.empty()) throw ValidationError("object list is empty");
  std::multiset<std::string> given(objects.begin(), objects.end());
  std::multiset<std::string> ranked(saliency_order.begin(),
                                    saliency_order.end());
  if (given != ranked) {
    throw ValidationError("saliency order is not a permutation of the objects");
  }
  if (std::set<std::string>(objects.begin(), objects.end()).size() !=
      objects.size()) {
    throw ValidationError("object list has duplicates");
  }
  InstructionRecord r;
  r.source = RecordSource::kSaliconObject;
  r.record_id = RecordId(image_id, r.source);
  r.system = std::string(kPerceptualSystemPrompt);
  r.user = "The objects in this image in no particular order are " +
           Join(objects, ", ") +
           ". Give me the order of saliency of these objects, start with the "
           "most salient object and end with the least salient object, each "
           "in a separate line. Give me the objects only and nothing else.\n";
  r.user += kImageToken;
  r.media_ref = MediaRef(r.user, kImageToken);
  r.assistant = Join(saliency_order, "\n");
  r.meta["image_id"] = image_id;
  r.meta["n_objects"] = objects.size();
  r.meta["template"] = kTemplateVersion;
  ValidateRecord(r);
  return r;
}

InstructionRecord BuildSaliencyRegionRecord(
    const std::string& image_id, const std::vector<std::string>& ranking) {
  if (ranking.size() != kSaliencyRegions.size()) {
    throw ValidationError("region ranking needs 9 names, got " +
                          std::to_string(ranking.size()));
  }
  std::set<std::string_view> seen;
  for (const auto& name : ranking) {
    if (std::find(kSaliencyRegions.begin(), kSaliencyRegions.end(), name) ==
        kSaliencyRegions.end()) {
      throw ValidationError("unknown region name " + name);
    }
    if (!seen.insert(name).second) {
      throw ValidationError("region " + name + " ranked twice");
    }
  }
  InstructionRecord r;
  r.source = RecordSource::kSaliconRegion;
  r.record_id = RecordId(image_id, r.source);
  r.system = std::string(kPerceptualSystemPrompt);
  r.user =
      "Assume the given image is broken into a 3X3 grid the regions or tiles "
      "being named \"upper-left\" \"upper-center\", \"upper-right\", "
      "\"middle-left\", \"middle-center\", \"middle-right\", \"bottom-left\", "
      "\"bottom-center\", \"bottom-right\". Rank these regions or tiles based "
      "on their saliency, give me the line separated ranking of all regions "
      "in decreasing order.\n";
  r.user += kImageToken;
  r.media_ref = MediaRef(r.user, kImageToken);
  r.assistant = Join(ranking, "\n");
  r.meta["image_id"] = image_id;
  r.meta["template"] = kTemplateVersion;
  ValidateRecord(r);
  return r;
}

std::string SerializeRecord(const InstructionRecord& r) {
  ordered_json j;
  j["record_id"] = r.record_id;
  j["source"] = ToString(r.source);
  j["system"] = r.system;
  j["user"] = r.user;
  j["assistant"] = r.assistant;
  j["media_ref"] = r.media_ref;
  j["meta"] = r.meta;
  return j.dump();
}

InstructionRecord ParseRecord(std::string_view line) {
  InstructionRecord r;
  try {
    const auto j = ordered_json::parse(line);
    r.record_id = j.at("record_id").get<std::string>();
    auto source = ParseRecordSource(j.at("source").get<std::string>());
    if (!source) throw ValidationError("unknown record source");
    r.source = *source;
    r.system = j.at("system").get<std::string>();
    r.user = j.at("user").get<std::string>();
    r.assistant = j.at("assistant").get<std::string>();
    r.media_ref = j.at("media_ref").get<std::string>();
    r.meta = j.at("meta");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad instruction record: ") + e.what());
  }
  ValidateRecord(r);
  return r;
}

TemplateBatch GenerateBliftRecords(
    const std::vector<MediaPost>& posts,
    const std::map<std::string, std::vector<SceneAnnotation>>& annotations,
    const std::map<std::string, std::vector<Scene>>& scenes,
    bool include_behavior, int workers) {
  std::vector<const MediaPost*> order;
  order.reserve(posts.size());
  for (const auto& p : posts) order.push_back(&p);
  std::sort(order.begin(), order.end(),
            [](const MediaPost* a, const MediaPost* b) { return a->id < b->id; });

  std::vector<std::optional<InstructionRecord>> built(order.size());
  std::vector<std::string> errors(order.size());
  ParallelFor(order.size(), workers, [&](std::size_t i) {
    const MediaPost& post = *order[i];
    auto a = annotations.find(post.id);
    if (a == annotations.end()) {
      errors[i] = "post " + post.id + ": no scene annotations, skipped";
      return;
    }
    auto s = scenes.find(post.id);
    try {
      built[i] = BuildBliftRecordForPost(
          post, a->second, s == scenes.end() ? nullptr : &s->second,
          include_behavior);
    } catch (const ValidationError& e) {
      errors[i] = "post " + post.id + ": " + e.what() + ", skipped";
    }
  });

  TemplateBatch batch;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (built[i]) {
      batch.records.push_back(std::move(*built[i]));
    } else {
      batch.diagnostics.push_back(std::move(errors[i]));
    }
  }
  return batch;
}

}  // namespace blift
