#ifndef BLIFT_TEMPLATES_H_
#define BLIFT_TEMPLATES_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "blift/ingest.h"
#include "blift/scene.h"

namespace blift {

// Template wording version. Bump when any constant below changes, since
// golden files pin the exact bytes.
inline constexpr std::string_view kTemplateVersion = "blift-template-v1";

inline constexpr std::string_view kBehaviorSystemPrompt =
    "You are an AI visual assistant. You are given a detailed description of "
    "a media, followed by the actual media. Answer all questions as if you "
    "are seeing the media.";
inline constexpr std::string_view kPerceptualSystemPrompt =
    "You are an AI visual assistant. Answer all questions as you are seeing "
    "the media";
inline constexpr std::string_view kBehaviorMarker = ">>> BEHAVIOR <<<";
inline constexpr std::string_view kVideoToken = "<video>";
inline constexpr std::string_view kImageToken = "<image>";

inline constexpr std::array<std::string_view, 9> kSaliencyRegions = {
    "upper-left",  "upper-center",  "upper-right",
    "middle-left", "middle-center", "middle-right",
    "bottom-left", "bottom-center", "bottom-right"};

enum class RecordSource {
  kBliftVideo,
  kBliftImage,
  kAdControl,
  kSaliconObject,
  kSaliconRegion,
};

std::string_view ToString(RecordSource source);
std::optional<RecordSource> ParseRecordSource(std::string_view name);

struct InstructionRecord {
  std::string record_id;
  RecordSource source = RecordSource::kBliftVideo;
  std::string system;
  std::string user;
  std::string assistant;
  // Placeholder token and its byte offset in `user`, e.g. "<video>@412".
  std::string media_ref;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();

  bool operator==(const InstructionRecord&) const = default;
};

// Throws ValidationError when a record breaks its invariants: empty turns,
// not exactly one media token in `user`, or the behavior marker present on a
// non-BLIFT record / missing on a BLIFT one.
void ValidateRecord(const InstructionRecord& record);

// "Scene {i}: The scene shows {caption}. The foreground colors ..." with tags
// sorted. Empty color lists, tone or tags drop their clause.
std::string VerbalizeScene(const SceneAnnotation& annotation);
// Single-description form used for image posts ("The image shows ...").
std::string VerbalizeImage(const SceneAnnotation& annotation);

// Like line percentage: likes/views for YouTube, upvote_ratio for Reddit.
// nullopt when the post carries neither.
std::optional<std::string> LikeLinePercentage(const MediaPost& post);

// Assembles a behavior record (or, with include_behavior = false, the
// behavior-stripped control record). `descriptions` are scene
// verbalizations for videos, or one image verbalization. `replay_values`,
// when present, align with `descriptions`.
InstructionRecord BuildBliftRecord(
    const MediaPost& post, const std::vector<std::string>& descriptions,
    const std::optional<std::string>& like_pct,
    const std::vector<CommentRecord>& top_comments,
    const std::optional<std::vector<double>>& replay_values,
    bool include_behavior);

// Derives every BuildBliftRecord input from a filtered post. `scenes` gives
// scene timing for replay binning; without it no replay lines are emitted.
InstructionRecord BuildBliftRecordForPost(
    const MediaPost& post, const std::vector<SceneAnnotation>& annotations,
    const std::vector<Scene>* scenes, bool include_behavior);

InstructionRecord BuildSaliencyObjectRecord(
    const std::string& image_id, const std::vector<std::string>& objects,
    const std::vector<std::string>& saliency_order);

InstructionRecord BuildSaliencyRegionRecord(
    const std::string& image_id, const std::vector<std::string>& ranking);

// One JSON line (no newline) with keys record_id, source, system, user,
// assistant, media_ref, meta in that order.
std::string SerializeRecord(const InstructionRecord& record);
InstructionRecord ParseRecord(std::string_view line);

struct TemplateBatch {
  std::vector<InstructionRecord> records;  // post-id order
  std::vector<std::string> diagnostics;
};

// Builds one record per post. Posts lacking usable annotations (or with too
// few comments for a behavior block) are skipped with a diagnostic.
TemplateBatch GenerateBliftRecords(
    const std::vector<MediaPost>& posts,
    const std::map<std::string, std::vector<SceneAnnotation>>& annotations,
    const std::map<std::string, std::vector<Scene>>& scenes,
    bool include_behavior, int workers = 1);

}  // namespace blift

#endif  // BLIFT_TEMPLATES_H_
