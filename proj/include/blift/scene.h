#ifndef BLIFT_SCENE_H_
#define BLIFT_SCENE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blift/ingest.h"

namespace blift {

// cos 30 degrees. Consecutive frames whose descriptors are at least 30
// degrees apart (cosine strictly below this) start a new scene.
inline constexpr double kShotBoundaryCosine = 0.86602540378443864676;
inline constexpr double kDefaultMinSceneSeconds = 1.0;

struct Scene {
  int index = 0;  // 1-based
  double start_s = 0;
  double end_s = 0;
  double representative_frame_t = 0;

  double length() const { return end_s - start_s; }
  bool operator==(const Scene&) const = default;
};

// Cuts at the temporal midpoint between two consecutive frames whose
// descriptor cosine is below kShotBoundaryCosine. A scene shorter than
// `min_scene_s` is folded into the scene before it (the first scene, having
// no predecessor, folds into the one after). The result tiles
// [0, duration_s] exactly. Descriptors are assumed unit-norm.
std::vector<Scene> SegmentScenes(const FrameDescriptorTrack& track,
                                 double duration_s,
                                 double min_scene_s = kDefaultMinSceneSeconds);

// Mean of the replay samples whose centers (i + 0.5) / 100 * duration fall in
// each scene's [start, end). A scene that holds no sample center takes the
// sample nearest its midpoint. Values are unrounded.
std::vector<double> ResampleReplay(std::span<const double> graph,
                                   const std::vector<Scene>& scenes,
                                   double duration_s);

// Half-up rounding at `decimals` places, tolerant of binary representation
// error (0.125 -> 0.13, and 0.235 -> 0.24 even though 0.235 is stored below).
double RoundHalfUp(double value, int decimals);
std::string FormatFixed(double value, int decimals);

// 100 * likes / views, half-up to one decimal, e.g. "2.0%". Exact integer
// arithmetic. Throws ValidationError when views == 0 or likes > views.
std::string LikePercentage(std::uint64_t likes, std::uint64_t views);

nlohmann::ordered_json ScenesToJson(const std::vector<Scene>& scenes);
std::vector<Scene> ScenesFromJson(const nlohmann::json& j);

}  // namespace blift

#endif  // BLIFT_SCENE_H_
