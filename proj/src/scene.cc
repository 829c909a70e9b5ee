#include "blift/scene.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "blift/errors.h"

namespace blift {
namespace {

constexpr double kTilingTolerance = 1e-9;

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::vector<Scene> SegmentScenes(const FrameDescriptorTrack& track,
                                 double duration_s, double min_scene_s) {
  const auto& frames = track.entries;
  if (frames.empty()) throw ValidationError("descriptor track is empty");
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw ValidationError("duration must be positive");
  }
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const double t = frames[i].timestamp_s;
    if (t < 0.0 || t > duration_s) {
      throw ValidationError("frame timestamp outside [0, duration]");
    }
    if (i > 0 && !(t > frames[i - 1].timestamp_s)) {
      throw ValidationError("frame timestamps must be strictly increasing");
    }
  }

  // edges[0] = 0, edges.back() = duration; interior edges are cuts.
  std::vector<double> edges = {0.0};
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (Dot(frames[i - 1].descriptor, frames[i].descriptor) <
        kShotBoundaryCosine) {
      edges.push_back(0.5 * (frames[i - 1].timestamp_s + frames[i].timestamp_s));
    }
  }
  edges.push_back(duration_s);

  // Drop the leading edge of every short scene after the first. Each decision
  // looks only at the original scene length, so one pass suffices.
  std::vector<double> kept = {0.0};
  for (std::size_t k = 1; k + 1 < edges.size(); ++k) {
    if (edges[k + 1] - edges[k] >= min_scene_s) kept.push_back(edges[k]);
  }
  kept.push_back(duration_s);
  if (kept.size() > 2 && kept[1] - kept[0] < min_scene_s) {
    kept.erase(kept.begin() + 1);
  }

  std::vector<Scene> scenes;
  scenes.reserve(kept.size() - 1);
  std::size_t f = 0;
  for (std::size_t k = 0; k + 1 < kept.size(); ++k) {
    Scene s;
    s.index = static_cast<int>(k + 1);
    s.start_s = kept[k];
    s.end_s = kept[k + 1];
    const bool last = k + 2 == kept.size();
    const std::size_t first = f;
    while (f < frames.size() &&
           (frames[f].timestamp_s < s.end_s || last)) {
      ++f;
    }
    s.representative_frame_t = f > first
                                   ? frames[first + (f - first - 1) / 2].timestamp_s
                                   : 0.5 * (s.start_s + s.end_s);
    scenes.push_back(s);
  }
  return scenes;
}

std::vector<double> ResampleReplay(std::span<const double> graph,
                                   const std::vector<Scene>& scenes,
                                   double duration_s) {
  if (graph.size() != kReplaySamples) {
    throw ValidationError("replay graph must have 100 samples");
  }
  if (scenes.empty()) throw ValidationError("no scenes to resample onto");
  if (std::abs(scenes.front().start_s) > kTilingTolerance ||
      std::abs(scenes.back().end_s - duration_s) > kTilingTolerance) {
    throw ValidationError("scenes do not cover [0, duration]");
  }
  for (std::size_t k = 0; k < scenes.size(); ++k) {
    if (!(scenes[k].end_s > scenes[k].start_s)) {
      throw ValidationError("scene has nonpositive length");
    }
    if (k > 0 &&
        std::abs(scenes[k].start_s - scenes[k - 1].end_s) > kTilingTolerance) {
      throw ValidationError("scenes leave a gap or overlap");
    }
  }

  std::vector<double> sum(scenes.size(), 0.0);
  std::vector<std::size_t> count(scenes.size(), 0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < kReplaySamples; ++i) {
    const double center = (static_cast<double>(i) + 0.5) /
                          static_cast<double>(kReplaySamples) * duration_s;
    while (k + 1 < scenes.size() && center >= scenes[k].end_s) ++k;
    sum[k] += graph[i];
    ++count[k];
  }

  std::vector<double> values(scenes.size());
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    if (count[s] > 0) {
      values[s] = sum[s] / static_cast<double>(count[s]);
      continue;
    }
    const double mid = 0.5 * (scenes[s].start_s + scenes[s].end_s);
    std::size_t nearest = 0;
    double best = HUGE_VAL;
    for (std::size_t i = 0; i < kReplaySamples; ++i) {
      const double center = (static_cast<double>(i) + 0.5) /
                            static_cast<double>(kReplaySamples) * duration_s;
      const double d = std::abs(center - mid);
      if (d < best) {
        best = d;
        nearest = i;
      }
    }
    values[s] = graph[nearest];
  }
  return values;
}

double RoundHalfUp(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double scaled = value * scale;
  // Relative slack absorbs representation error of decimal ties.
  const double slack = 1e-9 * std::max(1.0, std::abs(scaled));
  return std::floor(scaled + 0.5 + slack) / scale;
}

std::string FormatFixed(double value, int decimals) {
  char buf[64];
  double rounded = RoundHalfUp(value, decimals);
  if (rounded == 0.0) rounded = 0.0;  // no "-0.00"
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, rounded);
  return buf;
}

std::string LikePercentage(std::uint64_t likes, std::uint64_t views) {
  if (views == 0) throw ValidationError("like percentage needs views > 0");
  if (likes > views) throw ValidationError("likes exceed views");
  // tenths of a percent = round_half_up(1000 * likes / views)
  const unsigned __int128 num = static_cast<unsigned __int128>(likes) * 2000u +
                                static_cast<unsigned __int128>(views);
  const auto tenths = static_cast<std::uint64_t>(
      num / (static_cast<unsigned __int128>(views) * 2u));
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10) + "%";
}

nlohmann::ordered_json ScenesToJson(const std::vector<Scene>& scenes) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& s : scenes) {
    nlohmann::ordered_json j;
    j["index"] = s.index;
    j["start_s"] = s.start_s;
    j["end_s"] = s.end_s;
    j["representative_frame_t"] = s.representative_frame_t;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<Scene> ScenesFromJson(const nlohmann::json& j) {
  std::vector<Scene> scenes;
  try {
    for (const auto& row : j) {
      Scene s;
      s.index = row.at("index").get<int>();
      s.start_s = row.at("start_s").get<double>();
      s.end_s = row.at("end_s").get<double>();
      s.representative_frame_t =
          row.value("representative_frame_t", 0.5 * (s.start_s + s.end_s));
      scenes.push_back(s);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad scene list: ") + e.what());
  }
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    if (scenes[i].index != static_cast<int>(i + 1)) {
      throw ValidationError("scene indices must be contiguous from 1");
    }
  }
  return scenes;
}

}  // namespace blift
