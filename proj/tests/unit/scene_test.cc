#include "blift/scene.h"

#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "blift/errors.h"

namespace blift {
namespace {

FrameDescriptor Frame(double t, double cosine_to_x) {
  return {t, {cosine_to_x, std::sqrt(1.0 - cosine_to_x * cosine_to_x)}};
}

FrameDescriptorTrack Track(std::vector<FrameDescriptor> frames) {
  return {"p", std::move(frames)};
}

// Unit vectors along distinct axes are orthogonal, so every change cuts.
FrameDescriptor Axis(double t, std::size_t axis) {
  FrameDescriptor f{t, std::vector<double>(4, 0.0)};
  f.descriptor[axis] = 1.0;
  return f;
}

TEST(SegmentScenesTest, CutsAtMidpointsOfDissimilarFrames) {
  const auto scenes = SegmentScenes(
      Track({Axis(0, 0), Axis(5, 1), Axis(15, 2), Axis(25, 3)}), 30.0);
  ASSERT_EQ(scenes.size(), 4u);
  EXPECT_EQ(scenes[0], (Scene{1, 0.0, 2.5, 0.0}));
  EXPECT_EQ(scenes[1], (Scene{2, 2.5, 10.0, 5.0}));
  EXPECT_EQ(scenes[2], (Scene{3, 10.0, 20.0, 15.0}));
  EXPECT_EQ(scenes[3], (Scene{4, 20.0, 30.0, 25.0}));
}

TEST(SegmentScenesTest, BoundaryIsStrictlyBelowCos30) {
  const double c = kShotBoundaryCosine;
  EXPECT_NEAR(c, std::cos(M_PI / 6.0), 1e-15);
  auto count = [](double cosine) {
    return SegmentScenes(Track({Frame(0, 1.0), Frame(10, cosine)}), 20.0).size();
  };
  EXPECT_EQ(count(c - 1e-6), 2u);
  EXPECT_EQ(count(c + 1e-6), 1u);
  EXPECT_EQ(count(c), 1u);
}

TEST(SegmentScenesTest, ShortScenesMergeIntoPredecessor) {
  // Cuts at 5.0, 10.5 and 11.5: the [10.5, 11.5) scene is too short.
  const auto scenes = SegmentScenes(
      Track({Axis(0, 0), Axis(10, 1), Axis(11, 2), Axis(12, 3)}), 20.0, 1.5);
  ASSERT_EQ(scenes.size(), 3u);
  EXPECT_EQ(scenes[0].end_s, 5.0);
  EXPECT_EQ(scenes[1].start_s, 5.0);
  EXPECT_EQ(scenes[1].end_s, 11.5);
  EXPECT_EQ(scenes[1].representative_frame_t, 10.0);
  EXPECT_EQ(scenes[2].start_s, 11.5);
}

TEST(SegmentScenesTest, ShortFirstSceneMergesIntoSuccessor) {
  const auto scenes =
      SegmentScenes(Track({Axis(0, 0), Axis(1.0, 1), Axis(12, 2)}), 20.0, 1.0);
  ASSERT_EQ(scenes.size(), 2u);
  EXPECT_EQ(scenes[0].start_s, 0.0);
  EXPECT_EQ(scenes[0].end_s, 6.5);
  EXPECT_EQ(scenes[0].index, 1);
  EXPECT_EQ(scenes[1].index, 2);
}

TEST(SegmentScenesTest, SingleFrameGivesOneScene) {
  const auto scenes = SegmentScenes(Track({Axis(3, 0)}), 8.0);
  ASSERT_EQ(scenes.size(), 1u);
  EXPECT_EQ(scenes[0], (Scene{1, 0.0, 8.0, 3.0}));
}

TEST(SegmentScenesTest, RejectsBadInput) {
  EXPECT_THROW(SegmentScenes(Track({}), 10.0), ValidationError);
  EXPECT_THROW(SegmentScenes(Track({Axis(0, 0)}), 0.0), ValidationError);
  EXPECT_THROW(SegmentScenes(Track({Axis(11, 0)}), 10.0), ValidationError);
  EXPECT_THROW(SegmentScenes(Track({Axis(2, 0), Axis(2, 1)}), 10.0),
               ValidationError);
}

TEST(SegmentScenesTest, RandomTracksTileTheDuration) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double duration = 1.0 + std::abs(u(rng)) * 600.0;
    FrameDescriptorTrack track{"p", {}};
    double t = 0.0;
    std::vector<double> v(8);
    while (t <= duration) {
      if (track.entries.empty() || std::abs(u(rng)) < 0.3) {
        double n = 0.0;
        for (auto& x : v) {
          x = u(rng);
          n += x * x;
        }
        for (auto& x : v) x /= std::sqrt(n);
      }
      track.entries.push_back({t, v});
      t += 0.05 + std::abs(u(rng)) * 4.0;
    }
    const auto scenes = SegmentScenes(track, duration, 1.0);
    ASSERT_FALSE(scenes.empty());
    EXPECT_EQ(scenes.front().start_s, 0.0);
    EXPECT_NEAR(scenes.back().end_s, duration, 1e-9);
    for (std::size_t k = 0; k < scenes.size(); ++k) {
      EXPECT_EQ(scenes[k].index, static_cast<int>(k + 1));
      if (k) EXPECT_NEAR(scenes[k].start_s, scenes[k - 1].end_s, 1e-9);
      if (scenes.size() > 1) EXPECT_GE(scenes[k].length(), 1.0 - 1e-12);
    }
  }
}

TEST(ResampleReplayTest, MeansOfSamplesWhoseCentersFallInScene) {
  std::vector<double> graph(kReplaySamples);
  for (std::size_t i = 0; i < graph.size(); ++i) graph[i] = i / 99.0;
  const std::vector<Scene> scenes = {{1, 0, 25, 0}, {2, 25, 100, 50}};
  const auto v = ResampleReplay(graph, scenes, 100.0);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_NEAR(v[0], 12.0 / 99.0, 1e-15);  // samples 0..24
  EXPECT_NEAR(v[1], 62.0 / 99.0, 1e-15);  // samples 25..99
}

TEST(ResampleReplayTest, TinySceneTakesNearestSample) {
  std::vector<double> graph(kReplaySamples, 0.0);
  graph[50] = 1.0;
  // 0.1 s wide scene around t = 50.65 holds no sample center.
  const std::vector<Scene> scenes = {
      {1, 0, 50.6, 0}, {2, 50.6, 50.7, 50.65}, {3, 50.7, 100, 70}};
  const auto v = ResampleReplay(graph, scenes, 100.0);
  EXPECT_EQ(v[1], 1.0);
}

TEST(ResampleReplayTest, AlignedPartitionsConserveTheMean) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> graph(kReplaySamples);
    for (auto& g : graph) g = u(rng);
    const double duration = 10.0 + 100.0 * u(rng);
    std::vector<Scene> scenes;
    std::size_t at = 0;
    while (at < kReplaySamples) {
      const std::size_t len =
          std::min<std::size_t>(kReplaySamples - at, 1 + rng() % 30);
      scenes.push_back({static_cast<int>(scenes.size() + 1),
                        duration * at / 100.0, duration * (at + len) / 100.0,
                        0});
      at += len;
    }
    const auto v = ResampleReplay(graph, scenes, duration);
    double weighted = 0.0;
    for (std::size_t k = 0; k < scenes.size(); ++k) {
      weighted += v[k] * scenes[k].length() / duration;
    }
    const double mean =
        std::accumulate(graph.begin(), graph.end(), 0.0) / kReplaySamples;
    EXPECT_NEAR(weighted, mean, 1e-9);
  }
}

TEST(ResampleReplayTest, RejectsBadTiling) {
  const std::vector<double> graph(kReplaySamples, 0.5);
  EXPECT_THROW(ResampleReplay(graph, {{1, 0, 5, 0}}, 10.0), ValidationError);
  EXPECT_THROW(ResampleReplay(graph, {{1, 0, 5, 0}, {2, 6, 10, 0}}, 10.0),
               ValidationError);
  EXPECT_THROW(ResampleReplay(std::vector<double>(3), {{1, 0, 10, 0}}, 10.0),
               ValidationError);
}

TEST(RoundingTest, HalfUpAtTwoDecimals) {
  EXPECT_EQ(FormatFixed(0.125, 2), "0.13");
  EXPECT_EQ(FormatFixed(0.235, 2), "0.24");
  EXPECT_EQ(FormatFixed(0.38, 2), "0.38");
  EXPECT_EQ(FormatFixed(0.06, 2), "0.06");
  EXPECT_EQ(FormatFixed(1.0, 2), "1.00");
  EXPECT_EQ(FormatFixed(-0.001, 2), "0.00");
  EXPECT_EQ(FormatFixed(0.004999, 2), "0.00");
  EXPECT_DOUBLE_EQ(RoundHalfUp(2.45, 1), 2.5);
}

TEST(LikePercentageTest, ExactHalfUpTenths) {
  EXPECT_EQ(LikePercentage(20000, 1000000), "2.0%");
  EXPECT_EQ(LikePercentage(1, 3), "33.3%");
  EXPECT_EQ(LikePercentage(2, 3), "66.7%");
  EXPECT_EQ(LikePercentage(1, 2000), "0.1%");   // 0.05% rounds up
  EXPECT_EQ(LikePercentage(1, 2001), "0.0%");
  EXPECT_EQ(LikePercentage(0, 7), "0.0%");
  EXPECT_EQ(LikePercentage(7, 7), "100.0%");
  EXPECT_EQ(LikePercentage(UINT64_MAX / 3, UINT64_MAX), "33.3%");
  EXPECT_THROW(LikePercentage(1, 0), ValidationError);
  EXPECT_THROW(LikePercentage(5, 4), ValidationError);
}

TEST(ScenesJsonTest, RoundTrip) {
  const std::vector<Scene> scenes = {{1, 0, 2.5, 1}, {2, 2.5, 9.75, 4}};
  EXPECT_EQ(ScenesFromJson(ScenesToJson(scenes)), scenes);
  nlohmann::json bad = ScenesToJson(scenes);
  bad[1]["index"] = 3;
  EXPECT_THROW(ScenesFromJson(bad), ValidationError);
}

}  // namespace
}  // namespace blift
