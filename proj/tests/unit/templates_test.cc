#include "blift/templates.h"

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "blift/errors.h"
#include "support/fixtures.h"

namespace blift {
namespace {

std::string ReadFile(const std::string& name) {
  std::ifstream in(testing::TemplateDataDir() + "/" + name, std::ios::binary);
  EXPECT_TRUE(in) << name;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MediaPost LoadPost(const std::string& name, Platform platform) {
  std::istringstream in(ReadFile(name));
  const MediaDump dump = ReadMediaDump(in, platform);
  EXPECT_EQ(dump.posts.size(), 1u);
  return dump.posts.front();
}

AnnotationSet LoadSidecar() {
  std::istringstream in(ReadFile("sidecar.jsonl"));
  return ParseAnnotationSidecar(in);
}

std::vector<Scene> GatoradeScenes() {
  std::istringstream in(ReadFile("descriptors.jsonl"));
  const DescriptorSet set = ParseDescriptorTracks(in);
  return SegmentScenes(set.tracks.at("BKPQkjRF4yY"), 30.0);
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

TEST(VerbalizeTest, SceneWithAllClauses) {
  SceneAnnotation a;
  a.scene_index = 2;
  a.caption = "a dog on a beach.";
  a.fg_colors = {"brown", "white"};
  a.bg_colors = {"blue"};
  a.tone = "warm";
  a.tags = {"sand", "dog", "beach"};
  EXPECT_EQ(VerbalizeScene(a),
            "Scene 2: The scene shows a dog on a beach. The foreground colors "
            "of the scene are brown, white, and the background colors are "
            "blue. The dominant tone of the scene is warm. This scene is "
            "categorized by the tags: beach, dog, sand.");
}

TEST(VerbalizeTest, MissingPartsDropTheirClauses) {
  SceneAnnotation a;
  a.scene_index = 1;
  a.caption = "a red car";
  EXPECT_EQ(VerbalizeScene(a), "Scene 1: The scene shows a red car.");
  a.bg_colors = {"gray"};
  EXPECT_EQ(VerbalizeImage(a),
            "The image shows a red car. The background colors of the image "
            "are gray.");
  a.caption = "";
  EXPECT_THROW(VerbalizeScene(a), ValidationError);
}

TEST(BuildBliftRecordTest, GatoradeVideoRecord) {
  const MediaPost post = LoadPost("youtube_dump.jsonl", Platform::kYoutube);
  const auto annotations = LoadSidecar().by_post.at(post.id);
  const auto scenes = GatoradeScenes();
  ASSERT_EQ(scenes.size(), 3u);
  const InstructionRecord r =
      BuildBliftRecordForPost(post, annotations, &scenes, true);
  EXPECT_EQ(r.source, RecordSource::kBliftVideo);
  EXPECT_EQ(r.record_id, "BKPQkjRF4yY:blift_video");
  EXPECT_EQ(r.system, kBehaviorSystemPrompt);
  EXPECT_EQ(r.user,
            "The video advertisement is titled \"Gatorade | Make Your Own "
            "Footsteps with Suni Lee\" for the brand Gatorade. The audio in "
            "the ad says \"[ASR HERE ...]\". Analyze this video deeply, then "
            "write scene by scene description of the video and answer the "
            "following questions. What percentage of viewers would like this "
            "video, and what would be the top-5 popular comments on this "
            "video? What would the replay graph values for each scene be?\n"
            "<video>");
  const auto lines = Lines(r.assistant);
  ASSERT_EQ(lines.size(), 19u);
  EXPECT_EQ(lines[0], "The scene-by-scene descriptions are:");
  EXPECT_EQ(lines[2],
            "Scene 1: The scene shows a woman looking off into the distance "
            "with an orange line going around the outside of the screen. The "
            "foreground colors of the scene are black, mud green, gray, dark "
            "gray, and the background colors are dark brown, black, dark gray. "
            "The dominant tone of the scene is neutral. This scene is "
            "categorized by the tags: cosmetic, eyebrow, face, girl, "
            "ponytail, stand, string, woman.");
  EXPECT_EQ(lines[4],
            "Scene 3: The scene shows a girl jumping over a wooden ramp in "
            "the backyard. The foreground colors of the scene are black, dark "
            "gray, gray, dark blue, and the background colors are dark "
            "brown, dark blue, purple, dark pink, brown.");
  EXPECT_EQ(lines[6], ">>> BEHAVIOR <<<");
  EXPECT_EQ(lines[8], "The video will be liked by 2.0%");
  EXPECT_EQ(lines[9],
            "1. \"Wow. Love it. She's such an inspiration to the next "
            "generation as well as everyone.\"");
  EXPECT_EQ(lines[13], "5. \"Yooooo, this is straight up!\"");
  EXPECT_EQ(lines[15], "The replay values for each scene would be:");
  EXPECT_EQ(lines[16], "Scene 1: 0.06");
  EXPECT_EQ(lines[17], "Scene 2: 0.23");
  EXPECT_EQ(lines[18], "Scene 3: 0.38");
  EXPECT_EQ(r.media_ref, "<video>@" + std::to_string(r.user.size() - 7));
  EXPECT_EQ(r.meta["like_pct"], "2.0%");
  EXPECT_EQ(r.meta["n_comments"], 5);
  EXPECT_EQ(r.meta["n_scenes"], 3);
}

TEST(BuildBliftRecordTest, ControlTwinIsTheBehaviorRecordMinusBehavior) {
  const MediaPost post = LoadPost("youtube_dump.jsonl", Platform::kYoutube);
  const auto annotations = LoadSidecar().by_post.at(post.id);
  const auto scenes = GatoradeScenes();
  const auto full = BuildBliftRecordForPost(post, annotations, &scenes, true);
  const auto ctrl = BuildBliftRecordForPost(post, annotations, &scenes, false);
  EXPECT_EQ(ctrl.source, RecordSource::kAdControl);
  EXPECT_EQ(ctrl.assistant.find(kBehaviorMarker), std::string::npos);
  EXPECT_EQ(full.assistant.rfind(ctrl.assistant + "\n\n" +
                                     std::string(kBehaviorMarker),
                                 0),
            0u);
  EXPECT_EQ(ctrl.user.find("percentage"), std::string::npos);
  EXPECT_NE(ctrl.user.find("description of the video.\n<video>"),
            std::string::npos);
  EXPECT_EQ(ctrl.meta["like_pct"], nullptr);
}

TEST(BuildBliftRecordTest, RedditImage) {
  const MediaPost post = LoadPost("reddit_dump.jsonl", Platform::kReddit);
  const auto annotations = LoadSidecar().by_post.at(post.id);
  const auto r = BuildBliftRecordForPost(post, annotations, nullptr, true);
  EXPECT_EQ(r.source, RecordSource::kBliftImage);
  EXPECT_EQ(r.user,
            "The image is titled \"My grandmother's garden after the rain\" "
            "and was posted on r/pics. Analyze this image deeply, then write "
            "a description of the image and answer the following questions. "
            "What percentage of viewers would like this image, and what would "
            "be the top-5 popular comments on this image?\n<image>");
  EXPECT_NE(r.assistant.find("The post will be liked by 97.0%\n1. \""),
            std::string::npos);
  EXPECT_EQ(r.assistant.find("replay"), std::string::npos);
}

TEST(BuildBliftRecordTest, RequiresTwoToFiveComments) {
  MediaPost post = LoadPost("reddit_dump.jsonl", Platform::kReddit);
  post.comments.resize(1);
  const auto annotations = LoadSidecar().by_post.at(post.id);
  EXPECT_THROW(BuildBliftRecordForPost(post, annotations, nullptr, true),
               ValidationError);
  EXPECT_NO_THROW(BuildBliftRecordForPost(post, annotations, nullptr, false));
}

TEST(SaliencyRecordTest, ObjectAndRegionPrompts) {
  const auto obj = BuildSaliencyObjectRecord("5670500150", {"car", "dog", "frisbee"},
                                             {"dog", "frisbee", "car"});
  EXPECT_EQ(obj.system,
            "You are an AI visual assistant. Answer all questions as you are "
            "seeing the media");
  EXPECT_EQ(obj.user.rfind("The objects in this image in no particular order "
                           "are car, dog, frisbee. Give me the order",
                           0),
            0u);
  EXPECT_EQ(obj.assistant, "dog\nfrisbee\ncar");
  EXPECT_THROW(BuildSaliencyObjectRecord("x", {"a", "b"}, {"a"}),
               ValidationError);

  std::vector<std::string> ranking(kSaliencyRegions.begin(),
                                   kSaliencyRegions.end());
  const auto reg = BuildSaliencyRegionRecord("5670500150", ranking);
  EXPECT_EQ(reg.assistant.substr(0, 24), "upper-left\nupper-center\n");
  ranking[0] = "center";
  EXPECT_THROW(BuildSaliencyRegionRecord("x", ranking), ValidationError);
  ranking[0] = "upper-center";
  EXPECT_THROW(BuildSaliencyRegionRecord("x", ranking), ValidationError);
}

TEST(RecordTest, SerializeParseRoundTrip) {
  const MediaPost post = LoadPost("youtube_dump.jsonl", Platform::kYoutube);
  const auto annotations = LoadSidecar().by_post.at(post.id);
  const auto scenes = GatoradeScenes();
  const auto r = BuildBliftRecordForPost(post, annotations, &scenes, true);
  const std::string line = SerializeRecord(r);
  EXPECT_EQ(ParseRecord(line), r);
  EXPECT_EQ(SerializeRecord(ParseRecord(line)), line);
}

TEST(RecordTest, ValidateCatchesBrokenInvariants) {
  const auto good = BuildSaliencyObjectRecord("i", {"a"}, {"a"});
  auto r = good;
  r.user += " <image>";
  EXPECT_THROW(ValidateRecord(r), ValidationError);
  r = good;
  r.assistant += std::string(kBehaviorMarker);
  EXPECT_THROW(ValidateRecord(r), ValidationError);
  r = good;
  r.assistant.clear();
  EXPECT_THROW(ValidateRecord(r), ValidationError);
}

TEST(GenerateBliftRecordsTest, SkipsPostsWithoutAnnotations) {
  MediaPost a = LoadPost("reddit_dump.jsonl", Platform::kReddit);
  MediaPost b = a;
  b.id = "a000";
  const auto sidecar = LoadSidecar();
  const auto batch = GenerateBliftRecords({a, b}, sidecar.by_post, {}, true, 4);
  ASSERT_EQ(batch.records.size(), 1u);
  EXPECT_EQ(batch.records[0].meta["post_id"], a.id);
  ASSERT_EQ(batch.diagnostics.size(), 1u);
  EXPECT_NE(batch.diagnostics[0].find("a000"), std::string::npos);
}

TEST(GoldenTest, CommittedGoldensParseAndValidate) {
  for (const char* name :
       {"youtube_blift.expected", "youtube_ad_control.expected",
        "reddit_blift.expected", "reddit_ad_control.expected",
        "salicon.expected"}) {
    const auto lines = Lines(ReadFile(name));
    ASSERT_FALSE(lines.empty()) << name;
    for (const auto& line : lines) {
      EXPECT_EQ(SerializeRecord(ParseRecord(line)), line) << name;
    }
  }
}

}  // namespace
}  // namespace blift
