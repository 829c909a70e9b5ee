#include "blift/ingest.h"

#include <sstream>

#include <gtest/gtest.h>

#include "blift/errors.h"
#include "support/corpus.h"

namespace blift {
namespace {

const char* kVideoLine =
    R"({"id":"v1","platform":"youtube","media_kind":"video","title":"Ad",)"
    R"("channel_or_subreddit":"Brand","posted_at":1600000000,"duration_s":30,)"
    R"("views":1000,"likes":20,"category_tags":["Food"],"language":"en",)"
    R"("media_hash":"00000000000000ff","comments":[)"
    R"({"id":"c1","author_kind":"human","text":"low","score":1},)"
    R"({"id":"c2","author_kind":"bot","text":"high score","score":9}]})";

TEST(ParseMediaPostTest, ParsesAndSortsComments) {
  const MediaPost p = ParseMediaPost(kVideoLine, Platform::kYoutube);
  EXPECT_EQ(p.id, "v1");
  EXPECT_EQ(p.media_kind, MediaKind::kVideo);
  EXPECT_EQ(*p.duration_s, 30.0);
  EXPECT_EQ(p.media_hash, 0xffu);
  EXPECT_EQ(p.category_tags, std::vector<std::string>{"food"});
  ASSERT_EQ(p.comments.size(), 2u);
  EXPECT_EQ(p.comments[0].id, "c2");
  EXPECT_EQ(p.comments[0].author_kind, AuthorKind::kBot);
  EXPECT_EQ(p.comments[0].word_count, 2u);
}

TEST(ParseMediaPostTest, RejectsPlatformConflict) {
  EXPECT_THROW(ParseMediaPost(kVideoLine, Platform::kReddit), ValidationError);
}

TEST(ParseMediaPostTest, RejectsBrokenInvariants) {
  auto with = [](const std::string& from, const std::string& to) {
    std::string line = kVideoLine;
    line.replace(line.find(from), from.size(), to);
    return line;
  };
  const Platform yt = Platform::kYoutube;
  EXPECT_THROW(ParseMediaPost(with("\"likes\":20", "\"likes\":2000"), yt),
               ValidationError);
  EXPECT_THROW(ParseMediaPost(with("\"duration_s\":30,", ""), yt),
               ValidationError);
  EXPECT_THROW(ParseMediaPost(with("\"video\"", "\"podcast\""), yt),
               ValidationError);
  EXPECT_THROW(ParseMediaPost(with("\"views\":1000", "\"views\":-3"), yt),
               ValidationError);
  EXPECT_THROW(ParseMediaPost(with("00000000000000ff", "xyz"), yt),
               ValidationError);
  EXPECT_THROW(ParseMediaPost(with("\"c2\"", "\"c1\""), yt), ValidationError);
  EXPECT_THROW(ParseMediaPost("[1,2]", yt), ValidationError);
  EXPECT_THROW(ParseMediaPost("{not json", yt), ValidationError);
}

TEST(ParseMediaPostTest, ReplayMustBePeakNormalized) {
  MediaPost p = ParseMediaPost(kVideoLine, Platform::kYoutube);
  p.replay = std::vector<double>(kReplaySamples, 0.5);
  EXPECT_THROW(ValidateMediaPost(p), ValidationError);
  (*p.replay)[10] = 1.0;
  EXPECT_NO_THROW(ValidateMediaPost(p));
  p.replay->pop_back();
  EXPECT_THROW(ValidateMediaPost(p), ValidationError);
  p.replay = std::vector<double>(kReplaySamples, 0.0);
  EXPECT_NO_THROW(ValidateMediaPost(p));
}

TEST(SerializeMediaPostTest, RoundTripsGeneratedCorpus) {
  for (Platform platform : {Platform::kReddit, Platform::kYoutube}) {
    const auto posts = testing::GenerateCorpus({300, 11, platform});
    for (const auto& p : posts) {
      const std::string line = SerializeMediaPost(p);
      const MediaPost back = ParseMediaPost(line, platform);
      EXPECT_EQ(back, p) << line;
      EXPECT_EQ(SerializeMediaPost(back), line);
    }
  }
}

TEST(SerializeMediaPostTest, CanonicalKeyOrder) {
  const MediaPost p = ParseMediaPost(kVideoLine, Platform::kYoutube);
  const std::string line = SerializeMediaPost(p);
  EXPECT_EQ(line.rfind(R"({"id":"v1","platform":"youtube","media_kind":"video")", 0),
            0u);
  EXPECT_NE(line.find(R"("media_hash":"00000000000000ff","comments":[{"id":"c2")"),
            std::string::npos);
}

TEST(MediaDumpTest, ReaderSkipsBadLinesWithDiagnostics) {
  std::stringstream in;
  in << kVideoLine << "\n\n{bad\n" << kVideoLine << "\n";
  MediaDumpReader reader(in, Platform::kYoutube);
  std::size_t n = 0;
  while (reader.Next()) ++n;
  EXPECT_EQ(n, 1u);
  EXPECT_EQ(reader.lines_read(), 4u);
  ASSERT_EQ(reader.diagnostics().size(), 3u);
  EXPECT_EQ(reader.diagnostics()[0], (Diagnostic{2, "empty line"}));
  EXPECT_EQ(reader.diagnostics()[1].line, 3u);
  EXPECT_EQ(reader.diagnostics()[2].line, 4u);
  EXPECT_NE(reader.diagnostics()[2].message.find("duplicate"),
            std::string::npos);
}

TEST(MediaDumpTest, ParallelReadMatchesStreamingReader) {
  const auto posts = testing::GenerateCorpus({500, 3, Platform::kReddit});
  std::string text = testing::CorpusToJsonl(posts);
  text += "garbage\n";
  for (int workers : {1, 4, 16}) {
    std::istringstream a(text), b(text);
    const MediaDump dump = ReadMediaDump(a, Platform::kReddit, workers);
    MediaDumpReader reader(b, Platform::kReddit);
    std::vector<MediaPost> streamed;
    while (auto p = reader.Next()) streamed.push_back(std::move(*p));
    EXPECT_EQ(dump.posts, streamed);
    EXPECT_EQ(dump.diagnostics, reader.diagnostics());
    EXPECT_EQ(dump.lines, 501u);
  }
}

TEST(AnnotationSidecarTest, GroupsSortsAndRejects) {
  std::istringstream in(
      R"({"post_id":"a","scene_index":2,"caption":"two"})" "\n"
      R"({"post_id":"a","scene_index":1,"caption":"one","tags":["x"]})" "\n"
      R"({"post_id":"a","scene_index":1,"caption":"dup"})" "\n"
      R"({"post_id":"b","scene_index":1,"caption":"b1"})" "\n"
      R"({"post_id":"b","scene_index":3,"caption":"gap"})" "\n"
      R"({"post_id":"c","scene_index":0,"caption":"zero"})" "\n");
  const AnnotationSet set = ParseAnnotationSidecar(in);
  ASSERT_EQ(set.by_post.size(), 1u);
  const auto& a = set.by_post.at("a");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].caption, "one");
  EXPECT_EQ(a[1].caption, "two");
  ASSERT_EQ(set.diagnostics.size(), 3u);
  EXPECT_EQ(set.diagnostics[0].line, 3u);  // duplicate index
  EXPECT_EQ(set.diagnostics[1].line, 4u);  // b is not contiguous
  EXPECT_EQ(set.diagnostics[2].line, 6u);  // index 0
}

TEST(DescriptorTracksTest, ParsesRenormalizesAndRejects) {
  std::istringstream in(
      R"({"dim":2})" "\n"
      R"({"post_id":"a","t":0,"vec":[1,0]})" "\n"
      R"({"post_id":"a","t":1,"vec":[3,4]})" "\n"
      R"({"post_id":"b","t":0,"vec":[0,1]})" "\n"
      R"({"post_id":"b","t":0,"vec":[1,0]})" "\n"
      R"({"post_id":"c","t":0,"vec":[1,0,0]})" "\n"
      R"({"post_id":"c","t":1,"vec":[0,0]})" "\n");
  const DescriptorSet set = ParseDescriptorTracks(in);
  EXPECT_EQ(set.dim, 2u);
  EXPECT_EQ(set.renormalized, 1u);
  ASSERT_EQ(set.tracks.size(), 1u);
  const auto& a = set.tracks.at("a");
  ASSERT_EQ(a.entries.size(), 2u);
  EXPECT_DOUBLE_EQ(a.entries[1].descriptor[0], 0.6);
  EXPECT_DOUBLE_EQ(a.entries[1].descriptor[1], 0.8);
  EXPECT_EQ(set.diagnostics.size(), 3u);
}

TEST(DescriptorTracksTest, HeaderIsRequired) {
  std::istringstream in(R"({"post_id":"a","t":0,"vec":[1,0]})" "\n");
  EXPECT_THROW(ParseDescriptorTracks(in), ValidationError);
}

}  // namespace
}  // namespace blift
