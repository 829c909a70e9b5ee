#ifndef BLIFT_TESTS_SUPPORT_CORPUS_H_
#define BLIFT_TESTS_SUPPORT_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "blift/ingest.h"

namespace blift::testing {

// Terms the synthetic corpus plants in titles and comments.
std::vector<std::string> SyntheticNsfwTerms();

struct CorpusOptions {
  std::size_t posts = 1000;
  std::uint64_t seed = 1;
  Platform platform = Platform::kReddit;
};

// Valid posts (every one passes ValidateMediaPost) with planted filter
// violations: old posts, excluded categories, foreign language, NSFW flags
// and terms, repeated media digests, bot and deleted comments, comments at
// and across the word-count limits, near-duplicate comments, boundary view
// counts and durations, disabled comments, and single-comment posts. Posts
// are returned in shuffled id order.
std::vector<MediaPost> GenerateCorpus(const CorpusOptions& options);

std::string CorpusToJsonl(const std::vector<MediaPost>& posts);

// `count` comment texts over a small vocabulary. Roughly a third are
// near-copies (one word changed, dropped or appended) of an earlier text.
std::vector<std::string> NearDuplicateTexts(std::size_t count,
                                            std::uint64_t seed);

}  // namespace blift::testing

#endif  // BLIFT_TESTS_SUPPORT_CORPUS_H_
