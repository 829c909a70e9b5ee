#ifndef BLIFT_DEDUP_H_
#define BLIFT_DEDUP_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "blift/ingest.h"

namespace blift {

// Sparse nonnegative weight vector over term ids, sorted by id, with its L2
// norm cached.
class TermVector {
 public:
  using Entry = std::pair<std::uint32_t, double>;

  TermVector() = default;
  // Sorts by term id and sums weights of repeated ids. Throws
  // ValidationError on a negative or non-finite weight.
  explicit TermVector(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  double norm() const { return norm_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<Entry> entries_;
  double norm_ = 0.0;
};

// Smoothed inverse document frequency: ln(n / (1 + df)) + 1.
double InverseDocumentFrequency(std::size_t n_docs, std::size_t doc_freq);

struct TfidfModel {
  // Sorted, so term ids order the same way as the terms themselves.
  std::vector<std::string> vocabulary;
  std::vector<TermVector> vectors;
  // Documents with no tokens; their vectors are zero.
  std::vector<std::size_t> empty_documents;
};

// tf(t, d) = count(t in d) / |d|, weight = tf * idf. Throws ValidationError
// on an empty corpus.
TfidfModel BuildTfidf(const std::vector<std::vector<std::string>>& corpus);

// dot(u, v) / (|u| |v|), clamped to [0, 1]; 0 when either vector is zero.
double CosineSimilarity(const TermVector& u, const TermVector& v);

enum class DedupMode {
  kIndexed,    // inverted index over the kept set
  kReference,  // full pairwise similarity matrix, then the greedy sweep
};

// Greedy sweep in input order: an item is kept iff its similarity to every
// previously kept item is below `threshold`. Returns kept positions.
std::vector<std::size_t> GreedyDedup(const std::vector<TermVector>& vectors,
                                     double threshold, DedupMode mode);

// Per-post comment dedup. The IDF corpus is the given comments; input is
// expected in rank order (score desc, id asc) so higher-ranked comments win.
std::vector<CommentRecord> DedupComments(
    const std::vector<CommentRecord>& comments, double threshold,
    DedupMode mode = DedupMode::kIndexed);

// Keeps, per media digest, only the post with the smallest id. Survivors
// keep their input order.
std::vector<MediaPost> DedupMedia(std::vector<MediaPost> posts);

}  // namespace blift

#endif  // BLIFT_DEDUP_H_
