#include "blift/dedup.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "blift/errors.h"
#include "blift/text.h"

namespace blift {

TermVector::TermVector(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (const auto& [term, weight] : entries) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
      throw ValidationError("term weights must be finite and nonnegative");
    }
    if (!entries_.empty() && entries_.back().first == term) {
      entries_.back().second += weight;
    } else {
      entries_.emplace_back(term, weight);
    }
  }
  std::erase_if(entries_, [](const Entry& e) { return e.second == 0.0; });
  double sq = 0.0;
  for (const auto& e : entries_) sq += e.second * e.second;
  norm_ = std::sqrt(sq);
}

double InverseDocumentFrequency(std::size_t n_docs, std::size_t doc_freq) {
  return std::log(static_cast<double>(n_docs) /
                  (1.0 + static_cast<double>(doc_freq))) +
         1.0;
}

TfidfModel BuildTfidf(const std::vector<std::vector<std::string>>& corpus) {
  if (corpus.empty()) throw ValidationError("TF-IDF corpus is empty");
  TfidfModel model;

  std::map<std::string, std::size_t> doc_freq;
  for (const auto& doc : corpus) {
    std::vector<std::string_view> uniq(doc.begin(), doc.end());
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (auto term : uniq) ++doc_freq[std::string(term)];
  }
  std::unordered_map<std::string_view, std::uint32_t> ids;
  std::vector<double> idf;
  model.vocabulary.reserve(doc_freq.size());
  for (const auto& [term, df] : doc_freq) {
    model.vocabulary.push_back(term);
    idf.push_back(InverseDocumentFrequency(corpus.size(), df));
  }
  for (std::uint32_t i = 0; i < model.vocabulary.size(); ++i) {
    ids.emplace(model.vocabulary[i], i);
  }

  model.vectors.reserve(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto& doc = corpus[d];
    if (doc.empty()) {
      model.empty_documents.push_back(d);
      model.vectors.emplace_back();
      continue;
    }
    std::map<std::uint32_t, std::size_t> counts;
    for (const auto& term : doc) ++counts[ids.at(term)];
    std::vector<TermVector::Entry> entries;
    entries.reserve(counts.size());
    const double len = static_cast<double>(doc.size());
    for (const auto& [id, count] : counts) {
      entries.emplace_back(id, static_cast<double>(count) / len * idf[id]);
    }
    model.vectors.emplace_back(std::move(entries));
  }
  return model;
}

namespace {

double ToSimilarity(double dot, double norm_u, double norm_v) {
  if (norm_u == 0.0 || norm_v == 0.0) return 0.0;
  return std::clamp(dot / (norm_u * norm_v), 0.0, 1.0);
}

std::vector<std::size_t> DedupReference(const std::vector<TermVector>& vecs,
                                        double threshold) {
  const std::size_t n = vecs.size();
  std::vector<double> sim(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      sim[i * n + j] = CosineSimilarity(vecs[j], vecs[i]);
    }
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < n; ++i) {
    const bool unique = std::all_of(kept.begin(), kept.end(), [&](auto k) {
      return sim[i * n + k] < threshold;
    });
    if (unique) kept.push_back(i);
  }
  return kept;
}

// Accumulates dot products against the kept set through term postings. Each
// accumulator sums in ascending term order, the same order as the merge in
// CosineSimilarity, so both modes produce bit-identical similarities.
std::vector<std::size_t> DedupIndexed(const std::vector<TermVector>& vecs,
                                      double threshold) {
  std::unordered_map<std::uint32_t, std::vector<std::pair<std::size_t, double>>>
      postings;
  std::vector<std::size_t> kept;
  std::vector<double> dot;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    const TermVector& v = vecs[i];
    dot.assign(kept.size(), 0.0);
    for (const auto& [term, weight] : v.entries()) {
      auto it = postings.find(term);
      if (it == postings.end()) continue;
      for (const auto& [slot, w] : it->second) dot[slot] += w * weight;
    }
    bool unique = true;
    for (std::size_t slot = 0; slot < kept.size(); ++slot) {
      if (ToSimilarity(dot[slot], vecs[kept[slot]].norm(), v.norm()) >=
          threshold) {
        unique = false;
        break;
      }
    }
    if (!unique) continue;
    const std::size_t slot = kept.size();
    kept.push_back(i);
    for (const auto& [term, weight] : v.entries()) {
      postings[term].emplace_back(slot, weight);
    }
  }
  return kept;
}

}  // namespace

double CosineSimilarity(const TermVector& u, const TermVector& v) {
  const auto& a = u.entries();
  const auto& b = v.entries();
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (b[j].first < a[i].first) {
      ++j;
    } else {
      dot += a[i].second * b[j].second;
      ++i;
      ++j;
    }
  }
  return ToSimilarity(dot, u.norm(), v.norm());
}

std::vector<std::size_t> GreedyDedup(const std::vector<TermVector>& vectors,
                                     double threshold, DedupMode mode) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ValidationError("dedup threshold must be in (0, 1]");
  }
  return mode == DedupMode::kReference ? DedupReference(vectors, threshold)
                                       : DedupIndexed(vectors, threshold);
}

std::vector<CommentRecord> DedupComments(
    const std::vector<CommentRecord>& comments, double threshold,
    DedupMode mode) {
  if (comments.empty()) return {};
  std::vector<std::vector<std::string>> corpus;
  corpus.reserve(comments.size());
  for (const auto& c : comments) corpus.push_back(Tokenize(c.text));
  const TfidfModel model = BuildTfidf(corpus);
  std::vector<CommentRecord> kept;
  for (std::size_t i : GreedyDedup(model.vectors, threshold, mode)) {
    kept.push_back(comments[i]);
  }
  return kept;
}

std::vector<MediaPost> DedupMedia(std::vector<MediaPost> posts) {
  std::unordered_map<std::uint64_t, std::string> owner;
  for (const auto& p : posts) {
    auto [it, inserted] = owner.emplace(p.media_hash, p.id);
    if (!inserted && p.id < it->second) it->second = p.id;
  }
  std::vector<MediaPost> out;
  out.reserve(owner.size());
  for (auto& p : posts) {
    if (owner.at(p.media_hash) == p.id) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace blift
