#ifndef BLIFT_METRICS_H_
#define BLIFT_METRICS_H_

#include <cstdint>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "blift/errors.h"

namespace blift {

// Coefficient of determination, 1 - SS_res / SS_tot with SS_tot taken about
// the mean of `actual`. Unbounded below. Throws ValidationError for length
// mismatch, fewer than two points, or constant `actual`.
double RSquared(std::span<const double> predicted,
                std::span<const double> actual);

struct LogProbRecord {
  std::string record_id;
  std::uint64_t token_count = 0;
  double sum_logprob = 0.0;  // natural log, <= 0
};

// exp(-sum(sum_logprob) / sum(token_count)), token-weighted over records.
double CommentPerplexity(std::span<const LogProbRecord> records);

struct Prediction {
  std::string record_id;
  double predicted = 0.0;
  double actual = 0.0;
};

// {record_id, token_count, sum_logprob} per line.
std::vector<LogProbRecord> ReadLogProbs(std::istream& in,
                                        std::vector<Diagnostic>* diagnostics);
// {record_id, predicted, actual} per line.
std::vector<Prediction> ReadPredictions(std::istream& in,
                                        std::vector<Diagnostic>* diagnostics);

struct EvalReport {
  std::string checkpoint_id;
  double epochs = 0.0;
  double r2_likes_views = 0.0;
  double comment_perplexity = 1.0;
  std::map<std::string, double> aux_metrics;  // e.g. "performance"

  nlohmann::ordered_json ToJson() const;
  static EvalReport FromJson(const nlohmann::json& j);
};

enum class SelectionCriterion {
  // aux "performance" (when any report has it), then r2, then perplexity.
  kDefault,
  kR2,
  kPerplexity,
};

// Remaining ties go to fewer epochs, then the smaller checkpoint id.
// Throws ValidationError on an empty list.
std::string SelectBestCheckpoint(
    const std::vector<EvalReport>& reports,
    SelectionCriterion criterion = SelectionCriterion::kDefault);

}  // namespace blift

#endif  // BLIFT_METRICS_H_
