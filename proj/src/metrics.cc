#include "blift/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace blift {

double RSquared(std::span<const double> predicted,
                std::span<const double> actual) {
  if (predicted.size() != actual.size()) {
    throw ValidationError("predicted and actual differ in length");
  }
  if (actual.size() < 2) throw ValidationError("R^2 needs at least two points");
  double mean = 0.0;
  for (double y : actual) mean += y;
  mean /= static_cast<double>(actual.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double r = actual[i] - predicted[i];
    const double d = actual[i] - mean;
    ss_res += r * r;
    ss_tot += d * d;
  }
  if (ss_tot == 0.0) throw ValidationError("R^2 undefined for constant actual");
  return 1.0 - ss_res / ss_tot;
}

double CommentPerplexity(std::span<const LogProbRecord> records) {
  if (records.empty()) throw ValidationError("no log-prob records");
  double logprob = 0.0;
  double tokens = 0.0;
  for (const auto& r : records) {
    if (r.token_count < 1) {
      throw ValidationError("record " + r.record_id + " has no tokens");
    }
    if (!(r.sum_logprob <= 0.0)) {
      throw ValidationError("record " + r.record_id +
                            " has a positive log-probability");
    }
    logprob += r.sum_logprob;
    tokens += static_cast<double>(r.token_count);
  }
  return std::exp(-logprob / tokens);
}

namespace {

template <typename Row, typename ParseFn>
std::vector<Row> ReadJsonLines(std::istream& in,
                               std::vector<Diagnostic>* diagnostics,
                               ParseFn&& parse) {
  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(parse(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      if (diagnostics) diagnostics->push_back({line_no, e.what()});
    }
  }
  if (in.bad()) throw IoError("read failed", line_no + 1);
  return rows;
}

}  // namespace

std::vector<LogProbRecord> ReadLogProbs(std::istream& in,
                                        std::vector<Diagnostic>* diagnostics) {
  return ReadJsonLines<LogProbRecord>(
      in, diagnostics, [](const nlohmann::json& j) {
        LogProbRecord r;
        r.record_id = j.at("record_id").get<std::string>();
        r.token_count = j.at("token_count").get<std::uint64_t>();
        r.sum_logprob = j.at("sum_logprob").get<double>();
        if (r.token_count < 1) throw ValidationError("token_count must be >= 1");
        if (!(r.sum_logprob <= 0.0)) {
          throw ValidationError("sum_logprob must be <= 0");
        }
        return r;
      });
}

std::vector<Prediction> ReadPredictions(std::istream& in,
                                        std::vector<Diagnostic>* diagnostics) {
  return ReadJsonLines<Prediction>(
      in, diagnostics, [](const nlohmann::json& j) {
        Prediction p;
        p.record_id = j.at("record_id").get<std::string>();
        p.predicted = j.at("predicted").get<double>();
        p.actual = j.at("actual").get<double>();
        return p;
      });
}

nlohmann::ordered_json EvalReport::ToJson() const {
  nlohmann::ordered_json j;
  j["checkpoint_id"] = checkpoint_id;
  j["epochs"] = epochs;
  j["r2_likes_views"] = r2_likes_views;
  j["comment_perplexity"] = comment_perplexity;
  nlohmann::ordered_json aux = nlohmann::ordered_json::object();
  for (const auto& [k, v] : aux_metrics) aux[k] = v;
  j["aux_metrics"] = std::move(aux);
  return j;
}

EvalReport EvalReport::FromJson(const nlohmann::json& j) {
  EvalReport r;
  try {
    r.checkpoint_id = j.at("checkpoint_id").get<std::string>();
    r.epochs = j.at("epochs").get<double>();
    r.r2_likes_views = j.at("r2_likes_views").get<double>();
    r.comment_perplexity = j.at("comment_perplexity").get<double>();
    if (auto it = j.find("aux_metrics"); it != j.end()) {
      for (const auto& [k, v] : it->items()) r.aux_metrics[k] = v.get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad eval report: ") + e.what());
  }
  return r;
}

std::string SelectBestCheckpoint(const std::vector<EvalReport>& reports,
                                 SelectionCriterion criterion) {
  if (reports.empty()) throw ValidationError("no checkpoints to select from");
  const bool use_performance =
      criterion == SelectionCriterion::kDefault &&
      std::any_of(reports.begin(), reports.end(), [](const EvalReport& r) {
        return r.aux_metrics.count("performance") > 0;
      });
  auto performance = [](const EvalReport& r) {
    auto it = r.aux_metrics.find("performance");
    return it == r.aux_metrics.end()
               ? -std::numeric_limits<double>::infinity()
               : it->second;
  };
  // Returns true when a should be preferred over b.
  auto better = [&](const EvalReport& a, const EvalReport& b) {
    if (use_performance && performance(a) != performance(b)) {
      return performance(a) > performance(b);
    }
    if (criterion == SelectionCriterion::kPerplexity) {
      if (a.comment_perplexity != b.comment_perplexity) {
        return a.comment_perplexity < b.comment_perplexity;
      }
      if (a.r2_likes_views != b.r2_likes_views) {
        return a.r2_likes_views > b.r2_likes_views;
      }
    } else {
      if (a.r2_likes_views != b.r2_likes_views) {
        return a.r2_likes_views > b.r2_likes_views;
      }
      if (a.comment_perplexity != b.comment_perplexity) {
        return a.comment_perplexity < b.comment_perplexity;
      }
    }
    if (a.epochs != b.epochs) return a.epochs < b.epochs;
    return a.checkpoint_id < b.checkpoint_id;
  };
  const EvalReport* best = &reports.front();
  for (const auto& r : reports) {
    if (better(r, *best)) best = &r;
  }
  return best->checkpoint_id;
}

}  // namespace blift
