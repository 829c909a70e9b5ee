#include "support/fixtures.h"

namespace blift::testing {
namespace {

struct Row {
  const char* ratio;
  double epochs;
  double r2;
  double ppl;
  double performance;
};

constexpr Row kRows[] = {
    {"base", 0, -0.1, 6.22, 0},     {"1:1", 0.5, 0.11, 4.71, 5.49},
    {"1:1", 1, 0.22, 3.95, 8.23},   {"1:1", 1.25, 0.33, 3.19, 10.97},
    {"1:1", 1.5, 0.35, 3.13, 11.79}, {"1:1", 2, 0.38, 3.08, 12.31},
    {"1:1", 2.2, 0.4, 3.05, 12.57}, {"1:2", 0.5, 0.14, 4.33, 3.04},
    {"1:2", 1.05, 0.28, 3.66, 7.08}, {"1:2", 1.45, 0.42, 2.99, 8.12},
    {"1:10", 0.5, 0.15, 3.43, 1.38}, {"1:10", 0.8, 0.31, 2.78, 3.44},
    {"1:10", 1, 0.38, 2.46, 4.48},  {"1:10", 1.2, 0.46, 2.13, 5.51},
    {"2:1", 0.5, 0.1, 5.3, 3.52},   {"2:1", 1, 0.21, 4.6, 7.45},
    {"2:1", 1.5, 0.31, 3.9, 9.13},
};

std::string FormatEpochs(double e) {
  std::string s = std::to_string(e);
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

std::vector<EvalReport> AblationReports(bool with_performance) {
  std::vector<EvalReport> out;
  for (const Row& row : kRows) {
    EvalReport r;
    r.checkpoint_id = std::string(row.ratio) + "@" + FormatEpochs(row.epochs);
    r.epochs = row.epochs;
    r.r2_likes_views = row.r2;
    r.comment_perplexity = row.ppl;
    if (with_performance) r.aux_metrics["performance"] = row.performance;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EvalReport> AblationOneToOneReports() {
  std::vector<EvalReport> out;
  for (auto& r : AblationReports(false)) {
    if (r.checkpoint_id.rfind("1:1@", 0) == 0) out.push_back(std::move(r));
  }
  return out;
}

std::string TemplateDataDir() { return BLIFT_TEST_DATA_DIR "/templates"; }

}  // namespace blift::testing
