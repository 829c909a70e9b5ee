#ifndef BLIFT_TESTS_SUPPORT_FIXTURES_H_
#define BLIFT_TESTS_SUPPORT_FIXTURES_H_

#include <string>
#include <vector>

#include "blift/metrics.h"

namespace blift::testing {

// Rows of a sampling-ratio ablation, one report per checkpoint,
// ids like "1:1@2.2". The base model row is included as "base@0".
// `with_performance` adds the aggregate benchmark column as the
// "performance" aux metric.
std::vector<EvalReport> AblationReports(bool with_performance);

// Only the 1:1 rows.
std::vector<EvalReport> AblationOneToOneReports();

// Directory holding the template fixtures and their goldens.
std::string TemplateDataDir();

}  // namespace blift::testing

#endif  // BLIFT_TESTS_SUPPORT_FIXTURES_H_
