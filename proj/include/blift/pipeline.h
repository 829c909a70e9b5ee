#ifndef BLIFT_PIPELINE_H_
#define BLIFT_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "blift/config.h"
#include "blift/ingest.h"
#include "blift/mixture.h"

namespace blift {

// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitConfig = 2,
  kExitValidation = 3,
};

struct PipelineConfig {
  std::filesystem::path dump;
  std::filesystem::path sidecar;
  std::filesystem::path descriptors;
  std::filesystem::path nsfw_vocab;
  std::filesystem::path scenes;
  std::filesystem::path salicon;
  std::filesystem::path predictions;
  std::filesystem::path logprobs;
  std::filesystem::path input;
  std::filesystem::path output_dir = ".";

  Platform platform = Platform::kYoutube;
  // Every key, including FilterPolicy overrides read by LoadFilterPolicy.
  KeyValueConfig values;
  MixtureSpec mixture;
  int worker_count = 1;
  bool oracle_mode = false;
  bool include_behavior = true;
  std::string variant = "blift";  // blift | salicon
  double min_scene_s = 1.0;
  std::string checkpoint_id = "checkpoint";
  double epochs = 0.0;

  // Throws ConfigError for malformed values, worker_count < 1, or an input
  // path that does not exist.
  static PipelineConfig FromKeyValues(const KeyValueConfig& values);
};

// Subcommands. Each writes its artifacts under config.output_dir, prints a
// summary to `out` and diagnostics to `err`, and returns an ExitCode.
int RunIngestCheck(const PipelineConfig& config, std::ostream& out,
                   std::ostream& err);
int RunFilter(const PipelineConfig& config, std::ostream& out,
              std::ostream& err);
int RunDedupOracle(const PipelineConfig& config, std::ostream& out,
                   std::ostream& err);
int RunSegment(const PipelineConfig& config, std::ostream& out,
               std::ostream& err);
int RunTemplate(const PipelineConfig& config, std::ostream& out,
                std::ostream& err);
int RunMix(const PipelineConfig& config, std::ostream& out, std::ostream& err);
int RunEval(const PipelineConfig& config, std::ostream& out, std::ostream& err);
int RunReport(const PipelineConfig& config, std::ostream& out,
              std::ostream& err);

// Dispatches by subcommand name, mapping ConfigError, IoError and
// ValidationError to their exit codes.
int RunSubcommand(const std::string& name, const KeyValueConfig& values,
                  std::ostream& out, std::ostream& err);

}  // namespace blift

#endif  // BLIFT_PIPELINE_H_
