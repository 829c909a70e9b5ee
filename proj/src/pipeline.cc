#include "blift/pipeline.h"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "blift/dedup.h"
#include "blift/errors.h"
#include "blift/filter.h"
#include "blift/metrics.h"
#include "blift/parallel.h"
#include "blift/scene.h"
#include "blift/templates.h"

namespace blift {
namespace fs = std::filesystem;

namespace {

constexpr const char* kInputPathKeys[] = {
    "dump",    "sidecar",     "descriptors", "nsfw_vocab", "scenes",
    "salicon", "predictions", "logprobs",    "input"};

std::ifstream OpenInput(const fs::path& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("no ") + what + " given");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + std::string(what) + " " + path.string());
  return in;
}

void WriteFile(const fs::path& path, const std::string& bytes) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << bytes;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

void PrintDiagnostics(std::string_view source,
                      const std::vector<Diagnostic>& diagnostics,
                      std::ostream& err) {
  for (const auto& d : diagnostics) {
    err << source << ":" << d.line << ": " << d.message << "\n";
  }
}

MediaDump LoadDump(const PipelineConfig& config, std::ostream& err) {
  auto in = OpenInput(config.dump, "dump");
  MediaDump dump = ReadMediaDump(in, config.platform, config.worker_count);
  PrintDiagnostics(config.dump.string(), dump.diagnostics, err);
  return dump;
}

std::string PostsToJsonl(const std::vector<MediaPost>& posts) {
  std::string out;
  for (const auto& p : posts) {
    out += SerializeMediaPost(p);
    out += '\n';
  }
  return out;
}

std::map<std::string, std::vector<Scene>> SegmentAll(
    const std::vector<MediaPost>& posts, const DescriptorSet& descriptors,
    double min_scene_s, int workers, std::vector<std::string>* diagnostics) {
  std::vector<const MediaPost*> videos;
  for (const auto& p : posts) {
    if (p.media_kind == MediaKind::kVideo) videos.push_back(&p);
  }
  std::sort(videos.begin(), videos.end(),
            [](auto* a, auto* b) { return a->id < b->id; });
  std::vector<std::optional<std::vector<Scene>>> scenes(videos.size());
  std::vector<std::string> errors(videos.size());
  ParallelFor(videos.size(), workers, [&](std::size_t i) {
    const MediaPost& post = *videos[i];
    auto track = descriptors.tracks.find(post.id);
    if (track == descriptors.tracks.end()) {
      errors[i] = "post " + post.id + ": no descriptor track";
      return;
    }
    try {
      scenes[i] = SegmentScenes(track->second, *post.duration_s, min_scene_s);
    } catch (const ValidationError& e) {
      errors[i] = "post " + post.id + ": " + e.what();
    }
  });
  std::map<std::string, std::vector<Scene>> out;
  for (std::size_t i = 0; i < videos.size(); ++i) {
    if (scenes[i]) {
      out.emplace(videos[i]->id, std::move(*scenes[i]));
    } else if (diagnostics) {
      diagnostics->push_back(std::move(errors[i]));
    }
  }
  return out;
}

std::map<std::string, std::vector<Scene>> ReadScenesFile(const fs::path& path) {
  auto in = OpenInput(path, "scenes file");
  std::map<std::string, std::vector<Scene>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out[j.at("post_id").get<std::string>()] = ScenesFromJson(j.at("scenes"));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                            ": " + e.what());
    }
  }
  return out;
}

std::string ScenesToJsonl(const std::map<std::string, std::vector<Scene>>& all) {
  std::string out;
  for (const auto& [post_id, scenes] : all) {
    nlohmann::ordered_json j;
    j["post_id"] = post_id;
    j["scenes"] = ScenesToJson(scenes);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string RecordsToJsonl(const std::vector<InstructionRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += SerializeRecord(r);
    out += '\n';
  }
  return out;
}

}  // namespace

PipelineConfig PipelineConfig::FromKeyValues(const KeyValueConfig& values) {
  PipelineConfig c;
  c.values = values;
  for (const char* key : kInputPathKeys) {
    auto v = values.Get(key);
    if (!v || Trim(*v).empty()) continue;
    const fs::path path(std::string(Trim(*v)));
    if (!fs::exists(path)) {
      throw ConfigError(std::string(key) + ": " + path.string() +
                        " does not exist");
    }
  }
  auto path_of = [&](const char* key) {
    return fs::path(std::string(Trim(values.GetString(key, ""))));
  };
  c.dump = path_of("dump");
  c.sidecar = path_of("sidecar");
  c.descriptors = path_of("descriptors");
  c.nsfw_vocab = path_of("nsfw_vocab");
  c.scenes = path_of("scenes");
  c.salicon = path_of("salicon");
  c.predictions = path_of("predictions");
  c.logprobs = path_of("logprobs");
  c.input = path_of("input");
  if (auto v = values.Get("output_dir"); v && !Trim(*v).empty()) {
    c.output_dir = std::string(Trim(*v));
  }
  if (auto v = values.Get("platform")) {
    auto p = ParsePlatform(Trim(*v));
    if (!p) throw ConfigError("platform: unknown value '" + *v + "'");
    c.platform = *p;
  }
  const auto workers = values.GetInt("workers", 1);
  if (workers < 1 || workers > 1024) {
    throw ConfigError("workers must be between 1 and 1024");
  }
  c.worker_count = static_cast<int>(workers);
  c.oracle_mode = values.GetBool("oracle", false);
  c.include_behavior = values.GetBool("behavior", true);
  c.variant = values.GetString("variant", "blift");
  if (c.variant != "blift" && c.variant != "salicon") {
    throw ConfigError("variant must be blift or salicon");
  }
  c.min_scene_s = values.GetDouble("min_scene_s", kDefaultMinSceneSeconds);
  if (!(c.min_scene_s >= 0.0)) throw ConfigError("min_scene_s must be >= 0");
  c.checkpoint_id = values.GetString("checkpoint_id", "checkpoint");
  c.epochs = values.GetDouble("epochs", 0.0);

  auto positive = [&](const char* key, std::int64_t fallback) {
    const auto v = values.GetInt(key, fallback);
    if (v < 1) throw ConfigError(std::string(key) + " must be >= 1");
    return static_cast<std::uint64_t>(v);
  };
  c.mixture.blift_count = positive("blift_count", 1);
  c.mixture.ift_count = positive("ift_count", 1);
  c.mixture.ratio = ParseSamplingRatio(values.GetString("ratio", "1:1"));
  const auto seed = values.GetInt("seed", 0);
  c.mixture.seed = static_cast<std::uint64_t>(seed);
  c.mixture.target_epochs = values.GetDouble("target_epochs", 1.0);
  if (!(c.mixture.target_epochs > 0.0)) {
    throw ConfigError("target_epochs must be positive");
  }
  return c;
}

int RunIngestCheck(const PipelineConfig& config, std::ostream& out,
                   std::ostream& err) {
  std::size_t problems = 0;
  const MediaDump dump = LoadDump(config, err);
  out << "dump: " << dump.lines << " lines, " << dump.posts.size()
      << " posts, " << dump.diagnostics.size() << " skipped\n";
  problems += dump.diagnostics.size();
  if (!config.sidecar.empty()) {
    auto in = OpenInput(config.sidecar, "sidecar");
    const AnnotationSet set = ParseAnnotationSidecar(in);
    PrintDiagnostics(config.sidecar.string(), set.diagnostics, err);
    out << "sidecar: " << set.by_post.size() << " posts annotated, "
        << set.diagnostics.size() << " problems\n";
    problems += set.diagnostics.size();
  }
  if (!config.descriptors.empty()) {
    auto in = OpenInput(config.descriptors, "descriptors");
    const DescriptorSet set = ParseDescriptorTracks(in);
    PrintDiagnostics(config.descriptors.string(), set.diagnostics, err);
    out << "descriptors: " << set.tracks.size() << " tracks (dim " << set.dim
        << "), " << set.renormalized << " renormalized, "
        << set.diagnostics.size() << " problems\n";
    problems += set.diagnostics.size();
  }
  return problems == 0 ? kExitOk : kExitValidation;
}

int RunFilter(const PipelineConfig& config, std::ostream& out,
              std::ostream& err) {
  // Policy (and its vocabulary) is loaded before any input is read.
  const FilterPolicy policy = LoadFilterPolicy(config.values, config.platform);
  MediaDump dump = LoadDump(config, err);
  CascadeOptions options;
  options.workers = config.worker_count;
  options.dedup_mode =
      config.oracle_mode ? DedupMode::kReference : DedupMode::kIndexed;
  const CascadeResult result =
      RunCascade(std::move(dump.posts), policy, options);
  WriteFile(config.output_dir / "posts.retained.jsonl",
            PostsToJsonl(result.retained));
  WriteFile(config.output_dir / "report.json",
            result.report.ToJson().dump(2) + "\n");
  out << result.report.ToTable();
  return kExitOk;
}

int RunDedupOracle(const PipelineConfig& config, std::ostream& out,
                   std::ostream& err) {
  const FilterPolicy policy = LoadFilterPolicy(config.values, config.platform);
  MediaDump dump = LoadDump(config, err);
  CascadeOptions fast;
  fast.workers = config.worker_count;
  CascadeOptions oracle = fast;
  oracle.dedup_mode = DedupMode::kReference;
  const auto a = RunCascade(dump.posts, policy, fast);
  const auto b = RunCascade(std::move(dump.posts), policy, oracle);
  const bool same = a.report == b.report &&
                    PostsToJsonl(a.retained) == PostsToJsonl(b.retained);
  out << "indexed vs reference dedup: " << (same ? "identical" : "MISMATCH")
      << " (" << a.retained.size() << " posts retained)\n";
  return same ? kExitOk : kExitValidation;
}

int RunSegment(const PipelineConfig& config, std::ostream& out,
               std::ostream& err) {
  const MediaDump dump = LoadDump(config, err);
  auto in = OpenInput(config.descriptors, "descriptors");
  const DescriptorSet descriptors = ParseDescriptorTracks(in);
  PrintDiagnostics(config.descriptors.string(), descriptors.diagnostics, err);
  std::vector<std::string> problems;
  const auto scenes = SegmentAll(dump.posts, descriptors, config.min_scene_s,
                                 config.worker_count, &problems);
  for (const auto& p : problems) err << p << "\n";
  WriteFile(config.output_dir / "scenes.jsonl", ScenesToJsonl(scenes));
  out << "segmented " << scenes.size() << " videos, " << problems.size()
      << " skipped\n";
  return kExitOk;
}

namespace {

int RunSaliconTemplates(const PipelineConfig& config, std::ostream& out,
                        std::ostream& err) {
  auto in = OpenInput(config.salicon, "salicon file");
  std::vector<std::pair<std::string, InstructionRecord>> records;
  std::string line;
  std::size_t line_no = 0;
  std::size_t skipped = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto id = j.at("image_id").get<std::string>();
      if (j.contains("regions")) {
        records.emplace_back(
            id + ":r", BuildSaliencyRegionRecord(
                           id, j.at("regions").get<std::vector<std::string>>()));
      }
      if (j.contains("objects")) {
        records.emplace_back(
            id + ":o",
            BuildSaliencyObjectRecord(
                id, j.at("objects").get<std::vector<std::string>>(),
                j.at("saliency_order").get<std::vector<std::string>>()));
      }
    } catch (const std::exception& e) {
      err << config.salicon.string() << ":" << line_no << ": " << e.what()
          << "\n";
      ++skipped;
    }
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string bytes;
  for (const auto& [key, r] : records) bytes += SerializeRecord(r) + "\n";
  WriteFile(config.output_dir / "instructions.jsonl", bytes);
  out << "wrote " << records.size() << " saliency records, " << skipped
      << " skipped\n";
  return kExitOk;
}

}  // namespace

int RunTemplate(const PipelineConfig& config, std::ostream& out,
                std::ostream& err) {
  if (config.variant == "salicon") return RunSaliconTemplates(config, out, err);

  const MediaDump dump = LoadDump(config, err);
  auto sidecar = OpenInput(config.sidecar, "sidecar");
  const AnnotationSet annotations = ParseAnnotationSidecar(sidecar);
  PrintDiagnostics(config.sidecar.string(), annotations.diagnostics, err);

  std::map<std::string, std::vector<Scene>> scenes;
  if (!config.scenes.empty()) {
    scenes = ReadScenesFile(config.scenes);
  } else if (!config.descriptors.empty()) {
    auto in = OpenInput(config.descriptors, "descriptors");
    const DescriptorSet descriptors = ParseDescriptorTracks(in);
    PrintDiagnostics(config.descriptors.string(), descriptors.diagnostics, err);
    scenes = SegmentAll(dump.posts, descriptors, config.min_scene_s,
                        config.worker_count, nullptr);
  }

  const TemplateBatch batch =
      GenerateBliftRecords(dump.posts, annotations.by_post, scenes,
                           config.include_behavior, config.worker_count);
  for (const auto& d : batch.diagnostics) err << d << "\n";
  WriteFile(config.output_dir / "instructions.jsonl",
            RecordsToJsonl(batch.records));
  out << "wrote " << batch.records.size() << " "
      << (config.include_behavior ? "behavior" : "ad_control")
      << " records, " << batch.diagnostics.size() << " skipped\n";
  return kExitOk;
}

int RunMix(const PipelineConfig& config, std::ostream& out, std::ostream&) {
  const MixtureSchedule schedule = PlanMixture(config.mixture);
  WriteFile(config.output_dir / "schedule.jsonl", SerializeSchedule(schedule));
  out << "schedule: " << schedule.entries.size() << " steps, "
      << BliftEntryTarget(config.mixture) << " blift entries, ratio "
      << ToString(config.mixture.ratio) << ", "
      << EpochsElapsed(schedule, schedule.entries.size()) << " epochs\n";
  return kExitOk;
}

int RunEval(const PipelineConfig& config, std::ostream& out,
            std::ostream& err) {
  EvalReport report;
  report.checkpoint_id = config.checkpoint_id;
  report.epochs = config.epochs;
  {
    auto in = OpenInput(config.predictions, "predictions");
    std::vector<Diagnostic> diagnostics;
    const auto rows = ReadPredictions(in, &diagnostics);
    PrintDiagnostics(config.predictions.string(), diagnostics, err);
    std::vector<double> predicted, actual;
    for (const auto& r : rows) {
      predicted.push_back(r.predicted);
      actual.push_back(r.actual);
    }
    report.r2_likes_views = RSquared(predicted, actual);
  }
  {
    auto in = OpenInput(config.logprobs, "log-prob file");
    std::vector<Diagnostic> diagnostics;
    const auto rows = ReadLogProbs(in, &diagnostics);
    PrintDiagnostics(config.logprobs.string(), diagnostics, err);
    report.comment_perplexity = CommentPerplexity(rows);
  }
  if (auto v = config.values.Get("performance")) {
    report.aux_metrics["performance"] =
        config.values.GetDouble("performance", 0.0);
  }
  const std::string bytes = report.ToJson().dump(2) + "\n";
  WriteFile(config.output_dir / "eval.json", bytes);
  out << bytes;
  return kExitOk;
}

int RunReport(const PipelineConfig& config, std::ostream& out,
              std::ostream&) {
  auto in = OpenInput(config.input, "report");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  // A single FilterReport, or one or more EvalReports (JSON or JSONL).
  std::vector<nlohmann::json> docs;
  try {
    docs.push_back(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error&) {
    docs.clear();
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        docs.push_back(nlohmann::json::parse(line));
      } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("report is not JSON: ") + e.what());
      }
    }
  }
  if (docs.size() == 1 && docs.front().contains("stages")) {
    out << FilterReport::FromJson(docs.front()).ToTable();
    return kExitOk;
  }
  std::vector<EvalReport> reports;
  for (const auto& d : docs) reports.push_back(EvalReport::FromJson(d));
  for (const auto& r : reports) {
    out << r.checkpoint_id << "  epochs=" << r.epochs
        << "  r2=" << r.r2_likes_views << "  ppl=" << r.comment_perplexity;
    for (const auto& [k, v] : r.aux_metrics) out << "  " << k << "=" << v;
    out << "\n";
  }
  out << "best: " << SelectBestCheckpoint(reports) << "\n";
  return kExitOk;
}

int RunSubcommand(const std::string& name, const KeyValueConfig& values,
                  std::ostream& out, std::ostream& err) {
  static const std::map<std::string,
                        std::function<int(const PipelineConfig&,
                                          std::ostream&, std::ostream&)>>
      kCommands = {
          {"ingest-check", RunIngestCheck}, {"filter", RunFilter},
          {"dedup-oracle", RunDedupOracle}, {"segment", RunSegment},
          {"template", RunTemplate},        {"mix", RunMix},
          {"eval", RunEval},                {"report", RunReport},
      };
  auto it = kCommands.find(name);
  if (it == kCommands.end()) {
    err << "unknown subcommand " << name << "\n";
    return kExitConfig;
  }
  try {
    const PipelineConfig config = PipelineConfig::FromKeyValues(values);
    return it->second(config, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace blift
