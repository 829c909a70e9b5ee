// Command-line front end for the blift pipeline.
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blift/config.h"
#include "blift/errors.h"
#include "blift/pipeline.h"

namespace {

using Overrides = std::map<std::string, std::string>;

void AddValue(CLI::App* app, Overrides* overrides, const std::string& flag,
              const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      flag, [overrides, key](const std::string& v) { (*overrides)[key] = v; },
      help);
}

void AddSwitch(CLI::App* app, Overrides* overrides, const std::string& flag,
               const std::string& key, const std::string& value,
               const std::string& help) {
  app->add_flag_callback(
      flag, [overrides, key, value] { (*overrides)[key] = value; }, help);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavior-in-the-wild instruction data pipeline"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string config_path;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "key = value config file")
      ->check(CLI::ExistingFile);
  app.add_option("--set", sets, "override a config key (key=value)");
  AddValue(&app, &overrides, "--workers", "workers", "worker threads");
  AddValue(&app, &overrides, "--seed", "seed", "random seed");
  AddValue(&app, &overrides, "--platform", "platform", "youtube | reddit");
  AddValue(&app, &overrides, "-o,--out", "output_dir", "output directory");
  AddSwitch(&app, &overrides, "--oracle", "oracle", "true",
            "use the reference pairwise dedup");

  struct Command {
    const char* name;
    const char* help;
    std::vector<std::pair<std::string, std::string>> inputs;  // flag, key
  };
  const std::vector<Command> commands = {
      {"ingest-check", "validate a dump, sidecar and descriptor file",
       {{"--dump", "dump"},
        {"--sidecar", "sidecar"},
        {"--descriptors", "descriptors"}}},
      {"filter", "run the filter cascade",
       {{"--dump", "dump"}, {"--nsfw-vocab", "nsfw_vocab"}}},
      {"dedup-oracle", "compare indexed and reference comment dedup",
       {{"--dump", "dump"}, {"--nsfw-vocab", "nsfw_vocab"}}},
      {"segment", "segment videos into scenes",
       {{"--dump", "dump"},
        {"--descriptors", "descriptors"},
        {"--min-scene-s", "min_scene_s"}}},
      {"template", "render instruction records",
       {{"--dump", "dump"},
        {"--sidecar", "sidecar"},
        {"--scenes", "scenes"},
        {"--descriptors", "descriptors"},
        {"--salicon", "salicon"},
        {"--variant", "variant"},
        {"--min-scene-s", "min_scene_s"}}},
      {"mix", "plan the training data mixture",
       {{"--blift-count", "blift_count"},
        {"--ift-count", "ift_count"},
        {"--ratio", "ratio"},
        {"--epochs", "target_epochs"}}},
      {"eval", "score a checkpoint",
       {{"--predictions", "predictions"},
        {"--logprobs", "logprobs"},
        {"--checkpoint", "checkpoint_id"},
        {"--epochs", "epochs"},
        {"--performance", "performance"}}},
      {"report", "render a filter or eval report",
       {{"--input", "input"}}},
  };

  std::string chosen;
  for (const auto& command : commands) {
    CLI::App* sub = app.add_subcommand(command.name, command.help);
    sub->fallthrough();
    for (const auto& [flag, key] : command.inputs) {
      AddValue(sub, &overrides, flag, key, key);
    }
    if (std::string(command.name) == "template") {
      AddSwitch(sub, &overrides, "--no-behavior", "behavior", "false",
                "emit ad_control records without the behavior block");
    }
    sub->callback([&chosen, name = command.name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? blift::kExitOk : blift::kExitConfig;
  }

  blift::KeyValueConfig values;
  try {
    if (!config_path.empty()) {
      values = blift::KeyValueConfig::ParseFile(config_path);
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) {
        throw blift::ConfigError("--set expects key=value, got '" + s + "'");
      }
      values.Set(std::string(blift::Trim(s.substr(0, eq))),
                 std::string(blift::Trim(s.substr(eq + 1))));
    }
  } catch (const blift::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return blift::kExitConfig;
  } catch (const blift::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return blift::kExitIo;
  }
  for (const auto& [key, value] : overrides) values.Set(key, value);

  return blift::RunSubcommand(chosen, values, std::cout, std::cerr);
}
