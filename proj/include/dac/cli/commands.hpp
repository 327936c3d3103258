#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dac/cli/experiment_config.hpp"

namespace dac::cli {

inline const std::vector<std::string> kCommands = {"toy-data", "prepare",  "pretrain-gen", "pretrain-disc",
                                                   "train-gan", "generate", "evaluate",     "stats"};

/// Command-line values that override the resolved config. --epochs applies
/// to the epoch count of the phase being run.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> sigma;
  std::optional<double> lambda;
  std::optional<std::int64_t> epochs;
  std::optional<std::int64_t> batch_size;
  std::optional<double> lr;
  std::optional<std::string> noise_mode;
  std::optional<std::int64_t> beam_size;
  std::optional<std::int64_t> num_samples;
  std::optional<std::string> components;
  bool baseline = false;
};

struct CommandOptions {
  std::string config_path;  // --config
  std::string out_dir;      // --out; empty -> config value
  Overrides overrides;
  // toy-data
  std::size_t clips = 20;
  std::size_t val_clips = 0;
  // prepare: raw manifest of {"clip_id", "audio", "captions"} lines
  std::string input;
  std::string split = "train";  // train | validation | eval
  // generate / evaluate / stats
  std::string checkpoint;
  std::string captions;
};

/// Run directory layout.
class RunLayout {
 public:
  explicit RunLayout(std::filesystem::path root) : root_(std::move(root)) {}
  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path config() const { return root_ / "config.json"; }
  std::filesystem::path vocab() const { return root_ / "vocab.json"; }
  std::filesystem::path data(const std::string& name) const { return root_ / "data" / name; }
  std::filesystem::path checkpoint(const std::string& name) const { return root_ / "checkpoints" / (name + ".pt"); }
  std::filesystem::path log() const { return root_ / "logs" / "train.jsonl"; }
  std::filesystem::path captions(const std::string& name) const { return root_ / "captions" / (name + ".json"); }
  std::filesystem::path report(const std::string& file) const { return root_ / "reports" / file; }
  /// Creates every subdirectory.
  void create() const;

 private:
  std::filesystem::path root_;
};

/// Config precedence: --config file, else <out>/config.json if it exists,
/// else the preset (toy for `toy-data`, paper otherwise); flags last.
/// Relative manifest paths in a file are taken relative to that file.
ExperimentConfig resolve_config(const std::string& command, const CommandOptions& options);

/// Runs one subcommand, echoing the effective config into the run
/// directory. Errors are thrown (ConfigError, InputError, LoadError,
/// TrainingError, std::invalid_argument); the caller maps them to an exit
/// status.
void run_command(const std::string& command, const CommandOptions& options);

}  // namespace dac::cli
