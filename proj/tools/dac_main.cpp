#include <iostream>

#include <CLI11.hpp>
#include <torch/torch.h>

#include "dac/cli/commands.hpp"
#include "dac/errors.hpp"

namespace {

template <typename T>
void optional_flag(CLI::App& app, const std::string& name, std::optional<T>& target, const std::string& help) {
  app.add_option_function<T>(name, [&target](const T& v) { target = v; }, help);
}

void add_common(CLI::App& app, dac::cli::CommandOptions& o) {
  app.add_option("--config", o.config_path, "experiment config JSON");
  app.add_option("--out", o.out_dir, "run directory");
  auto& v = o.overrides;
  optional_flag(app, "--seed", v.seed, "root seed");
  optional_flag(app, "--sigma", v.sigma, "noise standard deviation");
  optional_flag(app, "--lambda", v.lambda, "discriminator vs evaluator reward weight");
  optional_flag(app, "--epochs", v.epochs, "epochs of this phase");
  optional_flag(app, "--batch-size", v.batch_size, "mini-batch size");
  optional_flag(app, "--lr", v.lr, "generator learning rate");
  optional_flag(app, "--noise-mode", v.noise_mode, "per-step or fixed");
  optional_flag(app, "--beam-size", v.beam_size, "beam width for --baseline");
  optional_flag(app, "--num-samples", v.num_samples, "captions per clip");
  optional_flag(app, "--components", v.components, "reward components: subset of nd,sd,le or all");
  app.add_flag("--baseline", v.baseline, "noise-free MLE baseline (pretrain-gen, generate, evaluate, stats)");
}

}  // namespace

int main(int argc, char** argv) {
  torch::set_num_threads(1);
  CLI::App app{"Diverse audio captioning with a conditional GAN"};
  app.require_subcommand(1);
  dac::cli::CommandOptions options;

  auto* toy = app.add_subcommand("toy-data", "write a synthetic toy corpus into <out>/data");
  toy->add_option("--clips", options.clips, "training clips")->check(CLI::Range(2, 100000));
  toy->add_option("--val-clips", options.val_clips, "validation clips (0 for none)");

  auto* prepare = app.add_subcommand("prepare", "extract log-mel features for a raw audio manifest");
  prepare->add_option("--input", options.input, "JSON Lines of {clip_id, audio, captions}")->required();
  prepare->add_option("--split", options.split, "which manifest path to set")
      ->check(CLI::IsMember({"train", "validation", "eval"}));

  app.add_subcommand("pretrain-gen", "MLE pretraining (noise-free baseline with --baseline)");
  app.add_subcommand("pretrain-disc", "pretrain the naturalness and semantic discriminators");
  app.add_subcommand("train-gan", "adversarial training; pretrains the discriminators if needed");
  auto* generate = app.add_subcommand("generate", "caption the evaluation clips");
  auto* evaluate = app.add_subcommand("evaluate", "fidelity and diversity metrics of a captions file");
  auto* stats = app.add_subcommand("stats", "n-gram count ratios and vocabulary threshold curves");
  generate->add_option("--checkpoint", options.checkpoint, "generator checkpoint to decode with");
  for (auto* sub : {generate, evaluate, stats}) {
    sub->add_option("--captions", options.captions, "captions JSON path");
  }
  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) {
    add_common(*sub, options);
  }

  CLI11_PARSE(app, argc, argv);
  const auto command = app.get_subcommands().front()->get_name();
  try {
    dac::cli::run_command(command, options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
