#include "dac/cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "dac/cli/captions_io.hpp"
#include "dac/corpus/manifest.hpp"
#include "dac/corpus/toy_dataset.hpp"
#include "dac/errors.hpp"
#include "dac/features/log_mel.hpp"
#include "dac/features/wav.hpp"
#include "dac/metrics/corpus_stats.hpp"
#include "dac/metrics/report.hpp"
#include "dac/model/checkpoint.hpp"
#include "dac/training/adversarial.hpp"
#include "dac/training/discriminator_pretrain.hpp"
#include "dac/training/inference.hpp"
#include "dac/training/mle.hpp"

namespace fs = std::filesystem;

namespace dac::cli {
namespace {

void resolve_relative(std::string& path, const fs::path& base) {
  if (!path.empty() && fs::path(path).is_relative()) {
    path = (base / path).lexically_normal().string();
  }
}

void apply_overrides(ExperimentConfig& c, const std::string& command, const Overrides& o) {
  if (o.seed) {
    c.training.seed = *o.seed;
  }
  if (o.sigma) {
    c.generator.noise_sigma = *o.sigma;
  }
  if (o.noise_mode) {
    c.generator.noise_mode = model::parse_noise_mode(*o.noise_mode);
  }
  if (o.lambda) {
    c.training.lambda = *o.lambda;
  }
  if (o.batch_size) {
    c.training.batch_size = *o.batch_size;
  }
  if (o.lr) {
    (command == "train-gan" ? c.training.adv_learning_rate : c.training.learning_rate) = *o.lr;
  }
  if (o.components) {
    c.training.components = training::ComponentMask::parse(*o.components);
  }
  if (o.beam_size) {
    c.generation.beam_size = *o.beam_size;
  }
  if (o.num_samples) {
    c.generation.num_samples = *o.num_samples;
  }
  if (o.baseline) {
    c.generation.baseline = true;
  }
  if (o.epochs) {
    if (command == "pretrain-gen") {
      (o.baseline ? c.training.baseline_epochs : c.training.mle_epochs) = *o.epochs;
    } else if (command == "pretrain-disc") {
      c.training.disc_pretrain_epochs = *o.epochs;
    } else if (command == "train-gan") {
      c.training.adv_epochs = *o.epochs;
    } else {
      throw ConfigError("--epochs has no meaning for " + command);
    }
  }
}

/// Shared state of one invocation: effective config, layout, log.
struct Run {
  ExperimentConfig config;
  RunLayout layout;
  training::TrainLog log;

  explicit Run(ExperimentConfig c)
      : config(std::move(c)), layout(config.paths.out_dir) {
    layout.create();
    config.save(layout.config().string());
    log = training::TrainLog(layout.log().string());
  }

  void save_config() const { config.save(layout.config().string()); }

  std::uint64_t seed(const char* phase) const { return training::phase_seed(config.training.seed, phase); }

  std::vector<corpus::AudioClip> train_clips() const {
    if (config.paths.train_manifest.empty()) {
      throw ConfigError("paths.train_manifest is not set (run toy-data or prepare first, or pass --config)");
    }
    return corpus::load_manifest(config.paths.train_manifest);
  }

  std::vector<corpus::AudioClip> eval_clips() const {
    return config.paths.eval_manifest.empty() ? train_clips() : corpus::load_manifest(config.paths.eval_manifest);
  }

  corpus::Vocabulary vocabulary(const std::vector<corpus::AudioClip>& train) const {
    if (fs::exists(layout.vocab())) {
      return corpus::Vocabulary::load(layout.vocab().string());
    }
    auto vocab = corpus::Vocabulary::build(corpus::all_captions(train));
    vocab.save(layout.vocab().string());
    return vocab;
  }

  /// Generator config with the vocabulary size filled in.
  model::GeneratorConfig generator_config(const corpus::Vocabulary& vocab) {
    config.generator.vocab_size = static_cast<std::int64_t>(vocab.size());
    save_config();
    return config.generator;
  }

  std::string require(const fs::path& path, const char* produced_by) const {
    if (!fs::exists(path)) {
      throw LoadError("missing " + path.string() + " (produced by " + produced_by + ")");
    }
    return path.string();
  }
};

void toy_data(Run& run, const CommandOptions& options) {
  const auto seed = run.config.training.seed;
  const auto train = corpus::make_toy_dataset(seed, options.clips);
  const auto train_path = run.layout.data("train.jsonl");
  corpus::write_manifest(train_path.string(), train.clips);
  run.config.paths.train_manifest = train_path.string();
  std::cout << "wrote " << train.clips.size() << " toy clips to " << train_path.string() << '\n';
  if (options.val_clips > 0) {
    // a different seed, so validation clips are new draws of the same classes
    const auto val = corpus::make_toy_dataset(training::phase_seed(seed, "toy-validation"), options.val_clips);
    const auto val_path = run.layout.data("validation.jsonl");
    corpus::write_manifest(val_path.string(), val.clips);
    run.config.paths.validation_manifest = val_path.string();
    std::cout << "wrote " << val.clips.size() << " validation clips to " << val_path.string() << '\n';
  }
  run.save_config();
}

void prepare(Run& run, const CommandOptions& options) {
  if (options.input.empty()) {
    throw ConfigError("prepare needs --input <raw manifest>");
  }
  if (options.split != "train" && options.split != "validation" && options.split != "eval") {
    throw ConfigError("--split must be train, validation or eval");
  }
  std::ifstream in(options.input);
  if (!in) {
    throw LoadError("cannot open raw manifest " + options.input);
  }
  const auto base = fs::path(options.input).parent_path();
  features::LogMelExtractor extract(run.config.mel);
  std::vector<corpus::AudioClip> clips;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const auto where = options.input + ":" + std::to_string(line_no);
    corpus::AudioClip clip;
    std::string audio;
    try {
      const auto j = nlohmann::json::parse(line);
      clip.clip_id = j.at("clip_id").get<std::string>();
      audio = j.at("audio").get<std::string>();
      const auto captions = j.at("captions").get<std::vector<std::string>>();
      if (captions.size() != corpus::kRefsPerClip) {
        throw LoadError(where + ": expected 5 captions, found " + std::to_string(captions.size()));
      }
      std::copy(captions.begin(), captions.end(), clip.captions.begin());
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(where + ": " + e.what());
    }
    const auto wav_path = fs::path(audio).is_relative() ? base / audio : fs::path(audio);
    const auto wave = features::read_wav(wav_path.string());
    if (wave.sample_rate != run.config.mel.sample_rate) {
      throw InputError(where + ": " + wav_path.string() + " is sampled at " + std::to_string(wave.sample_rate) +
                       " Hz, expected " + std::to_string(run.config.mel.sample_rate));
    }
    clip.features = extract(wave.samples);
    clips.push_back(std::move(clip));
  }
  if (clips.empty()) {
    throw LoadError(options.input + " lists no clips");
  }
  const auto out = run.layout.data(options.split + ".jsonl");
  corpus::write_manifest(out.string(), clips);
  if (options.split == "train") {
    run.config.paths.train_manifest = out.string();
  } else if (options.split == "validation") {
    run.config.paths.validation_manifest = out.string();
  } else {
    run.config.paths.eval_manifest = out.string();
  }
  run.save_config();
  std::cout << "wrote " << clips.size() << " clips to " << out.string() << '\n';
}

void pretrain_gen(Run& run) {
  const bool baseline = run.config.generation.baseline;
  const auto clips = run.train_clips();
  const auto vocab = run.vocabulary(clips);
  auto config = run.generator_config(vocab);
  auto tc = run.config.training;
  if (baseline) {
    config.noise_sigma = 0.0;
    tc.mle_epochs = tc.baseline_epochs;
  }
  torch::manual_seed(run.seed(baseline ? "init-baseline" : "init-generator"));
  model::CaptionGenerator generator(config);
  training::TrainingSet data(clips, vocab);
  const char* phase = baseline ? "baseline" : "mle";
  const auto losses = training::pretrain_generator(*generator, data, tc, &run.log, phase);
  const auto path = run.layout.checkpoint(baseline ? "baseline" : "generator_mle");
  model::save_generator(path.string(), *generator, {{"phase", phase}, {"epochs", tc.mle_epochs}});
  std::cout << phase << ": " << tc.mle_epochs << " epochs";
  if (!losses.empty()) {
    std::cout << ", final loss " << losses.back();
  }
  std::cout << "\nsaved " << path.string() << '\n';
}

struct Discriminators {
  discriminators::NaturalnessDiscriminator naturalness{nullptr};
  discriminators::SemanticDiscriminator semantic{nullptr};
};

Discriminators pretrain_disc(Run& run, model::CaptionGeneratorImpl& generator, const training::TrainingSet& data) {
  const auto dcfg = model::DiscriminatorConfig::matching(generator.config(), run.config.discriminator);
  torch::manual_seed(run.seed("init-discriminators"));
  Discriminators d{discriminators::NaturalnessDiscriminator(dcfg), discriminators::SemanticDiscriminator(dcfg)};
  const auto result =
      training::pretrain_discriminators(generator, *d.naturalness, *d.semantic, data, run.config.training, &run.log);
  discriminators::save_naturalness(run.layout.checkpoint("naturalness_pretrained").string(), *d.naturalness);
  discriminators::save_semantic(run.layout.checkpoint("semantic_pretrained").string(), *d.semantic);
  std::cout << "discriminators: " << run.config.training.disc_pretrain_epochs << " epochs";
  if (!result.naturalness_losses.empty()) {
    std::cout << ", final D_N loss " << result.naturalness_losses.back() << ", D_S loss "
              << result.semantic_losses.back();
  }
  std::cout << '\n';
  return d;
}

model::CaptionGenerator load_mle_generator(Run& run, const corpus::Vocabulary& vocab) {
  const auto expected = run.generator_config(vocab);
  return model::load_generator(run.require(run.layout.checkpoint("generator_mle"), "pretrain-gen"), &expected);
}

void pretrain_disc_command(Run& run) {
  const auto clips = run.train_clips();
  const auto vocab = run.vocabulary(clips);
  auto generator = load_mle_generator(run, vocab);
  training::TrainingSet data(clips, vocab);
  pretrain_disc(run, *generator, data);
}

void train_gan(Run& run) {
  const auto clips = run.train_clips();
  const auto vocab = run.vocabulary(clips);
  auto generator = load_mle_generator(run, vocab);
  training::TrainingSet data(clips, vocab);
  const auto dcfg = model::DiscriminatorConfig::matching(generator->config(), run.config.discriminator);

  Discriminators d;
  const auto dn_path = run.layout.checkpoint("naturalness_pretrained");
  const auto ds_path = run.layout.checkpoint("semantic_pretrained");
  if (fs::exists(dn_path) && fs::exists(ds_path)) {
    d.naturalness = discriminators::load_naturalness(dn_path.string(), &dcfg);
    d.semantic = discriminators::load_semantic(ds_path.string(), &dcfg);
  } else {
    std::cout << "no pretrained discriminators in " << run.layout.root().string() << ", pretraining them first\n";
    d = pretrain_disc(run, *generator, data);
  }

  std::optional<training::TrainingSet> validation;
  if (!run.config.paths.validation_manifest.empty()) {
    validation.emplace(corpus::load_manifest(run.config.paths.validation_manifest), vocab);
  }
  const auto result = training::train_adversarial(*generator, *d.naturalness, *d.semantic, data, run.config.training,
                                                  validation ? &*validation : nullptr, &run.log);
  nlohmann::json extra = {{"phase", "adversarial"}, {"epochs", run.config.training.adv_epochs}};
  if (result.selected_epoch) {
    extra["selected_epoch"] = *result.selected_epoch;
  }
  model::save_generator(run.layout.checkpoint("generator_gan").string(), *generator, extra);
  discriminators::save_naturalness(run.layout.checkpoint("naturalness_gan").string(), *d.naturalness);
  discriminators::save_semantic(run.layout.checkpoint("semantic_gan").string(), *d.semantic);
  std::cout << "adversarial: " << result.epochs.size() << " epochs, " << result.generator_steps
            << " generator steps";
  if (!result.epochs.empty()) {
    std::cout << ", final mean reward " << result.epochs.back().mean_reward;
  }
  if (result.selected_epoch) {
    std::cout << ", kept epoch " << *result.selected_epoch;
  }
  std::cout << '\n';
}

std::string captions_name(const ExperimentConfig& config) {
  return config.generation.baseline ? "baseline" : "generated";
}

fs::path captions_path(const Run& run, const CommandOptions& options) {
  return options.captions.empty() ? run.layout.captions(captions_name(run.config)) : fs::path(options.captions);
}

void generate(Run& run, const CommandOptions& options) {
  const auto& gen = run.config.generation;
  const auto train = run.train_clips();
  const auto vocab = run.vocabulary(train);
  const auto expected = run.generator_config(vocab);
  std::string checkpoint = options.checkpoint;
  if (checkpoint.empty()) {
    checkpoint = gen.baseline ? run.require(run.layout.checkpoint("baseline"), "pretrain-gen --baseline")
                              : run.require(run.layout.checkpoint("generator_gan"), "train-gan");
  }
  auto generator = model::load_generator(checkpoint, &expected);
  const auto clips = run.eval_clips();
  training::GenerationOptions go;
  go.num_samples = gen.num_samples;
  go.baseline = gen.baseline;
  go.beam_size = gen.beam_size;
  go.seed = run.seed("generate");
  const auto captions = training::generate_captions(*generator, clips, vocab, go);
  const auto out = captions_path(run, options);
  write_captions(captions, out.string(), static_cast<std::size_t>(gen.num_samples));
  std::cout << "wrote " << gen.num_samples << " captions for each of " << captions.size() << " clips to "
            << out.string() << '\n';
}

std::map<std::string, double> read_spice(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw LoadError("cannot open SPICE scores " + path);
  }
  try {
    nlohmann::json j;
    in >> j;
    return j.get<std::map<std::string, double>>();
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(path + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw LoadError("cannot write " + path.string());
  }
  out << text;
}

void evaluate(Run& run, const CommandOptions& options) {
  const auto path = captions_path(run, options);
  const auto generated = training::to_caption_sets(read_captions(path.string()));
  const auto clips = run.eval_clips();
  const auto references = training::reference_sets(clips);
  std::map<std::string, double> spice;
  if (!run.config.metrics.spice_scores.empty()) {
    spice = read_spice(run.config.metrics.spice_scores);
  }
  const auto report = metrics::evaluate(generated, references, spice.empty() ? nullptr : &spice);
  const auto name = path.stem().string();
  const auto table = metrics::format_table(report, name);
  write_text(run.layout.report("metrics_" + name + ".json"), metrics::to_json(report).dump(2) + "\n");
  write_text(run.layout.report("metrics_" + name + ".txt"), table);
  std::cout << table;
}

std::vector<metrics::Sentence> flatten(const metrics::CaptionSets& sets) {
  std::vector<metrics::Sentence> out;
  for (const auto& [clip, sentences] : sets) {
    out.insert(out.end(), sentences.begin(), sentences.end());
  }
  return out;
}

std::string join_ngram(const metrics::NGram& ngram) {
  std::string out;
  for (const auto& w : ngram) {
    out += (out.empty() ? "" : " ") + w;
  }
  return out;
}

void stats(Run& run, const CommandOptions& options) {
  const auto path = captions_path(run, options);
  const auto generated = training::to_caption_sets(read_captions(path.string()));
  const auto train = run.train_clips();
  const auto eval = run.eval_clips();
  const auto train_sentences = flatten(training::reference_sets(train));
  const auto reference_sentences = flatten(training::reference_sets(eval));
  const auto generated_sentences = flatten(generated);
  const auto name = path.stem().string();

  const auto ratios =
      metrics::ngram_count_ratios(train_sentences, generated_sentences, train.size(), generated.size());
  std::string csv = "n,ngram,train_count,eval_count,expected,ratio\n";
  for (const auto& r : ratios) {
    csv += std::to_string(r.ngram.size()) + ",\"" + join_ngram(r.ngram) + "\"," + std::to_string(r.train_count) +
           "," + std::to_string(r.eval_count) + "," + std::to_string(r.expected) + "," + std::to_string(r.ratio) +
           "\n";
  }
  write_text(run.layout.report("count_ratios_" + name + ".csv"), csv);

  const auto& thresholds = run.config.metrics.vocab_thresholds;
  const auto gen_curve = metrics::vocab_by_threshold(generated_sentences, thresholds);
  const auto ref_curve = metrics::vocab_by_threshold(reference_sentences, thresholds);
  std::string curve = "threshold,generated,references\n";
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    curve += std::to_string(thresholds[i]) + "," + std::to_string(gen_curve[i].second) + "," +
             std::to_string(ref_curve[i].second) + "\n";
  }
  write_text(run.layout.report("vocab_thresholds_" + name + ".csv"), curve);
  std::cout << "wrote " << ratios.size() << " n-gram count ratios and " << thresholds.size()
            << " threshold points to " << run.layout.report("").string() << '\n';
}

}  // namespace

void RunLayout::create() const {
  for (const char* sub : {"data", "checkpoints", "logs", "captions", "reports"}) {
    fs::create_directories(root_ / sub);
  }
}

ExperimentConfig resolve_config(const std::string& command, const CommandOptions& options) {
  const fs::path out = options.out_dir.empty() ? fs::path() : fs::absolute(options.out_dir);
  ExperimentConfig config;
  fs::path source;
  if (!options.config_path.empty()) {
    source = fs::absolute(options.config_path);
  } else if (!out.empty() && fs::exists(out / "config.json")) {
    source = out / "config.json";
  }
  if (!source.empty()) {
    config = ExperimentConfig::load(source.string());
    const auto base = source.parent_path();
    resolve_relative(config.paths.train_manifest, base);
    resolve_relative(config.paths.validation_manifest, base);
    resolve_relative(config.paths.eval_manifest, base);
    resolve_relative(config.paths.out_dir, base);
    resolve_relative(config.metrics.spice_scores, base);
  } else {
    config = command == "toy-data" ? ExperimentConfig::toy() : ExperimentConfig::paper();
    config.paths.out_dir = fs::absolute(config.paths.out_dir).string();
  }
  if (!out.empty()) {
    config.paths.out_dir = out.lexically_normal().string();
  }
  // a generate/evaluate --baseline flag is a per-invocation choice
  config.generation.baseline = false;
  apply_overrides(config, command, options.overrides);
  config.validate();
  return config;
}

void run_command(const std::string& command, const CommandOptions& options) {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
    throw ConfigError("unknown command '" + command + "'");
  }
  Run run(resolve_config(command, options));
  if (command == "toy-data") {
    toy_data(run, options);
  } else if (command == "prepare") {
    prepare(run, options);
  } else if (command == "pretrain-gen") {
    pretrain_gen(run);
  } else if (command == "pretrain-disc") {
    pretrain_disc_command(run);
  } else if (command == "train-gan") {
    train_gan(run);
  } else if (command == "generate") {
    generate(run, options);
  } else if (command == "evaluate") {
    evaluate(run, options);
  } else {
    stats(run, options);
  }
}

}  // namespace dac::cli
