// Acceptance run: one PASS/FAIL line per criterion. Criteria named with
// --known-failure N are still run and reported, but do not fail the exit
// status; see README.md for the ones registered that way and why.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <torch/torch.h>

#include "../support/oracles.hpp"
#include "dac/cli/captions_io.hpp"
#include "dac/cli/commands.hpp"
#include "dac/corpus/manifest.hpp"
#include "dac/corpus/toy_dataset.hpp"
#include "dac/discriminators/losses.hpp"
#include "dac/metrics/bleu.hpp"
#include "dac/metrics/cider.hpp"
#include "dac/metrics/corpus_stats.hpp"
#include "dac/metrics/diversity.hpp"
#include "dac/model/checkpoint.hpp"
#include "dac/training/adversarial.hpp"
#include "dac/training/discriminator_pretrain.hpp"
#include "dac/training/inference.hpp"
#include "dac/training/mle.hpp"
#include "dac/training/reward.hpp"
#include "dac/training/scst.hpp"

namespace fs = std::filesystem;
using namespace dac;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 3) {
  std::ostringstream out;
  out.precision(digits);
  out << std::fixed << v;
  return out.str();
}

std::string sci(double v) {
  std::ostringstream out;
  out.precision(1);
  out << std::scientific << v;
  return out.str();
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- criterion 1

Outcome metric_oracles() {
  double worst = 0.0;
  auto track = [&](double got, double want) { worst = std::max(worst, std::fabs(got - want)); };
  auto words = [](const std::string& t) { return metrics::to_sentence(t); };

  // seed cases
  const std::vector<metrics::Sentence> one_ref{words("a b c d f")};
  const double bleu_case = metrics::sentence_bleu(words("a b c d e"), one_ref, 4, metrics::Smoothing::none);
  track(bleu_case, 100.0 * std::pow(0.8 * 0.75 * (2.0 / 3.0) * 0.5, 0.25));
  const std::vector<std::vector<metrics::Sentence>> micro{{words("a b")}, {words("c d")}};
  track(metrics::cider(words("a b"), micro[0], metrics::IdfTable::from_references(micro)), 5.0);
  std::vector<metrics::Sentence> train(4, words("a b"));
  train.resize(10, words("c"));
  const std::vector<metrics::Sentence> eval{words("a b"), words("c"), words("c"), words("d"), words("d")};
  for (const auto& r : metrics::ngram_count_ratios(train, eval, 10, 5)) {
    if (r.ngram == metrics::NGram{"a", "b"}) {
      track(r.ratio, 0.5);
    }
  }

  // random hand corpora of <= 6-token sentences
  std::mt19937_64 rng(2024);
  std::size_t checks = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<metrics::Sentence> set;
    for (int i = 0; i < 5; ++i) {
      set.push_back(oracle::random_sentence(rng));
    }
    const auto cand = oracle::random_sentence(rng);
    std::vector<std::vector<metrics::Sentence>> docs{set, {oracle::random_sentence(rng), oracle::random_sentence(rng)}};
    const auto idf = metrics::IdfTable::from_references(docs);
    for (int n = 1; n <= 4; ++n) {
      track(metrics::sentence_bleu(cand, set, n, metrics::Smoothing::none), oracle::sentence_bleu(cand, set, n, false));
      track(metrics::mbleu(set, n), oracle::mbleu(set, n));
      track(metrics::div_n(set, n), oracle::div_n(set, n));
      checks += 3;
    }
    track(metrics::cider(cand, set, idf), oracle::cider_d(cand, set, docs));
    track(static_cast<double>(metrics::vocab_size(set)), static_cast<double>(oracle::vocab_size(set)));
    const auto expected = oracle::count_ratios(set, docs[1], 5.0, 2.0);
    for (const auto& r : metrics::ngram_count_ratios(set, docs[1], 5, 2)) {
      std::string key;
      for (const auto& w : r.ngram) {
        key += (key.empty() ? "" : " ") + w;
      }
      track(r.ratio, expected.at(key));
      ++checks;
    }
    checks += 2;
  }
  return {worst <= 1e-9, "BLEU_4 case " + fmt(bleu_case) + ", " + std::to_string(checks) +
                             " oracle comparisons, max |error| " + sci(worst)};
}

// ---------------------------------------------------------------- criterion 2

Outcome loss_formulas() {
  double worst = 0.0;
  auto track = [&](double got, double want) { worst = std::max(worst, std::fabs(got - want)); };

  auto lp = torch::full({1, 2, 5}, std::log(0.05), torch::kFloat64);
  lp.index_put_({0, 0, 4}, std::log(0.5));
  lp.index_put_({0, 1, 2}, std::log(0.25));
  const double mle = training::mle_loss(lp, torch::tensor({4, 2}, torch::kLong).unsqueeze(0)).item<double>();
  track(mle, -(std::log(0.5) + std::log(0.25)) / 2.0);

  const std::vector<double> real{0.9, 0.8};
  const std::vector<double> fake{0.3};
  const double nat = discriminators::naturalness_loss(real, fake);
  track(nat, -(std::log(0.9) + std::log(0.8)) / 2.0 - std::log(0.7));
  const std::vector<double> half{0.5};
  track(discriminators::naturalness_loss(half, half), 2.0 * std::log(2.0));

  const std::vector<double> p{0.7};
  const std::vector<double> u{0.4};
  const std::vector<double> g{0.2};
  const double sem = discriminators::semantic_loss(p, u, g);
  track(sem, 0.09 + 0.5 * 0.16 + 0.5 * 0.04);
  track(discriminators::semantic_loss(half, half, half), 0.5);

  const double reward = training::combine_reward(0.8, 0.6, 0.4, 0.5, training::ComponentMask{});
  track(reward, 0.9);
  track(training::combine_reward(0.8, 0.6, 0.4, 1.0, training::ComponentMask{}), 1.4);
  track(training::combine_reward(0.8, 0.6, 0.4, 0.0, training::ComponentMask{}), 0.4);

  return {worst <= 1e-9, "MLE " + fmt(mle, 4) + ", D_N " + fmt(nat, 4) + ", D_S " + fmt(sem, 4) + ", reward " +
                             fmt(reward, 4) + ", max |error| " + sci(worst)};
}

// ---------------------------------------------------------------- criterion 3

Outcome scst_mechanics() {
  const auto toy = corpus::make_toy_dataset(7, 20);
  const training::TrainingSet data(toy.clips, corpus::Vocabulary::build(corpus::all_captions(toy.clips)));
  auto config = model::GeneratorConfig::toy();
  config.vocab_size = static_cast<std::int64_t>(data.vocab().size());

  auto state = [](const torch::nn::Module& m) {
    std::vector<torch::Tensor> out;
    for (const auto& t : m.parameters()) {
      out.push_back(t.detach().clone());
    }
    for (const auto& t : m.buffers()) {
      out.push_back(t.detach().clone());
    }
    return out;
  };

  // zero advantage, whole batch
  torch::manual_seed(31);
  model::CaptionGenerator g(config);
  g->eval();
  const std::vector<std::size_t> batch{0, 1, 2, 3, 4};
  const auto features = data.features(batch);
  auto rng = model::make_rng(32);
  std::vector<model::SampledCaption> samples;
  {
    torch::NoGradGuard ng;
    samples = model::sample_captions(*g, g->encode(features), rng);
  }
  const auto before = state(*g);
  torch::optim::Adam adam(g->parameters(), torch::optim::AdamOptions(1e-3));
  training::scst_update(*g, adam, features, samples, std::vector<double>(batch.size(), 0.0));
  const auto after = state(*g);
  bool unchanged = true;
  for (std::size_t i = 0; i < before.size(); ++i) {
    unchanged = unchanged && torch::equal(before[i], after[i]);
  }

  // single-clip probes
  std::string probes;
  bool directions = true;
  for (const std::size_t clip : {0UL, 7UL, 13UL}) {
    for (const double advantage : {1.0, -1.0}) {
      torch::manual_seed(33);
      model::CaptionGenerator h(config);
      h->eval();
      const std::vector<std::size_t> one{clip};
      const auto f = data.features(one);
      auto r = model::make_rng(34 + clip);
      std::vector<model::SampledCaption> s;
      {
        torch::NoGradGuard ng;
        s = model::sample_captions(*h, h->encode(f), r);
      }
      auto log_prob = [&] {
        torch::NoGradGuard ng;
        std::vector<model::TokenSeq> seq{s[0].tokens};
        return model::sequence_log_probs(*h, h->encode(f), model::pack_tokens(seq), s[0].noise_trace.unsqueeze(0))
            .sum()
            .item<double>();
      };
      const double lp0 = log_prob();
      torch::optim::SGD sgd(h->parameters(), torch::optim::SGDOptions(1e-4));
      training::scst_update(*h, sgd, f, s, std::vector<double>{advantage});
      const double lp1 = log_prob();
      directions = directions && (advantage > 0 ? lp1 > lp0 : lp1 < lp0);
      probes += std::string(advantage > 0 ? " A>0:" : " A<0:") + sci(lp1 - lp0);
    }
  }
  return {unchanged && directions, std::string("zero-advantage parameters ") +
                                       (unchanged ? "bitwise unchanged" : "CHANGED") + "; log-prob deltas" + probes};
}

// ------------------------------------------------------------- toy pipeline

struct CoutToFile {
  explicit CoutToFile(const fs::path& p) : file(p, std::ios::app), saved(std::cout.rdbuf(file.rdbuf())) {}
  ~CoutToFile() { std::cout.rdbuf(saved); }
  std::ofstream file;
  std::streambuf* saved;
};

/// The README pipeline at the toy preset: 20 training clips, 20 held-out
/// clips, seed 7.
void toy_pipeline(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  CoutToFile quiet(dir / "console.txt");
  cli::CommandOptions o;
  o.out_dir = dir.string();
  o.clips = 20;
  o.val_clips = 20;
  o.overrides.seed = 7;
  cli::run_command("toy-data", o);
  cli::run_command("pretrain-gen", o);
  o.overrides.baseline = true;
  cli::run_command("pretrain-gen", o);
  o.overrides.baseline = false;
  cli::run_command("pretrain-disc", o);
  cli::run_command("train-gan", o);
  cli::run_command("generate", o);
  o.overrides.baseline = true;
  cli::run_command("generate", o);
  o.overrides.baseline = false;
  const cli::RunLayout layout(dir);
  for (const auto* name : {"generated", "baseline"}) {
    o.captions = layout.captions(name).string();
    cli::run_command("evaluate", o);
    cli::run_command("stats", o);
  }
}

struct ToyRun {
  fs::path dir;
  cli::RunLayout layout{dir};
  corpus::Vocabulary vocab;
  std::vector<corpus::AudioClip> train;
  std::vector<corpus::AudioClip> held_out;

  explicit ToyRun(fs::path d)
      : dir(std::move(d)),
        layout(dir),
        vocab(corpus::Vocabulary::load(layout.vocab().string())),
        train(corpus::load_manifest(layout.data("train.jsonl").string())),
        held_out(corpus::load_manifest(layout.data("validation.jsonl").string())) {}
};

// ---------------------------------------------------------------- criterion 4

Outcome discriminator_learnability(const ToyRun& run) {
  auto generator = model::load_generator(run.layout.checkpoint("generator_mle").string());
  auto dn = discriminators::load_naturalness(run.layout.checkpoint("naturalness_pretrained").string());
  auto ds = discriminators::load_semantic(run.layout.checkpoint("semantic_pretrained").string());
  dn->eval();
  ds->eval();
  const training::TrainingSet held(run.held_out, run.vocab);
  const auto pool = training::generated_caption_pool(*generator, held, 5, 4242);

  torch::NoGradGuard ng;
  std::size_t correct = 0;
  std::size_t judged = 0;
  double mean_real = 0.0;
  double mean_fake = 0.0;
  std::size_t ranked = 0;
  std::size_t pairs = 0;
  double mean_paired = 0.0;
  double mean_unpaired = 0.0;
  std::mt19937_64 rng(4243);
  for (std::size_t i = 0; i < held.size(); ++i) {
    std::vector<model::TokenSeq> real;
    for (const auto& r : held.references(i)) {
      real.push_back(r.tokens);
    }
    const auto pr = dn->forward(model::pack_tokens(real), model::sequence_lengths(real));
    const auto pf = dn->forward(model::pack_tokens(pool[i]), model::sequence_lengths(pool[i]));
    correct += static_cast<std::size_t>((pr > 0.5).sum().item<std::int64_t>() + (pf < 0.5).sum().item<std::int64_t>());
    judged += real.size() + pool[i].size();
    mean_real += pr.sum().item<double>();
    mean_fake += pf.sum().item<double>();

    // unpaired: the same-rank reference of a clip from another sound class
    const std::vector<std::size_t> one{i};
    const auto features = held.features(one);
    for (std::size_t r = 0; r < corpus::kRefsPerClip; ++r) {
      std::size_t j = 0;
      do {
        j = rng() % held.size();
      } while (j % corpus::kToyClasses == i % corpus::kToyClasses);
      std::vector<model::TokenSeq> paired{held.references(i)[r].tokens};
      std::vector<model::TokenSeq> unpaired{held.references(j)[r].tokens};
      const double sp = ds->forward(features, model::pack_tokens(paired), model::sequence_lengths(paired)).item<double>();
      const double su =
          ds->forward(features, model::pack_tokens(unpaired), model::sequence_lengths(unpaired)).item<double>();
      ranked += sp > su ? 1 : 0;
      ++pairs;
      mean_paired += sp;
      mean_unpaired += su;
    }
  }
  const double accuracy = double(correct) / double(judged);
  const double rank = double(ranked) / double(pairs);
  const bool ordered = mean_real > mean_fake && mean_paired > mean_unpaired;
  return {accuracy >= 0.8 && rank >= 0.8 && ordered,
          "held-out D_N accuracy " + fmt(accuracy) + " (mean human " + fmt(mean_real / (5.0 * held.size())) +
              " vs generated " + fmt(mean_fake / (5.0 * held.size())) + "), D_S paired>unpaired on " + fmt(rank) +
              " of " + std::to_string(pairs) + " pairs (means " + fmt(mean_paired / pairs) + " vs " +
              fmt(mean_unpaired / pairs) + ")"};
}

// ---------------------------------------------------------------- criterion 5

Outcome mle_overfit() {
  const auto toy = corpus::make_toy_dataset(training::phase_seed(7, "overfit"), 10);
  const training::TrainingSet data(toy.clips, corpus::Vocabulary::build(corpus::all_captions(toy.clips)));
  auto config = model::GeneratorConfig::toy();
  config.vocab_size = static_cast<std::int64_t>(data.vocab().size());
  config.noise_sigma = 0.0;
  torch::manual_seed(51);
  model::CaptionGenerator g(config);
  auto tc = training::TrainConfig::toy();
  tc.reference_policy = training::ReferencePolicy::first;
  tc.mle_epochs = 200;
  tc.seed = 52;
  const auto losses = training::pretrain_generator(*g, data, tc);
  std::size_t first_below = 0;
  for (std::size_t e = 0; e < losses.size() && first_below == 0; ++e) {
    first_below = losses[e] < 0.1 ? e + 1 : 0;
  }
  const double final_ce = training::evaluate_mle_loss(*g, data, training::ReferencePolicy::first);

  g->eval();
  torch::NoGradGuard ng;
  std::vector<std::size_t> all(data.size());
  std::iota(all.begin(), all.end(), 0);
  const auto decoded = model::greedy_decode(*g, g->encode(data.features(all)));
  std::size_t memorized = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    memorized += decoded[i] == data.references(i)[0].tokens ? 1 : 0;
  }
  return {final_ce < 0.1 && memorized >= 9,
          "CE " + fmt(final_ce, 4) + " (training loss first < 0.1 at epoch " +
              (first_below ? std::to_string(first_below) : std::string("never")) + "), greedy reproduces " +
              std::to_string(memorized) + "/10 captions"};
}

// ---------------------------------------------------------------- criterion 6

Outcome diversity_direction(const ToyRun& run) {
  const auto gan = read_json(run.layout.report("metrics_generated.json"));
  const auto base = read_json(run.layout.report("metrics_baseline.json"));
  const double m_gan = gan["mBLEU_4"].get<double>();
  const double m_base = base["mBLEU_4"].get<double>();
  const double d_gan = gan["div_1"].get<double>();
  const double d_base = base["div_1"].get<double>();
  const double c_gan = gan["CIDEr"].get<double>();
  const double c_base = base["CIDEr"].get<double>();
  const bool pass = m_gan < m_base && d_gan > d_base && c_gan > 0.5 * c_base;
  return {pass, "C-GAN 5-sample vs baseline beam-5: mBLEU_4 " + fmt(m_gan, 1) + " vs " + fmt(m_base, 1) +
                    ", div-1 " + fmt(d_gan, 1) + " vs " + fmt(d_base, 1) + ", CIDEr " + fmt(c_gan, 1) + " vs " +
                    fmt(c_base, 1) + " (needs > " + fmt(0.5 * c_base, 1) + ")"};
}

// ------------------------------------------------------------ criteria 7, 8

struct Pretrained {
  model::CaptionGenerator generator{nullptr};
  discriminators::NaturalnessDiscriminator naturalness{nullptr};
  discriminators::SemanticDiscriminator semantic{nullptr};
};

Pretrained load_pretrained(const ToyRun& run) {
  return {model::load_generator(run.layout.checkpoint("generator_mle").string()),
          discriminators::load_naturalness(run.layout.checkpoint("naturalness_pretrained").string()),
          discriminators::load_semantic(run.layout.checkpoint("semantic_pretrained").string())};
}

constexpr std::int64_t kAblationEpochs = 5;

Outcome component_ablations(const ToyRun& run) {
  const training::TrainingSet data(run.train, run.vocab);
  bool ok = true;
  std::string detail;
  for (const auto* spec : {"nd", "sd", "le"}) {
    auto p = load_pretrained(run);
    auto tc = training::TrainConfig::toy();
    tc.components = training::ComponentMask::parse(spec);
    tc.lambda = 0.5;  // must be overridden: 1 for discriminator-only, 0 for LE-only
    tc.adv_epochs = kAblationEpochs;
    tc.seed = 71;
    const auto result = training::train_adversarial(*p.generator, *p.naturalness, *p.semantic, data, tc);
    double gap = 0.0;
    for (const auto& e : result.epochs) {
      const double expected = tc.components.naturalness ? e.mean_d_n : tc.components.semantic ? e.mean_d_s : e.mean_l_e;
      gap = std::max(gap, std::fabs(e.mean_reward - expected));
    }
    // per-caption check of the reward composition on one batch
    p.generator->eval();
    std::vector<std::size_t> batch(data.size());
    std::iota(batch.begin(), batch.end(), 0);
    const auto features = data.features(batch);
    std::vector<model::TokenSeq> samples;
    {
      torch::NoGradGuard ng;
      auto rng = model::make_rng(72);
      for (const auto& s : model::sample_captions(*p.generator, p.generator->encode(features), rng)) {
        samples.push_back(s.tokens);
      }
    }
    const training::RewardContext ctx{p.naturalness.get(), p.semantic.get(), &data, tc.lambda, tc.components};
    for (const auto& s : training::score_captions(ctx, batch, features, samples)) {
      const double expected = tc.components.naturalness ? s.d_n : tc.components.semantic ? s.d_s : s.l_e;
      gap = std::max(gap, std::fabs(s.combined - expected));
    }
    if (tc.components.evaluator) {
      for (std::size_t k = 0; k < batch.size(); ++k) {
        const double cider = metrics::cider(training::token_sentence(samples[k], data.vocab()),
                                            data.reference_sentences(k), data.idf());
        gap = std::max(gap, std::fabs(training::score_captions(ctx, std::vector<std::size_t>{k},
                                                               data.features(std::vector<std::size_t>{k}),
                                                               {samples[k]})[0]
                                          .combined -
                                      cider));
      }
    }
    const bool complete = static_cast<std::int64_t>(result.epochs.size()) == kAblationEpochs &&
                          result.generator_steps == result.discriminator_steps;
    ok = ok && complete && gap <= 1e-9;
    detail += std::string(detail.empty() ? "" : "; ") + tc.components.to_string() + "-only " +
              std::to_string(result.epochs.size()) + " epochs, mean reward " +
              fmt(result.epochs.back().mean_reward) + ", composition gap " + sci(gap);
  }
  return {ok, detail};
}

Outcome noise_modes(const ToyRun& run) {
  const training::TrainingSet data(run.train, run.vocab);
  bool ok = true;
  std::string detail;
  for (const auto mode : {model::NoiseMode::per_step, model::NoiseMode::fixed}) {
    auto p = load_pretrained(run);
    p.generator->set_noise(1.0, mode);
    auto tc = training::TrainConfig::toy();
    tc.adv_epochs = kAblationEpochs;
    tc.seed = 81;
    const auto result = training::train_adversarial(*p.generator, *p.naturalness, *p.semantic, data, tc);
    p.generator->eval();

    training::GenerationOptions o;
    o.seed = 82;
    p.generator->set_noise(0.0, mode);
    std::size_t identical = 0;
    for (const auto& [id, caps] : training::generate_captions(*p.generator, run.train, run.vocab, o)) {
      identical += std::set<std::string>(caps.begin(), caps.end()).size() == 1 ? 1 : 0;
    }
    p.generator->set_noise(1.0, mode);
    std::size_t varied = 0;
    for (const auto& [id, caps] : training::generate_captions(*p.generator, run.train, run.vocab, o)) {
      varied += std::set<std::string>(caps.begin(), caps.end()).size() >= 2 ? 1 : 0;
    }
    const bool mode_ok = static_cast<std::int64_t>(result.epochs.size()) == kAblationEpochs &&
                         identical == run.train.size() && varied >= 1;
    ok = ok && mode_ok;
    detail += std::string(detail.empty() ? "" : "; ") + model::to_string(mode) + ": sigma=0 identical sets " +
              std::to_string(identical) + "/" + std::to_string(run.train.size()) + ", sigma=1 clips with >= 2 " +
              "distinct " + std::to_string(varied);
  }
  return {ok, detail};
}

// ---------------------------------------------------------------- criterion 9

Outcome determinism(const ToyRun& a, const fs::path& b_dir) {
  const cli::RunLayout b(b_dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(a.layout.report(""))) {
    files.push_back(fs::relative(entry.path(), a.dir));
  }
  for (const auto* extra : {"captions/generated.json", "captions/baseline.json", "logs/train.jsonl"}) {
    files.emplace_back(extra);
  }
  std::sort(files.begin(), files.end());
  std::vector<std::string> differing;
  for (const auto& f : files) {
    if (!fs::exists(b_dir / f) || slurp(a.dir / f) != slurp(b_dir / f)) {
      differing.push_back(f.string());
    }
  }
  std::string detail = std::to_string(files.size()) + " files compared";
  for (const auto& f : differing) {
    detail += ", differs: " + f;
  }
  return {differing.empty() && files.size() > 3, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria 1-9"};
  std::string work = "acceptance_runs";
  std::vector<int> known_failures;
  app.add_option("--work", work, "directory for the toy pipeline runs");
  app.add_option("--known-failure", known_failures, "criteria reported but excluded from the exit status");
  CLI11_PARSE(app, argc, argv);
  torch::set_num_threads(1);

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::pair<int, Outcome>> results;
  auto run = [&](int id, const char* name, const std::function<Outcome()>& body) {
    Outcome out;
    try {
      out = body();
    } catch (const std::exception& e) {
      out = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "criterion " << id << " (" << name << "): " << (out.pass ? "PASS" : "FAIL") << "  " << out.detail
              << "  [t=" << fmt(secs, 0) << "s]" << std::endl;
    results.emplace_back(id, out);
  };

  run(1, "metric oracles", metric_oracles);
  run(2, "loss formulas", loss_formulas);
  run(3, "SCST mechanics", scst_mechanics);
  run(5, "MLE overfit", mle_overfit);

  const fs::path run_a = fs::path(work) / "run_a";
  const fs::path run_b = fs::path(work) / "run_b";
  std::optional<ToyRun> toy;
  try {
    toy_pipeline(run_a);
    toy.emplace(run_a);
  } catch (const std::exception& e) {
    std::cout << "toy pipeline failed: " << e.what() << std::endl;
  }
  auto with_toy = [&](const std::function<Outcome(const ToyRun&)>& body) {
    return [&, body] { return toy ? body(*toy) : Outcome{false, "toy pipeline did not complete"}; };
  };
  run(4, "discriminator learnability", with_toy(discriminator_learnability));
  run(6, "diversity direction", with_toy(diversity_direction));
  run(7, "component ablations", with_toy(component_ablations));
  run(8, "noise modes", with_toy(noise_modes));
  run(9, "determinism", with_toy([&](const ToyRun& a) {
        toy_pipeline(run_b);
        return determinism(a, run_b);
      }));

  std::sort(results.begin(), results.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  int blocking = 0;
  std::cout << "summary:";
  for (const auto& [id, out] : results) {
    const bool known = std::find(known_failures.begin(), known_failures.end(), id) != known_failures.end();
    std::cout << ' ' << id << '=' << (out.pass ? "PASS" : known ? "FAIL(known)" : "FAIL");
    blocking += !out.pass && !known ? 1 : 0;
  }
  std::cout << std::endl;
  return blocking == 0 ? 0 : 1;
}
