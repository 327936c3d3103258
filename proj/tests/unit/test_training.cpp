#include <cmath>
#include <limits>

#include <gtest/gtest.h>
#include <torch/torch.h>

#include "dac/corpus/toy_dataset.hpp"
#include "dac/errors.hpp"
#include "dac/metrics/cider.hpp"
#include "dac/training/adversarial.hpp"
#include "dac/training/discriminator_pretrain.hpp"
#include "dac/training/inference.hpp"
#include "dac/training/mle.hpp"
#include "dac/training/reward.hpp"
#include "dac/training/scst.hpp"

using namespace dac;
using namespace dac::training;

namespace {

constexpr double kTol = 1e-9;

std::vector<torch::Tensor> state_of(const torch::nn::Module& m) {
  std::vector<torch::Tensor> out;
  for (const auto& p : m.parameters()) {
    out.push_back(p.detach().clone());
  }
  for (const auto& b : m.buffers()) {
    out.push_back(b.detach().clone());
  }
  return out;
}

bool same_state(const std::vector<torch::Tensor>& a, const std::vector<torch::Tensor>& b) {
  if (a.size() != b.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!torch::equal(a[i], b[i])) {
      return false;
    }
  }
  return true;
}

class ToyTraining : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    auto toy = corpus::make_toy_dataset(7, 6);
    auto vocab = corpus::Vocabulary::build(corpus::all_captions(toy.clips));
    data_ = new TrainingSet(toy.clips, vocab);
  }
  static void TearDownTestSuite() {
    delete data_;
    data_ = nullptr;
  }

  static model::GeneratorConfig generator_config() {
    auto c = model::GeneratorConfig::toy();
    c.vocab_size = static_cast<std::int64_t>(data_->vocab().size());
    return c;
  }

  static model::CaptionGenerator generator(std::uint64_t seed = 1) {
    torch::manual_seed(seed);
    return model::CaptionGenerator(generator_config());
  }

  static model::DiscriminatorConfig disc_config() {
    return model::DiscriminatorConfig::matching(generator_config(), model::DiscriminatorConfig::toy());
  }

  static TrainConfig config() {
    auto c = TrainConfig::toy();
    c.batch_size = 3;
    c.mle_epochs = 2;
    c.disc_pretrain_epochs = 1;
    c.adv_epochs = 1;
    c.seed = 4;
    return c;
  }

  static TrainingSet* data_;
};

TrainingSet* ToyTraining::data_ = nullptr;

}  // namespace

TEST(MleLoss, HandCaseAndLimits) {
  // T = 2 with target probabilities 0.5 and 0.25
  auto lp = torch::full({1, 2, 4}, std::log(1e-3), torch::kFloat64);
  lp.index_put_({0, 0, 1}, std::log(0.5));
  lp.index_put_({0, 1, 3}, std::log(0.25));
  const auto targets = torch::tensor({1, 3}, torch::kLong).unsqueeze(0);
  const double expected = -(std::log(0.5) + std::log(0.25)) / 2.0;
  EXPECT_NEAR(expected, 1.0397, 5e-5);
  EXPECT_NEAR(mle_loss(lp, targets).item<double>(), expected, kTol);

  const std::int64_t v = 9;
  const auto uniform = torch::full({2, 5, v}, -std::log(double(v)), torch::kFloat64);
  const auto t = torch::randint(4, v, {2, 5}, torch::kLong);
  EXPECT_NEAR(mle_loss(uniform, t).item<double>(), std::log(double(v)), kTol);

  // probability 1 on every target
  const auto target = torch::tensor({5, 6, 2}, torch::kLong).unsqueeze(0);
  auto certain = torch::full({1, 3, 7}, -std::numeric_limits<double>::infinity(), torch::kFloat64);
  certain.scatter_(2, target.unsqueeze(2), 0.0);
  EXPECT_EQ(mle_loss(certain, target).item<double>(), 0.0);
}

TEST(MleLoss, PaddingExcludedAndCaptionsAveraged) {
  // caption 0: two targets at p = 0.5; caption 1: one target at p = 0.25, then padding
  auto lp = torch::full({2, 2, 5}, std::log(0.1), torch::kFloat64);
  lp.index_put_({0, 0, 4}, std::log(0.5));
  lp.index_put_({0, 1, 2}, std::log(0.5));
  lp.index_put_({1, 0, 2}, std::log(0.25));
  const auto targets = torch::tensor({4, 2, 2, 0}, torch::kLong).view({2, 2});
  EXPECT_NEAR(mle_loss(lp, targets).item<double>(), (std::log(2.0) + std::log(4.0)) / 2.0, kTol);
}

TEST(Reward, HandSubstitution) {
  const ComponentMask all;
  EXPECT_NEAR(combine_reward(0.8, 0.6, 0.4, 0.5, all), 0.9, kTol);
  EXPECT_NEAR(combine_reward(0.8, 0.6, 123.0, 1.0, all), 1.4, kTol);
  EXPECT_NEAR(combine_reward(0.8, 0.6, 0.4, 0.0, all), 0.4, kTol);
}

TEST(Reward, MaskedComponentsAndEffectiveLambda) {
  const auto le = ComponentMask::parse("le");
  const auto nd = ComponentMask::parse("nd");
  const auto sd = ComponentMask::parse("sd");
  EXPECT_EQ(effective_lambda(0.3, le), 0.0);
  EXPECT_EQ(effective_lambda(0.3, nd), 1.0);
  EXPECT_EQ(effective_lambda(0.3, ComponentMask::parse("nd,sd")), 1.0);
  EXPECT_EQ(effective_lambda(0.3, ComponentMask::parse("all")), 0.3);
  EXPECT_NEAR(combine_reward(0.8, 0.6, 0.4, 0.3, le), 0.4, kTol);
  EXPECT_NEAR(combine_reward(0.8, 0.6, 0.4, 0.3, nd), 0.8, kTol);
  EXPECT_NEAR(combine_reward(0.8, 0.6, 0.4, 0.3, sd), 0.6, kTol);
  EXPECT_THROW(ComponentMask::parse("nd,xx"), ConfigError);
  EXPECT_EQ(ComponentMask::parse(ComponentMask::parse("sd,le").to_string()), ComponentMask::parse("sd,le"));
}

TEST_F(ToyTraining, RewardBreakdownReconstructs) {
  auto g = generator();
  g->eval();
  torch::manual_seed(2);
  discriminators::NaturalnessDiscriminator dn(disc_config());
  discriminators::SemanticDiscriminator ds(disc_config());
  dn->eval();
  ds->eval();
  const std::vector<std::size_t> idx{0, 1, 2, 3};
  const auto features = data_->features(idx);
  auto rng = model::make_rng(3);
  std::vector<model::TokenSeq> samples;
  std::vector<model::TokenSeq> baselines;
  {
    torch::NoGradGuard ng;
    const auto audio = g->encode(features);
    for (const auto& s : model::sample_captions(*g, audio, rng)) {
      samples.push_back(s.tokens);
    }
    baselines = model::greedy_decode(*g, audio);
  }
  samples[1] = data_->references(1)[0].tokens;  // a caption with nonzero CIDEr
  for (const auto* spec : {"all", "nd", "sd", "le", "nd,le", "sd,le"}) {
    for (double lambda : {0.0, 0.25, 1.0}) {
      const RewardContext ctx{dn.get(), ds.get(), data_, lambda, ComponentMask::parse(spec)};
      const auto rewards = compute_rewards(ctx, idx, features, samples, baselines);
      for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto& r = rewards[k];
        const double l = effective_lambda(lambda, ctx.mask);
        const double expected = l * ((ctx.mask.naturalness ? r.d_n : 0.0) + (ctx.mask.semantic ? r.d_s : 0.0)) +
                                (1.0 - l) * (ctx.mask.evaluator ? r.l_e : 0.0);
        EXPECT_NEAR(r.combined, expected, kTol);
        EXPECT_NEAR(r.advantage, r.combined - r.baseline, kTol);
        const double cider =
            metrics::cider(token_sentence(samples[k], data_->vocab()), data_->reference_sentences(idx[k]),
                           data_->idf());
        if (std::string(spec) == "le") {
          EXPECT_NEAR(r.combined, cider, kTol);
        }
      }
    }
  }
}

TEST_F(ToyTraining, ZeroAdvantageLeavesParametersBitwise) {
  auto g = generator();
  const std::vector<std::size_t> idx{0, 1, 2};
  const auto features = data_->features(idx);
  auto rng = model::make_rng(5);
  std::vector<model::SampledCaption> samples;
  {
    torch::NoGradGuard ng;
    g->eval();
    samples = model::sample_captions(*g, g->encode(features), rng);
  }
  g->train();
  const auto before = state_of(*g);
  torch::optim::Adam opt(g->parameters(), torch::optim::AdamOptions(1e-2));
  const std::vector<double> zero(3, 0.0);
  for (int i = 0; i < 3; ++i) {
    const auto stats = scst_update(*g, opt, features, samples, zero);
    EXPECT_FALSE(stats.stepped);
  }
  EXPECT_TRUE(same_state(before, state_of(*g)));
  // the loss itself has zero gradient
  g->eval();
  g->zero_grad();
  scst_loss(*g, features, samples, zero).backward();
  for (const auto& p : g->parameters()) {
    if (p.grad().defined()) {
      EXPECT_EQ(p.grad().abs().max().item<double>(), 0.0);
    }
  }
}

TEST_F(ToyTraining, AdvantageSignMovesLogProb) {
  for (double advantage : {1.0, -1.0}) {
    auto g = generator(9);
    g->eval();
    const std::vector<std::size_t> idx{2};
    const auto features = data_->features(idx);
    auto rng = model::make_rng(6);
    std::vector<model::SampledCaption> samples;
    {
      torch::NoGradGuard ng;
      samples = model::sample_captions(*g, g->encode(features), rng);
    }
    auto log_prob = [&] {
      torch::NoGradGuard ng;
      std::vector<model::TokenSeq> seqs{samples[0].tokens};
      return model::sequence_log_probs(*g, g->encode(features), model::pack_tokens(seqs),
                                       samples[0].noise_trace.unsqueeze(0))
          .sum()
          .item<double>();
    };
    const double before = log_prob();
    torch::optim::SGD opt(g->parameters(), torch::optim::SGDOptions(1e-4));
    const std::vector<double> adv{advantage};
    EXPECT_TRUE(scst_update(*g, opt, features, samples, adv).stepped);
    const double after = log_prob();
    if (advantage > 0) {
      EXPECT_GT(after, before);
    } else {
      EXPECT_LT(after, before);
    }
  }
}

TEST_F(ToyTraining, ZeroEpochsReturnInitialization) {
  auto g = generator();
  const auto init = state_of(*g);
  auto c = config();
  c.mle_epochs = 0;
  EXPECT_TRUE(pretrain_generator(*g, *data_, c).empty());
  EXPECT_TRUE(same_state(init, state_of(*g)));

  torch::manual_seed(3);
  discriminators::NaturalnessDiscriminator dn(disc_config());
  discriminators::SemanticDiscriminator ds(disc_config());
  const auto dn0 = state_of(*dn);
  c.disc_pretrain_epochs = 0;
  pretrain_discriminators(*g, *dn, *ds, *data_, c);
  EXPECT_TRUE(same_state(dn0, state_of(*dn)));

  const auto ds0 = state_of(*ds);
  c.adv_epochs = 0;
  const auto result = train_adversarial(*g, *dn, *ds, *data_, c);
  EXPECT_TRUE(result.epochs.empty());
  EXPECT_TRUE(same_state(init, state_of(*g)));
  EXPECT_TRUE(same_state(dn0, state_of(*dn)));
  EXPECT_TRUE(same_state(ds0, state_of(*ds)));
}

TEST_F(ToyTraining, SameSeedSameTrajectory) {
  auto a = generator();
  auto b = generator();
  TrainLog log_a;
  TrainLog log_b;
  const auto la = pretrain_generator(*a, *data_, config(), &log_a);
  const auto lb = pretrain_generator(*b, *data_, config(), &log_b);
  ASSERT_EQ(la.size(), 2U);
  EXPECT_EQ(la, lb);
  EXPECT_EQ(log_a.records(), log_b.records());
  EXPECT_TRUE(same_state(state_of(*a), state_of(*b)));
  auto c = config();
  c.seed = 5;
  auto other = generator();
  EXPECT_NE(pretrain_generator(*other, *data_, c), la);
}

TEST_F(ToyTraining, DiscriminatorPretrainingLeavesGeneratorAlone) {
  auto g = generator();
  const auto before = state_of(*g);
  torch::manual_seed(3);
  discriminators::NaturalnessDiscriminator dn(disc_config());
  discriminators::SemanticDiscriminator ds(disc_config());
  const auto result = pretrain_discriminators(*g, *dn, *ds, *data_, config());
  EXPECT_EQ(result.naturalness_losses.size(), 1U);
  EXPECT_TRUE(same_state(before, state_of(*g)));
  for (const auto& p : g->parameters()) {
    EXPECT_TRUE(!p.grad().defined() || p.grad().abs().max().item<double>() == 0.0);
  }
}

TEST_F(ToyTraining, AdversarialAlternationAndFreeze) {
  auto g = generator();
  torch::manual_seed(3);
  discriminators::NaturalnessDiscriminator dn(disc_config());
  discriminators::SemanticDiscriminator ds(disc_config());
  ds->copy_audio_encoder(*g->encoder());
  const auto frozen = ds->audio_branch_snapshot().clone();
  auto c = config();
  c.adv_epochs = 2;
  TrainLog log;
  const auto result = train_adversarial(*g, *dn, *ds, *data_, c, data_, &log);
  // 6 clips in batches of 3: two paired iterations per epoch
  EXPECT_EQ(result.discriminator_steps, 4);
  EXPECT_EQ(result.generator_steps, 4);
  ASSERT_EQ(result.epochs.size(), 2U);
  EXPECT_TRUE(result.epochs[0].validation_cider.has_value());
  EXPECT_EQ(log.records().size(), 2U);
  EXPECT_TRUE(torch::equal(frozen, ds->audio_branch_snapshot()));
  for (const auto& e : result.epochs) {
    EXPECT_TRUE(std::isfinite(e.mean_reward));
    EXPECT_NEAR(e.mean_reward, e.mean_d_n + e.mean_d_s, 1e-9);  // lambda = 1
  }
}

TEST_F(ToyTraining, ClassicalScstRegime) {
  // sigma = 0 and lambda = 0: constant zero noise, reward = L_E only
  auto gc = generator_config();
  gc.noise_sigma = 0.0;
  torch::manual_seed(1);
  model::CaptionGenerator g(gc);
  auto rng = model::make_rng(1);
  EXPECT_EQ(g->draw_noise(2, rng).abs().max().item<double>(), 0.0);
  torch::manual_seed(3);
  discriminators::NaturalnessDiscriminator dn(disc_config());
  discriminators::SemanticDiscriminator ds(disc_config());
  auto c = config();
  c.lambda = 0.0;
  const auto result = train_adversarial(*g, *dn, *ds, *data_, c);
  EXPECT_NEAR(result.epochs[0].mean_reward, result.epochs[0].mean_l_e, 1e-9);
}

TEST_F(ToyTraining, GenerationCountsAndBaselineRanks) {
  auto g = generator();
  g->eval();
  GenerationOptions o;
  o.seed = 2;
  const auto caps = generate_captions(*g, data_->clips(), data_->vocab(), o);
  ASSERT_EQ(caps.size(), data_->size());
  for (const auto& [id, list] : caps) {
    EXPECT_EQ(list.size(), 5U);
  }
  o.baseline = true;
  const auto beam = generate_captions(*g, data_->clips(), data_->vocab(), o);
  for (const auto& [id, list] : beam) {
    EXPECT_EQ(list.size(), 5U);
  }
  EXPECT_EQ(generate_captions(*g, data_->clips(), data_->vocab(), o), beam);
}

TEST(TrainConfig, JsonRoundTripAndValidation) {
  auto c = TrainConfig::toy();
  c.components = ComponentMask::parse("sd,le");
  c.semantic_criterion = discriminators::SemanticCriterion::bce;
  c.seed = 42;
  EXPECT_EQ(TrainConfig::from_json(c.to_json()).to_json(), c.to_json());
  c.lambda = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  auto j = TrainConfig::toy().to_json();
  j["no_such_key"] = 1;
  EXPECT_THROW(TrainConfig::from_json(j), ConfigError);
}

TEST(PhaseSeed, DistinctPerPhaseAndRoot) {
  EXPECT_EQ(phase_seed(1, "mle"), phase_seed(1, "mle"));
  EXPECT_NE(phase_seed(1, "mle"), phase_seed(1, "adversarial"));
  EXPECT_NE(phase_seed(1, "mle"), phase_seed(2, "mle"));
}
