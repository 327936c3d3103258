#include "dac/discriminators/semantic.hpp"

#include "dac/discriminators/naturalness.hpp"
#include "dac/errors.hpp"
#include "dac/model/checkpoint.hpp"

namespace dac::discriminators {
namespace {

// Both heads end on a shared constant bias so every initial cosine is
// positive; pairs that start below zero sit in the flat part of the ReLU
// clamp and never receive a gradient. The input BatchNorm strips the
// component common to all clips (or all captions), which otherwise holds
// training on the constant-score plateau for several epochs.
constexpr double kSharedBias = 0.5;

torch::nn::Sequential projection(std::int64_t in, std::int64_t out) {
  torch::nn::Linear last(out, out);
  {
    torch::NoGradGuard no_grad;
    last->bias.fill_(kSharedBias);
  }
  return torch::nn::Sequential(torch::nn::BatchNorm1d(in), torch::nn::Linear(in, out), torch::nn::ReLU(), last);
}

}  // namespace

SemanticDiscriminatorImpl::SemanticDiscriminatorImpl(model::DiscriminatorConfig config)
    : config_(std::move(config)) {
  config_.validate();
  audio_encoder_ = register_module("audio_encoder", model::AudioEncoder(config_.encoder_channels, config_.audio_dim));
  audio_head_ = register_module("audio_head", projection(config_.audio_dim, config_.shared_dim));
  embedding_ = register_module("embedding", torch::nn::Embedding(config_.vocab_size, config_.embed_dim));
  gru_ = register_module(
      "gru", torch::nn::GRU(torch::nn::GRUOptions(config_.embed_dim, config_.hidden_dim).batch_first(true)));
  caption_head_ = register_module("caption_head", projection(config_.hidden_dim, config_.shared_dim));
  to(model::kReal);
  for (auto& p : audio_encoder_->parameters()) {
    p.requires_grad_(false);
  }
  audio_encoder_->eval();
}

void SemanticDiscriminatorImpl::train(bool on) {
  torch::nn::Module::train(on);
  audio_encoder_->eval();
}

torch::Tensor SemanticDiscriminatorImpl::embed_audio(const model::FeatureBatch& batch) {
  torch::Tensor pooled;
  {
    torch::NoGradGuard no_grad;
    const auto steps = audio_encoder_->forward(batch.features);  // [B, M, audio_dim]
    auto mask = torch::zeros({batch.size(), steps.size(1), 1}, steps.options());
    for (std::int64_t b = 0; b < batch.size(); ++b) {
      const auto valid = model::AudioEncoderImpl::output_steps(batch.frames[static_cast<std::size_t>(b)]);
      mask.index_put_({b, torch::indexing::Slice(0, valid)}, 1.0);
    }
    pooled = (steps * mask).sum(1) / mask.sum(1);
  }
  return audio_head_->forward(pooled);
}

torch::Tensor SemanticDiscriminatorImpl::embed_captions(const torch::Tensor& tokens, const torch::Tensor& lengths) {
  const auto [outputs, hidden] = gru_->forward(embedding_->forward(tokens));
  return caption_head_->forward(last_valid_state(outputs, lengths));
}

torch::Tensor SemanticDiscriminatorImpl::score(const torch::Tensor& audio_embedding,
                                               const torch::Tensor& caption_embedding) {
  const auto cosine = torch::nn::functional::cosine_similarity(
      audio_embedding, caption_embedding, torch::nn::functional::CosineSimilarityFuncOptions().dim(1).eps(1e-12));
  return torch::relu(cosine);
}

torch::Tensor SemanticDiscriminatorImpl::forward(const model::FeatureBatch& batch, const torch::Tensor& tokens,
                                                 const torch::Tensor& lengths) {
  return score(embed_audio(batch), embed_captions(tokens, lengths));
}

void SemanticDiscriminatorImpl::copy_audio_encoder(const model::AudioEncoderImpl& source) {
  torch::NoGradGuard no_grad;
  auto target_params = audio_encoder_->named_parameters();
  for (const auto& p : source.named_parameters()) {
    auto* target = target_params.find(p.key());
    if (target == nullptr || target->sizes() != p.value().sizes()) {
      throw ConfigError("semantic discriminator audio branch does not match the generator encoder at " + p.key());
    }
    target->copy_(p.value());
  }
  auto target_buffers = audio_encoder_->named_buffers();
  for (const auto& b : source.named_buffers()) {
    auto* target = target_buffers.find(b.key());
    if (target == nullptr || target->sizes() != b.value().sizes()) {
      throw ConfigError("semantic discriminator audio branch does not match the generator encoder at " + b.key());
    }
    target->copy_(b.value());
  }
}

torch::Tensor SemanticDiscriminatorImpl::audio_branch_snapshot() const {
  torch::NoGradGuard no_grad;
  std::vector<torch::Tensor> flat;
  for (const auto& p : audio_encoder_->parameters()) {
    flat.push_back(p.detach().flatten());
  }
  for (const auto& b : audio_encoder_->buffers()) {
    flat.push_back(b.detach().flatten().to(model::kReal));
  }
  return torch::cat(flat).clone();
}

void save_semantic(const std::string& path, const SemanticDiscriminatorImpl& d) {
  model::save_checkpoint(path, "semantic", d.config().to_json(), d);
}

SemanticDiscriminator load_semantic(const std::string& path, const model::DiscriminatorConfig* expected) {
  const auto header = model::read_checkpoint_header(path);
  const auto config = model::DiscriminatorConfig::from_json(header.config);
  if (expected != nullptr && expected->to_json() != config.to_json()) {
    throw LoadError(path + ": discriminator config " + config.to_json().dump() + " does not match " +
                    expected->to_json().dump());
  }
  SemanticDiscriminator d(config);
  model::load_checkpoint_into(path, "semantic", *d);
  return d;
}

}  // namespace dac::discriminators
