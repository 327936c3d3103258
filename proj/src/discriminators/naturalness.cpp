#include "dac/discriminators/naturalness.hpp"

#include "dac/errors.hpp"
#include "dac/model/batch.hpp"
#include "dac/model/checkpoint.hpp"

namespace dac::discriminators {

NaturalnessDiscriminatorImpl::NaturalnessDiscriminatorImpl(model::DiscriminatorConfig config)
    : config_(std::move(config)) {
  config_.validate();
  embedding_ = register_module("embedding", torch::nn::Embedding(config_.vocab_size, config_.embed_dim));
  gru_ = register_module(
      "gru", torch::nn::GRU(torch::nn::GRUOptions(config_.embed_dim, config_.hidden_dim).batch_first(true)));
  head_ = register_module("head", torch::nn::Linear(config_.hidden_dim, 1));
  to(model::kReal);
}

torch::Tensor last_valid_state(const torch::Tensor& outputs, const torch::Tensor& lengths) {
  if (lengths.min().item<std::int64_t>() < 1 || lengths.max().item<std::int64_t>() > outputs.size(1)) {
    throw InputError("sequence lengths out of range");
  }
  const auto index = (lengths - 1).view({-1, 1, 1}).expand({outputs.size(0), 1, outputs.size(2)});
  return outputs.gather(1, index).squeeze(1);
}

torch::Tensor NaturalnessDiscriminatorImpl::forward(const torch::Tensor& tokens, const torch::Tensor& lengths) {
  const auto [outputs, hidden] = gru_->forward(embedding_->forward(tokens));
  return torch::sigmoid(head_->forward(last_valid_state(outputs, lengths))).squeeze(1);
}

void save_naturalness(const std::string& path, const NaturalnessDiscriminatorImpl& d) {
  model::save_checkpoint(path, "naturalness", d.config().to_json(), d);
}

NaturalnessDiscriminator load_naturalness(const std::string& path, const model::DiscriminatorConfig* expected) {
  const auto header = model::read_checkpoint_header(path);
  const auto config = model::DiscriminatorConfig::from_json(header.config);
  if (expected != nullptr && expected->to_json() != config.to_json()) {
    throw LoadError(path + ": discriminator config " + config.to_json().dump() + " does not match " +
                    expected->to_json().dump());
  }
  NaturalnessDiscriminator d(config);
  model::load_checkpoint_into(path, "naturalness", *d);
  return d;
}

}  // namespace dac::discriminators
