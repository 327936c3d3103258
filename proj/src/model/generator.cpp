#include "dac/model/generator.hpp"

#include "dac/corpus/vocabulary.hpp"
#include "dac/errors.hpp"

namespace dac::model {

EncodedAudio EncodedAudio::select(std::int64_t index) const {
  return {memory.narrow(0, index, 1), mask.narrow(0, index, 1)};
}

EncodedAudio EncodedAudio::repeat(std::int64_t times) const {
  return {memory.repeat_interleave(times, 0), mask.repeat_interleave(times, 0)};
}

CaptionGeneratorImpl::CaptionGeneratorImpl(GeneratorConfig config) : config_(std::move(config)) {
  config_.validate();
  encoder_ = register_module("encoder", AudioEncoder(config_.encoder_channels, config_.d_model));
  decoder_ = register_module("decoder", CaptionDecoder(config_));
  to(kReal);
  if (!config_.pretrained_encoder.empty()) {
    load_pretrained_encoder(*encoder_, config_.pretrained_encoder);
  }
}

EncodedAudio CaptionGeneratorImpl::encode(const FeatureBatch& batch) {
  auto memory = encoder_->forward(batch.features);
  auto mask = torch::zeros({batch.size(), memory.size(1)}, torch::kBool);
  for (std::int64_t b = 0; b < batch.size(); ++b) {
    const auto steps = AudioEncoderImpl::output_steps(batch.frames[static_cast<std::size_t>(b)]);
    if (steps < 1) {
      throw InputError("clip shorter than 16 frames");
    }
    mask.index_put_({b, torch::indexing::Slice(0, steps)}, true);
  }
  return {memory, mask};
}

torch::Tensor CaptionGeneratorImpl::mask_logits(torch::Tensor logits) const {
  using torch::indexing::Ellipsis;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  logits.index_put_({Ellipsis, corpus::Vocabulary::kPad}, neg_inf);
  logits.index_put_({Ellipsis, corpus::Vocabulary::kStart}, neg_inf);
  return torch::log_softmax(logits, -1);
}

torch::Tensor CaptionGeneratorImpl::log_probs(const EncodedAudio& audio, const torch::Tensor& tokens,
                                              const torch::Tensor& noise) {
  return mask_logits(decoder_->forward(tokens, audio.memory, noise, audio.mask));
}

torch::Tensor CaptionGeneratorImpl::log_probs_concatenated(const EncodedAudio& audio, const torch::Tensor& tokens,
                                                           const torch::Tensor& noise) {
  const auto b = tokens.size(0);
  const auto l = tokens.size(1);
  const auto m = audio.memory.size(1);
  auto features = audio.memory.unsqueeze(1).expand({b, l, m, config_.d_model});
  auto z = noise.unsqueeze(2).expand({b, l, m, config_.noise_dim});
  return mask_logits(decoder_->forward_concatenated(tokens, torch::cat({features, z}, -1), audio.mask));
}

torch::Tensor CaptionGeneratorImpl::draw_noise(std::int64_t rows, at::Generator& rng) const {
  const auto steps = config_.max_len - 1;
  const auto options = torch::TensorOptions().dtype(kReal);
  if (config_.noise_mode == NoiseMode::fixed) {
    auto z = at::normal(0.0, 1.0, {rows, 1, config_.noise_dim}, rng, options) * config_.noise_sigma;
    return z.expand({rows, steps, config_.noise_dim}).contiguous();
  }
  return at::normal(0.0, 1.0, {rows, steps, config_.noise_dim}, rng, options) * config_.noise_sigma;
}

torch::Tensor CaptionGeneratorImpl::zero_noise(std::int64_t rows) const {
  return torch::zeros({rows, config_.max_len - 1, config_.noise_dim}, torch::TensorOptions().dtype(kReal));
}

void CaptionGeneratorImpl::set_noise(double sigma, NoiseMode mode) {
  if (!(sigma >= 0.0)) {
    throw ConfigError("noise_sigma must be >= 0");
  }
  config_.noise_sigma = sigma;
  config_.noise_mode = mode;
}

at::Generator make_rng(std::uint64_t seed) { return at::make_generator<at::CPUGeneratorImpl>(seed); }

}  // namespace dac::model
