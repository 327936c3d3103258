#include "dac/model/caption_decoder.hpp"

#include <cmath>

#include "dac/model/batch.hpp"

namespace dac::model {
namespace {

// [B, L, d] -> [B, H, L, d/H]
torch::Tensor split_heads(const torch::Tensor& x, std::int64_t heads) {
  const auto b = x.size(0);
  const auto l = x.size(1);
  return x.view({b, l, heads, x.size(2) / heads}).transpose(1, 2);
}

torch::Tensor merge_heads(const torch::Tensor& x) {
  const auto b = x.size(0);
  const auto l = x.size(2);
  return x.transpose(1, 2).contiguous().view({b, l, x.size(1) * x.size(3)});
}

torch::Tensor causal_mask(std::int64_t length) {
  return torch::triu(torch::full({length, length}, -std::numeric_limits<double>::infinity(),
                                 torch::TensorOptions().dtype(kReal)),
                     1);
}

}  // namespace

DecoderLayerImpl::DecoderLayerImpl(std::int64_t d_model, std::int64_t noise_dim, std::int64_t n_heads,
                                   std::int64_t ff_dim, double dropout)
    : d_model_(d_model), noise_dim_(noise_dim), n_heads_(n_heads) {
  namespace nn = torch::nn;
  const auto memory_width = d_model + noise_dim;
  self_q_ = register_module("self_q", nn::Linear(d_model, d_model));
  self_k_ = register_module("self_k", nn::Linear(d_model, d_model));
  self_v_ = register_module("self_v", nn::Linear(d_model, d_model));
  self_out_ = register_module("self_out", nn::Linear(d_model, d_model));
  cross_q_ = register_module("cross_q", nn::Linear(d_model, d_model));
  cross_k_ = register_module("cross_k", nn::Linear(memory_width, d_model));
  cross_v_ = register_module("cross_v", nn::Linear(memory_width, d_model));
  cross_out_ = register_module("cross_out", nn::Linear(d_model, d_model));
  ff1_ = register_module("ff1", nn::Linear(d_model, ff_dim));
  ff2_ = register_module("ff2", nn::Linear(ff_dim, d_model));
  norm1_ = register_module("norm1", nn::LayerNorm(nn::LayerNormOptions({d_model})));
  norm2_ = register_module("norm2", nn::LayerNorm(nn::LayerNormOptions({d_model})));
  norm3_ = register_module("norm3", nn::LayerNorm(nn::LayerNormOptions({d_model})));
  dropout_ = register_module("dropout", nn::Dropout(dropout));
}

torch::Tensor DecoderLayerImpl::self_attention(const torch::Tensor& x, const torch::Tensor& causal) {
  const auto q = split_heads(self_q_->forward(x), n_heads_);
  const auto k = split_heads(self_k_->forward(x), n_heads_);
  const auto v = split_heads(self_v_->forward(x), n_heads_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(q.size(-1)));
  auto scores = torch::matmul(q, k.transpose(-1, -2)) * scale + causal;
  auto weights = dropout_->forward(torch::softmax(scores, -1));
  return self_out_->forward(merge_heads(torch::matmul(weights, v)));
}

torch::Tensor DecoderLayerImpl::feed_forward(const torch::Tensor& x) {
  return ff2_->forward(dropout_->forward(torch::relu(ff1_->forward(x))));
}

torch::Tensor DecoderLayerImpl::forward(const torch::Tensor& x, const torch::Tensor& audio,
                                        const torch::Tensor& noise, const torch::Tensor& audio_mask,
                                        const torch::Tensor& causal) {
  auto h = norm1_->forward(x + dropout_->forward(self_attention(x, causal)));

  // Keys/values of [f_m ; z_t] split into an audio part (shared by all query
  // steps) and a noise part (one vector per query step t).
  using torch::indexing::Slice;
  const auto wk = cross_k_->weight;
  const auto wv = cross_v_->weight;
  const auto k_audio = torch::nn::functional::linear(audio, wk.index({Slice(), Slice(0, d_model_)}), cross_k_->bias);
  const auto v_audio = torch::nn::functional::linear(audio, wv.index({Slice(), Slice(0, d_model_)}), cross_v_->bias);
  const auto b = x.size(0);
  const auto l = x.size(1);
  const auto m = audio.size(1);
  const auto head_dim = d_model_ / n_heads_;

  const auto q = split_heads(cross_q_->forward(h), n_heads_);  // [B, H, L, dh]
  const auto ka = split_heads(k_audio, n_heads_);              // [B, H, M, dh]
  const auto va = split_heads(v_audio, n_heads_);
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
  auto scores = torch::matmul(q, ka.transpose(-1, -2));  // [B, H, L, M]
  auto attended_noise = torch::zeros({b, n_heads_, l, head_dim}, q.options());
  if (noise_dim_ > 0) {
    const auto k_noise = split_heads(torch::matmul(noise, wk.index({Slice(), Slice(d_model_, torch::indexing::None)}).t()), n_heads_);
    const auto v_noise = split_heads(torch::matmul(noise, wv.index({Slice(), Slice(d_model_, torch::indexing::None)}).t()), n_heads_);
    scores = scores + (q * k_noise).sum(-1, true);
    attended_noise = v_noise;
  }
  scores = scores * scale;
  if (audio_mask.defined()) {
    scores = scores.masked_fill(audio_mask.logical_not().view({b, 1, 1, m}),
                                -std::numeric_limits<double>::infinity());
  }
  auto weights = dropout_->forward(torch::softmax(scores, -1));
  // sum_m w_m (va_m + vz) = (w . va) + (sum_m w_m) vz; the sum is 1 unless
  // dropout touched the weights.
  auto attended = torch::matmul(weights, va) + weights.sum(-1, true) * attended_noise;
  h = norm2_->forward(h + dropout_->forward(cross_out_->forward(merge_heads(attended))));
  return norm3_->forward(h + dropout_->forward(feed_forward(h)));
}

torch::Tensor DecoderLayerImpl::forward_concatenated(const torch::Tensor& x, const torch::Tensor& memory,
                                                     const torch::Tensor& audio_mask, const torch::Tensor& causal) {
  auto h = norm1_->forward(x + dropout_->forward(self_attention(x, causal)));
  const auto b = x.size(0);
  const auto l = x.size(1);
  const auto m = memory.size(2);
  const auto head_dim = d_model_ / n_heads_;
  const auto q = split_heads(cross_q_->forward(h), n_heads_).unsqueeze(-2);  // [B, H, L, 1, dh]
  auto k = cross_k_->forward(memory).view({b, l, m, n_heads_, head_dim}).permute({0, 3, 1, 2, 4});
  auto v = cross_v_->forward(memory).view({b, l, m, n_heads_, head_dim}).permute({0, 3, 1, 2, 4});
  auto scores = torch::matmul(q, k.transpose(-1, -2)) / std::sqrt(static_cast<double>(head_dim));
  if (audio_mask.defined()) {
    scores = scores.masked_fill(audio_mask.logical_not().view({b, 1, 1, 1, m}),
                                -std::numeric_limits<double>::infinity());
  }
  auto attended = torch::matmul(torch::softmax(scores, -1), v).squeeze(-2);  // [B, H, L, dh]
  h = norm2_->forward(h + cross_out_->forward(merge_heads(attended)));
  return norm3_->forward(h + feed_forward(h));
}

CaptionDecoderImpl::CaptionDecoderImpl(const GeneratorConfig& config)
    : d_model_(config.d_model), noise_dim_(config.noise_dim) {
  embedding_ = register_module("embedding", torch::nn::Embedding(config.vocab_size, config.d_model));
  for (std::int64_t i = 0; i < config.n_layers; ++i) {
    layers_->push_back(DecoderLayer(config.d_model, config.noise_dim, config.n_heads, config.ff_dim, config.dropout));
  }
  register_module("layers", layers_);
  out_ = register_module("out", torch::nn::Linear(config.d_model, config.vocab_size));

  auto pe = torch::zeros({config.max_len, config.d_model}, torch::TensorOptions().dtype(kReal));
  auto acc = pe.accessor<double, 2>();
  for (std::int64_t pos = 0; pos < config.max_len; ++pos) {
    for (std::int64_t i = 0; i < config.d_model; i += 2) {
      const double angle = static_cast<double>(pos) / std::pow(10000.0, static_cast<double>(i) / config.d_model);
      acc[pos][i] = std::sin(angle);
      if (i + 1 < config.d_model) {
        acc[pos][i + 1] = std::cos(angle);
      }
    }
  }
  positions_ = pe;  // recomputed from max_len, so not part of the checkpoint
}

torch::Tensor CaptionDecoderImpl::embed(const torch::Tensor& tokens) {
  const auto l = tokens.size(1);
  if (l > positions_.size(0)) {
    throw std::invalid_argument("decoder input of length " + std::to_string(l) + " exceeds max_len");
  }
  using torch::indexing::Slice;
  return embedding_->forward(tokens) * std::sqrt(static_cast<double>(d_model_)) +
         positions_.index({Slice(0, l)}).unsqueeze(0);
}

torch::Tensor CaptionDecoderImpl::forward(const torch::Tensor& tokens, const torch::Tensor& audio,
                                          const torch::Tensor& noise, const torch::Tensor& audio_mask) {
  auto h = embed(tokens);
  const auto causal = causal_mask(tokens.size(1));
  for (const auto& layer : *layers_) {
    h = layer->as<DecoderLayer>()->forward(h, audio, noise, audio_mask, causal);
  }
  return out_->forward(h);
}

torch::Tensor CaptionDecoderImpl::forward_concatenated(const torch::Tensor& tokens, const torch::Tensor& memory,
                                                       const torch::Tensor& audio_mask) {
  auto h = embed(tokens);
  const auto causal = causal_mask(tokens.size(1));
  for (const auto& layer : *layers_) {
    h = layer->as<DecoderLayer>()->forward_concatenated(h, memory, audio_mask, causal);
  }
  return out_->forward(h);
}

}  // namespace dac::model
