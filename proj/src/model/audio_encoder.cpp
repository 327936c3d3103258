#include "dac/model/audio_encoder.hpp"

#include <fstream>
#include <iterator>

#include "dac/corpus/feature_matrix.hpp"
#include "dac/errors.hpp"

namespace dac::model {

ConvBlockImpl::ConvBlockImpl(std::int64_t in_channels, std::int64_t out_channels) {
  namespace nn = torch::nn;
  conv1_ = register_module("conv1", nn::Conv2d(nn::Conv2dOptions(in_channels, out_channels, 3).padding(1).bias(false)));
  conv2_ = register_module("conv2", nn::Conv2d(nn::Conv2dOptions(out_channels, out_channels, 3).padding(1).bias(false)));
  bn1_ = register_module("bn1", nn::BatchNorm2d(out_channels));
  bn2_ = register_module("bn2", nn::BatchNorm2d(out_channels));
}

torch::Tensor ConvBlockImpl::forward(const torch::Tensor& x) {
  auto h = torch::relu(bn1_->forward(conv1_->forward(x)));
  h = torch::relu(bn2_->forward(conv2_->forward(h)));
  return torch::max_pool2d(h, {2, 2});
}

AudioEncoderImpl::AudioEncoderImpl(const std::array<std::int64_t, 4>& channels, std::int64_t out_dim)
    : out_dim_(out_dim) {
  std::int64_t in = 1;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    blocks_[i] = register_module("conv_block" + std::to_string(i + 1), ConvBlock(in, channels[i]));
    in = channels[i];
  }
  fc1_ = register_module("fc1", torch::nn::Linear(in, out_dim));
  fc2_ = register_module("fc2", torch::nn::Linear(out_dim, out_dim));
}

torch::Tensor AudioEncoderImpl::forward(const torch::Tensor& features) {
  if (features.dim() != 3 || features.size(2) != static_cast<std::int64_t>(corpus::kMelBins)) {
    throw InputError("audio encoder expects [batch, frames, 64] features");
  }
  if (features.size(1) < 16) {
    throw InputError("clip has " + std::to_string(features.size(1)) +
                     " frames; the encoder needs at least 16 to survive four 2x poolings");
  }
  auto h = features.unsqueeze(1);  // [B, 1, T, F]
  for (auto& block : blocks_) {
    h = block->forward(h);
  }
  h = h.mean(3).transpose(1, 2);  // [B, T/16, C]
  return fc2_->forward(torch::relu(fc1_->forward(h)));
}

std::size_t load_pretrained_encoder(AudioEncoderImpl& encoder, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw LoadError("cannot open pretrained encoder weights " + path);
  }
  const std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  c10::IValue loaded;
  try {
    loaded = torch::pickle_load(bytes);
  } catch (const c10::Error& e) {
    throw LoadError("cannot unpickle " + path + ": " + e.what_without_backtrace());
  }
  if (!loaded.isGenericDict()) {
    throw LoadError(path + " does not hold a state dict");
  }
  std::map<std::string, torch::Tensor> source;
  for (const auto& entry : loaded.toGenericDict()) {
    if (!entry.key().isString() || !entry.value().isTensor()) {
      continue;
    }
    std::string key = entry.key().toStringRef();
    if (key.rfind("model.", 0) == 0) {
      key = key.substr(6);
    }
    source[key] = entry.value().toTensor();
  }

  torch::NoGradGuard no_grad;
  std::size_t copied = 0;
  auto copy_named = [&](const std::string& name, torch::Tensor& target) {
    const auto it = source.find(name);
    const bool conv = name.rfind("conv_block", 0) == 0;
    if (it == source.end()) {
      if (conv && name.find("num_batches_tracked") == std::string::npos) {
        throw LoadError(path + " lacks encoder tensor " + name);
      }
      return;
    }
    if (it->second.sizes() != target.sizes()) {
      if (conv) {
        throw LoadError(path + ": shape mismatch for " + name);
      }
      return;  // e.g. a PANNs fc1 of another width
    }
    target.copy_(it->second.to(target.dtype()));
    ++copied;
  };
  for (auto& p : encoder.named_parameters()) {
    copy_named(p.key(), p.value());
  }
  for (auto& b : encoder.named_buffers()) {
    copy_named(b.key(), b.value());
  }
  return copied;
}

}  // namespace dac::model
