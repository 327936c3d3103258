#pragma once

#include <vector>

#include <torch/torch.h>

#include "dac/corpus/vocabulary.hpp"
#include "dac/model/generator.hpp"

namespace dac::model {

using TokenSeq = std::vector<corpus::TokenId>;

/// One stochastic decode. tokens starts with <sos> and ends with <eos> unless
/// the length cap was hit; stepwise_logprobs has one entry per generated
/// token; noise_trace is the [max_len - 1, noise_dim] z sequence that was fed
/// in (steps past the end are unused).
struct SampledCaption {
  TokenSeq tokens;
  std::vector<double> stepwise_logprobs;
  torch::Tensor noise_trace;

  double log_prob() const;
};

struct BeamHypothesis {
  TokenSeq tokens;
  double log_prob = 0.0;
  double score = 0.0;  // log_prob / generated-token count
};

// All decoders run without autograd and leave the module mode untouched;
// call eval() first for deterministic batch-norm behaviour.

/// Multinomial sampling with freshly drawn noise (one row per clip in `audio`).
std::vector<SampledCaption> sample_captions(CaptionGeneratorImpl& generator, const EncodedAudio& audio,
                                            at::Generator& rng);

/// Multinomial sampling with caller-supplied noise [B, max_len - 1, noise_dim].
std::vector<SampledCaption> sample_captions(CaptionGeneratorImpl& generator, const EncodedAudio& audio,
                                            const torch::Tensor& noise, at::Generator& rng);

/// Argmax decoding. An undefined `noise` tensor means all-zero noise.
std::vector<TokenSeq> greedy_decode(CaptionGeneratorImpl& generator, const EncodedAudio& audio,
                                    const torch::Tensor& noise = {});

/// Beam search on a single clip. Each step keeps the beam_size best
/// expansions by cumulative log-prob; expansions ending in <eos> or at the
/// length cap are set aside as finished. Returns the beam_size best finished
/// hypotheses by length-normalized score, best first. Noise is zero unless
/// given as [1, max_len - 1, noise_dim].
std::vector<BeamHypothesis> beam_search(CaptionGeneratorImpl& generator, const EncodedAudio& audio,
                                        std::int64_t beam_size, const torch::Tensor& noise = {});

/// Teacher-forced log-probabilities of tokens[:, 1:] (with autograd), [B, L-1];
/// positions whose target is <pad> are 0.
torch::Tensor sequence_log_probs(CaptionGeneratorImpl& generator, const EncodedAudio& audio,
                                 const torch::Tensor& tokens, const torch::Tensor& noise);

/// Pads token sequences into an int64 [B, L_max] tensor.
torch::Tensor pack_tokens(const std::vector<TokenSeq>& sequences);

/// Sequence lengths as an int64 [B] tensor.
torch::Tensor sequence_lengths(const std::vector<TokenSeq>& sequences);

}  // namespace dac::model
