#include "dac/model/decoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dac/errors.hpp"

namespace dac::model {
namespace {

using corpus::Vocabulary;
using torch::indexing::Slice;

torch::Tensor current_tokens(const std::vector<TokenSeq>& rows) { return pack_tokens(rows); }

// Next-token log-probs [B, V] after the current prefixes.
torch::Tensor next_step(CaptionGeneratorImpl& generator, const EncodedAudio& audio, const std::vector<TokenSeq>& rows,
                        const torch::Tensor& noise) {
  const auto tokens = current_tokens(rows);
  const auto length = tokens.size(1);
  const auto lp = generator.log_probs(audio, tokens, noise.index({Slice(), Slice(0, length)}));
  return lp.index({Slice(), length - 1}).contiguous();
}

void check_noise(const CaptionGeneratorImpl& generator, const torch::Tensor& noise, std::int64_t rows) {
  const auto& c = generator.config();
  if (noise.dim() != 3 || noise.size(0) != rows || noise.size(1) != c.max_len - 1 || noise.size(2) != c.noise_dim) {
    throw InputError("noise must be [" + std::to_string(rows) + ", " + std::to_string(c.max_len - 1) + ", " +
                     std::to_string(c.noise_dim) + "]");
  }
}

template <typename Pick>
std::vector<TokenSeq> autoregressive(CaptionGeneratorImpl& generator, const EncodedAudio& audio,
                                     const torch::Tensor& noise, Pick pick,
                                     std::vector<std::vector<double>>* logprobs) {
  const auto rows = audio.size();
  const auto max_len = generator.config().max_len;
  std::vector<TokenSeq> seqs(static_cast<std::size_t>(rows), TokenSeq{Vocabulary::kStart});
  std::vector<bool> done(static_cast<std::size_t>(rows), false);
  if (logprobs != nullptr) {
    logprobs->assign(static_cast<std::size_t>(rows), {});
  }
  for (std::int64_t step = 1; step < max_len; ++step) {
    if (std::all_of(done.begin(), done.end(), [](bool d) { return d; })) {
      break;
    }
    const auto lp = next_step(generator, audio, seqs, noise);
    const auto chosen = pick(lp);
    auto chosen_acc = chosen.template accessor<std::int64_t, 1>();
    auto lp_acc = lp.accessor<double, 2>();
    for (std::int64_t b = 0; b < rows; ++b) {
      const auto i = static_cast<std::size_t>(b);
      if (done[i]) {
        continue;
      }
      const auto token = static_cast<corpus::TokenId>(chosen_acc[b]);
      seqs[i].push_back(token);
      if (logprobs != nullptr) {
        (*logprobs)[i].push_back(lp_acc[b][chosen_acc[b]]);
      }
      done[i] = token == Vocabulary::kEnd;
    }
  }
  return seqs;
}

}  // namespace

double SampledCaption::log_prob() const {
  return std::accumulate(stepwise_logprobs.begin(), stepwise_logprobs.end(), 0.0);
}

torch::Tensor pack_tokens(const std::vector<TokenSeq>& sequences) {
  std::size_t longest = 0;
  for (const auto& s : sequences) {
    longest = std::max(longest, s.size());
  }
  auto out = torch::full({static_cast<std::int64_t>(sequences.size()), static_cast<std::int64_t>(longest)},
                         Vocabulary::kPad, torch::kInt64);
  auto acc = out.accessor<std::int64_t, 2>();
  for (std::size_t b = 0; b < sequences.size(); ++b) {
    for (std::size_t t = 0; t < sequences[b].size(); ++t) {
      acc[static_cast<std::int64_t>(b)][static_cast<std::int64_t>(t)] = sequences[b][t];
    }
  }
  return out;
}

torch::Tensor sequence_lengths(const std::vector<TokenSeq>& sequences) {
  auto out = torch::empty({static_cast<std::int64_t>(sequences.size())}, torch::kInt64);
  auto acc = out.accessor<std::int64_t, 1>();
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    acc[static_cast<std::int64_t>(i)] = static_cast<std::int64_t>(sequences[i].size());
  }
  return out;
}

std::vector<SampledCaption> sample_captions(CaptionGeneratorImpl& generator, const EncodedAudio& audio,
                                            at::Generator& rng) {
  const auto noise = generator.draw_noise(audio.size(), rng);
  return sample_captions(generator, audio, noise, rng);
}

std::vector<SampledCaption> sample_captions(CaptionGeneratorImpl& generator, const EncodedAudio& audio,
                                            const torch::Tensor& noise, at::Generator& rng) {
  torch::NoGradGuard no_grad;
  check_noise(generator, noise, audio.size());
  std::vector<std::vector<double>> logprobs;
  auto seqs = autoregressive(
      generator, audio, noise,
      [&rng](const torch::Tensor& lp) { return at::multinomial(lp.exp(), 1, false, rng).squeeze(1); }, &logprobs);
  std::vector<SampledCaption> out;
  out.reserve(seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    out.push_back({std::move(seqs[i]), std::move(logprobs[i]), noise[static_cast<std::int64_t>(i)].clone()});
  }
  return out;
}

std::vector<TokenSeq> greedy_decode(CaptionGeneratorImpl& generator, const EncodedAudio& audio,
                                    const torch::Tensor& noise) {
  torch::NoGradGuard no_grad;
  const auto z = noise.defined() ? noise : generator.zero_noise(audio.size());
  check_noise(generator, z, audio.size());
  return autoregressive(
      generator, audio, z, [](const torch::Tensor& lp) { return lp.argmax(1); }, nullptr);
}

std::vector<BeamHypothesis> beam_search(CaptionGeneratorImpl& generator, const EncodedAudio& audio,
                                        std::int64_t beam_size, const torch::Tensor& noise) {
  if (beam_size < 1) {
    throw InputError("beam size must be >= 1");
  }
  if (audio.size() != 1) {
    throw InputError("beam search decodes one clip at a time");
  }
  torch::NoGradGuard no_grad;
  const auto z = noise.defined() ? noise : generator.zero_noise(1);
  check_noise(generator, z, 1);
  const auto max_len = static_cast<std::size_t>(generator.config().max_len);

  struct Live {
    TokenSeq tokens;
    double log_prob;
  };
  struct Expansion {
    std::size_t beam;
    corpus::TokenId token;
    double log_prob;
  };
  std::vector<Live> live{{TokenSeq{Vocabulary::kStart}, 0.0}};
  std::vector<BeamHypothesis> finished;
  while (!live.empty()) {
    const auto rows = static_cast<std::int64_t>(live.size());
    std::vector<TokenSeq> prefixes;
    for (const auto& l : live) {
      prefixes.push_back(l.tokens);
    }
    const auto lp = next_step(generator, audio.repeat(rows), prefixes, z.expand({rows, z.size(1), z.size(2)}));
    auto acc = lp.accessor<double, 2>();
    std::vector<Expansion> expansions;
    for (std::size_t b = 0; b < live.size(); ++b) {
      for (std::int64_t v = 0; v < lp.size(1); ++v) {
        const double step = acc[static_cast<std::int64_t>(b)][v];
        if (std::isfinite(step)) {
          expansions.push_back({b, static_cast<corpus::TokenId>(v), live[b].log_prob + step});
        }
      }
    }
    // stable: ties keep (beam, token) order, which matches argmax for beam 1
    std::stable_sort(expansions.begin(), expansions.end(),
                     [](const Expansion& a, const Expansion& b) { return a.log_prob > b.log_prob; });
    if (expansions.size() > static_cast<std::size_t>(beam_size)) {
      expansions.resize(static_cast<std::size_t>(beam_size));
    }
    std::vector<Live> next;
    for (const auto& e : expansions) {
      TokenSeq tokens = live[e.beam].tokens;
      tokens.push_back(e.token);
      if (e.token == Vocabulary::kEnd || tokens.size() >= max_len) {
        const double generated = static_cast<double>(tokens.size() - 1);
        finished.push_back({std::move(tokens), e.log_prob, e.log_prob / generated});
      } else {
        next.push_back({std::move(tokens), e.log_prob});
      }
    }
    live = std::move(next);
  }
  std::stable_sort(finished.begin(), finished.end(),
                   [](const BeamHypothesis& a, const BeamHypothesis& b) { return a.score > b.score; });
  if (finished.size() > static_cast<std::size_t>(beam_size)) {
    finished.resize(static_cast<std::size_t>(beam_size));
  }
  return finished;
}

torch::Tensor sequence_log_probs(CaptionGeneratorImpl& generator, const EncodedAudio& audio,
                                 const torch::Tensor& tokens, const torch::Tensor& noise) {
  const auto length = tokens.size(1);
  if (length < 2) {
    throw InputError("teacher forcing needs at least one target token");
  }
  const auto inputs = tokens.index({Slice(), Slice(0, length - 1)});
  const auto targets = tokens.index({Slice(), Slice(1, length)});
  const auto lp = generator.log_probs(audio, inputs, noise.index({Slice(), Slice(0, length - 1)}));
  const auto picked = lp.gather(2, targets.unsqueeze(2)).squeeze(2);
  return picked.masked_fill(targets == Vocabulary::kPad, 0.0);
}

}  // namespace dac::model
