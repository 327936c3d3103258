#include "dac/training/inference.hpp"

#include "dac/errors.hpp"
#include "dac/model/decoding.hpp"

namespace dac::training {
namespace {

std::string sequence_text(const model::TokenSeq& tokens, const corpus::Vocabulary& vocab) {
  return corpus::detokenize(corpus::caption_from_tokens(tokens, vocab), vocab);
}

}  // namespace

GeneratedCaptions generate_captions(model::CaptionGeneratorImpl& generator,
                                    std::span<const corpus::AudioClip> clips, const corpus::Vocabulary& vocab,
                                    const GenerationOptions& options) {
  if (options.num_samples < 1) {
    throw ConfigError("num_samples must be >= 1");
  }
  if (options.baseline && options.beam_size < options.num_samples) {
    throw ConfigError("beam size " + std::to_string(options.beam_size) + " cannot yield " +
                      std::to_string(options.num_samples) + " captions");
  }
  torch::NoGradGuard no_grad;
  const bool was_training = generator.is_training();
  generator.eval();
  auto rng = model::make_rng(options.seed);
  GeneratedCaptions out;
  for (const auto& clip : clips) {
    const auto audio = generator.encode(model::make_feature_batch(clip.features));
    auto& texts = out[clip.clip_id];
    if (options.baseline) {
      const auto beams = model::beam_search(generator, audio, options.beam_size);
      if (static_cast<std::int64_t>(beams.size()) < options.num_samples) {
        throw TrainingError("beam search found only " + std::to_string(beams.size()) + " hypotheses for " +
                            clip.clip_id);
      }
      for (std::int64_t k = 0; k < options.num_samples; ++k) {
        texts.push_back(sequence_text(beams[static_cast<std::size_t>(k)].tokens, vocab));
      }
    } else {
      const auto noise = generator.draw_noise(options.num_samples, rng);
      for (const auto& seq : model::greedy_decode(generator, audio.repeat(options.num_samples), noise)) {
        texts.push_back(sequence_text(seq, vocab));
      }
    }
  }
  generator.train(was_training);
  return out;
}

metrics::CaptionSets to_caption_sets(const GeneratedCaptions& captions) {
  metrics::CaptionSets sets;
  for (const auto& [id, texts] : captions) {
    auto& s = sets[id];
    for (const auto& t : texts) {
      s.push_back(metrics::to_sentence(t));
    }
  }
  return sets;
}

metrics::CaptionSets reference_sets(std::span<const corpus::AudioClip> clips) {
  metrics::CaptionSets sets;
  for (const auto& clip : clips) {
    auto& s = sets[clip.clip_id];
    for (const auto& t : clip.captions) {
      s.push_back(metrics::to_sentence(t));
    }
  }
  return sets;
}

}  // namespace dac::training
