#include "dac/corpus/unpaired.hpp"

#include "dac/errors.hpp"

namespace dac::corpus {

std::map<std::string, std::vector<UnpairedCaption>> sample_unpaired(
    std::span<const AudioClip* const> batch, std::mt19937_64& rng, std::size_t per_clip) {
  if (batch.size() < 2) {
    throw InputError("unpaired sampling needs a batch of at least 2 clips");
  }
  std::map<std::string, std::vector<UnpairedCaption>> out;
  for (const auto* clip : batch) {
    if (!out.emplace(clip->clip_id, std::vector<UnpairedCaption>{}).second) {
      throw InputError("duplicate clip id in batch: " + clip->clip_id);
    }
  }
  const std::size_t pool = (batch.size() - 1) * kRefsPerClip;
  std::uniform_int_distribution<std::size_t> draw(0, pool - 1);
  for (std::size_t target = 0; target < batch.size(); ++target) {
    auto& picked = out[batch[target]->clip_id];
    for (std::size_t k = 0; k < per_clip; ++k) {
      const std::size_t slot = draw(rng);
      std::size_t origin = slot / kRefsPerClip;
      if (origin >= target) {
        ++origin;  // skip the target clip itself
      }
      const std::size_t ref = slot % kRefsPerClip;
      picked.push_back({origin, ref, batch[origin]->captions[ref]});
    }
  }
  return out;
}

}  // namespace dac::corpus
