#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dac/metrics/ngram.hpp"

namespace dac::metrics {

/// clip id -> captions (generated samples or references).
using CaptionSets = std::map<std::string, std::vector<Sentence>>;

// Scales: BLEU, mBLEU and div-n are reported in [0, 100]. CIDEr is kept in
// its raw CIDEr-D scale and reported as 100 x raw (raw 0.400 -> 40.0).
// SPIDEr = (CIDEr + SPICE) / 2 on the raw scale, reported the same way.
struct FidelityReport {
  double bleu4 = 0.0;
  double cider_raw = 0.0;
  std::optional<double> spice_raw;
  std::optional<double> spider_raw;
  std::size_t num_clips = 0;
  std::size_t num_captions = 0;
};

struct DiversityReport {
  std::size_t vocab_size = 0;
  std::optional<double> mbleu4;  // absent when no clip has two or more captions
  double div1 = 0.0;
  double div2 = 0.0;
};

struct MetricsReport {
  FidelityReport fidelity;
  DiversityReport diversity;
};

/// Corpus BLEU_4 over every generated caption and mean CIDEr-D with the idf
/// table built from `references`. SPIDEr is filled only when per-clip SPICE
/// scores are supplied. Throws std::invalid_argument for an empty input or
/// mismatched clip sets (the message lists the offending ids).
FidelityReport evaluate_fidelity(const CaptionSets& generated, const CaptionSets& references,
                                 const std::map<std::string, double>* spice = nullptr);

/// Vocabulary size over all captions; per-clip mBLEU_4, div-1 and div-2
/// averaged over clips.
DiversityReport evaluate_diversity(const CaptionSets& generated);

MetricsReport evaluate(const CaptionSets& generated, const CaptionSets& references,
                       const std::map<std::string, double>* spice = nullptr);

/// Human upper bound: each of the five references in turn is the prediction
/// and the other four are references; fidelity scores are averaged over the
/// five rounds. Diversity is measured on the full reference sets.
MetricsReport evaluate_human(const CaptionSets& references);

nlohmann::json to_json(const MetricsReport& report);
std::string format_table(const MetricsReport& report, const std::string& title);

}  // namespace dac::metrics
