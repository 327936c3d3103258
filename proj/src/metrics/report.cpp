#include "dac/metrics/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "dac/metrics/bleu.hpp"
#include "dac/metrics/cider.hpp"
#include "dac/metrics/diversity.hpp"

namespace dac::metrics {
namespace {

void check_keys(const CaptionSets& generated, const CaptionSets& references) {
  std::vector<std::string> missing_refs;
  std::vector<std::string> missing_gen;
  for (const auto& [id, caps] : generated) {
    if (references.count(id) == 0) {
      missing_refs.push_back(id);
    }
  }
  for (const auto& [id, refs] : references) {
    if (generated.count(id) == 0) {
      missing_gen.push_back(id);
    }
  }
  if (missing_refs.empty() && missing_gen.empty()) {
    return;
  }
  std::string msg = "clip sets differ;";
  if (!missing_gen.empty()) {
    msg += " missing from generated:";
    for (const auto& id : missing_gen) {
      msg += " " + id;
    }
    msg += ";";
  }
  if (!missing_refs.empty()) {
    msg += " missing from references:";
    for (const auto& id : missing_refs) {
      msg += " " + id;
    }
  }
  throw std::invalid_argument(msg);
}

}  // namespace

FidelityReport evaluate_fidelity(const CaptionSets& generated, const CaptionSets& references,
                                 const std::map<std::string, double>* spice) {
  if (generated.empty()) {
    throw std::invalid_argument("no generated captions to evaluate");
  }
  check_keys(generated, references);

  std::vector<std::vector<Sentence>> documents;
  for (const auto& [id, refs] : references) {
    documents.push_back(refs);
  }
  const auto idf = IdfTable::from_references(documents);

  std::vector<Sentence> candidates;
  std::vector<std::vector<Sentence>> aligned_refs;
  double cider_sum = 0.0;
  for (const auto& [id, caps] : generated) {
    const auto& refs = references.at(id);
    for (const auto& cap : caps) {
      candidates.push_back(cap);
      aligned_refs.push_back(refs);
      cider_sum += cider(cap, refs, idf);
    }
  }
  if (candidates.empty()) {
    throw std::invalid_argument("generated clip sets hold no captions");
  }
  FidelityReport report;
  report.num_clips = generated.size();
  report.num_captions = candidates.size();
  report.bleu4 = corpus_bleu(candidates, aligned_refs, 4);
  report.cider_raw = cider_sum / static_cast<double>(candidates.size());
  if (spice != nullptr) {
    double spice_sum = 0.0;
    for (const auto& [id, caps] : generated) {
      const auto it = spice->find(id);
      if (it == spice->end()) {
        throw std::invalid_argument("SPICE scores lack clip " + id);
      }
      spice_sum += it->second;
    }
    report.spice_raw = spice_sum / static_cast<double>(generated.size());
    report.spider_raw = (report.cider_raw + *report.spice_raw) / 2.0;
  }
  return report;
}

DiversityReport evaluate_diversity(const CaptionSets& generated) {
  DiversityReport report;
  std::vector<Sentence> all;
  double mbleu_sum = 0.0;
  std::size_t mbleu_clips = 0;
  double div1_sum = 0.0;
  double div2_sum = 0.0;
  for (const auto& [id, caps] : generated) {
    all.insert(all.end(), caps.begin(), caps.end());
    if (caps.size() >= 2) {
      mbleu_sum += mbleu(caps, 4);
      ++mbleu_clips;
    }
    div1_sum += div_n(caps, 1);
    div2_sum += div_n(caps, 2);
  }
  report.vocab_size = vocab_size(all);
  if (mbleu_clips > 0) {
    report.mbleu4 = mbleu_sum / static_cast<double>(mbleu_clips);
  }
  if (!generated.empty()) {
    report.div1 = div1_sum / static_cast<double>(generated.size());
    report.div2 = div2_sum / static_cast<double>(generated.size());
  }
  return report;
}

MetricsReport evaluate(const CaptionSets& generated, const CaptionSets& references,
                       const std::map<std::string, double>* spice) {
  return {evaluate_fidelity(generated, references, spice), evaluate_diversity(generated)};
}

MetricsReport evaluate_human(const CaptionSets& references) {
  if (references.empty()) {
    throw std::invalid_argument("no references");
  }
  std::size_t rounds = references.begin()->second.size();
  for (const auto& [id, refs] : references) {
    if (refs.size() != rounds || rounds < 2) {
      throw std::invalid_argument("human evaluation needs the same number (>= 2) of references per clip");
    }
  }
  MetricsReport report;
  for (std::size_t i = 0; i < rounds; ++i) {
    CaptionSets predicted;
    CaptionSets remaining;
    for (const auto& [id, refs] : references) {
      predicted[id] = {refs[i]};
      auto& rest = remaining[id];
      for (std::size_t j = 0; j < refs.size(); ++j) {
        if (j != i) {
          rest.push_back(refs[j]);
        }
      }
    }
    const auto round = evaluate_fidelity(predicted, remaining);
    report.fidelity.bleu4 += round.bleu4 / static_cast<double>(rounds);
    report.fidelity.cider_raw += round.cider_raw / static_cast<double>(rounds);
  }
  report.fidelity.num_clips = references.size();
  report.fidelity.num_captions = references.size() * rounds;
  report.diversity = evaluate_diversity(references);
  return report;
}

nlohmann::json to_json(const MetricsReport& report) {
  const auto& f = report.fidelity;
  const auto& d = report.diversity;
  nlohmann::json j;
  j["scale"] = "BLEU_4, mBLEU_4, div-n in [0,100]; CIDEr and SPIDEr reported as 100 x raw CIDEr-D";
  j["num_clips"] = f.num_clips;
  j["num_captions"] = f.num_captions;
  j["BLEU_4"] = f.bleu4;
  j["CIDEr"] = 100.0 * f.cider_raw;
  j["CIDEr_raw"] = f.cider_raw;
  j["SPIDEr"] = f.spider_raw ? nlohmann::json(100.0 * *f.spider_raw) : nlohmann::json("unavailable");
  if (f.spice_raw) {
    j["SPICE"] = 100.0 * *f.spice_raw;
  }
  j["vocab_size"] = d.vocab_size;
  j["mBLEU_4"] = d.mbleu4 ? nlohmann::json(*d.mbleu4) : nlohmann::json(nullptr);
  j["div_1"] = d.div1;
  j["div_2"] = d.div2;
  return j;
}

std::string format_table(const MetricsReport& report, const std::string& title) {
  const auto& f = report.fidelity;
  const auto& d = report.diversity;
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << title << " (" << f.num_clips << " clips, " << f.num_captions << " captions)\n";
  out << "  BLEU_4      " << fmt(f.bleu4) << '\n';
  out << "  CIDEr       " << fmt(100.0 * f.cider_raw) << "   (raw CIDEr-D x 100)\n";
  out << "  SPIDEr      " << (f.spider_raw ? fmt(100.0 * *f.spider_raw) : std::string("n/a")) << '\n';
  out << "  vocab size  " << d.vocab_size << '\n';
  out << "  mBLEU_4     " << (d.mbleu4 ? fmt(*d.mbleu4) : std::string("n/a")) << '\n';
  out << "  div-1       " << fmt(d.div1) << '\n';
  out << "  div-2       " << fmt(d.div2) << '\n';
  return out.str();
}

}  // namespace dac::metrics
