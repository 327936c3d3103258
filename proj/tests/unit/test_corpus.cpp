#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "dac/corpus/caption.hpp"
#include "dac/corpus/manifest.hpp"
#include "dac/corpus/npy.hpp"
#include "dac/corpus/text.hpp"
#include "dac/corpus/toy_dataset.hpp"
#include "dac/corpus/unpaired.hpp"
#include "dac/corpus/vocabulary.hpp"
#include "dac/errors.hpp"

namespace fs = std::filesystem;
using namespace dac::corpus;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("dac_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Vocabulary small_vocab() {
  const std::vector<std::string> caps{"a dog barks", "water flows", "a dog runs"};
  return Vocabulary::build(caps);
}

}  // namespace

TEST(Text, NormalizeStripsPunctuationAndCase) {
  EXPECT_EQ(normalize_text("  A Dog,  Barks!! "), "a dog barks");
  EXPECT_EQ(normalize_text("!!!"), "");
  EXPECT_EQ(normalize_text("rain\t\non  roof"), "rain on roof");
}

TEST(Text, NormalizeIsIdempotent) {
  std::mt19937_64 rng(3);
  const std::string alphabet = "aB c,.!?\t  Zx9";
  for (int trial = 0; trial < 200; ++trial) {
    std::string raw;
    for (int i = 0; i < 20; ++i) {
      raw += alphabet[rng() % alphabet.size()];
    }
    const auto once = normalize_text(raw);
    EXPECT_EQ(normalize_text(once), once);
    EXPECT_EQ(join_words(split_words(once)), once);
  }
}

TEST(Caption, SentinelsAroundContent) {
  const auto vocab = small_vocab();
  const auto c = normalize_and_tokenize("A Dog Barks.", vocab);
  ASSERT_EQ(c.tokens.size(), 5U);
  EXPECT_EQ(c.tokens.front(), Vocabulary::kStart);
  EXPECT_EQ(c.tokens.back(), Vocabulary::kEnd);
  EXPECT_EQ(vocab.token(c.tokens[1]), "a");
  EXPECT_EQ(vocab.token(c.tokens[3]), "barks");
  EXPECT_EQ(c.text, "a dog barks");
  EXPECT_TRUE(c.terminated());
}

TEST(Caption, SingleWord) {
  const auto vocab = small_vocab();
  const auto c = normalize_and_tokenize("water", vocab);
  EXPECT_EQ(c.tokens, (std::vector<TokenId>{Vocabulary::kStart, vocab.id("water"), Vocabulary::kEnd}));
  EXPECT_EQ(c.length(), 1U);
}

TEST(Caption, EmptyAfterNormalizationRejected) {
  EXPECT_THROW(normalize_and_tokenize("!!!", small_vocab()), dac::InputError);
}

TEST(Caption, UnknownWordsMapToUnknown) {
  const auto c = normalize_and_tokenize("a cat", small_vocab());
  EXPECT_EQ(c.tokens[2], Vocabulary::kUnknown);
}

TEST(Caption, TokenizeDetokenizeRoundTrip) {
  const auto vocab = small_vocab();
  for (const std::string text : {"a dog barks", "water flows", "dog a runs water"}) {
    const auto c = normalize_and_tokenize(text, vocab);
    EXPECT_EQ(detokenize(c, vocab), text);
    EXPECT_EQ(normalize_and_tokenize(detokenize(c, vocab), vocab), c);
  }
}

TEST(Caption, TruncatedDecodeIsNotTerminated) {
  const auto vocab = small_vocab();
  const auto c = caption_from_tokens({Vocabulary::kStart, vocab.id("dog"), vocab.id("runs")}, vocab);
  EXPECT_FALSE(c.terminated());
  EXPECT_EQ(c.length(), 2U);
  EXPECT_THROW(caption_from_tokens({vocab.id("dog")}, vocab), dac::InputError);
}

TEST(Vocabulary, HandCountsAndDenseIds) {
  const std::vector<std::string> caps{"a a", "a b"};
  const auto v = Vocabulary::build(caps);
  EXPECT_EQ(v.size(), 6U);
  EXPECT_EQ(v.count("a"), 3U);
  EXPECT_EQ(v.count("b"), 1U);
  EXPECT_EQ(v.count("<sos>"), 0U);
  EXPECT_EQ(v.id("<pad>"), 0);
  EXPECT_EQ(v.id("<sos>"), 1);
  EXPECT_EQ(v.id("<eos>"), 2);
  EXPECT_EQ(v.id("<unk>"), 3);
  // more frequent first
  EXPECT_EQ(v.id("a"), 4);
  EXPECT_EQ(v.id("b"), 5);
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(v.id(v.token(static_cast<TokenId>(i))), static_cast<TokenId>(i));
  }
}

TEST(Vocabulary, JsonRoundTrip) {
  const auto v = small_vocab();
  const auto w = Vocabulary::from_json(v.to_json());
  ASSERT_EQ(w.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(w.token(static_cast<TokenId>(i)), v.token(static_cast<TokenId>(i)));
  }
  EXPECT_EQ(w.counts(), v.counts());
}

TEST(Vocabulary, ToyVocabularyMatchesWordScan) {
  const auto toy = make_toy_dataset(7, 20);
  std::set<std::string> words;
  for (const auto& clip : toy.clips) {
    for (const auto& c : clip.captions) {
      std::string w;
      for (char ch : c + " ") {
        if (ch == ' ') {
          words.insert(w);
          w.clear();
        } else {
          w += ch;
        }
      }
    }
  }
  const auto v = Vocabulary::build(all_captions(toy.clips));
  EXPECT_EQ(v.size(), words.size() + Vocabulary::kNumSpecials);
}

TEST(Npy, RoundTrip) {
  const auto dir = scratch_dir("npy");
  FeatureMatrix m(3, kMelBins);
  for (std::size_t f = 0; f < 3; ++f) {
    for (std::size_t b = 0; b < kMelBins; ++b) {
      m.at(f, b) = static_cast<float>(f) * 0.5F - static_cast<float>(b);
    }
  }
  write_npy((dir / "m.npy").string(), m);
  EXPECT_EQ(read_npy((dir / "m.npy").string()), m);
}

class ManifestTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = scratch_dir("manifest");
    write_npy((dir_ / "x.npy").string(), FeatureMatrix(4, kMelBins, 1.0F));
  }

  std::string write(const std::vector<std::string>& lines) {
    const auto path = dir_ / "m.jsonl";
    std::ofstream out(path);
    for (const auto& l : lines) {
      out << l << '\n';
    }
    return path.string();
  }

  static std::string record(const std::string& id, const std::string& features, int n_captions) {
    std::string caps;
    for (int i = 0; i < n_captions; ++i) {
      caps += std::string(i ? "," : "") + "\"Caption Number " + std::to_string(i) + ".\"";
    }
    return R"({"clip_id": ")" + id + R"(", "features": ")" + features + R"(", "captions": [)" + caps + "]}";
  }

  fs::path dir_;
};

TEST_F(ManifestTest, ThreeLinesThreeClips) {
  const auto clips = load_manifest(write({record("a", "x.npy", 5), record("b", "x.npy", 5), record("c", "x.npy", 5)}));
  ASSERT_EQ(clips.size(), 3U);
  EXPECT_EQ(clips[1].clip_id, "b");
  EXPECT_EQ(clips[0].captions[2], "caption number 2");
  EXPECT_EQ(clips[2].features.frames(), 4U);
}

TEST_F(ManifestTest, FourCaptionsCitesLine) {
  const auto path = write({record("a", "x.npy", 5), record("b", "x.npy", 4)});
  try {
    load_manifest(path);
    FAIL() << "expected LoadError";
  } catch (const dac::LoadError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
}

TEST_F(ManifestTest, MissingFeatureFileNamed) {
  const auto path = write({record("a", "absent.npy", 5)});
  try {
    load_manifest(path);
    FAIL() << "expected LoadError";
  } catch (const dac::LoadError& e) {
    EXPECT_NE(std::string(e.what()).find("absent.npy"), std::string::npos) << e.what();
  }
}

TEST_F(ManifestTest, WriteThenLoad) {
  const auto toy = make_toy_dataset(1, 4);
  const auto path = (dir_ / "toy.jsonl").string();
  write_manifest(path, toy.clips);
  const auto back = load_manifest(path);
  ASSERT_EQ(back.size(), toy.clips.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].clip_id, toy.clips[i].clip_id);
    EXPECT_EQ(back[i].captions, toy.clips[i].captions);
    EXPECT_EQ(back[i].features, toy.clips[i].features);
  }
}

TEST(Toy, Deterministic) {
  const auto a = make_toy_dataset(7, 20);
  const auto b = make_toy_dataset(7, 20);
  ASSERT_EQ(a.clips.size(), 20U);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(a.clips[i].captions, b.clips[i].captions);
    EXPECT_EQ(a.clips[i].features, b.clips[i].features);
  }
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_THROW(make_toy_dataset(7, 1), dac::InputError);
}

TEST(Toy, ClassWordScanMatchesLabels) {
  const auto toy = make_toy_dataset(7, 20);
  ASSERT_EQ(toy.class_words.size(), kToyClasses);
  // table[clip][class] = number of the clip's captions naming that class word
  for (std::size_t i = 0; i < toy.clips.size(); ++i) {
    EXPECT_EQ(toy.labels[i], i % kToyClasses);
    for (std::size_t k = 0; k < kToyClasses; ++k) {
      int hits = 0;
      for (const auto& c : toy.clips[i].captions) {
        const auto words = split_words(c);
        hits += std::count(words.begin(), words.end(), toy.class_words[k]) > 0 ? 1 : 0;
      }
      EXPECT_EQ(hits, k == toy.labels[i] ? 5 : 0) << "clip " << i << " class " << k;
    }
  }
}

namespace {

std::vector<const AudioClip*> pointers(const std::vector<AudioClip>& clips) {
  std::vector<const AudioClip*> out;
  for (const auto& c : clips) {
    out.push_back(&c);
  }
  return out;
}

}  // namespace

TEST(Unpaired, TwoClipsDrawFromTheOther) {
  const auto toy = make_toy_dataset(2, 2);
  const auto batch = pointers(toy.clips);
  std::mt19937_64 rng(1);
  const auto out = sample_unpaired(batch, rng, 8);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& other = toy.clips[1 - i];
    for (const auto& u : out.at(toy.clips[i].clip_id)) {
      EXPECT_EQ(u.origin, 1 - i);
      EXPECT_EQ(u.text, other.captions[u.reference]);
    }
  }
}

TEST(Unpaired, OriginNeverTheTarget) {
  const auto toy = make_toy_dataset(4, 32);
  const auto batch = pointers(toy.clips);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    const auto out = sample_unpaired(batch, rng, 1);
    ASSERT_EQ(out.size(), 32U);
    for (std::size_t i = 0; i < 32; ++i) {
      const auto& drawn = out.at(toy.clips[i].clip_id);
      ASSERT_EQ(drawn.size(), 1U);
      EXPECT_NE(drawn[0].origin, i);
    }
  }
}

TEST(Unpaired, SeededSamplingRepeats) {
  const auto toy = make_toy_dataset(4, 6);
  const auto batch = pointers(toy.clips);
  std::mt19937_64 r1(9);
  std::mt19937_64 r2(9);
  const auto a = sample_unpaired(batch, r1, 3);
  const auto b = sample_unpaired(batch, r2, 3);
  for (const auto& [id, list] : a) {
    ASSERT_EQ(list.size(), b.at(id).size());
    for (std::size_t k = 0; k < list.size(); ++k) {
      EXPECT_EQ(list[k].origin, b.at(id)[k].origin);
      EXPECT_EQ(list[k].reference, b.at(id)[k].reference);
    }
  }
}

TEST(Unpaired, RejectsTinyOrDuplicateBatches) {
  const auto toy = make_toy_dataset(4, 2);
  std::mt19937_64 rng(0);
  std::vector<const AudioClip*> one{&toy.clips[0]};
  EXPECT_THROW(sample_unpaired(one, rng), dac::InputError);
  std::vector<const AudioClip*> dup{&toy.clips[0], &toy.clips[0]};
  EXPECT_THROW(sample_unpaired(dup, rng), dac::InputError);
}
