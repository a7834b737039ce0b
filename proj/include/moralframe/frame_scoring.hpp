#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "moralframe/embed_store.hpp"
#include "moralframe/frame_axes.hpp"
#include "moralframe/preprocess.hpp"

namespace moralframe {

// Cosine of each embedded token occurrence with each axis. All five lists
// have the same length. Tokens that are absent from the store, or whose
// vector has zero norm, are skipped and counted in `n_oov`.
struct Contributions {
  PerFoundation<std::vector<double>> values;
  std::size_t n_oov = 0;

  std::size_t n_scored() const { return values[0].size(); }
};

Contributions word_contributions(std::span<const std::string> tokens, const AxisSet& axes,
                                 const EmbeddingStore& store);

struct CorpusBaseline {
  PerFoundation<double> baseline_bias{};
  std::size_t n_documents = 0;
};

struct FrameScores {
  std::string doc_id;
  std::string label;
  PerFoundation<double> bias{};
  PerFoundation<double> intensity{};
  std::size_t n_scored_tokens = 0;
};

// Mean contribution per axis. Values are summed in ascending order so the
// result does not depend on token order. DataError if a list is empty.
PerFoundation<double> frame_bias(const Contributions& contributions);

// Unweighted mean of document biases, summed in the given order.
CorpusBaseline corpus_baseline(std::span<const PerFoundation<double>> biases);

// (1/N) * sum_i (c_i - baseline)^2 per axis, summed in ascending order of c_i.
PerFoundation<double> frame_intensity(const Contributions& contributions,
                                      const CorpusBaseline& baseline);

struct ScoredCorpus {
  std::vector<FrameScores> scores;  // input order, skipped documents omitted
  CorpusBaseline baseline;
  std::vector<std::string> skipped;  // ids with no embedded token
  std::size_t n_scored_tokens = 0;
  std::size_t n_oov_tokens = 0;
};

// Pass 1: contributions, biases, baseline. Pass 2: intensities against that
// baseline. DataError when no document is scorable.
ScoredCorpus score_corpus(std::span<const Document> corpus, const AxisSet& axes,
                          const EmbeddingStore& store);

}  // namespace moralframe
