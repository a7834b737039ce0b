#include "moralframe/frame_scoring.hpp"

#include <algorithm>

#include "moralframe/error.hpp"

namespace moralframe {

Contributions word_contributions(std::span<const std::string> tokens, const AxisSet& axes,
                                 const EmbeddingStore& store) {
  Contributions out;
  for (auto& list : out.values) list.reserve(tokens.size());
  for (const auto& token : tokens) {
    auto v = store.lookup(token);
    if (!v || norm(*v) == 0.0) {
      ++out.n_oov;
      continue;
    }
    for (Foundation f : kFoundations) {
      out.values[index(f)].push_back(cosine(*v, axes[f].axis));
    }
  }
  return out;
}

namespace {

std::vector<double> sorted_copy(const std::vector<double>& values) {
  std::vector<double> s = values;
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

PerFoundation<double> frame_bias(const Contributions& contributions) {
  PerFoundation<double> bias{};
  for (Foundation f : kFoundations) {
    const auto& list = contributions.values[index(f)];
    if (list.empty()) throw DataError("unscorable document: no embedded tokens");
    double sum = 0.0;
    for (double c : sorted_copy(list)) sum += c;
    bias[index(f)] = sum / static_cast<double>(list.size());
  }
  return bias;
}

CorpusBaseline corpus_baseline(std::span<const PerFoundation<double>> biases) {
  if (biases.empty()) throw DataError("corpus baseline of an empty corpus");
  CorpusBaseline out;
  out.n_documents = biases.size();
  for (const auto& b : biases) {
    for (std::size_t i = 0; i < kFoundationCount; ++i) out.baseline_bias[i] += b[i];
  }
  for (double& v : out.baseline_bias) v /= static_cast<double>(biases.size());
  return out;
}

PerFoundation<double> frame_intensity(const Contributions& contributions,
                                      const CorpusBaseline& baseline) {
  PerFoundation<double> intensity{};
  for (Foundation f : kFoundations) {
    const auto& list = contributions.values[index(f)];
    if (list.empty()) throw DataError("unscorable document: no embedded tokens");
    const double base = baseline.baseline_bias[index(f)];
    double sum = 0.0;
    for (double c : sorted_copy(list)) sum += (c - base) * (c - base);
    intensity[index(f)] = sum / static_cast<double>(list.size());
  }
  return intensity;
}

ScoredCorpus score_corpus(std::span<const Document> corpus, const AxisSet& axes,
                          const EmbeddingStore& store) {
  if (axes.dim != store.dim()) {
    throw DataError("axis set dimension " + std::to_string(axes.dim) +
                    " does not match embedding dimension " + std::to_string(store.dim()));
  }
  ScoredCorpus out;
  std::vector<Contributions> contributions;
  std::vector<PerFoundation<double>> biases;

  for (const auto& doc : corpus) {
    Contributions c = word_contributions(doc.tokens, axes, store);
    out.n_oov_tokens += c.n_oov;
    if (c.n_scored() == 0) {
      out.skipped.push_back(doc.id);
      continue;
    }
    out.n_scored_tokens += c.n_scored();
    FrameScores s;
    s.doc_id = doc.id;
    s.label = doc.label;
    s.n_scored_tokens = c.n_scored();
    s.bias = frame_bias(c);
    biases.push_back(s.bias);
    out.scores.push_back(std::move(s));
    contributions.push_back(std::move(c));
  }
  if (out.scores.empty()) throw DataError("no scorable documents: every document is out of vocabulary");

  out.baseline = corpus_baseline(biases);
  for (std::size_t i = 0; i < out.scores.size(); ++i) {
    out.scores[i].intensity = frame_intensity(contributions[i], out.baseline);
  }
  return out;
}

}  // namespace moralframe
