#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "moralframe/classifier.hpp"
#include "moralframe/frame_axes.hpp"
#include "moralframe/preprocess.hpp"

namespace moralframe::cli {

// Bad flag values that CLI11 cannot catch (e.g. a malformed --split).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BuildAxesOptions {
  std::string embeddings, lexicon, out;
};

struct ValidateOptions {
  std::string axes, embeddings, lexicon, out;
  ValidationThresholds thresholds;
  std::size_t grid_size = 50;
  std::optional<double> bandwidth;
};

struct ScoreOptions {
  std::string corpus, axes, embeddings, stopwords, out;
  PipelineOptions pipeline;
};

struct TranslateOptions {
  std::string pairs, src_embeddings, tgt_embeddings, lexicon, out;
  std::size_t k = 1;
  double ridge = 0.0;
  std::string target_language = "und";
};

struct ClassifyOptions {
  std::string scores, split, out;
  Hyperparams hyperparams;
  std::string averaging = "weighted";
  std::optional<std::string> positive;
};

int cmd_build_axes(const BuildAxesOptions& o, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err);
int cmd_score(const ScoreOptions& o, std::ostream& out, std::ostream& err);
int cmd_translate(const TranslateOptions& o, std::ostream& out, std::ostream& err);
int cmd_classify(const ClassifyOptions& o, std::ostream& out, std::ostream& err);

}  // namespace moralframe::cli
