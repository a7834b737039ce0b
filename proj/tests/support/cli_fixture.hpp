#pragma once

#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "support/fixtures.hpp"

namespace fixture {

// A complete set of input files for every subcommand.
//
// Axes: foundation f uses direction e0 + e(f+1) in 8 dimensions; its
// virtue words sit near +direction and its vice words near -direction, so
// every validation property holds. Neutral words are small random vectors.
// The corpus has two labelled groups: "virtue" documents draw `bias_share`
// of their tokens from care/virtue words, "vice" documents from care/vice,
// the rest from neutral words and other foundations.
struct CliFiles {
  std::filesystem::path embeddings, lexicon, corpus, stopwords, pairs, tgt_embeddings, split_file;
  std::vector<std::string> virtue_care, vice_care;
};

struct CliFixtureOptions {
  std::uint64_t seed = 7;
  std::size_t docs_per_group = 30;
  std::size_t doc_length = 12;
  double bias_share = 0.7;
  std::size_t words_per_cell = 4;
  std::size_t neutral_words = 30;
};

inline std::string format_vector(const std::vector<double>& v) {
  std::ostringstream out;
  out.precision(17);
  for (double x : v) out << ' ' << x;
  return out.str();
}

inline CliFiles write_cli_fixture(const std::filesystem::path& dir, const CliFixtureOptions& o = {}) {
  constexpr std::size_t dim = 8;
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> noise(0.0, 0.08);
  std::normal_distribution<double> gauss(0.0, 0.3);

  std::vector<std::pair<std::string, std::vector<double>>> vocab;
  std::ostringstream lexicon;
  lexicon << "# language=en\nfoundation\tpole\tword\n";
  std::array<std::array<std::vector<std::string>, 2>, 5> cells;
  for (std::size_t f = 0; f < 5; ++f) {
    for (std::size_t p = 0; p < 2; ++p) {
      const double sign = p == 0 ? 1.0 : -1.0;
      for (std::size_t k = 0; k < o.words_per_cell; ++k) {
        const std::string word = std::string(moralframe::name(moralframe::kFoundations[f])) +
                                 (p == 0 ? "good" : "bad") + std::to_string(k);
        std::vector<double> v(dim);
        for (double& x : v) x = noise(rng);
        v[0] += sign;
        v[f + 1] += sign;
        vocab.emplace_back(word, v);
        cells[f][p].push_back(word);
        lexicon << moralframe::name(moralframe::kFoundations[f]) << '\t'
                << moralframe::name(moralframe::kPoles[p]) << '\t' << word << '\n';
      }
    }
  }
  std::vector<std::string> neutral;
  for (std::size_t i = 0; i < o.neutral_words; ++i) {
    const std::string word = "plain" + std::to_string(i);
    std::vector<double> v(dim);
    for (double& x : v) x = gauss(rng);
    vocab.emplace_back(word, v);
    neutral.push_back(word);
  }

  CliFiles files;
  files.embeddings = dir / "embeddings.txt";
  files.lexicon = dir / "lexicon.tsv";
  files.corpus = dir / "corpus.jsonl";
  files.stopwords = dir / "stopwords.txt";
  files.pairs = dir / "pairs.tsv";
  files.tgt_embeddings = dir / "embeddings_de.txt";
  files.split_file = dir / "split.tsv";
  files.virtue_care = cells[0][0];
  files.vice_care = cells[0][1];

  std::ostringstream emb;
  emb << vocab.size() << ' ' << dim << '\n';
  for (const auto& [w, v] : vocab) emb << w << format_vector(v) << '\n';
  write_file(files.embeddings, emb.str());
  write_file(files.lexicon, lexicon.str());
  write_file(files.stopwords, "# test list\nthe\nand\nof\n");

  // Target space: an orthogonal transform of the source space, words
  // prefixed with "de".
  const Eigen::MatrixXd rotation = random_orthogonal(rng, dim);
  std::ostringstream tgt, pairs;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto& [w, v] = vocab[i];
    const Eigen::VectorXd y = rotation * Eigen::Map<const Eigen::VectorXd>(v.data(), dim);
    tgt << "de" << w << format_vector(std::vector<double>(y.data(), y.data() + dim)) << '\n';
    if (i % 3 == 0) pairs << w << "\tde" << w << '\n';
  }
  write_file(files.tgt_embeddings, tgt.str());
  write_file(files.pairs, pairs.str());

  // Corpus words outside care, for the non-biased share of each document.
  std::vector<std::string> filler = neutral;
  for (std::size_t f = 1; f < 5; ++f)
    for (std::size_t p = 0; p < 2; ++p) filler.insert(filler.end(), cells[f][p].begin(), cells[f][p].end());

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::ostringstream corpus, split;
  const char* decorations[] = {"", "The ", "#", "@"};
  std::size_t n = 0;
  for (std::size_t g = 0; g < 2; ++g) {
    const auto& biased = g == 0 ? cells[0][0] : cells[0][1];
    for (std::size_t d = 0; d < o.docs_per_group; ++d, ++n) {
      std::string text;
      for (std::size_t t = 0; t < o.doc_length; ++t) {
        const auto& pool = unit(rng) < o.bias_share ? biased : filler;
        std::string word = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
        if (t % 5 == 0) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
        text += decorations[(d + t) % 4] + word + (t % 4 == 3 ? ", " : " ");
      }
      if (d % 7 == 0) text += "https://t.co/x" + std::to_string(d);
      char id[32];
      std::snprintf(id, sizeof(id), "doc%03zu", n);
      corpus << "{\"id\":\"" << id << "\",\"label\":\"" << (g == 0 ? "virtue" : "vice") << "\",\"text\":\"" << text
             << "\"}\n";
      split << id << '\t' << n % 3 << '\n';
    }
  }
  write_file(files.corpus, corpus.str());
  write_file(files.split_file, split.str());
  return files;
}

}  // namespace fixture
