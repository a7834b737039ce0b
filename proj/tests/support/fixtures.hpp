#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Dense>

#include "moralframe/embed_store.hpp"
#include "moralframe/lexicon.hpp"

namespace fixture {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << content;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("moralframe_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::vector<double> gaussian_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(dim);
  for (double& x : v) x = n(rng);
  return v;
}

// A small random world: `n_words` tokens w00.. with random vectors; the
// first 2*10 words are dealt two per (foundation, pole) cell.
struct World {
  std::size_t dim;
  std::map<std::string, std::vector<double>> vectors;
  std::vector<std::string> words;
  std::array<std::array<std::vector<std::string>, 2>, 5> cells;

  moralframe::EmbeddingStore store() const {
    moralframe::EmbeddingStore s(dim, "synthetic");
    for (const auto& w : words) s.add(w, vectors.at(w));
    return s;
  }

  moralframe::MoralLexicon lexicon() const {
    moralframe::MoralLexicon lex("en");
    for (std::size_t f = 0; f < 5; ++f)
      for (std::size_t p = 0; p < 2; ++p)
        for (const auto& w : cells[f][p]) lex.add(moralframe::kFoundations[f], moralframe::kPoles[p], w);
    return lex;
  }

  std::string embeddings_text() const {
    std::ostringstream out;
    out.precision(17);
    for (const auto& w : words) {
      out << w;
      for (double x : vectors.at(w)) out << ' ' << x;
      out << '\n';
    }
    return out.str();
  }

  std::string lexicon_tsv() const {
    std::ostringstream out;
    out << "foundation\tpole\tword\n";
    for (std::size_t f = 0; f < 5; ++f)
      for (std::size_t p = 0; p < 2; ++p)
        for (const auto& w : cells[f][p])
          out << moralframe::name(moralframe::kFoundations[f]) << '\t'
              << moralframe::name(moralframe::kPoles[p]) << '\t' << w << '\n';
    return out.str();
  }
};

inline World random_world(std::uint64_t seed, std::size_t n_words = 20, std::size_t dim = 8) {
  std::mt19937_64 rng(seed);
  World w;
  w.dim = dim;
  for (std::size_t i = 0; i < n_words; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "w%02zu", i);
    w.words.push_back(name);
    w.vectors[name] = gaussian_vector(rng, dim);
  }
  std::size_t next = 0;
  for (std::size_t f = 0; f < 5; ++f)
    for (std::size_t p = 0; p < 2; ++p)
      for (int k = 0; k < 2; ++k) w.cells[f][p].push_back(w.words[next++ % n_words]);
  return w;
}

// World whose cells hold the given vectors verbatim; words are named
// "<foundation>_<pole>_<k>".
inline World world_from_cells(const std::array<std::array<std::vector<std::vector<double>>, 2>, 5>& cells) {
  World w;
  w.dim = cells[0][0].at(0).size();
  for (std::size_t f = 0; f < 5; ++f) {
    for (std::size_t p = 0; p < 2; ++p) {
      for (std::size_t k = 0; k < cells[f][p].size(); ++k) {
        const std::string word = std::string(moralframe::name(moralframe::kFoundations[f])) + "_" +
                                 std::string(moralframe::name(moralframe::kPoles[p])) + "_" +
                                 std::to_string(k);
        w.words.push_back(word);
        w.vectors[word] = cells[f][p][k];
        w.cells[f][p].push_back(word);
      }
    }
  }
  return w;
}

inline std::vector<double> unit_vector(std::size_t dim, std::size_t i, double scale = 1.0) {
  std::vector<double> v(dim, 0.0);
  v[i] = scale;
  return v;
}

// Random orthogonal matrix from the QR factorisation of a Gaussian matrix.
inline Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd a(dim, dim);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = n(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
}

// Source words s00.. with Gaussian vectors; target words t00.. with
// vectors R * x. Cells take two source words each; `counterpart` holds the
// same cells spelled with target words.
struct RotationWorld {
  std::size_t dim;
  Eigen::MatrixXd rotation;
  moralframe::EmbeddingStore src{1};
  moralframe::EmbeddingStore tgt{1};
  std::vector<std::pair<std::string, std::string>> pairs;
  moralframe::MoralLexicon lexicon{"en"};
  moralframe::MoralLexicon counterpart{"de"};
};

inline RotationWorld rotation_world(std::uint64_t seed, std::size_t dim = 8, std::size_t n_words = 30) {
  std::mt19937_64 rng(seed);
  RotationWorld w;
  w.dim = dim;
  w.rotation = random_orthogonal(rng, dim);
  w.src = moralframe::EmbeddingStore(dim, "src");
  w.tgt = moralframe::EmbeddingStore(dim, "tgt");
  for (std::size_t i = 0; i < n_words; ++i) {
    char s[32], t[32];
    std::snprintf(s, sizeof(s), "s%02zu", i);
    std::snprintf(t, sizeof(t), "t%02zu", i);
    const auto x = gaussian_vector(rng, dim);
    const Eigen::VectorXd y = w.rotation * Eigen::Map<const Eigen::VectorXd>(x.data(), dim);
    w.src.add(s, x);
    w.tgt.add(t, std::vector<double>(y.data(), y.data() + dim));
    w.pairs.emplace_back(s, t);
  }
  std::size_t next = 0;
  for (auto f : moralframe::kFoundations) {
    for (auto p : moralframe::kPoles) {
      for (int k = 0; k < 2; ++k, ++next) {
        w.lexicon.add(f, p, w.pairs[next % n_words].first);
        w.counterpart.add(f, p, w.pairs[next % n_words].second);
      }
    }
  }
  return w;
}

}  // namespace fixture
