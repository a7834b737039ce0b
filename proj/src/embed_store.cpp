#include "moralframe/embed_store.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "moralframe/error.hpp"
#include "moralframe/kernels.hpp"

namespace moralframe {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

bool parse_integer(std::string_view s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool valid_token(std::string_view token) {
  if (token.empty()) return false;
  return std::none_of(token.begin(), token.end(), [](char c) { return is_space(c) || c == '\n'; });
}

}  // namespace

EmbeddingStore::EmbeddingStore(std::size_t dim, std::string source_label)
    : dim_(dim), source_label_(std::move(source_label)) {
  if (dim_ == 0) throw DomainError("embedding dimension must be at least 1");
}

bool EmbeddingStore::add(std::string_view token, VectorView values) {
  if (!valid_token(token)) {
    throw DomainError("invalid embedding token '" + std::string(token) + "'");
  }
  if (values.size() != dim_) {
    throw DomainError("vector for '" + std::string(token) + "' has length " +
                      std::to_string(values.size()) + ", expected " + std::to_string(dim_));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw DomainError("vector for '" + std::string(token) + "' has a non-finite entry");
    }
  }
  auto [it, inserted] = index_.try_emplace(std::string(token), tokens_.size());
  if (!inserted) return false;
  tokens_.emplace_back(token);
  data_.insert(data_.end(), values.begin(), values.end());
  norms_.push_back(std::sqrt(kernels::squared_norm(values)));
  return true;
}

std::optional<VectorView> EmbeddingStore::lookup(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return row(it->second);
}

bool EmbeddingStore::contains(std::string_view token) const {
  return index_.find(std::string(token)) != index_.end();
}

EmbeddingStore read_embeddings(std::istream& in, const std::string& source_label,
                               const TokenSet* restrict_to) {
  std::optional<EmbeddingStore> store;
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    auto fields = split_fields(line);
    if (fields.empty()) continue;

    if (!seen_content) {
      seen_content = true;
      if (fields.size() == 2 && parse_integer(fields[0]) && parse_integer(fields[1])) continue;
    }

    if (!store) {
      if (fields.size() < 2) {
        throw ParseError(source_label, line_no, "expected a token followed by at least one value");
      }
      store.emplace(fields.size() - 1, source_label);
    }
    const std::size_t dim = store->dim();
    if (fields.size() != dim + 1) {
      throw ParseError(source_label, line_no,
                       "dimension mismatch: " + std::to_string(fields.size() - 1) +
                           " values, expected " + std::to_string(dim));
    }

    std::string_view token = fields[0];
    if (restrict_to && !restrict_to->contains(token)) continue;
    if (store->contains(token)) {
      store->note_duplicate();
      continue;
    }

    values.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      std::string_view f = fields[j + 1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), values[j]);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw ParseError(source_label, line_no, "cannot parse value '" + std::string(f) + "'");
      }
      if (!std::isfinite(values[j])) {
        throw ParseError(source_label, line_no, "non-finite value '" + std::string(f) + "'");
      }
    }
    store->add(token, values);
  }

  if (!store || store->empty()) {
    throw DataError(source_label + ": no embedding rows loaded");
  }
  return std::move(*store);
}

EmbeddingStore load_embeddings(const std::filesystem::path& path, const TokenSet* restrict_to) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embeddings file " + path.string());
  return read_embeddings(in, path.string(), restrict_to);
}

double norm(VectorView a) { return std::sqrt(kernels::squared_norm(a)); }

double cosine(VectorView a, VectorView b) {
  if (a.size() != b.size()) {
    throw DomainError("cosine: length mismatch (" + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + ")");
  }
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw DomainError("cosine: zero-norm vector");
  return std::clamp(kernels::dot(a, b) / (na * nb), -1.0, 1.0);
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingStore& store, VectorView query,
                                        std::size_t k, const TokenSet* exclude) {
  if (query.size() != store.dim()) {
    throw DomainError("nearest_neighbors: query length " + std::to_string(query.size()) +
                      " does not match store dimension " + std::to_string(store.dim()));
  }
  if (k == 0) throw DomainError("nearest_neighbors: k must be positive");
  const double qn = norm(query);
  if (qn == 0.0) throw DomainError("nearest_neighbors: zero-norm query");

  std::vector<double> dots(store.size());
  kernels::active().dot_rows(store.data().data(), store.size(), store.dim(), query.data(),
                             dots.data());

  std::vector<std::pair<double, std::size_t>> candidates;
  candidates.reserve(store.size());
  for (std::size_t r = 0; r < store.size(); ++r) {
    if (store.row_norm(r) == 0.0) continue;
    if (exclude && exclude->contains(store.token(r))) continue;
    candidates.emplace_back(std::clamp(dots[r] / (qn * store.row_norm(r)), -1.0, 1.0), r);
  }

  auto better = [&](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return store.token(x.second) < store.token(y.second);
  };
  const std::size_t take = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + take, candidates.end(), better);

  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.push_back({store.token(candidates[i].second), candidates[i].first});
  }
  return out;
}

}  // namespace moralframe
