#include "moralframe/frame_axes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "moralframe/error.hpp"

namespace moralframe {

Vector centroid(std::span<const ResolvedWord> words) {
  if (words.empty()) throw DomainError("centroid of an empty word list");
  const std::size_t dim = words.front().vector.size();
  Vector sum(dim, 0.0);
  for (const auto& w : words) {
    if (w.vector.size() != dim) throw DomainError("centroid: mixed vector lengths");
    for (std::size_t j = 0; j < dim; ++j) sum[j] += w.vector[j];
  }
  const double n = static_cast<double>(words.size());
  for (double& v : sum) v /= n;
  return sum;
}

FrameAxis make_axis(Foundation f, std::span<const ResolvedWord> virtue_words,
                    std::span<const ResolvedWord> vice_words) {
  FrameAxis axis{f, centroid(virtue_words), centroid(vice_words), {}, virtue_words.size(),
                 vice_words.size()};
  if (axis.virtue_centroid.size() != axis.vice_centroid.size()) {
    throw DomainError("make_axis: pole centroids differ in length");
  }
  axis.axis.resize(axis.virtue_centroid.size());
  for (std::size_t j = 0; j < axis.axis.size(); ++j) {
    axis.axis[j] = axis.virtue_centroid[j] - axis.vice_centroid[j];
  }
  const double len = norm(axis.axis);
  if (len == 0.0) {
    throw DomainError("degenerate " + std::string(name(f)) +
                      " axis: virtue and vice centroids are identical");
  }
  for (double& v : axis.axis) v /= len;
  return axis;
}

AxisSet build_axes(const ResolvedLexicon& resolved, std::size_t dim, std::string provenance) {
  AxisSet set;
  set.dim = dim;
  set.provenance = std::move(provenance);
  for (Foundation f : kFoundations) {
    const auto& cells = resolved.resolved[index(f)];
    if (cells[index(Pole::virtue)].empty() || cells[index(Pole::vice)].empty()) {
      const Pole empty = cells[index(Pole::virtue)].empty() ? Pole::virtue : Pole::vice;
      throw DataError("unresolvable lexicon cell " + cell_name(f, empty));
    }
    set.axes[index(f)] = make_axis(f, cells[index(Pole::virtue)], cells[index(Pole::vice)]);
    if (set.axes[index(f)].axis.size() != dim) {
      throw DomainError("build_axes: word vectors do not match dimension " + std::to_string(dim));
    }
  }
  return set;
}

AxisSet build_axes(const MoralLexicon& lexicon, const EmbeddingStore& store) {
  return build_axes(resolve(lexicon, store), store.dim(), store.source_label());
}

AxisValidationReport validate_axes(const AxisSet& axes, const ResolvedLexicon& resolved,
                                   const ValidationThresholds& thresholds) {
  AxisValidationReport report;
  report.thresholds = thresholds;

  report.p1_pass = true;
  report.p2_pass = true;
  for (Foundation f : kFoundations) {
    const FrameAxis& axis = axes[f];
    const std::size_t dim = axis.axis.size();
    Vector mid(dim), diff(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      mid[j] = 0.5 * (axis.virtue_centroid[j] + axis.vice_centroid[j]);
      diff[j] = axis.virtue_centroid[j] - axis.vice_centroid[j];
    }
    const double rel = norm(mid) / norm(diff);
    report.p1_midpoint_rel[index(f)] = rel;
    if (!(rel <= thresholds.p1_max_midpoint_rel)) report.p1_pass = false;

    double cohesion = std::numeric_limits<double>::infinity();
    for (Pole p : kPoles) {
      const Vector& own = p == Pole::virtue ? axis.virtue_centroid : axis.vice_centroid;
      const Vector& other = p == Pole::virtue ? axis.vice_centroid : axis.virtue_centroid;
      const auto& words = resolved.resolved[index(f)][index(p)];
      if (words.empty()) throw DataError("validate_axes: empty cell " + cell_name(f, p));
      double sum = 0.0;
      for (const auto& w : words) sum += cosine(w.vector, own) - cosine(w.vector, other);
      const double margin = sum / static_cast<double>(words.size());
      report.p2_pole_margin[index(f)][index(p)] = margin;
      cohesion = std::min(cohesion, margin);
    }
    report.p2_cohesion[index(f)] = cohesion;
    if (!(cohesion >= thresholds.p2_min_margin)) report.p2_pass = false;
  }

  double min_off = std::numeric_limits<double>::infinity();
  double max_off = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kFoundationCount; ++i) {
    report.pairwise_cosines[i][i] = 1.0;
    for (std::size_t j = i + 1; j < kFoundationCount; ++j) {
      const double c = cosine(axes.axes[i].axis, axes.axes[j].axis);
      report.pairwise_cosines[i][j] = c;
      report.pairwise_cosines[j][i] = c;
      min_off = std::min(min_off, c);
      max_off = std::max(max_off, c);
    }
  }
  report.p3_min_offdiag_cosine = min_off;
  report.p4_max_offdiag_cosine = max_off;
  report.p3_pass = min_off >= thresholds.p3_min_cosine;
  report.p4_pass = max_off <= thresholds.p4_max_cosine;
  return report;
}

AxisValidationReport validate_axes(const AxisSet& axes, const MoralLexicon& lexicon,
                                   const EmbeddingStore& store,
                                   const ValidationThresholds& thresholds) {
  if (axes.dim != store.dim()) {
    throw DataError("axis set dimension " + std::to_string(axes.dim) +
                    " does not match embedding dimension " + std::to_string(store.dim()));
  }
  return validate_axes(axes, resolve(lexicon, store), thresholds);
}

}  // namespace moralframe
