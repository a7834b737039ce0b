#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "moralframe/embed_store.hpp"
#include "moralframe/lexicon.hpp"

namespace moralframe {

struct FrameAxis {
  Foundation foundation;
  Vector virtue_centroid;
  Vector vice_centroid;
  Vector axis;  // unit(virtue_centroid - vice_centroid)
  std::size_t n_virtue_words = 0;
  std::size_t n_vice_words = 0;
};

struct AxisSet {
  PerFoundation<FrameAxis> axes;
  std::size_t dim = 0;
  std::string provenance;

  const FrameAxis& operator[](Foundation f) const { return axes[index(f)]; }
};

// Arithmetic mean of raw vectors, summed in the given order.
Vector centroid(std::span<const ResolvedWord> words);

// DomainError when the two centroids coincide.
FrameAxis make_axis(Foundation f, std::span<const ResolvedWord> virtue_words,
                    std::span<const ResolvedWord> vice_words);

AxisSet build_axes(const ResolvedLexicon& resolved, std::size_t dim, std::string provenance = {});
AxisSet build_axes(const MoralLexicon& lexicon, const EmbeddingStore& store);

struct ValidationThresholds {
  double p1_max_midpoint_rel = 1.0;
  double p2_min_margin = 0.0;
  double p3_min_cosine = 0.0;
  double p4_max_cosine = 0.95;
};

using CosineMatrix = std::array<std::array<double, kFoundationCount>, kFoundationCount>;

struct AxisValidationReport {
  // P1: |(virtue + vice) / 2| / |virtue - vice| per axis.
  PerFoundation<double> p1_midpoint_rel{};
  // P2: per axis and pole, mean over the pole's words of
  // cos(word, own centroid) - cos(word, opposite centroid).
  PerCell<double> p2_pole_margin{};
  // min over the two poles.
  PerFoundation<double> p2_cohesion{};
  // P3/P4: cos(axis_i, axis_j).
  CosineMatrix pairwise_cosines{};
  double p3_min_offdiag_cosine = 0.0;
  double p4_max_offdiag_cosine = 0.0;

  bool p1_pass = false;
  bool p2_pass = false;
  bool p3_pass = false;
  bool p4_pass = false;
  ValidationThresholds thresholds;

  bool all_pass() const { return p1_pass && p2_pass && p3_pass && p4_pass; }
};

AxisValidationReport validate_axes(const AxisSet& axes, const ResolvedLexicon& resolved,
                                   const ValidationThresholds& thresholds = {});
AxisValidationReport validate_axes(const AxisSet& axes, const MoralLexicon& lexicon,
                                   const EmbeddingStore& store,
                                   const ValidationThresholds& thresholds = {});

}  // namespace moralframe
