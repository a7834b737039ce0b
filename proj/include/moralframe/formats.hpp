#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "moralframe/classifier.hpp"
#include "moralframe/frame_axes.hpp"
#include "moralframe/frame_scoring.hpp"
#include "moralframe/kde.hpp"
#include "moralframe/xlingual.hpp"

namespace moralframe {

using Json = nlohmann::ordered_json;

// Shortest decimal that round-trips.
std::string format_double(double v);

namespace csv {
std::string quote(std::string_view field);
// One record per line; quoted fields may not span lines.
std::vector<std::string> split(std::string_view line);
}  // namespace csv

// Axis set: {"format", "dim", "provenance", "axes": [{foundation, counts,
// virtue_centroid, vice_centroid, axis}]}.
inline constexpr std::string_view kAxesFormat = "moralframe.axes/1";
Json axes_to_json(const AxisSet& axes);
AxisSet axes_from_json(const Json& j, const std::string& source_label);

Json validation_to_json(const AxisValidationReport& report);
Json kde_to_json(const KdeGrid& grid);

// doc_id,label,n_tokens,bias_care,...,bias_sanctity,intensity_care,...,intensity_sanctity
std::string scores_csv_header();
void write_scores_csv(std::ostream& out, std::span<const FrameScores> scores);
std::vector<FrameScores> read_scores_csv(std::istream& in, const std::string& source_label);

inline constexpr std::string_view kModelFormat = "moralframe.logreg/1";
Json model_to_json(const LogisticModel& model);
LogisticModel model_from_json(const Json& j, const std::string& source_label);

Json metrics_to_json(const EvalMetrics& metrics);
// feature,<column...>
void write_coefficients_csv(std::ostream& out, const CoefficientTable& table);

// foundation,pole,source_token,status,rank,target_token,similarity
void write_translation_audit_csv(std::ostream& out, const std::vector<TranslationAuditRow>& rows);

}  // namespace moralframe
