#include "moralframe/formats.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "moralframe/error.hpp"

namespace moralframe {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, ptr);
}

namespace csv {

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

}  // namespace csv

namespace {

Json vector_json(const Vector& v) {
  Json arr = Json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

Vector vector_from(const Json& j, std::size_t dim, const std::string& what) {
  if (!j.is_array() || j.size() != dim) throw DataError(what + ": expected an array of length " + std::to_string(dim));
  Vector v;
  v.reserve(dim);
  for (const auto& x : j) {
    if (!x.is_number()) throw DataError(what + ": non-numeric entry");
    v.push_back(x.get<double>());
  }
  return v;
}

Json eigen_vector_json(const Eigen::VectorXd& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd eigen_vector_from(const Json& j, Eigen::Index n, const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) {
    throw DataError(what + ": expected an array of length " + std::to_string(n));
  }
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

double parse_number(const std::string& s, const std::string& source, std::size_t line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError(source, line, "bad number '" + s + "'");
  }
  return v;
}

}  // namespace

Json axes_to_json(const AxisSet& axes) {
  Json j;
  j["format"] = kAxesFormat;
  j["dim"] = axes.dim;
  j["provenance"] = axes.provenance;
  Json list = Json::array();
  for (Foundation f : kFoundations) {
    const FrameAxis& a = axes[f];
    Json e;
    e["foundation"] = name(f);
    e["n_virtue_words"] = a.n_virtue_words;
    e["n_vice_words"] = a.n_vice_words;
    e["virtue_centroid"] = vector_json(a.virtue_centroid);
    e["vice_centroid"] = vector_json(a.vice_centroid);
    e["axis"] = vector_json(a.axis);
    list.push_back(std::move(e));
  }
  j["axes"] = std::move(list);
  return j;
}

AxisSet axes_from_json(const Json& j, const std::string& source_label) {
  try {
    if (j.value("format", std::string()) != kAxesFormat) {
      throw DataError(source_label + ": not a " + std::string(kAxesFormat) + " file");
    }
    AxisSet set;
    set.dim = j.at("dim").get<std::size_t>();
    set.provenance = j.value("provenance", std::string());
    const Json& list = j.at("axes");
    if (!list.is_array() || list.size() != kFoundationCount) {
      throw DataError(source_label + ": expected exactly 5 axes");
    }
    for (std::size_t i = 0; i < kFoundationCount; ++i) {
      const Json& e = list[i];
      auto f = parse_foundation(e.at("foundation").get<std::string>());
      if (!f || index(*f) != i) throw DataError(source_label + ": axes out of canonical order");
      FrameAxis& a = set.axes[i];
      a.foundation = *f;
      a.n_virtue_words = e.at("n_virtue_words").get<std::size_t>();
      a.n_vice_words = e.at("n_vice_words").get<std::size_t>();
      const std::string what = source_label + ": " + std::string(name(*f));
      a.virtue_centroid = vector_from(e.at("virtue_centroid"), set.dim, what + " virtue_centroid");
      a.vice_centroid = vector_from(e.at("vice_centroid"), set.dim, what + " vice_centroid");
      a.axis = vector_from(e.at("axis"), set.dim, what + " axis");
    }
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(source_label + ": malformed axis file: " + e.what());
  }
}

Json validation_to_json(const AxisValidationReport& r) {
  Json j;
  Json thresholds;
  thresholds["p1_max_midpoint_rel"] = r.thresholds.p1_max_midpoint_rel;
  thresholds["p2_min_margin"] = r.thresholds.p2_min_margin;
  thresholds["p3_min_cosine"] = r.thresholds.p3_min_cosine;
  thresholds["p4_max_cosine"] = r.thresholds.p4_max_cosine;
  j["thresholds_used"] = thresholds;

  Json pass;
  pass["p1"] = r.p1_pass;
  pass["p2"] = r.p2_pass;
  pass["p3"] = r.p3_pass;
  pass["p4"] = r.p4_pass;
  pass["all"] = r.all_pass();
  j["pass_flags"] = pass;

  Json p1 = Json::object(), p2 = Json::object();
  for (Foundation f : kFoundations) {
    const auto i = index(f);
    p1[std::string(name(f))] = r.p1_midpoint_rel[i];
    Json cell;
    cell["virtue_margin"] = r.p2_pole_margin[i][index(Pole::virtue)];
    cell["vice_margin"] = r.p2_pole_margin[i][index(Pole::vice)];
    cell["cohesion"] = r.p2_cohesion[i];
    p2[std::string(name(f))] = cell;
  }
  j["p1_midpoint_norms"] = p1;
  j["p2_cohesion"] = p2;

  Json names = Json::array();
  for (Foundation f : kFoundations) names.push_back(name(f));
  Json matrix = Json::array();
  for (const auto& row : r.pairwise_cosines) {
    Json jr = Json::array();
    for (double c : row) jr.push_back(c);
    matrix.push_back(jr);
  }
  j["p3_pairwise_cosines"] = {{"order", names}, {"matrix", matrix}};
  j["p3_min_offdiag_cosine"] = r.p3_min_offdiag_cosine;
  j["p4_max_offdiag_cosine"] = r.p4_max_offdiag_cosine;
  return j;
}

Json kde_to_json(const KdeGrid& g) {
  Json j;
  j["grid_size"] = g.grid_size;
  j["extent"] = {{"x_min", g.x_min}, {"x_max", g.x_max}, {"y_min", g.y_min}, {"y_max", g.y_max}};
  j["bandwidth"] = {{"x", g.bandwidth_x}, {"y", g.bandwidth_y}};
  j["iso_level"] = g.iso_level;
  Json rows = Json::array();
  for (std::size_t r = 0; r < g.grid_size; ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < g.grid_size; ++c) row.push_back(g.at(r, c));
    rows.push_back(std::move(row));
  }
  j["density"] = std::move(rows);
  return j;
}

std::string scores_csv_header() {
  std::string h = "doc_id,label,n_tokens";
  for (Foundation f : kFoundations) h += ",bias_" + std::string(name(f));
  for (Foundation f : kFoundations) h += ",intensity_" + std::string(name(f));
  return h;
}

void write_scores_csv(std::ostream& out, std::span<const FrameScores> scores) {
  out << scores_csv_header() << '\n';
  for (const auto& s : scores) {
    out << csv::quote(s.doc_id) << ',' << csv::quote(s.label) << ',' << s.n_scored_tokens;
    for (double b : s.bias) out << ',' << format_double(b);
    for (double v : s.intensity) out << ',' << format_double(v);
    out << '\n';
  }
}

std::vector<FrameScores> read_scores_csv(std::istream& in, const std::string& source_label) {
  std::vector<FrameScores> out;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != scores_csv_header()) {
        throw ParseError(source_label, line_no, "unexpected header; expected '" + scores_csv_header() + "'");
      }
      header = true;
      continue;
    }
    auto fields = csv::split(line);
    if (fields.size() != 3 + 2 * kFoundationCount) {
      throw ParseError(source_label, line_no, "expected 13 fields, got " + std::to_string(fields.size()));
    }
    FrameScores s;
    s.doc_id = fields[0];
    s.label = fields[1];
    s.n_scored_tokens = static_cast<std::size_t>(parse_number(fields[2], source_label, line_no));
    for (std::size_t f = 0; f < kFoundationCount; ++f) {
      s.bias[f] = parse_number(fields[3 + f], source_label, line_no);
      s.intensity[f] = parse_number(fields[3 + kFoundationCount + f], source_label, line_no);
    }
    out.push_back(std::move(s));
  }
  if (!header) throw DataError(source_label + ": empty scores file");
  return out;
}

Json model_to_json(const LogisticModel& m) {
  Json j;
  j["format"] = kModelFormat;
  j["classes"] = m.classes;
  j["feature_names"] = m.feature_names;
  j["scheme"] = m.is_binary() ? "binary" : "one-vs-rest";
  Json weights = Json::array();
  for (Eigen::Index r = 0; r < m.weights.rows(); ++r) {
    weights.push_back(eigen_vector_json(m.weights.row(r).transpose()));
  }
  j["weights"] = weights;
  j["intercepts"] = eigen_vector_json(m.intercepts);
  j["standardization"] = {{"mean", eigen_vector_json(m.standardization.mean)},
                          {"stddev", eigen_vector_json(m.standardization.stddev)},
                          {"constant_features", m.standardization.constant_features}};
  j["hyperparams"] = {{"l2_lambda", m.hyperparams.l2_lambda},
                      {"step", m.hyperparams.step},
                      {"tolerance", m.hyperparams.tolerance},
                      {"max_iters", m.hyperparams.max_iters},
                      {"seed", m.hyperparams.seed},
                      {"init_scale", m.hyperparams.init_scale}};
  j["iterations"] = m.iterations;
  j["converged"] = m.converged;
  return j;
}

LogisticModel model_from_json(const Json& j, const std::string& source_label) {
  try {
    if (j.value("format", std::string()) != kModelFormat) {
      throw DataError(source_label + ": not a " + std::string(kModelFormat) + " file");
    }
    LogisticModel m;
    m.classes = j.at("classes").get<std::vector<std::string>>();
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    const auto p = static_cast<Eigen::Index>(m.feature_names.size());
    const Json& w = j.at("weights");
    m.weights.resize(static_cast<Eigen::Index>(w.size()), p);
    for (std::size_t r = 0; r < w.size(); ++r) {
      m.weights.row(static_cast<Eigen::Index>(r)) = eigen_vector_from(w[r], p, source_label + ": weights").transpose();
    }
    const std::size_t expected_rows = m.classes.size() == 2 ? 1 : m.classes.size();
    if (w.size() != expected_rows) throw DataError(source_label + ": weight row count does not match classes");
    m.intercepts = eigen_vector_from(j.at("intercepts"), m.weights.rows(), source_label + ": intercepts");
    const Json& s = j.at("standardization");
    m.standardization.mean = eigen_vector_from(s.at("mean"), p, source_label + ": mean");
    m.standardization.stddev = eigen_vector_from(s.at("stddev"), p, source_label + ": stddev");
    m.standardization.constant_features = s.at("constant_features").get<std::vector<std::size_t>>();
    const Json& h = j.at("hyperparams");
    m.hyperparams.l2_lambda = h.at("l2_lambda").get<double>();
    m.hyperparams.step = h.at("step").get<double>();
    m.hyperparams.tolerance = h.at("tolerance").get<double>();
    m.hyperparams.max_iters = h.at("max_iters").get<std::size_t>();
    m.hyperparams.seed = h.at("seed").get<std::uint64_t>();
    m.hyperparams.init_scale = h.at("init_scale").get<double>();
    m.iterations = j.value("iterations", std::vector<std::size_t>{});
    m.converged = j.value("converged", std::vector<bool>{});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(source_label + ": malformed model file: " + e.what());
  }
}

Json metrics_to_json(const EvalMetrics& m) {
  Json j;
  j["averaging"] = name(m.averaging);
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["accuracy"] = m.accuracy;
  j["classes"] = m.classes;
  j["confusion"] = m.confusion;
  Json per = Json::object();
  for (std::size_t c = 0; c < m.classes.size(); ++c) {
    per[m.classes[c]] = {{"precision", m.class_precision[c]},
                         {"recall", m.class_recall[c]},
                         {"f1", m.class_f1[c]},
                         {"support", m.support[c]}};
  }
  j["per_class"] = per;
  return j;
}

void write_coefficients_csv(std::ostream& out, const CoefficientTable& t) {
  out << "feature";
  for (const auto& c : t.columns) out << ',' << csv::quote(c);
  out << '\n';
  for (std::size_t r = 0; r < t.features.size(); ++r) {
    out << csv::quote(t.features[r]);
    for (Eigen::Index c = 0; c < t.values.cols(); ++c) {
      out << ',' << format_double(t.values(static_cast<Eigen::Index>(r), c));
    }
    out << '\n';
  }
}

void write_translation_audit_csv(std::ostream& out, const std::vector<TranslationAuditRow>& rows) {
  out << "foundation,pole,source_token,status,rank,target_token,similarity\n";
  for (const auto& row : rows) {
    const std::string prefix = std::string(name(row.foundation)) + ',' + std::string(name(row.pole)) +
                               ',' + csv::quote(row.source_token) + ',';
    if (row.source_oov) {
      out << prefix << "source_oov,,,\n";
      continue;
    }
    for (std::size_t r = 0; r < row.targets.size(); ++r) {
      out << prefix << "translated," << (r + 1) << ',' << csv::quote(row.targets[r].token) << ','
          << format_double(row.targets[r].similarity) << '\n';
    }
  }
}

}  // namespace moralframe
