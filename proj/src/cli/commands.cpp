#include "commands.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "moralframe/cli.hpp"
#include "moralframe/error.hpp"
#include "moralframe/formats.hpp"
#include "moralframe/frame_scoring.hpp"
#include "moralframe/kde.hpp"
#include "moralframe/lexicon.hpp"
#include "moralframe/manifest.hpp"
#include "moralframe/pca.hpp"
#include "moralframe/xlingual.hpp"

namespace moralframe::cli {

namespace {

constexpr std::string_view kCentroidToken = "__centroid__";

RunManifest make_manifest(std::string subcommand) {
  RunManifest m;
  m.subcommand = std::move(subcommand);
  return m;
}

void record_input(RunManifest& m, const std::string& path) {
  if (!path.empty()) m.input_digests[path] = sha256_file(path);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path, 0, std::string("malformed JSON: ") + e.what());
  }
}

std::string opt(double v) { return format_double(v); }

std::uint64_t parse_u64(std::string_view s, const std::string& what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("bad " + what + " '" + std::string(s) + "'");
  return v;
}

}  // namespace

int cmd_build_axes(const BuildAxesOptions& o, std::ostream& out, std::ostream& err) {
  RunManifest manifest = make_manifest("build-axes");
  manifest.options = {{"embeddings", o.embeddings}, {"lexicon", o.lexicon}, {"out", o.out}};
  record_input(manifest, o.embeddings);
  record_input(manifest, o.lexicon);

  const MoralLexicon lexicon = load_lexicon(o.lexicon);
  const TokenSet vocabulary = lexicon.vocabulary();
  const EmbeddingStore store = load_embeddings(o.embeddings, &vocabulary);
  const ResolvedLexicon resolved = resolve(lexicon, store);
  const AxisSet axes = build_axes(resolved, store.dim(), o.embeddings);

  Json j = axes_to_json(axes);
  Json oov = Json::object();
  for (Foundation f : kFoundations) {
    for (Pole p : kPoles) {
      const auto& cell = resolved.oov[index(f)][index(p)];
      oov[cell_name(f, p)] = std::vector<std::string>(cell.begin(), cell.end());
    }
  }
  j["oov_words"] = oov;
  const std::filesystem::path manifest_path = sibling(o.out, ".manifest.json");
  j["manifest"] = manifest_path.filename().string();

  OutputStage stage;
  stage.add(o.out, dump(j));
  stage.commit(std::move(manifest), manifest_path);

  if (store.duplicates_skipped() > 0) {
    err << "warning: " << store.duplicates_skipped() << " duplicate embedding rows ignored\n";
  }
  out << "built 5 axes (dim " << axes.dim << "), " << resolved.oov_count()
      << " lexicon words out of vocabulary -> " << o.out << "\n";
  return kSuccess;
}

int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream&) {
  RunManifest manifest = make_manifest("validate");
  manifest.options = {{"axes", o.axes},
                      {"embeddings", o.embeddings},
                      {"lexicon", o.lexicon},
                      {"out", o.out},
                      {"p1_max_midpoint_rel", opt(o.thresholds.p1_max_midpoint_rel)},
                      {"p2_min_margin", opt(o.thresholds.p2_min_margin)},
                      {"p3_min_cosine", opt(o.thresholds.p3_min_cosine)},
                      {"p4_max_cosine", opt(o.thresholds.p4_max_cosine)},
                      {"grid_size", std::to_string(o.grid_size)},
                      {"bandwidth", o.bandwidth ? opt(*o.bandwidth) : "scott"}};
  record_input(manifest, o.axes);
  record_input(manifest, o.embeddings);
  record_input(manifest, o.lexicon);

  const AxisSet axes = axes_from_json(read_json_file(o.axes), o.axes);
  const MoralLexicon lexicon = load_lexicon(o.lexicon);
  const TokenSet vocabulary = lexicon.vocabulary();
  const EmbeddingStore store = load_embeddings(o.embeddings, &vocabulary);
  if (axes.dim != store.dim()) {
    throw DataError("axis dimension " + std::to_string(axes.dim) + " does not match embeddings dimension " +
                    std::to_string(store.dim()));
  }
  const ResolvedLexicon resolved = resolve(lexicon, store);
  const AxisValidationReport report = validate_axes(axes, resolved, o.thresholds);

  // PCA over every (cell, word) vector plus the ten centroids.
  struct Row {
    std::string token;
    Foundation f;
    Pole p;
  };
  std::vector<Row> rows;
  std::vector<Vector> vectors;
  for (Foundation f : kFoundations) {
    for (Pole p : kPoles) {
      for (const auto& w : resolved.resolved[index(f)][index(p)]) {
        rows.push_back({w.token, f, p});
        vectors.emplace_back(w.vector.begin(), w.vector.end());
      }
    }
  }
  for (Foundation f : kFoundations) {
    for (Pole p : kPoles) {
      rows.push_back({std::string(kCentroidToken), f, p});
      vectors.push_back(p == Pole::virtue ? axes[f].virtue_centroid : axes[f].vice_centroid);
    }
  }
  const PcaResult pca = pca_project(vectors, 2);

  std::ostringstream pca_csv;
  pca_csv << "token,foundation,pole,x,y\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    pca_csv << csv::quote(rows[i].token) << ',' << name(rows[i].f) << ',' << name(rows[i].p) << ','
            << format_double(pca.projections(r, 0)) << ',' << format_double(pca.projections(r, 1)) << '\n';
  }

  Json kde = Json::object();
  kde["grid_size"] = o.grid_size;
  kde["explained_variance_ratio"] = {pca.explained_variance_ratio[0], pca.explained_variance_ratio[1]};
  Json clouds = Json::array();
  for (Foundation f : kFoundations) {
    for (Pole p : kPoles) {
      std::vector<Point2> points;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].f == f && rows[i].p == p && rows[i].token != kCentroidToken) {
          const auto r = static_cast<Eigen::Index>(i);
          points.push_back({pca.projections(r, 0), pca.projections(r, 1)});
        }
      }
      Json cloud;
      cloud["foundation"] = name(f);
      cloud["pole"] = name(p);
      cloud["n_points"] = points.size();
      try {
        cloud["status"] = "ok";
        cloud["grid"] = kde_to_json(kde_grid(points, o.grid_size, o.bandwidth));
      } catch (const DomainError& e) {
        cloud["status"] = "skipped";
        cloud["reason"] = e.what();
      }
      clouds.push_back(std::move(cloud));
    }
  }
  kde["clouds"] = std::move(clouds);

  const std::filesystem::path manifest_path = sibling(o.out, ".manifest.json");
  Json validation = validation_to_json(report);
  validation["thresholds_source"] = "artifact defaults unless overridden on the command line";
  validation["oov_words"] = resolved.oov_count();
  validation["manifest"] = manifest_path.filename().string();
  kde["manifest"] = manifest_path.filename().string();

  OutputStage stage;
  stage.add(sibling(o.out, ".validation.json"), dump(validation));
  stage.add(sibling(o.out, ".pca.csv"), pca_csv.str());
  stage.add(sibling(o.out, ".kde.json"), dump(kde));
  stage.commit(std::move(manifest), manifest_path);

  out << "P1 " << (report.p1_pass ? "pass" : "FAIL") << "  P2 " << (report.p2_pass ? "pass" : "FAIL")
      << "  P3 " << (report.p3_pass ? "pass" : "FAIL") << "  P4 " << (report.p4_pass ? "pass" : "FAIL")
      << "  (min axis cosine " << format_double(report.p3_min_offdiag_cosine) << ", max "
      << format_double(report.p4_max_offdiag_cosine) << ")\n";
  return report.all_pass() ? kSuccess : kValidationFailed;
}

int cmd_score(const ScoreOptions& o, std::ostream& out, std::ostream& err) {
  RunManifest manifest = make_manifest("score");
  manifest.options = {{"corpus", o.corpus},
                      {"axes", o.axes},
                      {"embeddings", o.embeddings},
                      {"stopwords", o.stopwords},
                      {"out", o.out},
                      {"drop_mentions", o.pipeline.normalize.drop_mentions ? "true" : "false"},
                      {"drop_retweet_prefix", o.pipeline.drop_retweet_prefix ? "true" : "false"}};
  record_input(manifest, o.corpus);
  record_input(manifest, o.axes);
  record_input(manifest, o.embeddings);
  record_input(manifest, o.stopwords);

  const TokenSet stopwords = o.stopwords.empty() ? TokenSet{} : load_stopwords(o.stopwords);
  const Corpus corpus = load_corpus(o.corpus, stopwords, o.pipeline);
  TokenSet vocabulary;
  for (const auto& d : corpus.documents) vocabulary.insert(d.tokens.begin(), d.tokens.end());
  const AxisSet axes = axes_from_json(read_json_file(o.axes), o.axes);
  std::optional<EmbeddingStore> store;
  try {
    store.emplace(load_embeddings(o.embeddings, &vocabulary));
  } catch (const DataError&) {
    throw DataError("no scorable documents: no corpus token is in " + o.embeddings);
  }
  const ScoredCorpus scored = score_corpus(corpus.documents, axes, *store);

  std::ostringstream csv_out;
  write_scores_csv(csv_out, scored.scores);

  const std::filesystem::path manifest_path = sibling(o.out, ".manifest.json");
  Json sidecar;
  Json baseline = Json::object();
  for (Foundation f : kFoundations) baseline[std::string(name(f))] = scored.baseline.baseline_bias[index(f)];
  sidecar["baseline_bias"] = baseline;
  sidecar["n_documents_scored"] = scored.baseline.n_documents;
  sidecar["skipped"] = scored.skipped;
  sidecar["corpus_stats"] = {{"n_docs", corpus.stats.n_docs},
                             {"n_tokens", corpus.stats.n_tokens},
                             {"n_empty_after_preprocess", corpus.stats.n_empty_after_preprocess}};
  sidecar["token_stats"] = {{"scored_tokens", scored.n_scored_tokens}, {"oov_tokens", scored.n_oov_tokens}};
  sidecar["formulas"] = {
      {"contribution", "cos(word_vector, axis) per token occurrence"},
      {"bias", "mean of contributions"},
      {"baseline", "unweighted mean of document biases"},
      {"intensity", "(1/N) * sum_i (contribution_i - baseline)^2"}};
  sidecar["manifest"] = manifest_path.filename().string();

  OutputStage stage;
  stage.add(o.out, csv_out.str());
  stage.add(sibling(o.out, ".baseline.json"), dump(sidecar));
  stage.commit(std::move(manifest), manifest_path);

  if (!scored.skipped.empty()) {
    err << "note: " << scored.skipped.size() << " documents had no embedded tokens and were skipped\n";
  }
  out << "scored " << scored.scores.size() << " documents -> " << o.out << "\n";
  return kSuccess;
}

int cmd_translate(const TranslateOptions& o, std::ostream& out, std::ostream& err) {
  if (o.k == 0) throw UsageError("--k must be positive");
  if (!(o.ridge >= 0.0)) throw UsageError("--ridge must be >= 0");
  RunManifest manifest = make_manifest("translate");
  manifest.options = {{"pairs", o.pairs},
                      {"src_embeddings", o.src_embeddings},
                      {"tgt_embeddings", o.tgt_embeddings},
                      {"lexicon", o.lexicon},
                      {"k", std::to_string(o.k)},
                      {"ridge", opt(o.ridge)},
                      {"target_language", o.target_language},
                      {"out", o.out}};
  record_input(manifest, o.pairs);
  record_input(manifest, o.src_embeddings);
  record_input(manifest, o.tgt_embeddings);
  record_input(manifest, o.lexicon);

  const auto pairs = load_seed_pairs(o.pairs);
  const MoralLexicon lexicon = load_lexicon(o.lexicon);
  TokenSet src_vocab = lexicon.vocabulary();
  for (const auto& p : pairs) src_vocab.insert(p.source);
  const EmbeddingStore src = load_embeddings(o.src_embeddings, &src_vocab);
  const EmbeddingStore tgt = load_embeddings(o.tgt_embeddings);

  const TranslationMatrix tm = fit_translation(pairs, src, tgt, o.ridge);
  const TranslatedLexicon translated = translate_lexicon(tm, lexicon, src, tgt, o.k, o.target_language);

  std::ostringstream tsv, audit;
  write_lexicon(tsv, translated.lexicon);
  write_translation_audit_csv(audit, translated.audit);

  const std::filesystem::path manifest_path = sibling(o.out, ".manifest.json");
  Json fit;
  fit["ridge_lambda"] = tm.ridge_lambda;
  fit["n_pairs_used"] = tm.n_pairs_used;
  fit["fit_rmse"] = tm.fit_rmse;
  fit["source_dim"] = tm.matrix.cols();
  fit["target_dim"] = tm.matrix.rows();
  Json dropped = Json::array();
  for (const auto& p : tm.dropped) dropped.push_back({p.source, p.target});
  fit["dropped_pairs"] = dropped;
  fit["manifest"] = manifest_path.filename().string();

  OutputStage stage;
  stage.add(o.out, tsv.str());
  stage.add(sibling(o.out, ".audit.csv"), audit.str());
  stage.add(sibling(o.out, ".fit.json"), dump(fit));
  stage.commit(std::move(manifest), manifest_path);

  if (!tm.dropped.empty()) err << "note: " << tm.dropped.size() << " seed pairs dropped (out of vocabulary)\n";
  out << "translated " << lexicon.total_entries() << " entries into " << translated.lexicon.total_entries()
      << " (k=" << o.k << ", fit rmse " << format_double(tm.fit_rmse) << ") -> " << o.out << "\n";
  return kSuccess;
}

namespace {

// Fold index per row of `ids`.
std::vector<std::size_t> resolve_split(const std::string& spec, const std::vector<std::string>& ids,
                                       std::uint64_t default_seed, std::map<std::string, std::string>& options) {
  if (spec.starts_with("kfold:")) {
    std::string_view rest = std::string_view(spec).substr(6);
    const auto colon = rest.find(':');
    const std::uint64_t k = parse_u64(rest.substr(0, colon), "fold count in --split");
    const std::uint64_t seed =
        colon == std::string_view::npos ? default_seed : parse_u64(rest.substr(colon + 1), "seed in --split");
    if (k < 2) throw UsageError("--split kfold needs K >= 2");
    if (k > ids.size()) throw DataError("--split kfold:" + std::to_string(k) + " exceeds the " +
                                        std::to_string(ids.size()) + " rows");
    options["split_folds"] = std::to_string(k);
    options["split_seed"] = std::to_string(seed);
    return kfold_assign(ids.size(), k, seed);
  }
  if (spec.starts_with("file:")) {
    const std::string path = spec.substr(5);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open split file " + path);
    std::map<std::string, std::size_t> fold_of;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.starts_with('#')) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) throw ParseError(path, line_no, "expected 'doc_id<TAB>fold'");
      std::uint64_t fold = 0;
      try {
        fold = parse_u64(std::string_view(line).substr(tab + 1), "fold");
      } catch (const UsageError& e) {
        throw ParseError(path, line_no, e.what());
      }
      if (!fold_of.emplace(line.substr(0, tab), fold).second) {
        throw ParseError(path, line_no, "document listed twice");
      }
    }
    std::vector<std::size_t> folds;
    std::set<std::size_t> distinct;
    for (const auto& id : ids) {
      auto it = fold_of.find(id);
      if (it == fold_of.end()) throw DataError("split file " + path + " has no fold for document '" + id + "'");
      folds.push_back(it->second);
      distinct.insert(it->second);
    }
    if (distinct.size() < 2) throw DataError("split file " + path + " defines fewer than 2 folds");
    return folds;
  }
  throw UsageError("--split must be kfold:K[:SEED] or file:PATH, got '" + spec + "'");
}

}  // namespace

int cmd_classify(const ClassifyOptions& o, std::ostream& out, std::ostream& err) {
  const auto averaging = parse_averaging(o.averaging);
  if (!averaging) throw UsageError("--averaging must be binary, macro or weighted");
  const Hyperparams& hp = o.hyperparams;
  RunManifest manifest = make_manifest("classify");
  manifest.options = {{"scores", o.scores},
                      {"split", o.split},
                      {"out", o.out},
                      {"l2", opt(hp.l2_lambda)},
                      {"step", opt(hp.step)},
                      {"tolerance", opt(hp.tolerance)},
                      {"max_iters", std::to_string(hp.max_iters)},
                      {"seed", std::to_string(hp.seed)},
                      {"averaging", o.averaging},
                      {"positive", o.positive.value_or("")}};
  record_input(manifest, o.scores);
  if (o.split.starts_with("file:")) record_input(manifest, o.split.substr(5));

  std::ifstream in(o.scores, std::ios::binary);
  if (!in) throw DataError("cannot open scores file " + o.scores);
  const std::vector<FrameScores> scores = read_scores_csv(in, o.scores);
  const FeatureMatrix features = frame_features(scores);
  const std::vector<std::size_t> folds = resolve_split(o.split, features.ids, hp.seed, manifest.options);

  const std::set<std::string> class_set(features.labels.begin(), features.labels.end());
  if (class_set.size() < 2) throw DataError("classify: scores contain fewer than two labels");
  const std::vector<std::string> classes(class_set.begin(), class_set.end());

  std::vector<std::string> held_out(features.labels.size());
  Json fold_reports = Json::array();
  const std::set<std::size_t> fold_ids(folds.begin(), folds.end());
  for (std::size_t fold : fold_ids) {
    std::vector<Eigen::Index> train_rows, test_rows;
    for (std::size_t i = 0; i < folds.size(); ++i) {
      (folds[i] == fold ? test_rows : train_rows).push_back(static_cast<Eigen::Index>(i));
    }
    if (train_rows.size() < 2) throw DataError("fold " + std::to_string(fold) + " leaves fewer than 2 training rows");
    Eigen::MatrixXd x_train(static_cast<Eigen::Index>(train_rows.size()), features.rows.cols());
    std::vector<std::string> y_train;
    for (std::size_t r = 0; r < train_rows.size(); ++r) {
      x_train.row(static_cast<Eigen::Index>(r)) = features.rows.row(train_rows[r]);
      y_train.push_back(features.labels[static_cast<std::size_t>(train_rows[r])]);
    }
    Eigen::MatrixXd x_test(static_cast<Eigen::Index>(test_rows.size()), features.rows.cols());
    std::vector<std::string> y_test;
    for (std::size_t r = 0; r < test_rows.size(); ++r) {
      x_test.row(static_cast<Eigen::Index>(r)) = features.rows.row(test_rows[r]);
      y_test.push_back(features.labels[static_cast<std::size_t>(test_rows[r])]);
    }
    const LogisticModel model = train_logreg(x_train, y_train, hp, features.feature_names);
    const Prediction pred = predict(model, x_test);
    std::size_t correct = 0;
    for (std::size_t r = 0; r < test_rows.size(); ++r) {
      held_out[static_cast<std::size_t>(test_rows[r])] = pred.labels[r];
      if (pred.labels[r] == y_test[r]) ++correct;
    }
    fold_reports.push_back({{"fold", fold},
                            {"n_train", train_rows.size()},
                            {"n_test", test_rows.size()},
                            {"accuracy", static_cast<double>(correct) / static_cast<double>(test_rows.size())}});
  }

  const EvalMetrics cv = evaluate(held_out, features.labels, *averaging, classes, o.positive);
  const LogisticModel full = train_logreg(features, hp);
  for (std::size_t j : full.standardization.constant_features) {
    err << "warning: feature " << full.feature_names[j] << " is constant; its coefficient is fixed at 0\n";
  }
  for (std::size_t m = 0; m < full.converged.size(); ++m) {
    if (!full.converged[m]) {
      err << "warning: submodel " << m << " stopped at max_iters before reaching the tolerance\n";
    }
  }

  const std::filesystem::path manifest_path = sibling(o.out, ".manifest.json");
  Json model_json = model_to_json(full);
  model_json["manifest"] = manifest_path.filename().string();
  Json metrics;
  metrics["split"] = o.split;
  metrics["held_out"] = metrics_to_json(cv);
  metrics["folds"] = fold_reports;
  metrics["n_rows"] = features.labels.size();
  metrics["manifest"] = manifest_path.filename().string();

  std::ostringstream coefficients;
  write_coefficients_csv(coefficients, coefficient_report(full));

  OutputStage stage;
  stage.add(o.out, dump(model_json));
  stage.add(sibling(o.out, ".metrics.json"), dump(metrics));
  stage.add(sibling(o.out, ".coefficients.csv"), coefficients.str());
  stage.commit(std::move(manifest), manifest_path);

  out << "held-out accuracy " << format_double(cv.accuracy) << ", " << name(*averaging) << " F1 "
      << format_double(cv.f1) << " over " << fold_ids.size() << " folds -> " << o.out << "\n";
  return kSuccess;
}

}  // namespace moralframe::cli
