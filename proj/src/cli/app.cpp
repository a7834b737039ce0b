#include <fstream>
#include <ostream>
#include <set>

#include "CLI11.hpp"
#include "commands.hpp"
#include "moralframe/cli.hpp"
#include "moralframe/error.hpp"
#include "moralframe/manifest.hpp"

namespace moralframe::cli {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// `--config PATH`: key=value lines merged beneath explicit flags. Keys are
// long option names without the dashes; keys the chosen subcommand does not
// know are reported and ignored.
std::vector<std::string> merge_config(std::vector<std::string> args, CLI::App& app, std::ostream& err) {
  std::string config_path;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i].starts_with("--config=")) {
      config_path = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (config_path.empty()) return kept;

  CLI::App* sub = nullptr;
  for (std::size_t i = 1; i < kept.size() && !sub; ++i) {
    if (!kept[i].starts_with("-")) sub = app.get_subcommand_no_throw(kept[i]);
  }
  if (!sub) return kept;

  std::ifstream in(config_path);
  if (!in) throw DataError("cannot open config file " + config_path);
  std::set<std::string> given;
  for (const auto& a : kept) {
    if (a.starts_with("--")) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.starts_with('#')) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(config_path, line_no, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (given.contains(key)) continue;
    if (!sub->get_option_no_throw("--" + key)) {
      err << "note: config key '" << key << "' does not apply to '" << sub->get_name() << "'\n";
      continue;
    }
    kept.push_back("--" + key + "=" + value);
  }
  return kept;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Moral frame analysis over word embeddings", "moralframe"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  app.add_option("--config", "key=value file merged beneath explicit flags");

  BuildAxesOptions build;
  auto* build_cmd = app.add_subcommand("build-axes", "Build the five moral frame axes from a lexicon");
  build_cmd->add_option("--embeddings", build.embeddings, "Embedding text file")->required();
  build_cmd->add_option("--lexicon", build.lexicon, "Lexicon TSV (foundation, pole, word)")->required();
  build_cmd->add_option("--out", build.out, "Axis set JSON to write")->required();

  ValidateOptions validate;
  auto* validate_cmd = app.add_subcommand("validate", "Check axis properties P1-P4; export PCA and KDE data");
  validate_cmd->add_option("--axes", validate.axes, "Axis set JSON")->required();
  validate_cmd->add_option("--embeddings", validate.embeddings, "Embedding text file")->required();
  validate_cmd->add_option("--lexicon", validate.lexicon, "Lexicon TSV")->required();
  validate_cmd->add_option("--out", validate.out, "Output prefix (.validation.json, .pca.csv, .kde.json)")->required();
  validate_cmd->add_option("--p1-max-midpoint-rel", validate.thresholds.p1_max_midpoint_rel)->capture_default_str();
  validate_cmd->add_option("--p2-min-margin", validate.thresholds.p2_min_margin)->capture_default_str();
  validate_cmd->add_option("--p3-min-cosine", validate.thresholds.p3_min_cosine)->capture_default_str();
  validate_cmd->add_option("--p4-max-cosine", validate.thresholds.p4_max_cosine)->capture_default_str();
  validate_cmd->add_option("--grid-size", validate.grid_size, "KDE grid resolution")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  validate_cmd->add_option("--bandwidth", validate.bandwidth, "KDE bandwidth (default: Scott's rule)")
      ->check(CLI::PositiveNumber);

  ScoreOptions score;
  auto* score_cmd = app.add_subcommand("score", "Per-document frame bias and intensity");
  score_cmd->add_option("--corpus", score.corpus, "JSONL corpus (id, label, text)")->required();
  score_cmd->add_option("--axes", score.axes, "Axis set JSON")->required();
  score_cmd->add_option("--embeddings", score.embeddings, "Embedding text file")->required();
  score_cmd->add_option("--stopwords", score.stopwords, "Stopword list, one per line");
  score_cmd->add_option("--out", score.out, "Scores CSV to write")->required();
  score_cmd->add_flag("--drop-mentions", score.pipeline.normalize.drop_mentions, "Remove @mentions entirely");
  score_cmd->add_flag("--drop-retweet-prefix", score.pipeline.drop_retweet_prefix, "Remove leading 'rt' tokens");

  TranslateOptions translate;
  auto* translate_cmd = app.add_subcommand("translate", "Project the lexicon into another embedding space");
  translate_cmd->add_option("--pairs", translate.pairs, "Seed pairs TSV (source, target)")->required();
  translate_cmd->add_option("--src-embeddings", translate.src_embeddings)->required();
  translate_cmd->add_option("--tgt-embeddings", translate.tgt_embeddings)->required();
  translate_cmd->add_option("--lexicon", translate.lexicon, "Source-language lexicon TSV")->required();
  translate_cmd->add_option("--k", translate.k, "Neighbours kept per source word")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  translate_cmd->add_option("--ridge", translate.ridge, "Ridge penalty")->check(CLI::NonNegativeNumber)->capture_default_str();
  translate_cmd->add_option("--target-language", translate.target_language)->capture_default_str();
  translate_cmd->add_option("--out", translate.out, "Translated lexicon TSV to write")->required();

  ClassifyOptions classify;
  auto* classify_cmd = app.add_subcommand("classify", "Logistic regression over frame features");
  classify_cmd->add_option("--scores", classify.scores, "Scores CSV from 'score'")->required();
  classify_cmd->add_option("--split", classify.split, "kfold:K[:SEED] or file:PATH")->required();
  classify_cmd->add_option("--l2", classify.hyperparams.l2_lambda)->check(CLI::NonNegativeNumber)->capture_default_str();
  classify_cmd->add_option("--step", classify.hyperparams.step)->check(CLI::PositiveNumber)->capture_default_str();
  classify_cmd->add_option("--tolerance", classify.hyperparams.tolerance)->capture_default_str();
  classify_cmd->add_option("--max-iters", classify.hyperparams.max_iters)->capture_default_str();
  classify_cmd->add_option("--seed", classify.hyperparams.seed)->capture_default_str();
  classify_cmd->add_option("--averaging", classify.averaging, "binary, macro or weighted")->capture_default_str();
  classify_cmd->add_option("--positive", classify.positive, "Positive class for binary averaging");
  classify_cmd->add_option("--out", classify.out, "Model JSON to write")->required();

  try {
    std::vector<std::string> args = merge_config(raw_args, app, err);
    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }

  try {
    if (*build_cmd) return cmd_build_axes(build, out, err);
    if (*validate_cmd) return cmd_validate(validate, out, err);
    if (*score_cmd) return cmd_score(score, out, err);
    if (*translate_cmd) return cmd_translate(translate, out, err);
    if (*classify_cmd) return cmd_classify(classify, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}

}  // namespace moralframe::cli
