#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "moralframe/classifier.hpp"
#include "moralframe/error.hpp"
#include "moralframe/formats.hpp"
#include "support/fixtures.hpp"

using namespace moralframe;

TEST_SUITE("formats") {
  TEST_CASE("format_double round trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345.678, 0.0, 1e21}) {
      CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
  }

  TEST_CASE("csv quoting") {
    CHECK(csv::quote("plain") == "plain");
    CHECK(csv::quote("a,b") == "\"a,b\"");
    CHECK(csv::quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    const auto fields = csv::split("x,\"a,b\",\"say \"\"hi\"\"\",");
    CHECK(fields == std::vector<std::string>{"x", "a,b", "say \"hi\"", ""});
  }

  TEST_CASE("axes JSON round trip is exact") {
    const auto world = fixture::random_world(31);
    const auto axes = build_axes(world.lexicon(), world.store());
    const Json j = axes_to_json(axes);
    CHECK(j["format"] == std::string(kAxesFormat));
    const auto back = axes_from_json(Json::parse(j.dump()), "axes.json");
    CHECK(back.dim == axes.dim);
    for (Foundation f : kFoundations) {
      CHECK(back[f].axis == axes[f].axis);
      CHECK(back[f].virtue_centroid == axes[f].virtue_centroid);
      CHECK(back[f].vice_centroid == axes[f].vice_centroid);
      CHECK(back[f].n_vice_words == axes[f].n_vice_words);
    }
    Json broken = j;
    broken["format"] = "other";
    CHECK_THROWS_AS(axes_from_json(broken, "axes.json"), DataError);
    broken = j;
    broken["axes"].erase(2);
    CHECK_THROWS_AS(axes_from_json(broken, "axes.json"), DataError);
  }

  TEST_CASE("scores CSV round trip") {
    std::vector<FrameScores> scores(2);
    scores[0].doc_id = "a,1";
    scores[0].label = "x";
    scores[0].n_scored_tokens = 3;
    scores[0].bias = {0.1, -0.2, 1.0 / 3.0, 0, 1};
    scores[0].intensity = {0.01, 0.02, 0.03, 0.04, 4};
    scores[1].doc_id = "b";
    scores[1].label = "y \"q\"";
    scores[1].n_scored_tokens = 1;
    std::ostringstream out;
    write_scores_csv(out, scores);
    CHECK(out.str().starts_with(
        "doc_id,label,n_tokens,bias_care,bias_fairness,bias_loyalty,bias_authority,bias_sanctity,"
        "intensity_care,intensity_fairness,intensity_loyalty,intensity_authority,intensity_sanctity\n"));
    std::istringstream in(out.str());
    const auto back = read_scores_csv(in, "s.csv");
    REQUIRE(back.size() == 2);
    CHECK(back[0].doc_id == "a,1");
    CHECK(back[1].label == "y \"q\"");
    CHECK(back[0].bias == scores[0].bias);
    CHECK(back[0].intensity == scores[0].intensity);
    std::istringstream bad("doc_id,label\n");
    CHECK_THROWS_AS(read_scores_csv(bad, "s.csv"), ParseError);
  }

  TEST_CASE("model JSON round trip predicts identically") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0, 1);
    Eigen::MatrixXd x(30, 10);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n(rng);
    std::vector<std::string> labels;
    for (int i = 0; i < 30; ++i) labels.push_back("c" + std::to_string(i % 3));
    const auto model = train_logreg(x, labels, {}, frame_feature_names());
    const auto back = model_from_json(Json::parse(model_to_json(model).dump()), "m.json");
    CHECK(back.classes == model.classes);
    CHECK(back.weights == model.weights);
    CHECK(back.intercepts == model.intercepts);
    CHECK(back.standardization.mean == model.standardization.mean);
    CHECK(predict(back, x).probabilities == predict(model, x).probabilities);
  }

  TEST_CASE("translation audit columns") {
    TranslationAuditRow row{Foundation::care, Pole::vice, "hurt", false, {{"schmerz", 0.9}, {"leid", 0.8}}};
    TranslationAuditRow oov{Foundation::care, Pole::vice, "zzz", true, {}};
    std::ostringstream out;
    write_translation_audit_csv(out, {row, oov});
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "foundation,pole,source_token,status,rank,target_token,similarity");
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 3);
  }
}
