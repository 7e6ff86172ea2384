#include <doctest.h>

#include <random>
#include <sstream>

#include "patchwork/errors.hpp"
#include "patchwork/eval.hpp"
#include "patchwork/io.hpp"
#include "patchwork/synth.hpp"
#include "support/temp_dir.hpp"

using namespace patchwork;

namespace {

SegmentationResult result_from_mask(const std::vector<std::uint8_t>& predicted) {
  SegmentationResult result;
  for (std::uint32_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i]) result.ground_indices.push_back(i);
    else result.nonground_indices.push_back(i);
  }
  return result;
}

}  // namespace

TEST_CASE("confusion: perfect and degenerate predictions") {
  std::vector<std::uint8_t> truth_bits(200, 0);
  for (int i = 0; i < 100; ++i) truth_bits[static_cast<std::size_t>(i)] = 1;
  const GroundTruthMask truth{truth_bits};

  const ConfusionCounts perfect = confusion(result_from_mask(truth_bits), truth);
  CHECK(perfect.tp == 100);
  CHECK(perfect.fp == 0);
  CHECK(perfect.fn == 0);
  CHECK(perfect.tn == 100);

  const ConfusionCounts all_ground = confusion(result_from_mask(std::vector<std::uint8_t>(200, 1)), truth);
  CHECK(all_ground.tp == 100);
  CHECK(all_ground.fp == 100);
  CHECK(all_ground.fn == 0);
  CHECK(all_ground.tn == 0);
}

TEST_CASE("confusion matches a per-point brute-force tally on random input") {
  std::mt19937 rng(31);
  std::bernoulli_distribution coin(0.4);
  std::vector<std::uint8_t> truth_bits, pred_bits;
  for (int i = 0; i < 5000; ++i) {
    truth_bits.push_back(coin(rng) ? 1 : 0);
    pred_bits.push_back(coin(rng) ? 1 : 0);
  }
  const ConfusionCounts counts = confusion(result_from_mask(pred_bits), GroundTruthMask{truth_bits});

  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < truth_bits.size(); ++i) {
    if (pred_bits[i] && truth_bits[i]) ++tp;
    if (pred_bits[i] && !truth_bits[i]) ++fp;
    if (!pred_bits[i] && truth_bits[i]) ++fn;
    if (!pred_bits[i] && !truth_bits[i]) ++tn;
  }
  CHECK(counts.tp == tp);
  CHECK(counts.fp == fp);
  CHECK(counts.fn == fn);
  CHECK(counts.tn == tn);
  CHECK(counts.total() == truth_bits.size());
}

TEST_CASE("confusion rejects mismatched sizes") {
  const GroundTruthMask truth{std::vector<std::uint8_t>(5, 1)};
  CHECK_THROWS_AS(confusion(result_from_mask({1, 0}), truth), ValidationError);
}

TEST_CASE("confusion honors an evaluation mask") {
  const GroundTruthMask truth{{1, 1, 0, 0}};
  const auto result = result_from_mask({1, 0, 1, 0});
  const std::vector<std::uint8_t> mask{1, 1, 0, 0};
  const ConfusionCounts counts = confusion(result, truth, mask);
  CHECK(counts.tp == 1);
  CHECK(counts.fn == 1);
  CHECK(counts.fp == 0);
  CHECK(counts.tn == 0);
}

TEST_CASE("range_eval_mask keeps points within the zone span") {
  PointCloud cloud;
  cloud.points = {Point{1.0f, 0, 0, 0}, Point{5.0f, 0, 0, 0}, Point{90.0f, 0, 0, 0},
                  Point{80.0f, 0, 0, 0}};
  const auto mask = range_eval_mask(cloud, 2.7, 80.0);
  CHECK(mask == std::vector<std::uint8_t>{0, 1, 0, 0});
}

TEST_CASE("metrics formulas") {
  const FrameMetrics symmetric = metrics(ConfusionCounts{90, 10, 10, 90});
  CHECK(symmetric.precision == doctest::Approx(0.9));
  CHECK(symmetric.recall == doctest::Approx(0.9));
  CHECK(symmetric.f1 == doctest::Approx(0.9));
  CHECK(symmetric.accuracy == doctest::Approx(0.9));
  CHECK(symmetric.precision_defined);

  const FrameMetrics no_positives = metrics(ConfusionCounts{0, 0, 0, 100});
  CHECK(no_positives.precision == 0.0);
  CHECK_FALSE(no_positives.precision_defined);
  CHECK(no_positives.recall == 0.0);
  CHECK_FALSE(no_positives.recall_defined);
  CHECK(no_positives.accuracy == 1.0);
  CHECK(no_positives.accuracy_defined);

  const FrameMetrics skewed = metrics(ConfusionCounts{10, 5, 5, 0});
  CHECK(skewed.f1 == doctest::Approx(2.0 * 10 / (2.0 * 10 + 5 + 5)));
  CHECK(skewed.f1 == doctest::Approx(0.6666666667));
}

TEST_CASE("f1 is the harmonic mean of precision and recall when defined") {
  std::mt19937 rng(9);
  std::uniform_int_distribution<std::uint64_t> count(1, 500);
  for (int i = 0; i < 200; ++i) {
    const ConfusionCounts counts{count(rng), count(rng), count(rng), count(rng)};
    const FrameMetrics m = metrics(counts);
    CHECK(m.precision >= 0.0);
    CHECK(m.precision <= 1.0);
    CHECK(m.recall >= 0.0);
    CHECK(m.recall <= 1.0);
    const double harmonic = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    CHECK(m.f1 == doctest::Approx(harmonic).epsilon(1e-12));
  }
}

TEST_CASE("summarize: single frame, two frames, runtimes") {
  FrameMetrics one = metrics(ConfusionCounts{90, 10, 10, 90});
  const SequenceSummary single = summarize(std::vector<FrameMetrics>{one});
  CHECK(single.frames == 1);
  CHECK(single.precision_std == 0.0);
  CHECK(single.recall_std == 0.0);

  FrameMetrics a = metrics(ConfusionCounts{90, 10, 0, 0});   // precision 0.9
  FrameMetrics b = metrics(ConfusionCounts{70, 30, 0, 0});   // precision 0.7
  const SequenceSummary pair = summarize(std::vector<FrameMetrics>{a, b});
  CHECK(pair.precision_mean == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(pair.precision_std == doctest::Approx(0.1).epsilon(1e-12));

  const std::vector<double> runtimes{0.02, 0.03};
  const SequenceSummary timed = summarize(std::vector<FrameMetrics>{a, b}, runtimes);
  CHECK(timed.mean_hz == doctest::Approx(40.0).epsilon(1e-12));

  CHECK_THROWS_AS(summarize(std::vector<FrameMetrics>{}), ValidationError);
}

TEST_CASE("benchmark bookkeeping and stage consistency") {
  SceneSpec spec;
  spec.ground_points = 15000;
  const PointCloud cloud = synth_scene(spec, 21);

  BenchmarkOptions options;
  options.warmup = 2;
  options.reps = 5;
  const BenchmarkReport report = benchmark(std::vector<PointCloud>{cloud}, PatchworkParams{}, options);

  CHECK(report.runs.size() == 5);
  CHECK(report.total_bins == 504);
  CHECK(report.mean_ms > 0.0);
  CHECK(report.median_ms > 0.0);
  for (const auto& t : report.runs) {
    const double stage_sum = static_cast<double>(t.binning_us + t.fitting_us + t.gle_us);
    CHECK(stage_sum <= static_cast<double>(t.total_us) * 1.05);
  }
}

TEST_CASE("benchmark loads frames from paths and names unreadable ones") {
  test_support::TempDir dir("bench");
  SceneSpec spec;
  spec.ground_points = 5000;
  write_kitti_bin(synth_scene(spec, 2), dir.file("f.bin"));

  BenchmarkOptions options;
  options.warmup = 0;
  options.reps = 2;
  const std::vector<std::filesystem::path> paths{dir.file("f.bin")};
  const BenchmarkReport report = benchmark(paths, PatchworkParams{}, options);
  CHECK(report.runs.size() == 2);
  CHECK(report.points == 5000);

  const std::vector<std::filesystem::path> missing{dir.file("nope.bin")};
  try {
    benchmark(missing, PatchworkParams{}, options);
    FAIL("expected an IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("nope.bin") != std::string::npos);
  }
}

TEST_CASE("frame csv layout: one row per frame plus a summary") {
  FrameRow row;
  row.frame_id = "000000";
  row.metrics = metrics(ConfusionCounts{80, 20, 10, 90});
  row.timing = StageTiming{1000, 2000, 500, 4000};

  std::ostringstream out;
  write_frame_csv(out, std::vector<FrameRow>{row});
  const std::string text = out.str();

  std::size_t lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == 3);  // header + frame + summary
  CHECK(text.find("frame_id,n_tp,n_fp,n_fn,n_tn,precision,recall,f1,accuracy,") == 0);
  CHECK(text.find("000000,80,20,10,90,") != std::string::npos);
  CHECK(text.find("summary,80,20,10,90,") != std::string::npos);
}

TEST_CASE("method names parse") {
  CHECK(parse_method("patchwork") == Method::patchwork);
  CHECK(parse_method("ransac") == Method::ransac);
  CHECK_THROWS_AS(parse_method("svm"), ValidationError);
}
