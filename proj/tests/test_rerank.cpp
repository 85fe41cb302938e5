#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "hashseg/rerank.hpp"
#include "test_util.hpp"

using hashseg::DualScored;
using hashseg::DualScoredCandidates;
using hashseg::EnsembleWeights;
using hashseg::GoldPair;
using hashseg::GridSearchReport;
using hashseg::Hashtag;
using hashseg::ScoredCandidates;
using hashseg::Segmentation;
using hashseg::TuningItem;

namespace {

// Candidates in segmenter order from (render, s, s') triples.
DualScoredCandidates dual(
    std::vector<std::tuple<std::string, double, double>> rows) {
  std::vector<DualScored> entries;
  for (auto& [render, s, sp] : rows) {
    entries.push_back(DualScored{Segmentation::parse(render), s, sp});
  }
  return DualScoredCandidates(std::move(entries), "segmenter", "reranker");
}

std::vector<std::string> renders(const DualScoredCandidates& c) {
  std::vector<std::string> out;
  for (const auto& e : c.entries()) out.push_back(e.segmentation.render());
  return out;
}

}  // namespace

TEST_CASE("reranking attaches second-stage scores without touching order") {
  ScoredCandidates top;
  Segmentation root = Segmentation::unsegmented(Hashtag::from_text("beamsearch"));
  top.insert(root.with_break(3), -1.5);  // "beam search"
  top.insert(root, -2.7);
  top.sort_best_first();

  test_util::TableScorer reranker({{"beam search", -0.3}, {"beamsearch", -0.9}});
  DualScoredCandidates out = hashseg::rerank(top, "unigram", reranker);

  REQUIRE(out.size() == 2);
  CHECK(out.segmenter_id() == "unigram");
  CHECK(out.reranker_id() == "table");
  CHECK(out.entries()[0].segmentation.render() == "beam search");
  CHECK(out.entries()[0].seg_score == -1.5);
  CHECK(out.entries()[0].rerank_score == -0.3);
  CHECK(out.entries()[1].segmentation.render() == "beamsearch");
  CHECK(out.entries()[1].seg_score == -2.7);
  CHECK(out.entries()[1].rerank_score == -0.9);
  CHECK(reranker.batches() == 1);  // one batch for the whole list

  SUBCASE("scores agree with a direct batch call") {
    test_util::TableScorer again({{"beam search", -0.3}, {"beamsearch", -0.9}});
    auto direct = again.score_batch({"beam search", "beamsearch"});
    CHECK(out.entries()[0].rerank_score == direct[0]);
    CHECK(out.entries()[1].rerank_score == direct[1]);
  }
  SUBCASE("an empty candidate list is rejected") {
    CHECK_THROWS_AS(hashseg::rerank(ScoredCandidates{}, "unigram", reranker),
                    std::invalid_argument);
  }
}

TEST_CASE("margin examples") {
  // s = (-5, -9), s' = (-3, -2): 0.2 * 4 - 0.1 * 1 = 0.7.
  DualScoredCandidates c = dual({{"beam search", -5.0, -3.0},
                                 {"beamsearch", -9.0, -2.0}});
  const auto& e = c.entries();
  CHECK(hashseg::ensemble_margin(e[0], e[1], {0.2, 0.1}) ==
        doctest::Approx(0.7).epsilon(1e-12));
  // Pure reranker: margin is -|delta s'|.
  CHECK(hashseg::ensemble_margin(e[0], e[1], {0.0, 1.0}) ==
        doctest::Approx(-1.0).epsilon(1e-12));
  // Pure segmenter: margin is |delta s|, never negative.
  CHECK(hashseg::ensemble_margin(e[0], e[1], {1.0, 0.0}) ==
        doctest::Approx(4.0).epsilon(1e-12));
  // Margin is symmetric in its arguments.
  CHECK(hashseg::ensemble_margin(e[0], e[1], {0.2, 0.1}) ==
        hashseg::ensemble_margin(e[1], e[0], {0.2, 0.1}));
}

TEST_CASE("a positive margin keeps segmenter order") {
  DualScoredCandidates c = dual({{"beam search", -5.0, -3.0},
                                 {"beamsearch", -9.0, -2.0}});
  DualScoredCandidates ranked = hashseg::ensemble_rank(c, {0.2, 0.1});
  CHECK(renders(ranked) ==
        std::vector<std::string>{"beam search", "beamsearch"});
}

TEST_CASE("a negative margin defers to the reranker") {
  DualScoredCandidates c = dual({{"beam search", -5.0, -3.0},
                                 {"beamsearch", -9.0, -2.0}});
  DualScoredCandidates ranked = hashseg::ensemble_rank(c, {0.0, 1.0});
  CHECK(renders(ranked) ==
        std::vector<std::string>{"beamsearch", "beam search"});
  // Scores travel with their candidates.
  CHECK(ranked.entries()[0].seg_score == -9.0);
  CHECK(ranked.entries()[0].rerank_score == -2.0);
}

TEST_CASE("no swap when the reranker already agrees with the segmenter") {
  // Negative margin, but s1' > s2': the top candidate is best under both
  // rankings, so the order stands.
  DualScoredCandidates c = dual({{"beam search", -5.0, -2.0},
                                 {"beamsearch", -9.0, -3.0}});
  CHECK(hashseg::ensemble_margin(c.entries()[0], c.entries()[1],
                                 {0.0, 1.0}) < 0.0);
  DualScoredCandidates ranked = hashseg::ensemble_rank(c, {0.0, 1.0});
  CHECK(renders(ranked) ==
        std::vector<std::string>{"beam search", "beamsearch"});
}

TEST_CASE("a zero margin keeps segmenter order") {
  DualScoredCandidates c = dual({{"beam search", -5.0, -3.0},
                                 {"beamsearch", -9.0, -2.0}});
  DualScoredCandidates ranked = hashseg::ensemble_rank(c, {0.0, 0.0});
  CHECK(renders(ranked) ==
        std::vector<std::string>{"beam search", "beamsearch"});
}

TEST_CASE("only the top two candidates can move") {
  DualScoredCandidates c = dual({{"b eamsearch", -1.0, -9.0},
                                 {"beam search", -2.0, -1.0},
                                 {"be amsearch", -3.0, -0.5},
                                 {"beamsearch", -4.0, -0.1}});
  DualScoredCandidates ranked = hashseg::ensemble_rank(c, {0.0, 1.0});
  // Positions 3 and 4 hold even though the reranker likes them best.
  CHECK(renders(ranked) ==
        std::vector<std::string>{"beam search", "b eamsearch", "be amsearch",
                                 "beamsearch"});
}

TEST_CASE("short candidate lists pass through") {
  DualScoredCandidates one = dual({{"beam search", -1.0, -1.0}});
  CHECK(renders(hashseg::ensemble_rank(one, {0.2, 0.1})) ==
        std::vector<std::string>{"beam search"});
  DualScoredCandidates none({}, "segmenter", "reranker");
  CHECK(hashseg::ensemble_rank(none, {0.2, 0.1}).empty());
}

TEST_CASE("weights outside the unit interval are rejected") {
  DualScoredCandidates c = dual({{"beam search", -1.0, -1.0},
                                 {"beamsearch", -2.0, -2.0}});
  CHECK_THROWS_AS(hashseg::ensemble_rank(c, {-0.1, 0.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(hashseg::ensemble_rank(c, {0.5, 1.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      hashseg::ensemble_rank(c, {std::numeric_limits<double>::quiet_NaN(), 0.5}),
      std::invalid_argument);
  CHECK_NOTHROW(hashseg::validate_weights({0.0, 1.0}));
  CHECK_THROWS_AS(
      hashseg::validate_weights({std::numeric_limits<double>::infinity(), 0.0}),
      std::invalid_argument);
}

TEST_CASE("default weight grid spans the unit interval") {
  std::vector<double> grid = hashseg::default_weight_grid();  // step 0.05
  REQUIRE(grid.size() == 21);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == 1.0);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  // The default weights are exactly representable on the grid.
  CHECK(std::count(grid.begin(), grid.end(), 0.2) == 1);
  CHECK(std::count(grid.begin(), grid.end(), 0.1) == 1);

  SUBCASE("a coarse step still caps at one") {
    std::vector<double> coarse = hashseg::default_weight_grid(0.3);
    REQUIRE(coarse.size() == 5);
    CHECK(coarse.front() == 0.0);
    CHECK(coarse[1] == 0.3);
    CHECK(coarse[3] == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(coarse.back() == 1.0);
    CHECK(hashseg::default_weight_grid(0.5) ==
          std::vector<double>{0.0, 0.5, 1.0});
    CHECK(hashseg::default_weight_grid(1.0) == std::vector<double>{0.0, 1.0});
  }
  SUBCASE("invalid steps are rejected") {
    CHECK_THROWS_AS(hashseg::default_weight_grid(0.0), std::invalid_argument);
    CHECK_THROWS_AS(hashseg::default_weight_grid(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(hashseg::default_weight_grid(1.5), std::invalid_argument);
  }
}

namespace {

// Dev set where the segmenter's top-1 is wrong and the reranker's favorite
// (in position 2) is gold, with a small s gap and a large s' gap.
std::vector<TuningItem> reranker_perfect_dev() {
  std::vector<TuningItem> dev;
  dev.push_back(TuningItem{dual({{"beams earch", -1.0, -5.0},
                                 {"beam search", -2.0, -1.0}}),
                           Segmentation::parse("beam search")});
  dev.push_back(TuningItem{dual({{"deeplearning", -1.0, -5.0},
                                 {"deep learning", -2.0, -1.0}}),
                           Segmentation::parse("deep learning")});
  dev.push_back(TuningItem{dual({{"aa mirkhan", -1.0, -5.0},
                                 {"aamir khan", -2.0, -1.0}}),
                           Segmentation::parse("aamir khan")});
  return dev;
}

// The mirror image: segmenter already right, reranker prefers a wrong split.
std::vector<TuningItem> segmenter_perfect_dev() {
  std::vector<TuningItem> dev;
  dev.push_back(TuningItem{dual({{"beam search", -1.0, -2.0},
                                 {"beams earch", -9.0, -1.0}}),
                           Segmentation::parse("beam search")});
  dev.push_back(TuningItem{dual({{"deep learning", -1.0, -2.0},
                                 {"deeplearning", -9.0, -1.0}}),
                           Segmentation::parse("deep learning")});
  return dev;
}

}  // namespace

TEST_CASE("grid search finds reranker-dominant weights when it should") {
  std::vector<double> grid{0.0, 0.5, 1.0};
  GridSearchReport report =
      hashseg::grid_search(reranker_perfect_dev(), grid, grid);
  REQUIRE(report.points.size() == 9);
  CHECK(report.best_f1 == 1.0);
  CHECK(report.best_accuracy == 1.0);
  // Several points reach F1 1; ties resolve to the smallest alpha, then the
  // smallest beta. (0, 0) keeps segmenter order and stays imperfect, so the
  // winner is (0, 0.5).
  CHECK(report.best.alpha == 0.0);
  CHECK(report.best.beta == 0.5);
  CHECK(report.points.front().f1 < 1.0);  // the (0, 0) point
}

TEST_CASE("grid search falls back to segmenter order when it is already right") {
  std::vector<double> grid{0.0, 0.5, 1.0};
  GridSearchReport report =
      hashseg::grid_search(segmenter_perfect_dev(), grid, grid);
  CHECK(report.best_f1 == 1.0);
  CHECK(report.best.alpha == 0.0);
  CHECK(report.best.beta == 0.0);
}

TEST_CASE("grid points are swept alpha-major over the cleaned grids") {
  GridSearchReport report = hashseg::grid_search(
      reranker_perfect_dev(), {1.0, 0.0, 0.0, 0.5}, {0.5, 0.5, 0.0});
  REQUIRE(report.points.size() == 6);  // 3 alphas x 2 betas after dedup
  std::vector<std::pair<double, double>> order;
  for (const auto& p : report.points) {
    order.emplace_back(p.weights.alpha, p.weights.beta);
  }
  CHECK(order == std::vector<std::pair<double, double>>{{0.0, 0.0},
                                                        {0.0, 0.5},
                                                        {0.5, 0.0},
                                                        {0.5, 0.5},
                                                        {1.0, 0.0},
                                                        {1.0, 0.5}});
}

TEST_CASE("a single-point grid echoes its weights back") {
  GridSearchReport report =
      hashseg::grid_search(segmenter_perfect_dev(), {0.2}, {0.1});
  REQUIRE(report.points.size() == 1);
  CHECK(report.best.alpha == 0.2);
  CHECK(report.best.beta == 0.1);
  CHECK(report.best_f1 == report.points[0].f1);
}

TEST_CASE("grid search rejects degenerate inputs") {
  auto dev = segmenter_perfect_dev();
  CHECK_THROWS_AS(hashseg::grid_search(std::vector<TuningItem>{}, {0.2}, {0.1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(hashseg::grid_search(dev, {}, {0.1}), std::invalid_argument);
  CHECK_THROWS_AS(hashseg::grid_search(dev, {0.2}, {}), std::invalid_argument);
  CHECK_THROWS_AS(hashseg::grid_search(dev, {0.2, 1.5}, {0.1}),
                  std::invalid_argument);
  std::vector<TuningItem> empty_item;
  empty_item.push_back(TuningItem{DualScoredCandidates({}, "s", "r"),
                                  Segmentation::parse("beam search")});
  CHECK_THROWS_AS(hashseg::grid_search(empty_item, {0.2}, {0.1}),
                  std::invalid_argument);
}

TEST_CASE("dev set order does not change the chosen weights") {
  std::vector<TuningItem> dev = reranker_perfect_dev();
  auto extra = segmenter_perfect_dev();
  dev.insert(dev.end(), extra.begin(), extra.end());
  std::vector<double> grid = hashseg::default_weight_grid(0.25);

  GridSearchReport base = hashseg::grid_search(dev, grid, grid);
  std::mt19937 rng(5);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(dev.begin(), dev.end(), rng);
    GridSearchReport shuffled = hashseg::grid_search(dev, grid, grid);
    CHECK(shuffled.best.alpha == base.best.alpha);
    CHECK(shuffled.best.beta == base.best.beta);
    CHECK(shuffled.best_f1 == base.best_f1);
  }
}

TEST_CASE("the gold-pair wrapper scores each hashtag once") {
  std::vector<GoldPair> dev;
  dev.push_back(GoldPair{Hashtag::from_text("beamsearch"),
                         Segmentation::parse("beam search")});
  dev.push_back(GoldPair{Hashtag::from_text("deeplearning"),
                         Segmentation::parse("deep learning")});

  int calls = 0;
  hashseg::DualScoreFn fn = [&calls](const Hashtag& h) {
    ++calls;
    Segmentation root = Segmentation::unsegmented(h);
    std::vector<DualScored> entries{
        DualScored{root, -1.0, -5.0},
        DualScored{root.with_break(3), -2.0, -1.0}};
    return DualScoredCandidates(std::move(entries), "s", "r");
  };
  std::vector<double> grid = hashseg::default_weight_grid(0.25);
  GridSearchReport report = hashseg::grid_search(dev, fn, grid, grid);
  CHECK(calls == 2);  // once per item, not once per grid point
  REQUIRE(report.points.size() == 25);
  CHECK(report.best_f1 == 1.0);   // with_break(3) is gold for both tags
  CHECK(report.best.alpha == 0.0);
  CHECK(report.best.beta == 0.25);
}