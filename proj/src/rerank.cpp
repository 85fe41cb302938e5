#include "hashseg/rerank.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hashseg {

void validate_weights(const EnsembleWeights& w) {
  auto ok = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (!ok(w.alpha) || !ok(w.beta)) {
    throw std::invalid_argument("ensemble weights must lie in [0, 1]");
  }
}

DualScoredCandidates rerank(const ScoredCandidates& top,
                            const std::string& segmenter_id,
                            Scorer& reranker) {
  if (top.empty()) {
    throw std::invalid_argument("rerank: no candidates to re-score");
  }
  std::vector<std::string> texts;
  texts.reserve(top.size());
  for (const ScoredCandidate& c : top.entries()) {
    texts.push_back(c.segmentation.render());
  }
  std::vector<double> rescored = reranker.score_batch(texts);
  if (rescored.size() != texts.size()) {
    throw std::runtime_error("rerank: scorer returned " +
                             std::to_string(rescored.size()) +
                             " scores for " + std::to_string(texts.size()) +
                             " candidates");
  }
  std::vector<DualScored> entries;
  entries.reserve(top.size());
  for (std::size_t i = 0; i < top.size(); ++i) {
    entries.push_back(DualScored{top.entries()[i].segmentation,
                                 top.entries()[i].score, rescored[i]});
  }
  return DualScoredCandidates(std::move(entries), segmenter_id,
                              reranker.id());
}

double ensemble_margin(const DualScored& c1, const DualScored& c2,
                       const EnsembleWeights& w) {
  return w.alpha * std::abs(c1.seg_score - c2.seg_score) -
         w.beta * std::abs(c1.rerank_score - c2.rerank_score);
}

DualScoredCandidates ensemble_rank(const DualScoredCandidates& candidates,
                                   const EnsembleWeights& w) {
  validate_weights(w);
  if (candidates.size() < 2) return candidates;
  std::vector<DualScored> entries = candidates.entries();
  if (ensemble_margin(entries[0], entries[1], w) < 0.0 &&
      entries[1].rerank_score > entries[0].rerank_score) {
    std::swap(entries[0], entries[1]);
  }
  return DualScoredCandidates(std::move(entries), candidates.segmenter_id(),
                              candidates.reranker_id());
}

std::vector<double> default_weight_grid(double step) {
  if (!std::isfinite(step) || step <= 0.0 || step > 1.0) {
    throw std::invalid_argument("grid step must lie in (0, 1]");
  }
  std::vector<double> values;
  for (int i = 0;; ++i) {
    double v = i * step;
    if (v > 1.0) {
      if (values.empty() || values.back() < 1.0) values.push_back(1.0);
      break;
    }
    values.push_back(v);
    if (v == 1.0) break;
  }
  return values;
}

namespace {

std::vector<double> clean_grid(std::vector<double> grid, const char* name) {
  if (grid.empty()) {
    throw std::invalid_argument(std::string(name) + " grid is empty");
  }
  for (double v : grid) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw std::invalid_argument(std::string(name) +
                                  " grid values must lie in [0, 1]");
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace

GridSearchReport grid_search(const std::vector<TuningItem>& dev,
                             const std::vector<double>& alpha_grid,
                             const std::vector<double>& beta_grid) {
  if (dev.empty()) {
    throw std::invalid_argument("grid_search: empty dev set");
  }
  std::vector<double> alphas = clean_grid(alpha_grid, "alpha");
  std::vector<double> betas = clean_grid(beta_grid, "beta");
  for (const TuningItem& item : dev) {
    if (item.candidates.empty()) {
      throw std::invalid_argument("grid_search: dev item has no candidates");
    }
  }

  std::vector<Segmentation> golds;
  golds.reserve(dev.size());
  for (const TuningItem& item : dev) golds.push_back(item.gold);

  GridSearchReport report;
  report.points.reserve(alphas.size() * betas.size());
  bool have_best = false;
  // Ascending sweep order makes "first strict improvement wins" identical to
  // the smaller-alpha-then-smaller-beta tie rule.
  for (double alpha : alphas) {
    for (double beta : betas) {
      EnsembleWeights w{alpha, beta};
      std::vector<Segmentation> predictions;
      predictions.reserve(dev.size());
      for (const TuningItem& item : dev) {
        DualScoredCandidates ranked = ensemble_rank(item.candidates, w);
        predictions.push_back(ranked.entries().front().segmentation);
      }
      MetricsReport metrics = span_f1(predictions, golds);
      report.points.push_back(GridPoint{w, metrics.f1, metrics.accuracy});
      if (!have_best || metrics.f1 > report.best_f1) {
        have_best = true;
        report.best = w;
        report.best_f1 = metrics.f1;
        report.best_accuracy = metrics.accuracy;
      }
    }
  }
  return report;
}

GridSearchReport grid_search(const std::vector<GoldPair>& dev,
                             const DualScoreFn& dual_scores,
                             const std::vector<double>& alpha_grid,
                             const std::vector<double>& beta_grid) {
  if (dev.empty()) {
    throw std::invalid_argument("grid_search: empty dev set");
  }
  std::vector<TuningItem> items;
  items.reserve(dev.size());
  for (const GoldPair& pair : dev) {
    items.push_back(TuningItem{dual_scores(pair.hashtag), pair.gold});
  }
  return grid_search(items, alpha_grid, beta_grid);
}

}  // namespace hashseg
