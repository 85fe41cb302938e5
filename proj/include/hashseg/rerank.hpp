#ifndef HASHSEG_RERANK_HPP
#define HASHSEG_RERANK_HPP

#include <functional>
#include <string>
#include <vector>

#include "hashseg/evaluation.hpp"
#include "hashseg/scoring.hpp"
#include "hashseg/segmentation.hpp"

namespace hashseg {

// A candidate carrying both rankings' scores: s from the segmenter that
// produced it, s' from the second-stage scorer.
struct DualScored {
  Segmentation segmentation;
  double seg_score;
  double rerank_score;
};

// Candidates in segmenter order, tagged with the identities of the two
// scorers so score scales are never mixed across models by accident.
class DualScoredCandidates {
 public:
  DualScoredCandidates(std::vector<DualScored> entries,
                       std::string segmenter_id, std::string reranker_id)
      : entries_(std::move(entries)),
        segmenter_id_(std::move(segmenter_id)),
        reranker_id_(std::move(reranker_id)) {}

  const std::vector<DualScored>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::string& segmenter_id() const { return segmenter_id_; }
  const std::string& reranker_id() const { return reranker_id_; }

 private:
  std::vector<DualScored> entries_;
  std::string segmenter_id_;
  std::string reranker_id_;
};

struct EnsembleWeights {
  double alpha = 0.2;
  double beta = 0.1;
};

// Throws std::invalid_argument unless both weights are finite and in [0,1].
void validate_weights(const EnsembleWeights& w);

// Attaches second-stage scores to the segmenter's candidates. The candidate
// set and its order are preserved; segmenter scores are untouched. Throws
// std::invalid_argument on an empty candidate set; scorer failures propagate.
DualScoredCandidates rerank(const ScoredCandidates& top,
                            const std::string& segmenter_id,
                            Scorer& reranker);

// Decision margin between the segmenter's top-2:
//   alpha * |s1 - s2| - beta * |s1' - s2'|
// Positive or zero keeps segmenter order; negative defers to the reranker.
double ensemble_margin(const DualScored& c1, const DualScored& c2,
                       const EnsembleWeights& w);

// Applies the margin rule to the first two candidates. A negative margin
// swaps them into descending-s' order; everything past the top-2 keeps its
// position. Zero or one candidate passes through unchanged.
DualScoredCandidates ensemble_rank(const DualScoredCandidates& candidates,
                                   const EnsembleWeights& w);

// One dev-set item with both scores already attached; grid sweeps reuse these
// so each hashtag is scored exactly once regardless of grid size.
struct TuningItem {
  DualScoredCandidates candidates;
  Segmentation gold;
};

struct GridPoint {
  EnsembleWeights weights;
  double f1 = 0.0;
  double accuracy = 0.0;
};

struct GridSearchReport {
  std::vector<GridPoint> points;  // every evaluated point, alpha-major
  EnsembleWeights best;
  double best_f1 = 0.0;
  double best_accuracy = 0.0;
};

// {0, step, 2*step, ..., 1}; throws unless 0 < step <= 1.
std::vector<double> default_weight_grid(double step = 0.05);

// Exhaustive sweep maximizing dataset span-F1 of the ensembled top-1. Ties
// resolve to the smaller alpha, then the smaller beta. Grids are sorted and
// deduplicated before the sweep; values must lie in [0,1]. Throws
// std::invalid_argument on an empty dev set or empty grid.
GridSearchReport grid_search(const std::vector<TuningItem>& dev,
                             const std::vector<double>& alpha_grid,
                             const std::vector<double>& beta_grid);

// Convenience wrapper: runs dual_scores once per dev pair, then sweeps.
using DualScoreFn = std::function<DualScoredCandidates(const Hashtag&)>;
GridSearchReport grid_search(const std::vector<GoldPair>& dev,
                             const DualScoreFn& dual_scores,
                             const std::vector<double>& alpha_grid,
                             const std::vector<double>& beta_grid);

}  // namespace hashseg

#endif
