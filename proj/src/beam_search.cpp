#include "hashseg/beam_search.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace hashseg {

CandidateTree expand(const CandidateTree& tree, int iteration) {
  if (iteration < 1) {
    throw std::invalid_argument("expand iteration must be >= 1");
  }
  CandidateTree children;
  for (const Segmentation& node : tree) {
    if (node.break_count() + 1 < static_cast<std::size_t>(iteration)) continue;
    for (std::size_t i = 0; i < node.break_slots(); ++i) {
      if (!node.has_break(i)) children.push_back(node.with_break(i));
    }
  }
  return children;
}

ScoredCandidates score_candidates(const CandidateTree& tree, Scorer& scorer,
                                  ScoreCache& cache) {
  // One batch per call, misses only, in first-seen order.
  std::vector<std::string> misses;
  std::unordered_set<std::string> seen;
  for (const Segmentation& node : tree) {
    std::string rendered = node.render();
    if (cache.count(rendered) || seen.count(rendered)) continue;
    seen.insert(rendered);
    misses.push_back(std::move(rendered));
  }
  if (!misses.empty()) {
    std::vector<double> scores = scorer.score_batch(misses);
    if (scores.size() != misses.size()) {
      throw std::runtime_error("scorer returned " +
                               std::to_string(scores.size()) +
                               " scores for " + std::to_string(misses.size()) +
                               " candidates");
    }
    for (std::size_t i = 0; i < misses.size(); ++i) {
      cache.emplace(misses[i], scores[i]);
    }
  }
  ScoredCandidates out;
  for (const Segmentation& node : tree) {
    out.insert(node, cache.at(node.render()));
  }
  out.sort_best_first();
  return out;
}

ScoredCandidates score_candidates(const CandidateTree& tree, Scorer& scorer) {
  ScoreCache cache;
  return score_candidates(tree, scorer, cache);
}

CandidateTree prune(const ScoredCandidates& scored, std::size_t top_k) {
  return scored.top(top_k);
}

BeamResult beam_search(const Hashtag& h, const BeamParams& params,
                       Scorer& scorer) {
  if (params.beam_width < 1) {
    throw std::invalid_argument("beam width must be >= 1");
  }
  if (params.max_expansions < 0) {
    throw std::invalid_argument("max expansions must be >= 0");
  }
  const std::size_t top_k = static_cast<std::size_t>(params.beam_width);
  // Further iterations cannot add boundaries once every slot is taken.
  const int expansions =
      std::min<int>(params.max_expansions, static_cast<int>(h.size()) - 1);

  ScoreCache cache;
  const Segmentation root = Segmentation::unsegmented(h);

  BeamResult result;
  if (params.max_expansions == 0) {
    result.candidates = score_candidates({root}, scorer, cache);
    return result;
  }

  // Dictionary of everything scored so far; the beam is pruned from it, so a
  // parent stays competitive with its descendants across levels.
  ScoredCandidates dictionary = score_candidates({root}, scorer, cache);
  CandidateTree tree{root};
  for (int t = 1; t <= expansions; ++t) {
    CandidateTree children = expand(tree, t);
    if (children.empty()) {
      result.truncated = true;
      break;
    }
    ScoredCandidates level = score_candidates(children, scorer, cache);
    for (const ScoredCandidate& entry : level.entries()) {
      dictionary.insert(entry.segmentation, entry.score);
    }
    dictionary.sort_best_first();
    tree = prune(dictionary, top_k);
  }

  // Final score over the surviving tree; all hits come from the cache. The
  // unsegmented candidate is always retained even when pruned off the beam.
  tree.push_back(root);
  result.candidates = score_candidates(tree, scorer, cache);
  return result;
}

}  // namespace hashseg
