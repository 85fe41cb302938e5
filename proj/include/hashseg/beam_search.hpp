#ifndef HASHSEG_BEAM_SEARCH_HPP
#define HASHSEG_BEAM_SEARCH_HPP

#include <unordered_map>

#include "hashseg/scoring.hpp"
#include "hashseg/segmentation.hpp"

namespace hashseg {

struct BeamParams {
  // Maximum number of expansion iterations; also the maximum number of word
  // boundaries a candidate can accumulate. Internally clamped to n-1 for a
  // hashtag of n characters.
  int max_expansions = 13;
  // Beam width: candidates kept after each prune.
  int beam_width = 20;
};

struct BeamResult {
  // Final dictionary: the surviving beam re-scored, always including the
  // unsegmented candidate. Ordered best-first.
  ScoredCandidates candidates;
  // True when an iteration expanded zero nodes and the search stopped before
  // reaching the expansion limit.
  bool truncated = false;
};

// Cache of scores keyed by rendered candidate, shared across beam levels so
// no candidate is ever sent to a scorer twice.
using ScoreCache = std::unordered_map<std::string, double>;

// One expansion step: for every node whose break count is at least
// iteration-1, emits one child per free boundary position with that position
// set. Nodes failing the guard contribute no children.
CandidateTree expand(const CandidateTree& tree, int iteration);

// Scores every distinct candidate in the tree (one batch for the cache
// misses) and returns them ordered best-first.
ScoredCandidates score_candidates(const CandidateTree& tree, Scorer& scorer,
                                  ScoreCache& cache);
ScoredCandidates score_candidates(const CandidateTree& tree, Scorer& scorer);

// Keeps the top_k best-scored candidates as the next tree level.
CandidateTree prune(const ScoredCandidates& scored, std::size_t top_k);

// Iterative expand/score/prune over segmentation candidates of h. Each
// iteration expands the beam, scores the new children, merges them into the
// run's dictionary, and prunes that dictionary back to the beam width. The
// result is the surviving beam plus the unsegmented candidate; with
// params.max_expansions = 0 the unsegmented candidate alone.
// Scorer failures propagate. Throws std::invalid_argument on
// beam_width < 1 or max_expansions < 0.
BeamResult beam_search(const Hashtag& h, const BeamParams& params,
                       Scorer& scorer);

}  // namespace hashseg

#endif
