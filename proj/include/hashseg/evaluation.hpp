#ifndef HASHSEG_EVALUATION_HPP
#define HASHSEG_EVALUATION_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hashseg/segmentation.hpp"

namespace hashseg {

struct GoldPair {
  Hashtag hashtag;
  Segmentation gold;
};

struct MetricsReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  std::size_t matched_spans = 0;
  std::size_t predicted_spans = 0;
  std::size_t gold_spans = 0;
  std::size_t exact_matches = 0;
  std::size_t items = 0;
};

struct GoldLoadOptions {
  bool strict = false;     // abort on the first bad line instead of skipping
  bool lowercase = true;   // fold ASCII case before comparing/storing
};

struct GoldLoadResult {
  std::vector<GoldPair> pairs;
  // Lines skipped in lenient mode, as "line N: reason".
  std::vector<std::string> skipped;
};

// Reads `hashtag<TAB>gold segmentation` lines. A leading '#' on the hashtag
// column is stripped. Blank lines are ignored.
GoldLoadResult load_gold(const std::string& path,
                         const GoldLoadOptions& options = {});

// Maximal unbroken runs as half-open [start, end) character offsets.
std::vector<std::pair<std::size_t, std::size_t>> word_spans(
    const Segmentation& s);

// Micro-averaged span precision/recall/F1 plus exact-match accuracy.
// pred and gold must be pairwise over the same characters.
MetricsReport span_f1(const std::vector<Segmentation>& pred,
                      const std::vector<Segmentation>& gold);

// Top-N oracle protocol: an item's evaluated prediction is its gold
// segmentation when gold appears among the first N candidates, otherwise the
// first candidate. Candidate lists must be ranked best-first.
MetricsReport oracle_topn(const std::vector<ScoredCandidates>& candidates,
                          const std::vector<Segmentation>& gold,
                          std::size_t n);
MetricsReport oracle_topn(const std::vector<CandidateTree>& ranked,
                          const std::vector<Segmentation>& gold,
                          std::size_t n);

}  // namespace hashseg

#endif
