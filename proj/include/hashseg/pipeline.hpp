#ifndef HASHSEG_PIPELINE_HPP
#define HASHSEG_PIPELINE_HPP

#include <chrono>
#include <memory>
#include <string>

#include "hashseg/beam_search.hpp"
#include "hashseg/rerank.hpp"
#include "hashseg/translator.hpp"

namespace hashseg {

struct PipelineResult {
  DualScoredCandidates ranked;
  bool truncated = false;
};

// Production flow: beam-search the hashtag, attach second-stage scores,
// ensemble the top-2. Without a reranker the second score mirrors the first
// and the beam order stands.
class SegmentationPipeline {
 public:
  // reranker may be null. Throws std::invalid_argument on a null segmenter
  // or out-of-range weights.
  SegmentationPipeline(std::shared_ptr<Scorer> segmenter,
                       std::shared_ptr<Scorer> reranker,
                       BeamParams beam = {}, EnsembleWeights weights = {});

  PipelineResult run(const Hashtag& h);

  // Candidates with both scores attached but ensemble weights not applied;
  // grid tuning calls this once per hashtag and sweeps weights offline.
  DualScoredCandidates dual_scores(const Hashtag& h,
                                   bool* truncated = nullptr);

  void set_weights(const EnsembleWeights& w);
  const EnsembleWeights& weights() const { return weights_; }
  const BeamParams& beam() const { return beam_; }
  bool has_reranker() const { return reranker_ != nullptr; }

 private:
  std::shared_ptr<Scorer> segmenter_;
  std::shared_ptr<Scorer> reranker_;
  BeamParams beam_;
  EnsembleWeights weights_;
};

// Backend wiring. Accepted scorer endpoint forms:
//   corpus:PATH       built-in smoothed unigram scorer over a frequency file
//   cmd:COMMAND       line-protocol scorer on a subprocess's stdin/stdout
//   tcp:HOST:PORT     line-protocol scorer over a TCP connection
struct ScorerOptions {
  double delta = 0.5;
  bool normalize_by_length = false;
  std::chrono::milliseconds timeout{30000};
};
std::shared_ptr<Scorer> make_scorer(const std::string& endpoint,
                                    const ScorerOptions& options = {});

// Translator endpoint forms: `identity`, cmd:COMMAND, tcp:HOST:PORT.
std::shared_ptr<Translator> make_translator(
    const std::string& endpoint, const std::string& src,
    const std::string& tgt,
    std::chrono::milliseconds timeout = std::chrono::milliseconds(30000));

}  // namespace hashseg

#endif
