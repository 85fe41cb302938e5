#include "hashseg/pipeline.hpp"

#include <stdexcept>

#include "hashseg/remote.hpp"

namespace hashseg {

SegmentationPipeline::SegmentationPipeline(std::shared_ptr<Scorer> segmenter,
                                           std::shared_ptr<Scorer> reranker,
                                           BeamParams beam,
                                           EnsembleWeights weights)
    : segmenter_(std::move(segmenter)),
      reranker_(std::move(reranker)),
      beam_(beam),
      weights_(weights) {
  if (!segmenter_) {
    throw std::invalid_argument("pipeline needs a segmenter scorer");
  }
  validate_weights(weights_);
}

DualScoredCandidates SegmentationPipeline::dual_scores(const Hashtag& h,
                                                       bool* truncated) {
  BeamResult beam = beam_search(h, beam_, *segmenter_);
  if (truncated != nullptr) *truncated = beam.truncated;
  if (reranker_) {
    return rerank(beam.candidates, segmenter_->id(), *reranker_);
  }
  std::vector<DualScored> entries;
  entries.reserve(beam.candidates.size());
  for (const ScoredCandidate& c : beam.candidates.entries()) {
    entries.push_back(DualScored{c.segmentation, c.score, c.score});
  }
  return DualScoredCandidates(std::move(entries), segmenter_->id(),
                              segmenter_->id());
}

PipelineResult SegmentationPipeline::run(const Hashtag& h) {
  bool truncated = false;
  DualScoredCandidates dual = dual_scores(h, &truncated);
  if (reranker_) {
    return PipelineResult{ensemble_rank(dual, weights_), truncated};
  }
  return PipelineResult{std::move(dual), truncated};
}

void SegmentationPipeline::set_weights(const EnsembleWeights& w) {
  validate_weights(w);
  weights_ = w;
}

namespace {

struct Endpoint {
  std::string scheme;
  std::string rest;
};

Endpoint split_endpoint(const std::string& spec) {
  std::size_t colon = spec.find(':');
  if (colon == std::string::npos || colon == 0) {
    throw std::invalid_argument(
        "endpoint '" + spec +
        "' is not of the form corpus:PATH, cmd:COMMAND, or tcp:HOST:PORT");
  }
  return Endpoint{spec.substr(0, colon), spec.substr(colon + 1)};
}

std::unique_ptr<LineChannel> open_channel(const Endpoint& ep,
                                          const std::string& spec) {
  if (ep.scheme == "cmd") {
    if (ep.rest.empty()) {
      throw std::invalid_argument("endpoint '" + spec + "' has no command");
    }
    return open_subprocess_channel(ep.rest);
  }
  if (ep.scheme == "tcp") {
    std::size_t colon = ep.rest.rfind(':');
    if (colon == std::string::npos || colon == 0 ||
        colon + 1 == ep.rest.size()) {
      throw std::invalid_argument("endpoint '" + spec +
                                  "' is not of the form tcp:HOST:PORT");
    }
    std::string host = ep.rest.substr(0, colon);
    int port = 0;
    try {
      std::size_t used = 0;
      port = std::stoi(ep.rest.substr(colon + 1), &used);
      if (used != ep.rest.size() - colon - 1) port = 0;
    } catch (const std::exception&) {
      port = 0;
    }
    if (port < 1 || port > 65535) {
      throw std::invalid_argument("endpoint '" + spec +
                                  "' has an invalid port");
    }
    return open_tcp_channel(host, static_cast<std::uint16_t>(port));
  }
  throw std::invalid_argument("unknown endpoint scheme '" + ep.scheme +
                              "' in '" + spec + "'");
}

}  // namespace

std::shared_ptr<Scorer> make_scorer(const std::string& endpoint,
                                    const ScorerOptions& options) {
  Endpoint ep = split_endpoint(endpoint);
  if (ep.scheme == "corpus") {
    if (ep.rest.empty()) {
      throw std::invalid_argument("endpoint '" + endpoint +
                                  "' has no corpus path");
    }
    CorpusModel model = CorpusModel::load(ep.rest, options.delta);
    return std::make_shared<CorpusScorer>(std::move(model), endpoint,
                                          options.normalize_by_length);
  }
  RemoteOptions remote{options.timeout};
  return std::make_shared<RemoteScorer>(open_channel(ep, endpoint), endpoint,
                                        remote);
}

std::shared_ptr<Translator> make_translator(const std::string& endpoint,
                                            const std::string& src,
                                            const std::string& tgt,
                                            std::chrono::milliseconds timeout) {
  if (endpoint == "identity") {
    return std::make_shared<IdentityTranslator>();
  }
  Endpoint ep = split_endpoint(endpoint);
  RemoteOptions remote{timeout};
  return std::make_shared<RemoteTranslator>(open_channel(ep, endpoint),
                                            endpoint, src, tgt, remote);
}

}  // namespace hashseg
