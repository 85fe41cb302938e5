#ifndef HASHSEG_SCORING_HPP
#define HASHSEG_SCORING_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hashseg {

// Batch scoring contract. score_batch over k texts returns exactly k finite
// values, positionally aligned, natural log scale, higher is better. Scores
// are comparable within one scorer only. Implementations must be pure: equal
// texts receive equal scores, and callers may invoke score_batch from
// multiple threads.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::vector<double> score_batch(
      const std::vector<std::string>& texts) = 0;
  // Stable identity tag (endpoint spec or corpus path); used to guard against
  // mixing scores from different scorers.
  virtual std::string id() const = 0;
};

// Additively smoothed unigram frequency model:
//   p(w) = (count(w) + delta) / (total + delta * (V + 1))
// where V is the vocabulary size. Unknown words get the delta-only mass, so
// every probability is positive and every score finite.
class CorpusModel {
 public:
  // Frequency file: UTF-8, one "word<TAB>count" per line, counts positive
  // integers. Blank lines ignored. Throws std::runtime_error on I/O or
  // format errors (with line numbers).
  static CorpusModel load(const std::filesystem::path& path,
                          double delta = 0.5);
  static CorpusModel from_counts(
      std::unordered_map<std::string, std::uint64_t> counts,
      double delta = 0.5);

  double log_prob(std::string_view word) const;
  // Sum of log_prob over the space-separated words of the candidate.
  double score(std::string_view candidate) const;

  double delta() const { return delta_; }
  std::size_t vocab_size() const { return counts_.size(); }
  std::uint64_t total_count() const { return total_; }

 private:
  CorpusModel(std::unordered_map<std::string, std::uint64_t> counts,
              double delta);
  std::unordered_map<std::string, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  double delta_;
};

// Deterministic built-in scorer over a CorpusModel. When normalize_by_length
// is set, scores are divided by the word count of the candidate (off by
// default; candidate ordering within a beam level does not need it).
class CorpusScorer final : public Scorer {
 public:
  CorpusScorer(CorpusModel model, std::string id,
               bool normalize_by_length = false)
      : model_(std::move(model)),
        id_(std::move(id)),
        normalize_(normalize_by_length) {}

  std::vector<double> score_batch(
      const std::vector<std::string>& texts) override;
  std::string id() const override { return id_; }

  const CorpusModel& model() const { return model_; }

 private:
  CorpusModel model_;
  std::string id_;
  bool normalize_;
};

}  // namespace hashseg

#endif
