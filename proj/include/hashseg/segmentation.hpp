#ifndef HASHSEG_SEGMENTATION_HPP
#define HASHSEG_SEGMENTATION_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hashseg {

// An unsegmented hashtag: at least two Unicode scalar values, no whitespace.
// A single leading '#' is stripped on construction.
class Hashtag {
 public:
  // Throws std::invalid_argument if the (stripped) text is shorter than two
  // characters, contains whitespace, or still starts with '#'.
  static Hashtag from_text(std::string_view text);

  const std::u32string& chars() const { return chars_; }
  std::size_t size() const { return chars_.size(); }
  std::string str() const;

  friend bool operator==(const Hashtag&, const Hashtag&) = default;

 private:
  explicit Hashtag(std::u32string chars) : chars_(std::move(chars)) {}
  std::u32string chars_;
};

// A candidate segmentation: the hashtag's characters plus a boundary flag
// between each adjacent pair. Characters are immutable; only boundaries vary.
class Segmentation {
 public:
  // All boundaries off; the hashtag itself as a single word.
  static Segmentation unsegmented(const Hashtag& h);

  // Inverse of render(). Words separated by single ASCII spaces. Throws
  // std::invalid_argument on leading/trailing/double spaces, embedded
  // non-space whitespace, or fewer than two characters total.
  static Segmentation parse(std::string_view spaced);

  std::size_t char_count() const { return chars_.size(); }
  // Interleaved size: n characters plus n-1 boundary positions.
  std::size_t slot_count() const { return 2 * chars_.size() - 1; }
  // Number of active word boundaries.
  std::size_t break_count() const;
  // Boundary positions available (n-1).
  std::size_t break_slots() const { return breaks_.size(); }

  // i indexes the gap after character i, 0 <= i < n-1.
  bool has_break(std::size_t i) const { return breaks_[i]; }
  Segmentation with_break(std::size_t i) const;

  const std::u32string& chars() const { return chars_; }
  Hashtag source() const;

  // UTF-8 text with one ASCII space per active boundary.
  std::string render() const;

  friend bool operator==(const Segmentation&, const Segmentation&) = default;

 private:
  Segmentation(std::u32string chars, std::vector<bool> breaks)
      : chars_(std::move(chars)), breaks_(std::move(breaks)) {}
  std::u32string chars_;
  std::vector<bool> breaks_;  // size n-1
};

// One level of the search tree, realized as a flat candidate list.
using CandidateTree = std::vector<Segmentation>;

struct ScoredCandidate {
  Segmentation segmentation;
  double score;  // natural log scale, higher is better
};

// Dictionary of scored candidates keyed by rendered text. At most one entry
// per rendered candidate; sort_best_first() orders by score descending with
// ties broken by fewer breaks, then lexicographic rendered text.
class ScoredCandidates {
 public:
  // Returns false (and keeps the existing entry) if the candidate is already
  // present.
  bool insert(Segmentation seg, double score);

  void sort_best_first();

  bool contains(const std::string& rendered) const {
    return index_.count(rendered) > 0;
  }
  const ScoredCandidate* find(const std::string& rendered) const;

  const std::vector<ScoredCandidate>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // The first min(k, size) segmentations in current order.
  CandidateTree top(std::size_t k) const;

 private:
  std::vector<ScoredCandidate> entries_;
  std::unordered_map<std::string, std::size_t> index_;  // rendered -> position
};

// Orders a before b: higher score, then fewer breaks, then lexicographically
// smaller rendered text.
bool better_candidate(const ScoredCandidate& a, const ScoredCandidate& b);

}  // namespace hashseg

#endif
