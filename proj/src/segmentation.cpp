#include "hashseg/segmentation.hpp"

#include <algorithm>
#include <stdexcept>

#include "hashseg/utf8.hpp"

namespace hashseg {

Hashtag Hashtag::from_text(std::string_view text) {
  if (!text.empty() && text.front() == '#') text.remove_prefix(1);
  std::u32string chars = utf8::decode(text);
  if (chars.size() < 2) {
    throw std::invalid_argument("hashtag needs at least two characters: \"" +
                                std::string(text) + "\"");
  }
  if (!chars.empty() && chars.front() == U'#') {
    throw std::invalid_argument("hashtag starts with '#' after stripping: \"" +
                                std::string(text) + "\"");
  }
  for (char32_t c : chars) {
    if (utf8::is_ascii_space(c)) {
      throw std::invalid_argument("hashtag contains whitespace: \"" +
                                  std::string(text) + "\"");
    }
  }
  return Hashtag(std::move(chars));
}

std::string Hashtag::str() const { return utf8::encode(chars_); }

Segmentation Segmentation::unsegmented(const Hashtag& h) {
  return Segmentation(h.chars(), std::vector<bool>(h.size() - 1, false));
}

Segmentation Segmentation::parse(std::string_view spaced) {
  std::u32string decoded = utf8::decode(spaced);
  std::u32string chars;
  std::vector<bool> breaks;
  bool prev_was_space = true;  // a space first would be leading
  for (char32_t c : decoded) {
    if (c == U' ') {
      if (prev_was_space) {
        throw std::invalid_argument(
            "leading or doubled space in segmentation: \"" +
            std::string(spaced) + "\"");
      }
      prev_was_space = true;
      continue;
    }
    if (utf8::is_ascii_space(c)) {
      throw std::invalid_argument(
          "non-space whitespace in segmentation: \"" + std::string(spaced) +
          "\"");
    }
    if (!chars.empty()) breaks.push_back(prev_was_space);
    chars.push_back(c);
    prev_was_space = false;
  }
  if (prev_was_space && !chars.empty()) {
    throw std::invalid_argument("trailing space in segmentation: \"" +
                                std::string(spaced) + "\"");
  }
  if (chars.size() < 2) {
    throw std::invalid_argument(
        "segmentation needs at least two characters: \"" +
        std::string(spaced) + "\"");
  }
  return Segmentation(std::move(chars), std::move(breaks));
}

std::size_t Segmentation::break_count() const {
  return static_cast<std::size_t>(
      std::count(breaks_.begin(), breaks_.end(), true));
}

Segmentation Segmentation::with_break(std::size_t i) const {
  Segmentation out = *this;
  out.breaks_.at(i) = true;
  return out;
}

Hashtag Segmentation::source() const {
  return Hashtag::from_text(utf8::encode(chars_));
}

std::string Segmentation::render() const {
  std::string out;
  out.reserve(chars_.size() + breaks_.size());
  for (std::size_t i = 0; i < chars_.size(); ++i) {
    out += utf8::encode(chars_[i]);
    if (i < breaks_.size() && breaks_[i]) out.push_back(' ');
  }
  return out;
}

bool better_candidate(const ScoredCandidate& a, const ScoredCandidate& b) {
  if (a.score != b.score) return a.score > b.score;
  std::size_t ca = a.segmentation.break_count();
  std::size_t cb = b.segmentation.break_count();
  if (ca != cb) return ca < cb;
  return a.segmentation.render() < b.segmentation.render();
}

bool ScoredCandidates::insert(Segmentation seg, double score) {
  std::string key = seg.render();
  auto [it, inserted] = index_.emplace(std::move(key), entries_.size());
  if (!inserted) return false;
  entries_.push_back({std::move(seg), score});
  return true;
}

void ScoredCandidates::sort_best_first() {
  std::stable_sort(entries_.begin(), entries_.end(), better_candidate);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    index_[entries_[i].segmentation.render()] = i;
  }
}

const ScoredCandidate* ScoredCandidates::find(
    const std::string& rendered) const {
  auto it = index_.find(rendered);
  if (it == index_.end()) return nullptr;
  return &entries_[it->second];
}

CandidateTree ScoredCandidates::top(std::size_t k) const {
  CandidateTree out;
  out.reserve(std::min(k, entries_.size()));
  for (std::size_t i = 0; i < entries_.size() && i < k; ++i) {
    out.push_back(entries_[i].segmentation);
  }
  return out;
}

}  // namespace hashseg
