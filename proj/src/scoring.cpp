#include "hashseg/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace hashseg {

CorpusModel::CorpusModel(std::unordered_map<std::string, std::uint64_t> counts,
                         double delta)
    : counts_(std::move(counts)), delta_(delta) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("smoothing delta must be positive");
  }
  for (const auto& [word, count] : counts_) total_ += count;
}

CorpusModel CorpusModel::from_counts(
    std::unordered_map<std::string, std::uint64_t> counts, double delta) {
  return CorpusModel(std::move(counts), delta);
}

CorpusModel CorpusModel::load(const std::filesystem::path& path,
                              double delta) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open corpus file: " + path.string());
  }
  std::unordered_map<std::string, std::uint64_t> counts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(line_no) +
                               ": expected word<TAB>count");
    }
    std::string word = line.substr(0, tab);
    std::uint64_t count = 0;
    try {
      std::size_t used = 0;
      count = std::stoull(line.substr(tab + 1), &used);
      if (used != line.size() - tab - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(line_no) +
                               ": count is not a positive integer");
    }
    if (count == 0) {
      throw std::runtime_error(path.string() + ": line " + std::to_string(line_no) +
                               ": count must be positive");
    }
    counts[word] += count;
  }
  return CorpusModel(std::move(counts), delta);
}

double CorpusModel::log_prob(std::string_view word) const {
  auto it = counts_.find(std::string(word));
  double count = it == counts_.end() ? 0.0 : static_cast<double>(it->second);
  double denom = static_cast<double>(total_) +
                 delta_ * (static_cast<double>(counts_.size()) + 1.0);
  return std::log((count + delta_) / denom);
}

double CorpusModel::score(std::string_view candidate) const {
  double sum = 0.0;
  std::size_t start = 0;
  while (start <= candidate.size()) {
    std::size_t space = candidate.find(' ', start);
    std::size_t end = space == std::string_view::npos ? candidate.size() : space;
    if (end > start) sum += log_prob(candidate.substr(start, end - start));
    if (space == std::string_view::npos) break;
    start = space + 1;
  }
  return sum;
}

std::vector<double> CorpusScorer::score_batch(
    const std::vector<std::string>& texts) {
  std::vector<double> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) {
    if (text.empty()) {
      throw std::invalid_argument("empty candidate in score batch");
    }
    double s = model_.score(text);
    if (normalize_) {
      double words = 1.0 + static_cast<double>(
          std::count(text.begin(), text.end(), ' '));
      s /= words;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace hashseg
