#include "hashseg/evaluation.hpp"

#include <fstream>
#include <stdexcept>

#include "hashseg/utf8.hpp"

namespace hashseg {

namespace {

std::string line_error(std::size_t line_no, const std::string& reason) {
  return "line " + std::to_string(line_no) + ": " + reason;
}

}  // namespace

GoldLoadResult load_gold(const std::string& path,
                         const GoldLoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open gold file: " + path);
  }
  GoldLoadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fail = [&](const std::string& reason) {
      std::string msg = line_error(line_no, reason);
      if (options.strict) throw std::runtime_error(path + ": " + msg);
      result.skipped.push_back(msg);
    };
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      fail("missing tab separator");
      continue;
    }
    std::string tag_text = line.substr(0, tab);
    std::string gold_text = line.substr(tab + 1);
    if (options.lowercase) {
      tag_text = utf8::ascii_lower(tag_text);
      gold_text = utf8::ascii_lower(gold_text);
    }
    try {
      Hashtag tag = Hashtag::from_text(tag_text);
      Segmentation gold = Segmentation::parse(gold_text);
      if (gold.chars() != tag.chars()) {
        fail("gold characters do not match the hashtag");
        continue;
      }
      result.pairs.push_back(GoldPair{std::move(tag), std::move(gold)});
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }
  return result;
}

std::vector<std::pair<std::size_t, std::size_t>> word_spans(
    const Segmentation& s) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::size_t start = 0;
  for (std::size_t i = 0; i + 1 < s.char_count(); ++i) {
    if (s.has_break(i)) {
      spans.emplace_back(start, i + 1);
      start = i + 1;
    }
  }
  spans.emplace_back(start, s.char_count());
  return spans;
}

MetricsReport span_f1(const std::vector<Segmentation>& pred,
                      const std::vector<Segmentation>& gold) {
  if (pred.size() != gold.size()) {
    throw std::invalid_argument("span_f1: prediction and gold lists differ in length");
  }
  MetricsReport report;
  report.items = pred.size();
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i].chars() != gold[i].chars()) {
      throw std::invalid_argument(
          "span_f1: item " + std::to_string(i) +
          " predicts over different characters than its gold");
    }
    auto ps = word_spans(pred[i]);
    auto gs = word_spans(gold[i]);
    report.predicted_spans += ps.size();
    report.gold_spans += gs.size();
    // Both lists are sorted by construction; merge-count the intersection.
    std::size_t a = 0, b = 0;
    while (a < ps.size() && b < gs.size()) {
      if (ps[a] == gs[b]) {
        ++report.matched_spans;
        ++a;
        ++b;
      } else if (ps[a] < gs[b]) {
        ++a;
      } else {
        ++b;
      }
    }
    if (pred[i] == gold[i]) ++report.exact_matches;
  }
  if (report.predicted_spans > 0) {
    report.precision = static_cast<double>(report.matched_spans) /
                       static_cast<double>(report.predicted_spans);
  }
  if (report.gold_spans > 0) {
    report.recall = static_cast<double>(report.matched_spans) /
                    static_cast<double>(report.gold_spans);
  }
  if (report.precision + report.recall > 0.0) {
    report.f1 = 2.0 * report.precision * report.recall /
                (report.precision + report.recall);
  }
  if (report.items > 0) {
    report.accuracy = static_cast<double>(report.exact_matches) /
                      static_cast<double>(report.items);
  }
  return report;
}

namespace {

MetricsReport oracle_eval(
    const std::vector<std::vector<const Segmentation*>>& ranked,
    const std::vector<Segmentation>& gold, std::size_t n) {
  if (n < 1) throw std::invalid_argument("oracle_topn: N must be at least 1");
  if (ranked.size() != gold.size()) {
    throw std::invalid_argument(
        "oracle_topn: candidate and gold lists differ in length");
  }
  std::vector<Segmentation> selected;
  selected.reserve(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (ranked[i].empty()) {
      throw std::invalid_argument("oracle_topn: item " + std::to_string(i) +
                                  " has no candidates");
    }
    const Segmentation* pick = ranked[i][0];
    std::size_t limit = std::min(n, ranked[i].size());
    for (std::size_t r = 0; r < limit; ++r) {
      if (*ranked[i][r] == gold[i]) {
        pick = ranked[i][r];
        break;
      }
    }
    selected.push_back(*pick);
  }
  return span_f1(selected, gold);
}

}  // namespace

MetricsReport oracle_topn(const std::vector<ScoredCandidates>& candidates,
                          const std::vector<Segmentation>& gold,
                          std::size_t n) {
  std::vector<std::vector<const Segmentation*>> ranked(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    ranked[i].reserve(candidates[i].size());
    for (const ScoredCandidate& c : candidates[i].entries()) {
      ranked[i].push_back(&c.segmentation);
    }
  }
  return oracle_eval(ranked, gold, n);
}

MetricsReport oracle_topn(const std::vector<CandidateTree>& lists,
                          const std::vector<Segmentation>& gold,
                          std::size_t n) {
  std::vector<std::vector<const Segmentation*>> ranked(lists.size());
  for (std::size_t i = 0; i < lists.size(); ++i) {
    ranked[i].reserve(lists[i].size());
    for (const Segmentation& s : lists[i]) ranked[i].push_back(&s);
  }
  return oracle_eval(ranked, gold, n);
}

}  // namespace hashseg
