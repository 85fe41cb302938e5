#include "hashseg/codemix.hpp"

#include <algorithm>
#include <stdexcept>

namespace hashseg {

namespace {

bool ascii_space_byte(unsigned char b) {
  return b == ' ' || b == '\t' || b == '\n' || b == '\r' || b == '\f' ||
         b == '\v';
}

bool ascii_punct_byte(unsigned char b) {
  return (b >= '!' && b <= '/') || (b >= ':' && b <= '@') ||
         (b >= '[' && b <= '`') || (b >= '{' && b <= '~');
}

// Unicode scalars in a UTF-8 slice, counted without validating: every
// non-continuation byte starts one.
std::size_t scalar_count(const std::string& text, std::size_t begin,
                         std::size_t end) {
  std::size_t n = 0;
  for (std::size_t i = begin; i < end; ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string strip_whitespace(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (!ascii_space_byte(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<HashtagSpan> extract_hashtags(const std::string& text) {
  std::vector<HashtagSpan> spans;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '#' ||
        (i > 0 && !ascii_space_byte(static_cast<unsigned char>(text[i - 1])))) {
      ++i;
      continue;
    }
    std::size_t body_begin = i + 1;
    std::size_t j = body_begin;
    while (j < text.size() && text[j] != '#' &&
           !ascii_space_byte(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    std::size_t body_end = j;
    while (body_end > body_begin &&
           ascii_punct_byte(static_cast<unsigned char>(text[body_end - 1]))) {
      --body_end;
    }
    if (scalar_count(text, body_begin, body_end) >= 2) {
      spans.push_back(HashtagSpan{i, body_end,
                                  text.substr(i, body_end - i)});
    }
    // Resume after the full run; an embedded '#' cannot start a new span
    // because it does not follow whitespace.
    i = std::max(j, i + 1);
  }
  return spans;
}

CodeMixResult method_t(const Tweet& tweet, Translator& tr) {
  CodeMixResult result;
  result.code_mixed = tweet.text;
  result.output = tr.translate_batch({tweet.text}).front();
  return result;
}

namespace {

// Shared first phase of CMT/CMTS: segment + translate + rejoin each hashtag
// and substitute the rejoined forms into the tweet.
CodeMixResult substitute_hashtags(const Tweet& tweet, const SegmentFn& segment,
                                  Translator& tr,
                                  const CodeMixOptions& options) {
  CodeMixResult result;
  result.hashtags.reserve(tweet.spans.size());

  auto span_failure = [&](HashtagOutcome& outcome, const std::string& reason) {
    if (options.strict) {
      throw std::runtime_error("hashtag " + outcome.surface + ": " + reason);
    }
    outcome.failed = true;
    outcome.error = reason;
  };

  for (const HashtagSpan& span : tweet.spans) {
    HashtagOutcome outcome;
    outcome.surface = span.surface;
    try {
      outcome.segmented = segment(span.surface.substr(1));
    } catch (const std::exception& e) {
      span_failure(outcome, e.what());
    }
    result.hashtags.push_back(std::move(outcome));
  }

  // One translation batch for every successfully segmented hashtag.
  std::vector<std::string> batch;
  std::vector<std::size_t> batch_slots;
  for (std::size_t i = 0; i < result.hashtags.size(); ++i) {
    if (!result.hashtags[i].failed) {
      batch.push_back(result.hashtags[i].segmented);
      batch_slots.push_back(i);
    }
  }
  if (!batch.empty()) {
    std::vector<std::string> translated;
    try {
      translated = tr.translate_batch(batch);
      if (translated.size() != batch.size()) {
        throw std::runtime_error("translator returned " +
                                 std::to_string(translated.size()) +
                                 " texts for " + std::to_string(batch.size()));
      }
    } catch (const std::exception& e) {
      for (std::size_t slot : batch_slots) {
        span_failure(result.hashtags[slot], e.what());
      }
      translated.clear();
      batch_slots.clear();
    }
    for (std::size_t k = 0; k < batch_slots.size(); ++k) {
      HashtagOutcome& outcome = result.hashtags[batch_slots[k]];
      outcome.translated = translated[k];
      std::string joined = strip_whitespace(outcome.translated);
      if (joined.empty()) {
        span_failure(outcome, "translation reduced to whitespace");
        continue;
      }
      outcome.rejoined = "#" + joined;
    }
  }

  // Right-to-left so earlier byte offsets stay valid.
  result.code_mixed = tweet.text;
  for (std::size_t i = tweet.spans.size(); i-- > 0;) {
    const HashtagOutcome& outcome = result.hashtags[i];
    if (outcome.failed) continue;
    const HashtagSpan& span = tweet.spans[i];
    result.code_mixed.replace(span.begin, span.end - span.begin,
                              outcome.rejoined);
  }
  return result;
}

// Replaces every occurrence of `from` in `text`, returning how many happened.
std::size_t replace_all(std::string& text, const std::string& from,
                        const std::string& to) {
  std::size_t count = 0;
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
    ++count;
  }
  return count;
}

}  // namespace

CodeMixResult method_cmt(const Tweet& tweet, const SegmentFn& segment,
                         Translator& tr, const CodeMixOptions& options) {
  CodeMixResult result = substitute_hashtags(tweet, segment, tr, options);
  result.output = tr.translate_batch({result.code_mixed}).front();
  return result;
}

CodeMixResult method_cmts(const Tweet& tweet, const SegmentFn& segment,
                          Translator& tr, const CodeMixOptions& options) {
  CodeMixResult result = method_cmt(tweet, segment, tr, options);

  // Longest rejoined form first so no pattern matches inside another's text.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < result.hashtags.size(); ++i) {
    if (!result.hashtags[i].failed) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return result.hashtags[a].rejoined.size() >
                            result.hashtags[b].rejoined.size();
                   });

  std::vector<std::size_t> done;  // outcomes already handled via a duplicate
  for (std::size_t idx : order) {
    HashtagOutcome& outcome = result.hashtags[idx];
    if (std::find(done.begin(), done.end(), idx) != done.end()) continue;
    std::string spaced = "#" + outcome.translated;
    std::size_t hits = replace_all(result.output, outcome.rejoined, spaced);
    // Identical rejoined forms share the one replacement pass.
    for (std::size_t other : order) {
      if (other == idx ||
          result.hashtags[other].rejoined != outcome.rejoined) {
        continue;
      }
      done.push_back(other);
      result.hashtags[other].restored = hits > 0;
      if (hits == 0) {
        result.warnings.push_back("hashtag " + result.hashtags[other].surface +
                                  ": rejoined form " + outcome.rejoined +
                                  " not found after translation");
      }
    }
    outcome.restored = hits > 0;
    if (hits == 0) {
      result.warnings.push_back("hashtag " + outcome.surface +
                                ": rejoined form " + outcome.rejoined +
                                " not found after translation");
    }
  }
  return result;
}

}  // namespace hashseg
