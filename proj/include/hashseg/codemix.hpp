#ifndef HASHSEG_CODEMIX_HPP
#define HASHSEG_CODEMIX_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "hashseg/translator.hpp"

namespace hashseg {

// One '#token' occurrence: [begin, end) byte offsets into the tweet text.
// The surface includes the '#'; trailing ASCII punctuation is outside the
// span, and the body has at least two characters.
struct HashtagSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string surface;
};

// Hashtags start at a '#' at the beginning of the text or right after ASCII
// whitespace, and run over non-whitespace, non-'#' characters. Never throws;
// malformed bytes simply never form a span.
std::vector<HashtagSpan> extract_hashtags(const std::string& text);

struct Tweet {
  std::string text;
  std::vector<HashtagSpan> spans;

  static Tweet parse(std::string text) {
    Tweet t;
    t.spans = extract_hashtags(text);
    t.text = std::move(text);
    return t;
  }
};

// Maps a hashtag body to its spaced segmentation. Supplied by the caller so
// this module stays independent of any particular segmenter.
using SegmentFn = std::function<std::string(const std::string& body)>;

// Per-hashtag record for the sidecar log.
struct HashtagOutcome {
  std::string surface;     // original '#...' token
  std::string segmented;   // spaced body segmentation
  std::string translated;  // translation of the segmented text
  std::string rejoined;    // '#' + translation with all whitespace removed
  bool restored = false;   // spacing re-inserted after final translation
  bool failed = false;     // span fell back to its original surface
  std::string error;
};

struct CodeMixResult {
  std::string output;      // final translated tweet
  std::string code_mixed;  // tweet after hashtag substitution, before the
                           // whole-tweet translation (equals the input for
                           // the plain-translation method)
  std::vector<HashtagOutcome> hashtags;
  std::vector<std::string> warnings;
};

struct CodeMixOptions {
  // Strict: the first failing hashtag aborts the tweet with an exception.
  // Lenient (default): the failing span keeps its original surface and the
  // outcome records the error.
  bool strict = false;
};

// Whole-tweet translation, hashtags untouched.
CodeMixResult method_t(const Tweet& tweet, Translator& tr);

// Segment each hashtag body, translate the segmented texts (one batch),
// strip whitespace, re-attach '#', substitute right-to-left, then translate
// the whole substituted tweet.
CodeMixResult method_cmt(const Tweet& tweet, const SegmentFn& segment,
                         Translator& tr, const CodeMixOptions& options = {});

// method_cmt plus space restoration: every exact occurrence of a rejoined
// hashtag in the final text is replaced by its spaced form (longest rejoined
// form first). Hashtags the final translation no longer contains are left
// alone and reported in warnings.
CodeMixResult method_cmts(const Tweet& tweet, const SegmentFn& segment,
                          Translator& tr, const CodeMixOptions& options = {});

}  // namespace hashseg

#endif
