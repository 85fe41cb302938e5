#ifndef HASHSEG_TRANSLATOR_HPP
#define HASHSEG_TRANSLATOR_HPP

#include <string>
#include <vector>

namespace hashseg {

// Batch translation contract: k texts in, k translations out, positionally
// aligned. Total on non-empty UTF-8 input.
class Translator {
 public:
  virtual ~Translator() = default;
  virtual std::vector<std::string> translate_batch(
      const std::vector<std::string>& texts) = 0;
  virtual std::string id() const = 0;
};

class IdentityTranslator final : public Translator {
 public:
  std::vector<std::string> translate_batch(
      const std::vector<std::string>& texts) override {
    return texts;
  }
  std::string id() const override { return "identity"; }
};

}  // namespace hashseg

#endif
