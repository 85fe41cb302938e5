#ifndef HASHSEG_CONFIG_HPP
#define HASHSEG_CONFIG_HPP

#include <string>
#include <vector>

namespace hashseg {

// Runtime settings shared by every subcommand. File values load first;
// command-line flags override them field by field.
struct Config {
  std::string segmenter_endpoint;
  std::string reranker_endpoint;
  std::string translator_endpoint = "identity";

  double delta = 0.5;
  bool normalize_scores = false;

  int max_expansions = 13;
  int beam_width = 20;

  double alpha = 0.2;
  double beta = 0.1;
  double grid_step = 0.05;

  int output_topk = 1;
  bool strict = false;
  bool lowercase = true;

  std::string method = "t";
  std::string src;
  std::string tgt;

  std::vector<int> oracle_n = {1, 2, 5, 10};
  int timeout_ms = 30000;
};

// Applies one key/value pair. Throws std::invalid_argument on an unknown key
// or an unparsable value.
void config_set(Config& config, const std::string& key,
                const std::string& value);

// Plain-text config: one `key = value` per line, '#' starts a comment, blank
// lines ignored. Throws std::runtime_error with line numbers on bad input.
Config load_config(const std::string& path);

// Round-trippable dump of every field, suitable as a config file.
std::string dump_config(const Config& config);

}  // namespace hashseg

#endif
