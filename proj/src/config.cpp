#include "hashseg/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hashseg {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& value) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  throw std::invalid_argument("expected a boolean, got '" + value + "'");
}

int parse_int(const std::string& value) {
  std::size_t used = 0;
  int v = std::stoi(value, &used);
  if (used != value.size()) {
    throw std::invalid_argument("expected an integer, got '" + value + "'");
  }
  return v;
}

double parse_real(const std::string& value) {
  std::size_t used = 0;
  double v = std::stod(value, &used);
  if (used != value.size()) {
    throw std::invalid_argument("expected a number, got '" + value + "'");
  }
  return v;
}

std::vector<int> parse_int_list(const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (part.empty()) {
      throw std::invalid_argument("empty entry in list '" + value + "'");
    }
    out.push_back(parse_int(part));
  }
  if (out.empty()) {
    throw std::invalid_argument("expected a comma-separated integer list");
  }
  return out;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

void config_set(Config& config, const std::string& key,
                const std::string& value) {
  if (key == "segmenter_endpoint") {
    config.segmenter_endpoint = value;
  } else if (key == "reranker_endpoint") {
    config.reranker_endpoint = value;
  } else if (key == "translator_endpoint") {
    config.translator_endpoint = value;
  } else if (key == "delta") {
    config.delta = parse_real(value);
  } else if (key == "normalize_scores") {
    config.normalize_scores = parse_bool(value);
  } else if (key == "max_expansions") {
    config.max_expansions = parse_int(value);
  } else if (key == "beam_width") {
    config.beam_width = parse_int(value);
  } else if (key == "alpha") {
    config.alpha = parse_real(value);
  } else if (key == "beta") {
    config.beta = parse_real(value);
  } else if (key == "grid_step") {
    config.grid_step = parse_real(value);
  } else if (key == "output_topk") {
    config.output_topk = parse_int(value);
  } else if (key == "strict") {
    config.strict = parse_bool(value);
  } else if (key == "lowercase") {
    config.lowercase = parse_bool(value);
  } else if (key == "method") {
    if (value != "t" && value != "cmt" && value != "cmts") {
      throw std::invalid_argument("method must be t, cmt, or cmts");
    }
    config.method = value;
  } else if (key == "src") {
    config.src = value;
  } else if (key == "tgt") {
    config.tgt = value;
  } else if (key == "oracle_n") {
    config.oracle_n = parse_int_list(value);
  } else if (key == "timeout_ms") {
    config.timeout_ms = parse_int(value);
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  Config config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": empty key");
    }
    try {
      config_set(config, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return config;
}

std::string dump_config(const Config& config) {
  std::ostringstream out;
  out << "segmenter_endpoint = " << config.segmenter_endpoint << "\n";
  out << "reranker_endpoint = " << config.reranker_endpoint << "\n";
  out << "translator_endpoint = " << config.translator_endpoint << "\n";
  out << "delta = " << format_real(config.delta) << "\n";
  out << "normalize_scores = " << (config.normalize_scores ? "true" : "false")
      << "\n";
  out << "max_expansions = " << config.max_expansions << "\n";
  out << "beam_width = " << config.beam_width << "\n";
  out << "alpha = " << format_real(config.alpha) << "\n";
  out << "beta = " << format_real(config.beta) << "\n";
  out << "grid_step = " << format_real(config.grid_step) << "\n";
  out << "output_topk = " << config.output_topk << "\n";
  out << "strict = " << (config.strict ? "true" : "false") << "\n";
  out << "lowercase = " << (config.lowercase ? "true" : "false") << "\n";
  out << "method = " << config.method << "\n";
  out << "src = " << config.src << "\n";
  out << "tgt = " << config.tgt << "\n";
  out << "oracle_n = ";
  for (std::size_t i = 0; i < config.oracle_n.size(); ++i) {
    if (i > 0) out << ",";
    out << config.oracle_n[i];
  }
  out << "\n";
  out << "timeout_ms = " << config.timeout_ms << "\n";
  return out.str();
}

}  // namespace hashseg
