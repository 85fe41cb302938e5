#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hashseg/codemix.hpp"
#include "hashseg/config.hpp"
#include "hashseg/evaluation.hpp"
#include "hashseg/pipeline.hpp"
#include "hashseg/utf8.hpp"

namespace {

using hashseg::Config;

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmtg(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Flag values kept separate from the config so file settings survive
// anywhere the user did not pass an explicit override.
struct Overrides {
  std::string config_path;
  std::optional<std::string> segmenter_endpoint;
  std::optional<std::string> reranker_endpoint;
  std::optional<std::string> translator_endpoint;
  std::optional<std::string> corpus;
  std::optional<int> max_expansions;
  std::optional<int> beam_width;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> delta;
  std::optional<double> grid_step;
  std::optional<int> topk;
  std::optional<int> timeout_ms;
  std::optional<std::string> method;
  std::optional<std::string> src;
  std::optional<std::string> tgt;
  std::optional<std::vector<int>> oracle_n;
  bool strict = false;
  bool no_lowercase = false;
  bool normalize = false;
};

void add_shared_options(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config_path, "key = value settings file");
  auto* endpoint = cmd.add_option("--segmenter-endpoint", o.segmenter_endpoint,
                                  "corpus:PATH | cmd:COMMAND | tcp:HOST:PORT");
  cmd.add_option("--corpus", o.corpus,
                 "frequency file; shorthand for --segmenter-endpoint corpus:PATH")
      ->excludes(endpoint);
  cmd.add_option("--reranker-endpoint", o.reranker_endpoint,
                 "second-stage scorer endpoint");
  cmd.add_option("--e", o.max_expansions, "maximum beam expansions");
  cmd.add_option("--topk-beam", o.beam_width, "beam width");
  cmd.add_option("--alpha", o.alpha, "ensemble weight on the segmenter margin");
  cmd.add_option("--beta", o.beta, "ensemble weight on the reranker margin");
  cmd.add_option("--delta", o.delta, "corpus scorer smoothing mass");
  cmd.add_option("--timeout-ms", o.timeout_ms, "remote endpoint timeout");
  cmd.add_flag("--strict", o.strict, "fail instead of skipping bad input");
  cmd.add_flag("--no-lowercase", o.no_lowercase, "keep input case untouched");
  cmd.add_flag("--normalize-scores", o.normalize,
               "divide corpus scores by word count");
}

Config resolve(const Overrides& o) {
  Config c;
  if (!o.config_path.empty()) c = hashseg::load_config(o.config_path);
  if (o.segmenter_endpoint) c.segmenter_endpoint = *o.segmenter_endpoint;
  if (o.corpus) c.segmenter_endpoint = "corpus:" + *o.corpus;
  if (o.reranker_endpoint) c.reranker_endpoint = *o.reranker_endpoint;
  if (o.translator_endpoint) c.translator_endpoint = *o.translator_endpoint;
  if (o.max_expansions) c.max_expansions = *o.max_expansions;
  if (o.beam_width) c.beam_width = *o.beam_width;
  if (o.alpha) c.alpha = *o.alpha;
  if (o.beta) c.beta = *o.beta;
  if (o.delta) c.delta = *o.delta;
  if (o.grid_step) c.grid_step = *o.grid_step;
  if (o.topk) c.output_topk = *o.topk;
  if (o.timeout_ms) c.timeout_ms = *o.timeout_ms;
  if (o.method) c.method = *o.method;
  if (o.src) c.src = *o.src;
  if (o.tgt) c.tgt = *o.tgt;
  if (o.oracle_n) c.oracle_n = *o.oracle_n;
  if (o.strict) c.strict = true;
  if (o.no_lowercase) c.lowercase = false;
  if (o.normalize) c.normalize_scores = true;
  return c;
}

hashseg::SegmentationPipeline build_pipeline(const Config& c) {
  if (c.segmenter_endpoint.empty()) {
    throw std::runtime_error(
        "no segmenter configured; pass --corpus or --segmenter-endpoint");
  }
  hashseg::ScorerOptions so;
  so.delta = c.delta;
  so.normalize_by_length = c.normalize_scores;
  so.timeout = std::chrono::milliseconds(c.timeout_ms);
  auto segmenter = hashseg::make_scorer(c.segmenter_endpoint, so);
  std::shared_ptr<hashseg::Scorer> reranker;
  if (!c.reranker_endpoint.empty()) {
    reranker = hashseg::make_scorer(c.reranker_endpoint, so);
  }
  hashseg::BeamParams beam{c.max_expansions, c.beam_width};
  hashseg::EnsembleWeights weights{c.alpha, c.beta};
  return hashseg::SegmentationPipeline(std::move(segmenter),
                                       std::move(reranker), beam, weights);
}

// "-" means stdin; otherwise the named file.
std::istream& open_input(const std::string& path, std::ifstream& file) {
  if (path == "-") return std::cin;
  file.open(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open input file: " + path);
  return file;
}

int cmd_segment(const Config& c, const std::string& input_path) {
  auto pipeline = build_pipeline(c);
  std::ifstream file;
  std::istream& in = open_input(input_path, file);
  if (c.output_topk < 1) {
    throw std::runtime_error("--topk must be at least 1");
  }
  std::string line;
  std::size_t line_no = 0;
  std::size_t failures = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string text = c.lowercase ? hashseg::utf8::ascii_lower(line) : line;
    try {
      hashseg::Hashtag tag = hashseg::Hashtag::from_text(text);
      hashseg::PipelineResult result = pipeline.run(tag);
      if (result.truncated) {
        std::cerr << "warning: line " << line_no
                  << ": search stopped before the expansion limit\n";
      }
      std::size_t rows = std::min<std::size_t>(
          result.ranked.size(), static_cast<std::size_t>(c.output_topk));
      for (std::size_t i = 0; i < rows; ++i) {
        const hashseg::DualScored& entry = result.ranked.entries()[i];
        std::cout << tag.str() << '\t' << entry.segmentation.render() << '\t'
                  << fmt6(entry.seg_score) << '\t'
                  << fmt6(entry.rerank_score) << '\n';
      }
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << "error: line " << line_no << ": " << e.what() << "\n";
    }
  }
  return (c.strict && failures > 0) ? 1 : 0;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

nlohmann::json grid_report_json(const hashseg::GridSearchReport& report) {
  nlohmann::json points = nlohmann::json::array();
  for (const hashseg::GridPoint& p : report.points) {
    points.push_back({{"alpha", p.weights.alpha},
                      {"beta", p.weights.beta},
                      {"f1", p.f1},
                      {"accuracy", p.accuracy}});
  }
  return {{"points", points},
          {"best",
           {{"alpha", report.best.alpha},
            {"beta", report.best.beta},
            {"f1", report.best_f1},
            {"accuracy", report.best_accuracy}}}};
}

int cmd_tune(const Config& c, const std::string& dev_path,
             const std::string& report_path,
             const std::string& out_config_path) {
  auto pipeline = build_pipeline(c);
  hashseg::GoldLoadResult dev =
      hashseg::load_gold(dev_path, {c.strict, c.lowercase});
  for (const std::string& msg : dev.skipped) {
    std::cerr << "warning: " << dev_path << ": " << msg << " (skipped)\n";
  }
  if (dev.pairs.empty()) {
    throw std::runtime_error("dev set is empty: " + dev_path);
  }
  std::vector<double> grid = hashseg::default_weight_grid(c.grid_step);
  hashseg::GridSearchReport report = hashseg::grid_search(
      dev.pairs,
      [&](const hashseg::Hashtag& h) { return pipeline.dual_scores(h); },
      grid, grid);

  std::cout << "# alpha\tbeta\tf1\taccuracy\n";
  for (const hashseg::GridPoint& p : report.points) {
    std::cout << fmtg(p.weights.alpha) << '\t' << fmtg(p.weights.beta) << '\t'
              << fmt6(p.f1) << '\t' << fmt6(p.accuracy) << '\n';
  }
  std::cout << "# best f1 " << fmt6(report.best_f1) << ", accuracy "
            << fmt6(report.best_accuracy) << "\n";
  std::string fragment = "alpha = " + fmtg(report.best.alpha) + "\nbeta = " +
                         fmtg(report.best.beta) + "\n";
  std::cout << fragment;
  if (!report_path.empty()) {
    write_file(report_path, grid_report_json(report).dump(2) + "\n");
  }
  if (!out_config_path.empty()) {
    write_file(out_config_path, fragment);
  }
  return 0;
}

int cmd_evaluate(const Config& c, const std::string& gold_path,
                 const std::string& report_path) {
  auto pipeline = build_pipeline(c);
  hashseg::GoldLoadResult gold =
      hashseg::load_gold(gold_path, {c.strict, c.lowercase});
  for (const std::string& msg : gold.skipped) {
    std::cerr << "warning: " << gold_path << ": " << msg << " (skipped)\n";
  }
  if (gold.pairs.empty()) {
    throw std::runtime_error("gold set is empty: " + gold_path);
  }
  std::vector<hashseg::CandidateTree> ranked;
  std::vector<hashseg::Segmentation> golds;
  ranked.reserve(gold.pairs.size());
  golds.reserve(gold.pairs.size());
  for (const hashseg::GoldPair& pair : gold.pairs) {
    hashseg::PipelineResult result = pipeline.run(pair.hashtag);
    hashseg::CandidateTree tree;
    tree.reserve(result.ranked.size());
    for (const hashseg::DualScored& entry : result.ranked.entries()) {
      tree.push_back(entry.segmentation);
    }
    ranked.push_back(std::move(tree));
    golds.push_back(pair.gold);
  }

  auto print_row = [](const std::string& label,
                      const hashseg::MetricsReport& m) {
    std::cout << label << '\t' << fmt6(m.precision) << '\t' << fmt6(m.recall)
              << '\t' << fmt6(m.f1) << '\t' << fmt6(m.accuracy) << '\n';
  };
  std::cout << "# selection\tprecision\trecall\tf1\taccuracy\n";
  nlohmann::json rows = nlohmann::json::array();
  auto add_row = [&](const std::string& label,
                     const hashseg::MetricsReport& m) {
    print_row(label, m);
    rows.push_back({{"selection", label},
                    {"precision", m.precision},
                    {"recall", m.recall},
                    {"f1", m.f1},
                    {"accuracy", m.accuracy},
                    {"items", m.items}});
  };
  add_row("top1", hashseg::oracle_topn(ranked, golds, 1));
  for (int n : c.oracle_n) {
    if (n < 1) throw std::runtime_error("--oracle-n entries must be >= 1");
    add_row("oracle@" + std::to_string(n),
            hashseg::oracle_topn(ranked, golds, static_cast<std::size_t>(n)));
  }
  if (!report_path.empty()) {
    write_file(report_path, nlohmann::json{{"rows", rows}}.dump(2) + "\n");
  }
  return 0;
}

nlohmann::json sidecar_json(const std::string& input,
                            const hashseg::CodeMixResult& result) {
  nlohmann::json tags = nlohmann::json::array();
  for (const hashseg::HashtagOutcome& h : result.hashtags) {
    tags.push_back({{"surface", h.surface},
                    {"segmented", h.segmented},
                    {"translated", h.translated},
                    {"rejoined", h.rejoined},
                    {"restored", h.restored},
                    {"failed", h.failed},
                    {"error", h.error}});
  }
  return {{"input", input},
          {"code_mixed", result.code_mixed},
          {"output", result.output},
          {"hashtags", tags},
          {"warnings", result.warnings}};
}

int cmd_pipeline(const Config& c, const std::string& tweets_path,
                 const std::string& sidecar_path) {
  if (c.method != "t" && c.method != "cmt" && c.method != "cmts") {
    throw std::runtime_error("method must be t, cmt, or cmts");
  }
  auto translator = hashseg::make_translator(
      c.translator_endpoint, c.src, c.tgt,
      std::chrono::milliseconds(c.timeout_ms));

  std::optional<hashseg::SegmentationPipeline> pipeline;
  if (c.method != "t") pipeline.emplace(build_pipeline(c));
  hashseg::SegmentFn segment = [&](const std::string& body) {
    std::string text = c.lowercase ? hashseg::utf8::ascii_lower(body) : body;
    hashseg::Hashtag tag = hashseg::Hashtag::from_text(text);
    return pipeline->run(tag).ranked.entries().front().segmentation.render();
  };

  std::ifstream file;
  std::istream& in = open_input(tweets_path, file);
  std::ofstream sidecar;
  if (!sidecar_path.empty()) {
    sidecar.open(sidecar_path, std::ios::binary);
    if (!sidecar) {
      throw std::runtime_error("cannot write sidecar: " + sidecar_path);
    }
  }

  hashseg::CodeMixOptions options{c.strict};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    hashseg::Tweet tweet = hashseg::Tweet::parse(line);
    hashseg::CodeMixResult result;
    try {
      if (c.method == "t") {
        result = hashseg::method_t(tweet, *translator);
      } else if (c.method == "cmt") {
        result = hashseg::method_cmt(tweet, segment, *translator, options);
      } else {
        result = hashseg::method_cmts(tweet, segment, *translator, options);
      }
    } catch (const std::exception& e) {
      std::cerr << "error: tweet " << line_no << ": " << e.what() << "\n";
      if (c.strict) return 1;
      // Degrade to the untranslated text so output stays line-aligned.
      result.output = line;
      result.code_mixed = line;
      result.warnings.push_back(e.what());
    }
    for (const std::string& w : result.warnings) {
      std::cerr << "warning: tweet " << line_no << ": " << w << "\n";
    }
    std::cout << result.output << '\n';
    if (sidecar.is_open()) {
      sidecar << sidecar_json(line, result).dump() << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hashtag segmentation: beam search, re-ranking, and "
               "code-mixed translation pipelines"};
  app.require_subcommand(1);

  Overrides o;
  std::string input_path = "-";
  std::string dev_path;
  std::string gold_path;
  std::string tweets_path = "-";
  std::string report_path;
  std::string out_config_path;
  std::string sidecar_path;

  CLI::App* segment =
      app.add_subcommand("segment", "segment hashtags, one per input line");
  add_shared_options(*segment, o);
  segment->add_option("--topk", o.topk, "ranked rows to print per hashtag");
  segment->add_option("input", input_path, "hashtag file, - for stdin");

  CLI::App* tune = app.add_subcommand(
      "tune", "grid-search ensemble weights against a gold dev set");
  add_shared_options(*tune, o);
  tune->add_option("--grid-step", o.grid_step, "weight grid spacing");
  tune->add_option("--report", report_path, "write the grid as JSON");
  tune->add_option("--out-config", out_config_path,
                   "write the chosen weights as a config fragment");
  tune->add_option("dev", dev_path, "gold dev file: hashtag<TAB>segmentation")
      ->required();

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "score the pipeline against a gold test set");
  add_shared_options(*evaluate, o);
  evaluate
      ->add_option("--oracle-n", o.oracle_n,
                   "oracle cutoffs, e.g. --oracle-n 1,2,5,10")
      ->delimiter(',');
  evaluate->add_option("--report", report_path, "write metrics as JSON");
  evaluate
      ->add_option("gold", gold_path, "gold file: hashtag<TAB>segmentation")
      ->required();

  CLI::App* pipeline = app.add_subcommand(
      "pipeline", "translate tweets with hashtag handling (t, cmt, cmts)");
  add_shared_options(*pipeline, o);
  pipeline->add_option("--method", o.method, "t | cmt | cmts")
      ->check(CLI::IsMember({"t", "cmt", "cmts"}));
  pipeline->add_option("--translator-endpoint", o.translator_endpoint,
                       "identity | cmd:COMMAND | tcp:HOST:PORT");
  pipeline->add_option("--src", o.src, "source language code");
  pipeline->add_option("--tgt", o.tgt, "target language code");
  pipeline->add_option("--sidecar", sidecar_path,
                       "write per-hashtag outcomes as JSON lines");
  pipeline->add_option("tweets", tweets_path, "tweet file, - for stdin");

  CLI11_PARSE(app, argc, argv);

  try {
    Config config = resolve(o);
    if (segment->parsed()) return cmd_segment(config, input_path);
    if (tune->parsed()) {
      return cmd_tune(config, dev_path, report_path, out_config_path);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(config, gold_path, report_path);
    }
    if (pipeline->parsed()) {
      return cmd_pipeline(config, tweets_path, sidecar_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
