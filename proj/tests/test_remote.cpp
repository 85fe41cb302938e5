#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "hashseg/pipeline.hpp"
#include "hashseg/remote.hpp"
#include "test_util.hpp"

using hashseg::CorpusModel;
using hashseg::ProtocolError;
using hashseg::RemoteError;
using hashseg::RemoteErrorKind;
using hashseg::RemoteOptions;
using hashseg::RemoteScorer;
using hashseg::RemoteTranslator;
using hashseg::TransportError;

namespace {

std::string scorer_command(const std::string& corpus_path,
                           const std::string& fault = "") {
  std::string cmd = "python3 " + test_util::scorer_script() + " --corpus " +
                    corpus_path + " --delta 0.5";
  if (!fault.empty()) cmd += " --fault " + fault;
  return cmd + " 2>/dev/null";
}

std::string fixture_corpus() {
  static std::string path = test_util::write_file(
      "remote_corpus.tsv", "beam\t10\nsearch\t10\nbeamsearch\t1\n");
  return path;
}

RemoteScorer make_remote_scorer(const std::string& fault = "",
                                int timeout_ms = 10000) {
  RemoteOptions options;
  options.timeout = std::chrono::milliseconds(timeout_ms);
  return RemoteScorer(
      hashseg::open_subprocess_channel(scorer_command(fixture_corpus(), fault)),
      "cmd:test-scorer", options);
}

RemoteErrorKind kind_of(RemoteScorer& scorer,
                        const std::vector<std::string>& texts) {
  try {
    scorer.score_batch(texts);
  } catch (const RemoteError& e) {
    return e.kind();
  }
  throw std::logic_error("expected a remote error");
}

}  // namespace

TEST_CASE("a subprocess scorer matches the in-process model") {
  RemoteScorer remote = make_remote_scorer();
  CorpusModel model = CorpusModel::load(fixture_corpus(), 0.5);

  std::vector<std::string> texts{"beam search", "beamsearch", "be am search",
                                 "unknownword"};
  std::vector<double> scores = remote.score_batch(texts);
  REQUIRE(scores.size() == texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    CHECK(scores[i] == doctest::Approx(model.score(texts[i])).epsilon(1e-9));
  }

  SUBCASE("duplicates stay positionally aligned") {
    auto dup = remote.score_batch({"beam", "beam search", "beam"});
    CHECK(dup[0] == dup[2]);
    CHECK(dup[1] == doctest::Approx(model.score("beam search")).epsilon(1e-9));
  }
  SUBCASE("consecutive batches reuse the one subprocess") {
    auto a = remote.score_batch({"beam"});
    auto b = remote.score_batch({"beam"});
    CHECK(a[0] == b[0]);
  }
  SUBCASE("an empty batch never touches the wire") {
    CHECK(remote.score_batch({}).empty());
  }
}

TEST_CASE("protocol violations map to distinct error kinds") {
  SUBCASE("response id does not match the request") {
    RemoteScorer s = make_remote_scorer("wrong-id");
    CHECK(kind_of(s, {"beam"}) == RemoteErrorKind::kIdMismatch);
  }
  SUBCASE("score count does not match the batch") {
    RemoteScorer s = make_remote_scorer("wrong-count");
    CHECK(kind_of(s, {"beam", "search"}) == RemoteErrorKind::kCountMismatch);
  }
  SUBCASE("non-finite scores are rejected") {
    RemoteScorer s = make_remote_scorer("non-finite");
    CHECK(kind_of(s, {"beam"}) == RemoteErrorKind::kNonFiniteScore);
  }
  SUBCASE("unparseable responses are malformed") {
    RemoteScorer s = make_remote_scorer("garbage");
    CHECK(kind_of(s, {"beam"}) == RemoteErrorKind::kMalformedResponse);
  }
}

TEST_CASE("transport faults map to distinct error kinds") {
  SUBCASE("a silent endpoint times out") {
    RemoteScorer s = make_remote_scorer("silent", 300);
    CHECK(kind_of(s, {"beam"}) == RemoteErrorKind::kTimeout);
  }
  SUBCASE("an endpoint that exits closes the channel") {
    RemoteScorer s(
        hashseg::open_subprocess_channel("head -n 1 > /dev/null"),
        "cmd:oneshot");
    CHECK(kind_of(s, {"beam"}) == RemoteErrorKind::kChannelClosed);
    // The pipe is gone now; writing must fail cleanly, not kill the process.
    CHECK(kind_of(s, {"beam"}) == RemoteErrorKind::kChannelClosed);
  }
  SUBCASE("a refused TCP connection fails at open time") {
    try {
      hashseg::open_tcp_channel("127.0.0.1", 9);  // discard; nobody listens
      FAIL("expected a connect failure");
    } catch (const TransportError& e) {
      CHECK(e.kind() == RemoteErrorKind::kConnectFailed);
      CHECK(e.retriable());
    }
  }
}

TEST_CASE("errors carry the batch id and a retriable flag") {
  RemoteScorer s = make_remote_scorer("wrong-id");
  s.score_batch({});  // empty batches do not consume ids
  try {
    s.score_batch({"beam"});
    FAIL("expected an id mismatch");
  } catch (const ProtocolError& e) {
    CHECK(e.kind() == RemoteErrorKind::kIdMismatch);
    CHECK(e.batch_id() == 1);
    CHECK_FALSE(e.retriable());
    CHECK(std::string(e.what()).find("batch 1") != std::string::npos);
  }

  SUBCASE("kinds split between transport and protocol") {
    CHECK(TransportError(RemoteErrorKind::kConnectFailed, 1, "x").retriable());
    CHECK(TransportError(RemoteErrorKind::kChannelClosed, 1, "x").retriable());
    CHECK(TransportError(RemoteErrorKind::kTimeout, 1, "x").retriable());
    CHECK_FALSE(
        ProtocolError(RemoteErrorKind::kMalformedResponse, 1, "x").retriable());
    CHECK_FALSE(
        ProtocolError(RemoteErrorKind::kCountMismatch, 1, "x").retriable());
    CHECK_FALSE(
        ProtocolError(RemoteErrorKind::kNonFiniteScore, 1, "x").retriable());
  }
}

namespace {

std::string translator_command(const std::string& table_path,
                               const std::string& fault = "") {
  std::string cmd = "python3 " + test_util::translator_script();
  if (!table_path.empty()) cmd += " --table " + table_path;
  if (!fault.empty()) cmd += " --fault " + fault;
  return cmd + " 2>/dev/null";
}

}  // namespace

TEST_CASE("a subprocess translator round-trips phrase tables") {
  std::string table = test_util::write_file(
      "phrases.json",
      "{\"vamos equipo\": \"let's go team\", \"gol\": \"goal\"}");
  RemoteTranslator tr(
      hashseg::open_subprocess_channel(translator_command(table)),
      "cmd:test-translator", "es", "en");

  auto out = tr.translate_batch({"vamos equipo", "gol", "sin traducir"});
  REQUIRE(out.size() == 3);
  CHECK(out[0] == "let's go team");
  CHECK(out[1] == "goal");
  CHECK(out[2] == "sin traducir");  // identity on table misses
  CHECK(tr.translate_batch({}).empty());

  SUBCASE("unicode survives the json framing") {
    auto uni = tr.translate_batch({"日本語 ß é"});
    CHECK(uni[0] == "日本語 ß é");
  }
}

TEST_CASE("translator protocol violations mirror the scorer's") {
  auto kind_of_tr = [](const std::string& fault) {
    RemoteTranslator tr(
        hashseg::open_subprocess_channel(translator_command("", fault)),
        "cmd:faulty", "es", "en");
    try {
      tr.translate_batch({"hola"});
    } catch (const RemoteError& e) {
      return e.kind();
    }
    throw std::logic_error("expected a remote error");
  };
  CHECK(kind_of_tr("wrong-id") == RemoteErrorKind::kIdMismatch);
  CHECK(kind_of_tr("wrong-count") == RemoteErrorKind::kCountMismatch);
  CHECK(kind_of_tr("garbage") == RemoteErrorKind::kMalformedResponse);
}

TEST_CASE("scorer endpoints parse into the right backends") {
  hashseg::ScorerOptions options;
  auto corpus = hashseg::make_scorer("corpus:" + fixture_corpus(), options);
  CHECK(corpus->id() == "corpus:" + fixture_corpus());
  CorpusModel model = CorpusModel::load(fixture_corpus(), 0.5);
  CHECK(corpus->score_batch({"beam search"})[0] ==
        doctest::Approx(model.score("beam search")).epsilon(1e-12));

  auto remote = hashseg::make_scorer("cmd:" + scorer_command(fixture_corpus()),
                                     options);
  CHECK(remote->score_batch({"beam search"})[0] ==
        doctest::Approx(model.score("beam search")).epsilon(1e-9));

  SUBCASE("malformed endpoints are rejected") {
    CHECK_THROWS_AS(hashseg::make_scorer("ftp:somewhere", options),
                    std::invalid_argument);
    CHECK_THROWS_AS(hashseg::make_scorer("", options), std::invalid_argument);
    CHECK_THROWS_AS(hashseg::make_scorer("tcp:hostonly", options),
                    std::invalid_argument);
    CHECK_THROWS_AS(hashseg::make_scorer("tcp:host:notaport", options),
                    std::invalid_argument);
    CHECK_THROWS_AS(hashseg::make_scorer("tcp:host:99999", options),
                    std::invalid_argument);
    CHECK_THROWS_AS(hashseg::make_scorer("tcp:host:0", options),
                    std::invalid_argument);
  }
}

TEST_CASE("translator endpoints parse into the right backends") {
  auto identity = hashseg::make_translator("identity", "es", "en");
  CHECK(identity->translate_batch({"hola"})[0] == "hola");

  auto remote = hashseg::make_translator("cmd:" + translator_command(""),
                                         "es", "en");
  CHECK(remote->translate_batch({"hola"})[0] == "hola");

  CHECK_THROWS_AS(hashseg::make_translator("corpus:/tmp/x", "es", "en"),
                  std::invalid_argument);
  CHECK_THROWS_AS(hashseg::make_translator("bogus", "es", "en"),
                  std::invalid_argument);
}