#ifndef HASHSEG_REMOTE_HPP
#define HASHSEG_REMOTE_HPP

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hashseg/scoring.hpp"
#include "hashseg/translator.hpp"

namespace hashseg {

// Transport faults are retriable: the same batch can be resubmitted once the
// endpoint recovers. Protocol faults mean the remote is not conforming.
enum class RemoteErrorKind {
  kConnectFailed,
  kChannelClosed,
  kTimeout,
  kMalformedResponse,
  kIdMismatch,
  kCountMismatch,
  kNonFiniteScore,
};

class RemoteError : public std::runtime_error {
 public:
  RemoteError(RemoteErrorKind kind, std::uint64_t batch_id,
              const std::string& message);
  RemoteErrorKind kind() const { return kind_; }
  // Identifies the failed batch so the caller can retry or report it.
  std::uint64_t batch_id() const { return batch_id_; }
  bool retriable() const;

 private:
  RemoteErrorKind kind_;
  std::uint64_t batch_id_;
};

class TransportError final : public RemoteError {
 public:
  using RemoteError::RemoteError;
};

class ProtocolError final : public RemoteError {
 public:
  using RemoteError::RemoteError;
};

// Newline-delimited message stream: one UTF-8 JSON object per line.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void write_line(std::string_view line) = 0;
  virtual std::string read_line(std::chrono::milliseconds timeout) = 0;
};

// Spawns `/bin/sh -c command` and frames lines over its stdin/stdout. The
// child's stderr passes through. Closing the channel closes stdin and reaps
// the child.
std::unique_ptr<LineChannel> open_subprocess_channel(
    const std::string& command);

// Connects to host:port.
std::unique_ptr<LineChannel> open_tcp_channel(const std::string& host,
                                              std::uint16_t port);

struct RemoteOptions {
  std::chrono::milliseconds timeout{30000};
};

// Scorer adapter speaking {"id","texts"} -> {"id","scores"} over a line
// channel. Agnostic to how the remote computes its scores. Requests are
// serialized; concurrent score_batch calls are safe and stay aligned.
class RemoteScorer final : public Scorer {
 public:
  RemoteScorer(std::unique_ptr<LineChannel> channel, std::string id,
               RemoteOptions options = {});
  std::vector<double> score_batch(
      const std::vector<std::string>& texts) override;
  std::string id() const override { return id_; }

 private:
  std::unique_ptr<LineChannel> channel_;
  std::string id_;
  RemoteOptions options_;
  std::uint64_t next_id_ = 1;
  std::mutex mutex_;
};

// Translator adapter speaking {"id","texts","src","tgt"} -> {"id","texts"}.
class RemoteTranslator final : public Translator {
 public:
  RemoteTranslator(std::unique_ptr<LineChannel> channel, std::string id,
                   std::string src, std::string tgt,
                   RemoteOptions options = {});
  std::vector<std::string> translate_batch(
      const std::vector<std::string>& texts) override;
  std::string id() const override { return id_; }

 private:
  std::unique_ptr<LineChannel> channel_;
  std::string id_;
  std::string src_;
  std::string tgt_;
  RemoteOptions options_;
  std::uint64_t next_id_ = 1;
  std::mutex mutex_;
};

}  // namespace hashseg

#endif
