#include "hashseg/remote.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>

#include "json.hpp"

namespace hashseg {

namespace {

const char* kind_name(RemoteErrorKind kind) {
  switch (kind) {
    case RemoteErrorKind::kConnectFailed: return "connect failed";
    case RemoteErrorKind::kChannelClosed: return "channel closed";
    case RemoteErrorKind::kTimeout: return "timeout";
    case RemoteErrorKind::kMalformedResponse: return "malformed response";
    case RemoteErrorKind::kIdMismatch: return "id mismatch";
    case RemoteErrorKind::kCountMismatch: return "count mismatch";
    case RemoteErrorKind::kNonFiniteScore: return "non-finite score";
  }
  return "unknown";
}

}  // namespace

RemoteError::RemoteError(RemoteErrorKind kind, std::uint64_t batch_id,
                         const std::string& message)
    : std::runtime_error(std::string(kind_name(kind)) + " (batch " +
                         std::to_string(batch_id) + "): " + message),
      kind_(kind),
      batch_id_(batch_id) {}

bool RemoteError::retriable() const {
  switch (kind_) {
    case RemoteErrorKind::kConnectFailed:
    case RemoteErrorKind::kChannelClosed:
    case RemoteErrorKind::kTimeout:
      return true;
    default:
      return false;
  }
}

namespace {

// A write to a dead peer must surface as EPIPE/kChannelClosed, not kill the
// process. Installed once, and only when the host left SIGPIPE at its
// default disposition.
void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    struct sigaction current {};
    if (::sigaction(SIGPIPE, nullptr, &current) == 0 &&
        current.sa_handler == SIG_DFL) {
      ::signal(SIGPIPE, SIG_IGN);
    }
  });
}

// Shared line framing over a pair of file descriptors.
class FdChannel : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd) : read_fd_(read_fd), write_fd_(write_fd) {
    ignore_sigpipe_once();
  }

  ~FdChannel() override {
    if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
    if (read_fd_ >= 0) ::close(read_fd_);
  }

  void write_line(std::string_view line) override {
    std::string framed(line);
    framed.push_back('\n');
    std::size_t off = 0;
    while (off < framed.size()) {
      ssize_t n = ::write(write_fd_, framed.data() + off, framed.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError(RemoteErrorKind::kChannelClosed, 0,
                             std::strerror(errno));
      }
      off += static_cast<std::size_t>(n);
    }
  }

  std::string read_line(std::chrono::milliseconds timeout) override {
    auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
      std::size_t nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (remaining.count() <= 0) {
        throw TransportError(RemoteErrorKind::kTimeout, 0,
                             "no response line within timeout");
      }
      struct pollfd pfd{read_fd_, POLLIN, 0};
      int rc = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw TransportError(RemoteErrorKind::kChannelClosed, 0,
                             std::strerror(errno));
      }
      if (rc == 0) {
        throw TransportError(RemoteErrorKind::kTimeout, 0,
                             "no response line within timeout");
      }
      char chunk[4096];
      ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError(RemoteErrorKind::kChannelClosed, 0,
                             std::strerror(errno));
      }
      if (n == 0) {
        throw TransportError(RemoteErrorKind::kChannelClosed, 0,
                             "peer closed the stream");
      }
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

 protected:
  int read_fd_;
  int write_fd_;
  std::string buffer_;
};

class SubprocessChannel final : public FdChannel {
 public:
  SubprocessChannel(int read_fd, int write_fd, pid_t pid)
      : FdChannel(read_fd, write_fd), pid_(pid) {}

  ~SubprocessChannel() override {
    if (write_fd_ >= 0) {
      ::close(write_fd_);  // EOF on the child's stdin asks it to exit
      write_fd_ = -1;
    }
    int status = 0;
    for (int i = 0; i < 50; ++i) {
      pid_t done = ::waitpid(pid_, &status, WNOHANG);
      if (done == pid_ || (done < 0 && errno == ECHILD)) return;
      ::usleep(20'000);
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
  }

 private:
  pid_t pid_;
};

}  // namespace

std::unique_ptr<LineChannel> open_subprocess_channel(
    const std::string& command) {
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0) {
    throw TransportError(RemoteErrorKind::kConnectFailed, 0,
                         std::strerror(errno));
  }
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw TransportError(RemoteErrorKind::kConnectFailed, 0,
                         std::strerror(errno));
  }
  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    throw TransportError(RemoteErrorKind::kConnectFailed, 0,
                         std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
    _exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  return std::make_unique<SubprocessChannel>(from_child[0], to_child[1], pid);
}

std::unique_ptr<LineChannel> open_tcp_channel(const std::string& host,
                                              std::uint16_t port) {
  struct addrinfo hints {};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  struct addrinfo* res = nullptr;
  std::string port_str = std::to_string(port);
  int rc = ::getaddrinfo(host.c_str(), port_str.c_str(), &hints, &res);
  if (rc != 0) {
    throw TransportError(RemoteErrorKind::kConnectFailed, 0,
                         gai_strerror(rc));
  }
  int fd = -1;
  int last_errno = ECONNREFUSED;
  for (struct addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_errno = errno;
      continue;
    }
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    last_errno = errno;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    throw TransportError(RemoteErrorKind::kConnectFailed, 0,
                         std::strerror(last_errno));
  }
  return std::make_unique<FdChannel>(fd, fd);
}

namespace {

using nlohmann::json;

// Sends one request object and validates the response envelope shared by the
// scorer and translator protocols.
json roundtrip(LineChannel& channel, const json& request, std::uint64_t id,
               std::chrono::milliseconds timeout) {
  try {
    channel.write_line(request.dump());
    std::string line = channel.read_line(timeout);
    json response = json::parse(line, nullptr, false);
    if (response.is_discarded() || !response.is_object()) {
      throw ProtocolError(RemoteErrorKind::kMalformedResponse, id,
                          "response is not a JSON object: " + line);
    }
    if (!response.contains("id") || !response["id"].is_number_unsigned()) {
      throw ProtocolError(RemoteErrorKind::kMalformedResponse, id,
                          "response lacks an unsigned id");
    }
    if (response["id"].get<std::uint64_t>() != id) {
      throw ProtocolError(RemoteErrorKind::kIdMismatch, id,
                          "response id " +
                              std::to_string(response["id"].get<std::uint64_t>()) +
                              " does not match request");
    }
    return response;
  } catch (TransportError& e) {
    // Channel-level errors do not know the batch id; rewrap with it.
    if (e.batch_id() == 0 && id != 0) {
      throw TransportError(e.kind(), id, e.what());
    }
    throw;
  }
}

}  // namespace

RemoteScorer::RemoteScorer(std::unique_ptr<LineChannel> channel,
                           std::string id, RemoteOptions options)
    : channel_(std::move(channel)), id_(std::move(id)), options_(options) {}

std::vector<double> RemoteScorer::score_batch(
    const std::vector<std::string>& texts) {
  if (texts.empty()) return {};
  std::lock_guard<std::mutex> lock(mutex_);
  std::uint64_t batch_id = next_id_++;
  json request = {{"id", batch_id}, {"texts", texts}};
  json response = roundtrip(*channel_, request, batch_id, options_.timeout);
  if (!response.contains("scores") || !response["scores"].is_array()) {
    throw ProtocolError(RemoteErrorKind::kMalformedResponse, batch_id,
                        "response lacks a scores array");
  }
  const json& scores = response["scores"];
  if (scores.size() != texts.size()) {
    throw ProtocolError(RemoteErrorKind::kCountMismatch, batch_id,
                        std::to_string(scores.size()) + " scores for " +
                            std::to_string(texts.size()) + " texts");
  }
  std::vector<double> out;
  out.reserve(scores.size());
  for (const json& s : scores) {
    // JSON cannot carry NaN/inf as numbers; encoders (nlohmann included)
    // emit null for them, so null marks a non-finite score.
    if (s.is_null()) {
      throw ProtocolError(RemoteErrorKind::kNonFiniteScore, batch_id,
                          "remote returned a non-finite score");
    }
    if (!s.is_number()) {
      throw ProtocolError(RemoteErrorKind::kMalformedResponse, batch_id,
                          "score is not a number: " + s.dump());
    }
    double v = s.get<double>();
    if (!std::isfinite(v)) {
      throw ProtocolError(RemoteErrorKind::kNonFiniteScore, batch_id,
                          "score " + s.dump() + " is not finite");
    }
    out.push_back(v);
  }
  return out;
}

RemoteTranslator::RemoteTranslator(std::unique_ptr<LineChannel> channel,
                                   std::string id, std::string src,
                                   std::string tgt, RemoteOptions options)
    : channel_(std::move(channel)),
      id_(std::move(id)),
      src_(std::move(src)),
      tgt_(std::move(tgt)),
      options_(options) {}

std::vector<std::string> RemoteTranslator::translate_batch(
    const std::vector<std::string>& texts) {
  if (texts.empty()) return {};
  std::lock_guard<std::mutex> lock(mutex_);
  std::uint64_t batch_id = next_id_++;
  json request = {{"id", batch_id}, {"texts", texts}, {"src", src_},
                  {"tgt", tgt_}};
  json response = roundtrip(*channel_, request, batch_id, options_.timeout);
  if (!response.contains("texts") || !response["texts"].is_array()) {
    throw ProtocolError(RemoteErrorKind::kMalformedResponse, batch_id,
                        "response lacks a texts array");
  }
  const json& translated = response["texts"];
  if (translated.size() != texts.size()) {
    throw ProtocolError(RemoteErrorKind::kCountMismatch, batch_id,
                        std::to_string(translated.size()) +
                            " translations for " +
                            std::to_string(texts.size()) + " texts");
  }
  std::vector<std::string> out;
  out.reserve(translated.size());
  for (const json& t : translated) {
    if (!t.is_string()) {
      throw ProtocolError(RemoteErrorKind::kMalformedResponse, batch_id,
                          "translation is not a string: " + t.dump());
    }
    out.push_back(t.get<std::string>());
  }
  return out;
}

}  // namespace hashseg
