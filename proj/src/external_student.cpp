#include "acl/external_student.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>

#include <json.hpp>

#include "acl/errors.hpp"

namespace acl {

using nlohmann::json;

ExternalStudent::ExternalStudent(ExternalStudentSpec spec) : spec_(std::move(spec)) {
  if (spec_.argv.empty()) throw ConfigError("external student needs a command");
  int sv[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0)
    throw ProtocolError(std::string("socketpair failed: ") + std::strerror(errno));

  std::vector<char*> argv;
  for (auto& a : spec_.argv) argv.push_back(a.data());
  argv.push_back(nullptr);

  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(sv[0]);
    ::close(sv[1]);
    throw ProtocolError(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(sv[1], STDIN_FILENO);
    ::dup2(sv[1], STDOUT_FILENO);
    ::execvp(argv[0], argv.data());
    _exit(127);
  }
  ::close(sv[1]);
  fd_ = sv[0];
  pid_ = pid;
}

ExternalStudent::~ExternalStudent() { shutdown(); }

void ExternalStudent::shutdown() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
  if (pid_ > 0) {
    int status = 0;
    // Closing the socket gives the child EOF; give it a moment, then insist.
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) == pid_) {
        pid_ = -1;
        return;
      }
      ::usleep(2000);
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

std::string ExternalStudent::roundtrip(const std::string& request) {
  if (fd_ < 0) throw ProtocolError("external student session is closed");
  const std::string line = request + "\n";
  std::size_t sent = 0;
  while (sent < line.size()) {
    const ssize_t n = ::send(fd_, line.data() + sent, line.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      shutdown();
      throw ProtocolError("external student died (write failed) while sending: " + request);
    }
    sent += static_cast<std::size_t>(n);
  }

  const auto deadline = std::chrono::steady_clock::now() + spec_.timeout;
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string reply = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return reply;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      shutdown();
      throw ProtocolError("external student timed out answering: " + request);
    }
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) continue;
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      shutdown();
      throw ProtocolError("external student exited while answering: " + request);
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

double ExternalStudent::reward_reply(const std::string& request) {
  const std::string reply = roundtrip(request);
  json j;
  try {
    j = json::parse(reply);
  } catch (const json::exception&) {
    throw ProtocolError("external student sent malformed JSON: " + reply);
  }
  if (!j.is_object() || !j.contains("reward") || !j["reward"].is_number())
    throw ProtocolError("external student reply lacks a numeric 'reward': " + reply);
  const double r = j["reward"].get<double>();
  if (!std::isfinite(r)) throw ProtocolError("external student sent a non-finite reward: " + reply);
  return r;
}

double ExternalStudent::evaluate(const TaskParams& params) {
  return reward_reply(json{{"cmd", "eval"}, {"params", params.values}}.dump());
}

double ExternalStudent::train_on(const TaskParams& params) {
  return reward_reply(json{{"cmd", "train"}, {"params", params.values}}.dump());
}

void ExternalStudent::reset(ResetMode mode) {
  const std::string reply = roundtrip(json{{"cmd", "reset"}, {"mode", to_string(mode)}}.dump());
  json j;
  try {
    j = json::parse(reply);
  } catch (const json::exception&) {
    throw ProtocolError("external student sent malformed JSON: " + reply);
  }
  if (!j.is_object() || !j.contains("ok") || j["ok"] != json(true))
    throw ProtocolError("external student refused reset: " + reply);
}

std::unique_ptr<Student> external_student_session(ExternalStudentSpec spec) {
  return std::make_unique<ExternalStudent>(std::move(spec));
}

}  // namespace acl
