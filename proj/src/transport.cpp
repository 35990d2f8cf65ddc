// Copyright 2026 The lengthgen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <future>
#include <mutex>
#include <semaphore>
#include <thread>
#include <unordered_map>

#include "httplib.h"
#include "lengthgen/adapters.hpp"

extern char** environ;

namespace lengthgen::adapters {

namespace {

using Kind = AdapterError::Kind;

// Bounds in-flight requests to the declared parallelism.
class Slots {
 public:
  explicit Slots(std::size_t n) : sem_(static_cast<std::ptrdiff_t>(n == 0 ? 1 : n)) {}
  void acquire() { sem_.acquire(); }
  void release() { sem_.release(); }

 private:
  std::counting_semaphore<1 << 20> sem_;
};

class SlotGuard {
 public:
  explicit SlotGuard(Slots& s) : s_(s) { s_.acquire(); }
  ~SlotGuard() { s_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

 private:
  Slots& s_;
};

class SubprocessAdapter : public ModelAdapter {
 public:
  SubprocessAdapter(std::string command, TransportOptions options)
      : command_(std::move(command)), options_(options), slots_(options.parallelism) {
    ::signal(SIGPIPE, SIG_IGN);
    int to_child[2];
    int from_child[2];
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0)
      throw AdapterError(Kind::kUnavailable, "pipe: " + std::string(std::strerror(errno)));
    ::fcntl(to_child[1], F_SETFD, FD_CLOEXEC);
    ::fcntl(from_child[0], F_SETFD, FD_CLOEXEC);

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, to_child[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, from_child[1], STDOUT_FILENO);
    posix_spawn_file_actions_addclose(&actions, to_child[0]);
    posix_spawn_file_actions_addclose(&actions, from_child[1]);
    const char* argv[] = {"sh", "-c", command_.c_str(), nullptr};
    const int rc = ::posix_spawn(&pid_, "/bin/sh", &actions, nullptr, const_cast<char**>(argv), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(to_child[0]);
    ::close(from_child[1]);
    if (rc != 0) {
      ::close(to_child[1]);
      ::close(from_child[0]);
      throw AdapterError(Kind::kUnavailable, "cannot start '" + command_ + "': " + std::strerror(rc));
    }
    write_fd_ = to_child[1];
    read_fd_ = from_child[0];
    reader_ = std::thread([this] { read_loop(); });
  }

  ~SubprocessAdapter() override {
    {
      std::lock_guard lock(write_mu_);
      if (write_fd_ >= 0) ::close(write_fd_);
      write_fd_ = -1;
    }
    int status = 0;
    bool exited = false;
    for (int i = 0; i < 200 && !exited; ++i) {
      exited = ::waitpid(pid_, &status, WNOHANG) == pid_;
      if (!exited) std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    if (!exited) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
    }
    if (reader_.joinable()) reader_.join();
    ::close(read_fd_);
  }

  CompletionResponse complete(const CompletionRequest& request) override {
    SlotGuard slot(slots_);
    std::future<CompletionResponse> result;
    {
      std::lock_guard lock(state_mu_);
      if (dead_) throw AdapterError(Kind::kUnavailable, dead_reason_);
      auto [it, inserted] = pending_.try_emplace(request.id);
      if (!inserted) throw AdapterError(Kind::kProtocol, "request id '" + request.id + "' already in flight");
      result = it->second.get_future();
    }
    const std::string line = request_to_json(request) + '\n';
    if (!write_all(line)) {
      fail(request.id, AdapterError(Kind::kUnavailable, "subprocess '" + command_ + "' is not accepting input"));
    }
    if (result.wait_for(options_.timeout) != std::future_status::ready) {
      std::lock_guard lock(state_mu_);
      if (pending_.erase(request.id) == 1)
        throw AdapterError(Kind::kTimeout, "request '" + request.id + "' timed out");
    }
    CompletionResponse response = result.get();
    return {response.id, apply_limits(std::move(response.completion), request)};
  }

  std::size_t parallelism() const override { return options_.parallelism; }
  std::string name() const override { return "subprocess:" + command_; }

 private:
  bool write_all(const std::string& data) {
    std::lock_guard lock(write_mu_);
    if (write_fd_ < 0) return false;
    std::size_t off = 0;
    while (off < data.size()) {
      const ssize_t n = ::write(write_fd_, data.data() + off, data.size() - off);
      if (n < 0) {
        if (errno == EINTR) continue;
        return false;
      }
      off += static_cast<std::size_t>(n);
    }
    return true;
  }

  void fail(const std::string& id, const AdapterError& error) {
    std::lock_guard lock(state_mu_);
    auto it = pending_.find(id);
    if (it == pending_.end()) return;
    it->second.set_exception(std::make_exception_ptr(error));
    pending_.erase(it);
  }

  void fail_all(const AdapterError& error) {
    std::lock_guard lock(state_mu_);
    for (auto& [id, promise] : pending_) promise.set_exception(std::make_exception_ptr(error));
    pending_.clear();
  }

  void handle_line(const std::string& line) {
    CompletionResponse response;
    try {
      response = response_from_json(line);
    } catch (const AdapterError& e) {
      fail_all(e);
      return;
    }
    std::lock_guard lock(state_mu_);
    auto it = pending_.find(response.id);
    // Unknown ids are late replies to requests that already timed out.
    if (it == pending_.end()) return;
    it->second.set_value(std::move(response));
    pending_.erase(it);
  }

  void read_loop() {
    std::string buffer;
    char chunk[4096];
    for (;;) {
      const ssize_t n = ::read(read_fd_, chunk, sizeof chunk);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) break;
      buffer.append(chunk, static_cast<std::size_t>(n));
      std::size_t start = 0;
      for (auto nl = buffer.find('\n', start); nl != std::string::npos; nl = buffer.find('\n', start)) {
        std::string line = buffer.substr(start, nl - start);
        start = nl + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) handle_line(line);
      }
      buffer.erase(0, start);
    }
    {
      std::lock_guard lock(state_mu_);
      dead_ = true;
      dead_reason_ = "subprocess '" + command_ + "' exited";
    }
    fail_all(AdapterError(Kind::kUnavailable, "subprocess '" + command_ + "' exited"));
  }

  std::string command_;
  TransportOptions options_;
  Slots slots_;
  pid_t pid_ = -1;
  int write_fd_ = -1;
  int read_fd_ = -1;
  std::mutex write_mu_;
  std::mutex state_mu_;
  std::unordered_map<std::string, std::promise<CompletionResponse>> pending_;
  bool dead_ = false;
  std::string dead_reason_;
  std::thread reader_;
};

class HttpAdapter : public ModelAdapter {
 public:
  HttpAdapter(const std::string& endpoint, std::map<std::string, std::string> headers,
              TransportOptions options)
      : endpoint_(endpoint), options_(options), slots_(options.parallelism) {
    for (auto& [k, v] : headers) headers_.emplace(k, v);
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint must look like http://host:port/path");
    const auto path_start = endpoint.find('/', scheme_end + 3);
    base_ = endpoint.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : endpoint.substr(path_start);
  }

  CompletionResponse complete(const CompletionRequest& request) override {
    SlotGuard slot(slots_);
    httplib::Client client(base_);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    auto res = client.Post(path_, headers_, request_to_json(request), "application/json");
    if (!res) {
      const auto err = res.error();
      const std::string what = "POST " + endpoint_ + ": " + httplib::to_string(err);
      if (err == httplib::Error::Connection) throw AdapterError(Kind::kUnavailable, what);
      if (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout)
        throw AdapterError(Kind::kTimeout, what);
      throw AdapterError(Kind::kTransport, what);
    }
    if (res->status < 200 || res->status >= 300)
      throw AdapterError(Kind::kTransport, "POST " + endpoint_ + ": HTTP " + std::to_string(res->status));
    CompletionResponse response = response_from_json(res->body);
    if (response.id != request.id)
      throw AdapterError(Kind::kProtocol, "response id '" + response.id + "' does not match request '" + request.id + "'");
    return {response.id, apply_limits(std::move(response.completion), request)};
  }

  std::size_t parallelism() const override { return options_.parallelism; }
  std::string name() const override { return "http:" + endpoint_; }

 private:
  std::string endpoint_;
  std::string base_;
  std::string path_;
  httplib::Headers headers_;
  TransportOptions options_;
  Slots slots_;
};

}  // namespace

std::unique_ptr<ModelAdapter> subprocess_adapter(const std::string& command,
                                                 const TransportOptions& options) {
  return std::make_unique<SubprocessAdapter>(command, options);
}

std::unique_ptr<ModelAdapter> http_adapter(const std::string& endpoint,
                                           const std::map<std::string, std::string>& headers,
                                           const TransportOptions& options) {
  return std::make_unique<HttpAdapter>(endpoint, headers, options);
}

}  // namespace lengthgen::adapters
