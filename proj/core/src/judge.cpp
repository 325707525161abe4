#include "skeptic/judge.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "skeptic/errors.hpp"

namespace skeptic {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string to_string(JudgeStatus s) {
  switch (s) {
    case JudgeStatus::AC: return "AC";
    case JudgeStatus::WA: return "WA";
    case JudgeStatus::TLE: return "TLE";
    case JudgeStatus::MLE: return "MLE";
    case JudgeStatus::CE: return "CE";
    case JudgeStatus::RE: return "RE";
  }
  return "RE";
}

JudgeStatus judge_status_from_string(const std::string& s) {
  if (s == "AC") return JudgeStatus::AC;
  if (s == "WA") return JudgeStatus::WA;
  if (s == "TLE") return JudgeStatus::TLE;
  if (s == "MLE") return JudgeStatus::MLE;
  if (s == "CE") return JudgeStatus::CE;
  if (s == "RE") return JudgeStatus::RE;
  throw ValidationError("unknown judging status: " + s);
}

// Counting semaphore bounding live child processes across all threads.
struct SandboxJudge::ChildSlots {
  explicit ChildSlots(int n) : available(n) {}

  void acquire() {
    std::unique_lock lock(m);
    cv.wait(lock, [&] { return available > 0; });
    --available;
  }

  void release() {
    {
      std::lock_guard lock(m);
      ++available;
    }
    cv.notify_one();
  }

  std::mutex m;
  std::condition_variable cv;
  int available;
};

namespace {

struct SlotGuard {
  explicit SlotGuard(SandboxJudge::ChildSlots& s) : slots(s) { slots.acquire(); }
  ~SlotGuard() { slots.release(); }
  SandboxJudge::ChildSlots& slots;
};

struct TempDir {
  TempDir() {
    std::string tpl = (fs::temp_directory_path() / "skeptic-run-XXXXXX").string();
    if (!mkdtemp(tpl.data())) {
      throw EnvironmentError("mkdtemp failed: " + std::string(std::strerror(errno)));
    }
    path = tpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string path;
};

struct Pipe {
  int fds[2] = {-1, -1};
  explicit Pipe(int flags = 0) {
    if (pipe2(fds, flags) != 0) {
      throw EnvironmentError("pipe2 failed: " + std::string(std::strerror(errno)));
    }
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  int read_fd() const { return fds[0]; }
  int write_fd() const { return fds[1]; }
  void close_read() {
    if (fds[0] >= 0) ::close(fds[0]);
    fds[0] = -1;
  }
  void close_write() {
    if (fds[1] >= 0) ::close(fds[1]);
    fds[1] = -1;
  }
};

void set_nonblocking(int fd) { fcntl(fd, F_SETFL, fcntl(fd, F_GETFL) | O_NONBLOCK); }

void ignore_sigpipe_once() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::vector<std::string> instantiate_command(const std::vector<std::string>& tpl,
                                             const std::string& file_path) {
  std::vector<std::string> argv;
  argv.reserve(tpl.size());
  for (const auto& part : tpl) {
    std::string p = part;
    std::size_t pos;
    while ((pos = p.find("{file}")) != std::string::npos) p.replace(pos, 6, file_path);
    argv.push_back(std::move(p));
  }
  return argv;
}

void write_source_file(const std::string& path, const std::string& code) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << code;
  if (!out) throw EnvironmentError("cannot write guest source: " + path);
}

struct ChildSpec {
  std::vector<std::string> argv;
  std::string cwd;
  const std::string* input;
  std::int64_t wall_time_ms;
  std::int64_t memory_bytes;  // 0 = no cap
  std::int64_t capture_cap;
  std::int64_t grace_ms;
};

ExecutionOutcome run_child(const ChildSpec& spec) {
  ignore_sigpipe_once();

  Pipe in_pipe, out_pipe, err_pipe;
  Pipe status_pipe(O_CLOEXEC);  // reports exec failure errno

  std::vector<char*> argv;
  for (const auto& a : spec.argv) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  auto start = Clock::now();
  pid_t pid = fork();
  if (pid < 0) {
    throw EnvironmentError("fork failed: " + std::string(std::strerror(errno)));
  }

  if (pid == 0) {
    // Child. Only async-signal-safe calls until exec.
    setpgid(0, 0);
    if (spec.memory_bytes > 0) {
      rlimit as_limit{static_cast<rlim_t>(spec.memory_bytes),
                      static_cast<rlim_t>(spec.memory_bytes)};
      setrlimit(RLIMIT_AS, &as_limit);
    }
    rlimit core_limit{0, 0};
    setrlimit(RLIMIT_CORE, &core_limit);
    dup2(in_pipe.read_fd(), STDIN_FILENO);
    dup2(out_pipe.write_fd(), STDOUT_FILENO);
    dup2(err_pipe.write_fd(), STDERR_FILENO);
    for (int fd : {in_pipe.read_fd(), in_pipe.write_fd(), out_pipe.read_fd(),
                   out_pipe.write_fd(), err_pipe.read_fd(), err_pipe.write_fd()}) {
      if (fd > STDERR_FILENO) ::close(fd);
    }
    if (chdir(spec.cwd.c_str()) != 0) _exit(126);
    execvp(argv[0], argv.data());
    int err = errno;
    ssize_t ignored = write(status_pipe.write_fd(), &err, sizeof(err));
    (void)ignored;
    _exit(127);
  }

  // Parent.
  setpgid(pid, pid);  // mirror the child's call to close the startup race
  in_pipe.close_read();
  out_pipe.close_write();
  err_pipe.close_write();
  status_pipe.close_write();
  set_nonblocking(in_pipe.write_fd());
  set_nonblocking(out_pipe.read_fd());
  set_nonblocking(err_pipe.read_fd());

  ExecutionOutcome outcome;
  std::size_t input_written = 0;
  bool stdin_open = true;
  bool stdout_open = true, stderr_open = true, status_open = true;
  bool killed = false;
  int spawn_errno = 0;

  auto deadline = start + std::chrono::milliseconds(spec.wall_time_ms);
  auto hard_deadline = deadline + std::chrono::milliseconds(spec.grace_ms);

  auto kill_group = [&] {
    ::kill(-pid, SIGKILL);
    ::kill(pid, SIGKILL);
  };

  auto drain = [&](int fd, std::string* sink, bool* truncated, bool* open_flag) {
    char buf[65536];
    for (;;) {
      ssize_t n = read(fd, buf, sizeof(buf));
      if (n > 0) {
        std::size_t room = sink->size() < static_cast<std::size_t>(spec.capture_cap)
                               ? static_cast<std::size_t>(spec.capture_cap) - sink->size()
                               : 0;
        std::size_t take = std::min(room, static_cast<std::size_t>(n));
        sink->append(buf, take);
        if (take < static_cast<std::size_t>(n)) *truncated = true;
        continue;
      }
      if (n == 0) {
        *open_flag = false;
        return;
      }
      if (errno == EAGAIN || errno == EWOULDBLOCK) return;
      if (errno == EINTR) continue;
      *open_flag = false;
      return;
    }
  };

  if (spec.input->empty()) {
    in_pipe.close_write();
    stdin_open = false;
  }

  while (stdout_open || stderr_open || status_open || stdin_open) {
    auto now = Clock::now();
    if (now >= hard_deadline) {
      kill_group();
      killed = true;
      break;
    }
    if (!killed && now >= deadline) {
      kill_group();
      killed = true;
    }

    pollfd fds[4];
    nfds_t nfds = 0;
    int stdin_idx = -1, stdout_idx = -1, stderr_idx = -1, status_idx = -1;
    if (stdin_open) {
      stdin_idx = nfds;
      fds[nfds++] = {in_pipe.write_fd(), POLLOUT, 0};
    }
    if (stdout_open) {
      stdout_idx = nfds;
      fds[nfds++] = {out_pipe.read_fd(), POLLIN, 0};
    }
    if (stderr_open) {
      stderr_idx = nfds;
      fds[nfds++] = {err_pipe.read_fd(), POLLIN, 0};
    }
    if (status_open) {
      status_idx = nfds;
      fds[nfds++] = {status_pipe.read_fd(), POLLIN, 0};
    }

    auto until = killed ? hard_deadline : deadline;
    auto wait_ms = std::chrono::duration_cast<std::chrono::milliseconds>(until - now).count();
    int timeout = static_cast<int>(std::clamp<std::int64_t>(wait_ms, 0, 50));
    int rc = poll(fds, nfds, timeout);
    if (rc < 0) {
      if (errno == EINTR) continue;
      kill_group();
      killed = true;
      break;
    }

    if (stdin_idx >= 0 && (fds[stdin_idx].revents & (POLLOUT | POLLERR | POLLHUP))) {
      if (fds[stdin_idx].revents & (POLLERR | POLLHUP)) {
        in_pipe.close_write();
        stdin_open = false;
      } else {
        ssize_t n = write(in_pipe.write_fd(), spec.input->data() + input_written,
                          spec.input->size() - input_written);
        if (n > 0) {
          input_written += static_cast<std::size_t>(n);
        } else if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
          input_written = spec.input->size();  // EPIPE: reader is gone
        }
        if (input_written >= spec.input->size()) {
          in_pipe.close_write();
          stdin_open = false;
        }
      }
    }
    if (stdout_idx >= 0 && (fds[stdout_idx].revents & (POLLIN | POLLHUP | POLLERR))) {
      drain(out_pipe.read_fd(), &outcome.stdout_text, &outcome.stdout_truncated,
            &stdout_open);
    }
    if (stderr_idx >= 0 && (fds[stderr_idx].revents & (POLLIN | POLLHUP | POLLERR))) {
      drain(err_pipe.read_fd(), &outcome.stderr_text, &outcome.stderr_truncated,
            &stderr_open);
    }
    if (status_idx >= 0 && (fds[status_idx].revents & (POLLIN | POLLHUP | POLLERR))) {
      int err = 0;
      ssize_t n = read(status_pipe.read_fd(), &err, sizeof(err));
      if (n == static_cast<ssize_t>(sizeof(err))) spawn_errno = err;
      if (n <= 0 || n == static_cast<ssize_t>(sizeof(err))) status_open = false;
    }
  }

  // The child can outlive its pipes (close stdout and keep running), so the
  // reap loop keeps enforcing the deadline.
  int wait_status = 0;
  for (;;) {
    pid_t r = waitpid(pid, &wait_status, WNOHANG);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) break;
    auto now = Clock::now();
    if (now >= deadline && !killed) {
      kill_group();
      killed = true;
    }
    if (now >= hard_deadline) kill_group();
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  outcome.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            Clock::now() - start)
                            .count();

  if (spawn_errno != 0) {
    outcome.exit_kind = ExitKind::spawn_failed;
    outcome.exit_code = spawn_errno;
    if (outcome.stderr_text.empty()) {
      outcome.stderr_text = std::strerror(spawn_errno);
    }
  } else if (killed) {
    outcome.exit_kind = ExitKind::timed_out;
    outcome.exit_code = -1;
  } else if (WIFEXITED(wait_status)) {
    outcome.exit_kind = ExitKind::exited;
    outcome.exit_code = WEXITSTATUS(wait_status);
  } else if (WIFSIGNALED(wait_status)) {
    int sig = WTERMSIG(wait_status);
    if (spec.memory_bytes > 0 && sig == SIGKILL) {
      // Not our watchdog, and the address-space cap was armed: the kernel
      // killed it over memory.
      outcome.exit_kind = ExitKind::memory_killed;
      outcome.exit_code = -1;
    } else {
      outcome.exit_kind = ExitKind::exited;
      outcome.exit_code = 128 + sig;
    }
  }
  return outcome;
}

}  // namespace

SandboxJudge::SandboxJudge(GuestRuntime runtime, int max_concurrent_children)
    : runtime_(std::move(runtime)) {
  int n = max_concurrent_children > 0
              ? max_concurrent_children
              : std::max(1u, std::thread::hardware_concurrency());
  slots_ = std::make_shared<ChildSlots>(n);
}

SandboxJudge::~SandboxJudge() = default;

std::optional<JudgeStatus> SandboxJudge::compile_check(const std::string& code) const {
  SlotGuard guard(*slots_);
  TempDir dir;
  std::string file = dir.path + "/" + runtime_.source_filename;
  write_source_file(file, code);

  ChildSpec spec;
  spec.argv = instantiate_command(runtime_.compile_command, file);
  spec.cwd = dir.path;
  static const std::string no_input;
  spec.input = &no_input;
  spec.wall_time_ms = 10000;  // generous; the compile pass is not the guest's budget
  spec.memory_bytes = 0;
  spec.capture_cap = runtime_.capture_cap_bytes;
  spec.grace_ms = runtime_.kill_grace_ms;

  ExecutionOutcome out = run_child(spec);
  if (out.exit_kind == ExitKind::spawn_failed) {
    throw EnvironmentError("guest compile pass could not start: " + out.stderr_text);
  }
  if (out.exit_kind == ExitKind::timed_out) {
    throw EnvironmentError("guest compile pass hung");
  }
  if (out.exit_code != 0) return JudgeStatus::CE;
  return std::nullopt;
}

ExecutionOutcome SandboxJudge::execute(const std::string& code, const std::string& input,
                                       const ResourceLimits& limits) const {
  if (limits.wall_time_ms <= 0 || limits.memory_bytes <= 0) {
    throw ValidationError("resource limits must be strictly positive");
  }
  SlotGuard guard(*slots_);
  TempDir dir;
  std::string file = dir.path + "/" + runtime_.source_filename;
  write_source_file(file, code);

  ChildSpec spec;
  spec.argv = instantiate_command(runtime_.run_command, file);
  spec.cwd = dir.path;
  spec.input = &input;
  spec.wall_time_ms = limits.wall_time_ms;
  spec.memory_bytes = limits.memory_bytes;
  spec.capture_cap = runtime_.capture_cap_bytes;
  spec.grace_ms = runtime_.kill_grace_ms;
  return run_child(spec);
}

JudgeStatus SandboxJudge::judge_output(const std::string& actual,
                                       const std::string& expected) {
  auto normalize = [](const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      std::string line = nl == std::string::npos ? text.substr(pos)
                                                 : text.substr(pos, nl - pos);
      while (!line.empty() &&
             (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
        line.pop_back();
      }
      lines.push_back(std::move(line));
      if (nl == std::string::npos) break;
      pos = nl + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
  };
  return normalize(actual) == normalize(expected) ? JudgeStatus::AC : JudgeStatus::WA;
}

CaseVerdict SandboxJudge::run_compiled_case(const std::string& code, const TestCase& test,
                                            const ResourceLimits& limits,
                                            int case_index) const {
  ExecutionOutcome out = execute(code, test.input, limits);
  CaseVerdict verdict;
  verdict.case_index = case_index;
  verdict.duration_ms = out.duration_ms;

  switch (out.exit_kind) {
    case ExitKind::spawn_failed:
      throw EnvironmentError("guest interpreter could not start: " + out.stderr_text);
    case ExitKind::timed_out:
      verdict.status = JudgeStatus::TLE;
      break;
    case ExitKind::memory_killed:
      verdict.status = JudgeStatus::MLE;
      break;
    case ExitKind::exited:
      if (out.exit_code == 0) {
        verdict.status = judge_output(out.stdout_text, test.output);
      } else {
        bool oom = false;
        for (const auto& sig : runtime_.oom_stderr_signatures) {
          if (out.stderr_text.find(sig) != std::string::npos) {
            oom = true;
            break;
          }
        }
        verdict.status = oom ? JudgeStatus::MLE : JudgeStatus::RE;
      }
      break;
  }

  if (verdict.status == JudgeStatus::AC || verdict.status == JudgeStatus::WA ||
      !out.stdout_text.empty()) {
    verdict.actual_output = out.stdout_text;
  }
  return verdict;
}

CaseVerdict SandboxJudge::run_case(const std::string& code, const TestCase& test,
                                   const ResourceLimits& limits, int case_index) const {
  if (auto ce = compile_check(code)) {
    return CaseVerdict{case_index, *ce, std::nullopt, 0};
  }
  return run_compiled_case(code, test, limits, case_index);
}

SuiteVerdict SandboxJudge::run_suite(const std::string& code,
                                     std::span<const TestCase> tests,
                                     const ResourceLimits& limits,
                                     bool stop_on_first_fail) const {
  if (tests.empty()) throw ValidationError("run_suite requires a non-empty test list");

  SuiteVerdict suite;
  suite.total = static_cast<int>(tests.size());

  if (auto ce = compile_check(code)) {
    int n = stop_on_first_fail ? 1 : suite.total;
    for (int i = 0; i < n; ++i) {
      suite.verdicts.push_back(CaseVerdict{i, *ce, std::nullopt, 0});
    }
  } else {
    for (std::size_t i = 0; i < tests.size(); ++i) {
      CaseVerdict v = run_compiled_case(code, tests[i], limits, static_cast<int>(i));
      bool failed = v.status != JudgeStatus::AC;
      suite.verdicts.push_back(std::move(v));
      if (failed && stop_on_first_fail) break;
    }
  }

  int prefix = 0;
  for (const auto& v : suite.verdicts) {
    if (v.status != JudgeStatus::AC) break;
    ++prefix;
  }
  suite.passed_prefix = prefix;
  suite.all_passed = prefix == suite.total;
  return suite;
}

}  // namespace skeptic
