#include "copath/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>
#include <wordexp.h>

#include <cerrno>
#include <cstring>
#include <mutex>

#include "copath/error.hpp"

namespace copath {

std::vector<std::string> split_command(const std::string& command) {
  wordexp_t words;
  int rc = wordexp(command.c_str(), &words, WRDE_NOCMD | WRDE_UNDEF);
  if (rc != 0) throw Error("cannot split backend command '" + command + "'");
  std::vector<std::string> out(words.we_wordv, words.we_wordv + words.we_wordc);
  wordfree(&words);
  return out;
}

namespace {

struct Pipe {
  int fd[2] = {-1, -1};
  Pipe() {
    if (::pipe2(fd, O_CLOEXEC) != 0) throw Error("pipe: " + std::string(std::strerror(errno)));
  }
  ~Pipe() { close_both(); }
  void close_end(int i) {
    if (fd[i] >= 0) ::close(fd[i]);
    fd[i] = -1;
  }
  void close_both() {
    close_end(0);
    close_end(1);
  }
};

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv,
                          std::string_view input,
                          std::chrono::milliseconds timeout) {
  ProcessResult result;
  if (argv.empty()) {
    result.launch_failed = true;
    result.err = "empty command";
    return result;
  }
  ignore_sigpipe();

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  Pipe in, out, err, status;
  pid_t pid = ::fork();
  if (pid < 0) throw Error("fork: " + std::string(std::strerror(errno)));
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in.fd[0], STDIN_FILENO);
    ::dup2(out.fd[1], STDOUT_FILENO);
    ::dup2(err.fd[1], STDERR_FILENO);
    ::execvp(cargv[0], cargv.data());
    int e = errno;
    [[maybe_unused]] auto n = ::write(status.fd[1], &e, sizeof e);
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  in.close_end(0);
  out.close_end(1);
  err.close_end(1);
  status.close_end(1);

  int exec_errno = 0;
  ssize_t got = ::read(status.fd[0], &exec_errno, sizeof exec_errno);
  if (got == static_cast<ssize_t>(sizeof exec_errno)) {
    ::waitpid(pid, nullptr, 0);
    result.launch_failed = true;
    result.err = "cannot execute '" + argv[0] + "': " + std::strerror(exec_errno);
    return result;
  }

  ::fcntl(in.fd[1], F_SETFL, O_NONBLOCK);
  std::size_t written = 0;
  if (input.empty()) in.close_end(1);

  const auto deadline = std::chrono::steady_clock::now() + timeout;
  char buf[65536];
  while (out.fd[0] >= 0 || err.fd[0] >= 0) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      result.timed_out = true;
      break;
    }
    int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now)
            .count()) + 1;

    pollfd fds[3];
    int n = 0;
    int in_slot = -1, out_slot = -1, err_slot = -1;
    if (in.fd[1] >= 0) { in_slot = n; fds[n++] = {in.fd[1], POLLOUT, 0}; }
    if (out.fd[0] >= 0) { out_slot = n; fds[n++] = {out.fd[0], POLLIN, 0}; }
    if (err.fd[0] >= 0) { err_slot = n; fds[n++] = {err.fd[0], POLLIN, 0}; }
    int rc = ::poll(fds, n, wait_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (in_slot >= 0 && fds[in_slot].revents) {
      if (fds[in_slot].revents & (POLLERR | POLLHUP)) {
        in.close_end(1);
      } else {
        ssize_t w = ::write(in.fd[1], input.data() + written, input.size() - written);
        if (w > 0) written += static_cast<std::size_t>(w);
        else if (w < 0 && errno != EAGAIN) in.close_end(1);
        if (written == input.size()) in.close_end(1);
      }
    }
    auto drain = [&](int slot, Pipe& p, std::string& sink) {
      if (slot < 0 || !fds[slot].revents) return;
      ssize_t r = ::read(p.fd[0], buf, sizeof buf);
      if (r > 0) sink.append(buf, static_cast<std::size_t>(r));
      else if (r == 0 || errno != EINTR) p.close_end(0);
    };
    drain(out_slot, out, result.out);
    drain(err_slot, err, result.err);
  }

  int wstatus = 0;
  if (!result.timed_out) {
    // Output is closed; the child may still linger until the deadline.
    while (true) {
      pid_t r = ::waitpid(pid, &wstatus, WNOHANG);
      if (r == pid || (r < 0 && errno != EINTR)) break;
      if (std::chrono::steady_clock::now() >= deadline) {
        result.timed_out = true;
        break;
      }
      ::usleep(1000);
    }
    if (!result.timed_out) {
      if (WIFEXITED(wstatus)) result.exit_code = WEXITSTATUS(wstatus);
      return result;
    }
  }
  ::kill(-pid, SIGKILL);
  while (::waitpid(pid, &wstatus, 0) < 0 && errno == EINTR) {
  }
  return result;
}

}  // namespace copath
