#include "hochc/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <sstream>

namespace hochc {

std::string solver_status_name(SolverStatus s) {
    switch (s) {
    case SolverStatus::Sat: return "sat";
    case SolverStatus::Unsat: return "unsat";
    case SolverStatus::Unknown: return "unknown";
    case SolverStatus::Timeout: return "timeout";
    case SolverStatus::SolverError: return "error";
    }
    return "error";
}

std::optional<std::string> default_solver_path() {
    const char* env = std::getenv("HOCHC_SOLVER");
    if (env && *env) return std::string(env);
    return std::nullopt;
}

namespace {

std::optional<SolverStatus> scan_verdict(const std::string& output) {
    std::istringstream in(output);
    std::string token;
    while (in >> token) {
        if (token == "sat") return SolverStatus::Sat;
        if (token == "unsat") return SolverStatus::Unsat;
        if (token == "unknown") return SolverStatus::Unknown;
    }
    return std::nullopt;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        char name[] = "/tmp/hochc-XXXXXX.smt2";
        int fd = mkstemps(name, 5);
        if (fd < 0) throw std::runtime_error("cannot create temporary file");
        path = name;
        size_t off = 0;
        while (off < contents.size()) {
            ssize_t n = write(fd, contents.data() + off, contents.size() - off);
            if (n <= 0) break;
            off += static_cast<size_t>(n);
        }
        close(fd);
    }
    ~TempFile() { unlink(path.c_str()); }
};

}

SolverVerdict solve(const SmtDocument& doc, const std::string& solver_path,
                    int timeout_ms) {
    TempFile file(doc.to_text());

    int fds[2];
    if (pipe(fds) != 0)
        return {SolverStatus::SolverError, 0, "pipe creation failed"};

    pid_t pid = fork();
    if (pid < 0) {
        close(fds[0]);
        close(fds[1]);
        return {SolverStatus::SolverError, 0, "fork failed"};
    }
    if (pid == 0) {
        dup2(fds[1], STDOUT_FILENO);
        dup2(fds[1], STDERR_FILENO);
        close(fds[0]);
        close(fds[1]);
        execlp(solver_path.c_str(), solver_path.c_str(), file.path.c_str(),
               static_cast<char*>(nullptr));
        _exit(127);
    }
    close(fds[1]);

    std::string output;
    bool timed_out = false;
    auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    char buf[4096];
    for (;;) {
        auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                             deadline - std::chrono::steady_clock::now())
                             .count();
        if (remaining <= 0) {
            timed_out = true;
            break;
        }
        struct pollfd pfd{fds[0], POLLIN, 0};
        int rc = poll(&pfd, 1, static_cast<int>(remaining));
        if (rc < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (rc == 0) {
            timed_out = true;
            break;
        }
        ssize_t n = read(fds[0], buf, sizeof buf);
        if (n < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (n == 0) break;
        output.append(buf, static_cast<size_t>(n));
    }
    close(fds[0]);

    if (timed_out) {
        kill(pid, SIGKILL);
        int status = 0;
        waitpid(pid, &status, 0);
        return {SolverStatus::Timeout, timeout_ms, ""};
    }

    int status = 0;
    waitpid(pid, &status, 0);
    if (auto verdict = scan_verdict(output))
        return {*verdict, 0, ""};
    std::string detail = "solver produced no verdict";
    if (WIFEXITED(status) && WEXITSTATUS(status) != 0)
        detail += " (exit " + std::to_string(WEXITSTATUS(status)) + ")";
    else if (WIFSIGNALED(status))
        detail += " (signal " + std::to_string(WTERMSIG(status)) + ")";
    if (!output.empty()) detail += ": " + output;
    return {SolverStatus::SolverError, 0, detail};
}

}
