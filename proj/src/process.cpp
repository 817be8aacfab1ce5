#include "misoagp/process.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "misoagp/errors.hpp"

namespace misoagp {

ChildProcess::ChildProcess(const std::vector<std::string>& argv) {
    if (argv.empty()) throw InvalidArgument("external source: empty command");
    int in_pipe[2], out_pipe[2];
    if (pipe(in_pipe) != 0) throw SourceEvaluationError("pipe() failed: " + std::string(std::strerror(errno)));
    if (pipe(out_pipe) != 0) {
        close(in_pipe[0]);
        close(in_pipe[1]);
        throw SourceEvaluationError("pipe() failed: " + std::string(std::strerror(errno)));
    }
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    pid_ = fork();
    if (pid_ < 0) throw SourceEvaluationError("fork() failed: " + std::string(std::strerror(errno)));
    if (pid_ == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        close(in_pipe[0]);
        close(in_pipe[1]);
        close(out_pipe[0]);
        close(out_pipe[1]);
        execvp(args[0], args.data());
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    // a dead child must surface as an error, not kill us
    signal(SIGPIPE, SIG_IGN);
}

ChildProcess::~ChildProcess() {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    if (pid_ > 0) {
        int status = 0;
        for (int i = 0; i < 50; ++i) {
            if (waitpid(pid_, &status, WNOHANG) != 0) return;
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
        kill(pid_, SIGKILL);
        waitpid(pid_, &status, 0);
    }
}

bool ChildProcess::alive() {
    if (pid_ <= 0) return false;
    int status = 0;
    return waitpid(pid_, &status, WNOHANG) == 0;
}

void ChildProcess::write_all(const std::string& data) {
    std::size_t off = 0;
    while (off < data.size()) {
        const ssize_t n = write(to_child_, data.data() + off, data.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw SourceEvaluationError("write to evaluator failed: " + std::string(std::strerror(errno)));
        }
        off += static_cast<std::size_t>(n);
    }
}

std::string ChildProcess::read_line(std::chrono::milliseconds timeout) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    for (;;) {
        if (auto pos = buffer_.find('\n'); pos != std::string::npos) {
            std::string line = buffer_.substr(0, pos);
            buffer_.erase(0, pos + 1);
            if (!line.empty() && line.back() == '\r') line.pop_back();
            return line;
        }
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline -
                                                                                std::chrono::steady_clock::now());
        if (left.count() <= 0) throw SourceEvaluationError("evaluator reply timed out", buffer_);
        pollfd pfd{from_child_, POLLIN, 0};
        const int rc = poll(&pfd, 1, static_cast<int>(left.count()));
        if (rc < 0) {
            if (errno == EINTR) continue;
            throw SourceEvaluationError("poll on evaluator failed", buffer_);
        }
        if (rc == 0) continue;
        char chunk[4096];
        const ssize_t n = read(from_child_, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw SourceEvaluationError("read from evaluator failed", buffer_);
        }
        if (n == 0) throw SourceEvaluationError("evaluator closed its output", buffer_);
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

std::string ChildProcess::request(const std::string& line, std::chrono::milliseconds timeout) {
    write_all(line + "\n");
    return read_line(timeout);
}

}  // namespace misoagp
