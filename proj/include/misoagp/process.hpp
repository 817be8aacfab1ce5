#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace misoagp {

/// A child process spoken to over its stdin/stdout, one line per message.
/// The child's stderr is inherited. Destruction closes stdin, then reaps
/// the child (killing it if it does not exit promptly).
class ChildProcess {
public:
    explicit ChildProcess(const std::vector<std::string>& argv);
    ~ChildProcess();

    ChildProcess(const ChildProcess&) = delete;
    ChildProcess& operator=(const ChildProcess&) = delete;

    /// Writes `line` plus '\n' and waits for one reply line. Throws
    /// SourceEvaluationError on timeout, EOF or write failure; the error's
    /// output() holds whatever partial text was read.
    std::string request(const std::string& line, std::chrono::milliseconds timeout);

    bool alive();

private:
    void write_all(const std::string& data);
    std::string read_line(std::chrono::milliseconds timeout);

    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
};

}  // namespace misoagp
