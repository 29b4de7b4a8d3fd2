#include "pedal/mbt.hpp"

#include <cerrno>
#include <cstring>

#include <arpa/inet.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

namespace pedal {

namespace {

class FdTransport : public Transport {
public:
    FdTransport(int read_fd, int write_fd, pid_t child = -1)
        : read_fd_(read_fd), write_fd_(write_fd), child_(child) {}

    ~FdTransport() override {
        if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
        if (read_fd_ >= 0) ::close(read_fd_);
        if (child_ > 0) {
            int status = 0;
            ::waitpid(child_, &status, 0);
        }
    }

    bool write_line(const std::string& line) override {
        std::string data = line + "\n";
        std::size_t off = 0;
        while (off < data.size()) {
            ssize_t n = ::write(write_fd_, data.data() + off, data.size() - off);
            if (n < 0) {
                if (errno == EINTR) continue;
                return false;
            }
            off += static_cast<std::size_t>(n);
        }
        return true;
    }

    ReadResult read_line(std::string& out, int timeout_ms) override {
        for (;;) {
            if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
                out = buffer_.substr(0, nl);
                if (!out.empty() && out.back() == '\r') out.pop_back();
                buffer_.erase(0, nl + 1);
                return ReadResult::Line;
            }
            if (closed_) return ReadResult::Closed;

            struct pollfd pfd{read_fd_, POLLIN, 0};
            int r = ::poll(&pfd, 1, timeout_ms);
            if (r == 0) return ReadResult::Timeout;
            if (r < 0) {
                if (errno == EINTR) continue;
                return ReadResult::Closed;
            }
            char buf[4096];
            ssize_t n = ::read(read_fd_, buf, sizeof buf);
            if (n < 0) {
                if (errno == EINTR) continue;
                return ReadResult::Closed;
            }
            if (n == 0) {
                closed_ = true;
                continue; // flush whatever is buffered first
            }
            buffer_.append(buf, static_cast<std::size_t>(n));
        }
    }

private:
    int read_fd_;
    int write_fd_;
    pid_t child_;
    std::string buffer_;
    bool closed_ = false;
};

} // namespace

std::unique_ptr<Transport> fd_transport(int read_fd, int write_fd) {
    return std::make_unique<FdTransport>(read_fd, write_fd);
}

std::unique_ptr<Transport> connect_tcp(const std::string& host, int port,
                                       std::string& error) {
    struct addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    struct addrinfo* res = nullptr;
    std::string service = std::to_string(port);
    if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
        error = std::string("resolve failed: ") + ::gai_strerror(rc);
        return nullptr;
    }
    int fd = -1;
    for (struct addrinfo* a = res; a; a = a->ai_next) {
        fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd < 0) {
        error = "connect failed: " + std::string(std::strerror(errno));
        return nullptr;
    }
    return std::make_unique<FdTransport>(fd, fd);
}

std::unique_ptr<Transport> spawn_process(const std::string& cmd, std::string& error) {
    int to_child[2], from_child[2];
    if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
        error = "pipe failed: " + std::string(std::strerror(errno));
        return nullptr;
    }
    pid_t pid = ::fork();
    if (pid < 0) {
        error = "fork failed: " + std::string(std::strerror(errno));
        return nullptr;
    }
    if (pid == 0) {
        ::dup2(to_child[0], STDIN_FILENO);
        ::dup2(from_child[1], STDOUT_FILENO);
        ::close(to_child[0]);
        ::close(to_child[1]);
        ::close(from_child[0]);
        ::close(from_child[1]);
        ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    ::signal(SIGPIPE, SIG_IGN);
    return std::make_unique<FdTransport>(from_child[0], to_child[1], pid);
}

} // namespace pedal
