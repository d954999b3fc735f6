// SPDX-License-Identifier: Apache-2.0

#include "rfloc/ingest.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace rfloc {

IngestServer::IngestServer(Options options, RecordSink sink)
    : options_(std::move(options)), sink_(std::move(sink)) {}

IngestServer::~IngestServer() {
    stop();
}

void IngestServer::start() {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) {
        throw std::runtime_error("socket: " + std::string(std::strerror(errno)));
    }
    const int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(options_.port);
    if (::inet_pton(AF_INET, options_.bind_address.c_str(), &addr.sin_addr) != 1) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw std::runtime_error("invalid bind address: " + options_.bind_address);
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        const std::string err = std::strerror(errno);
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw std::runtime_error("bind " + options_.bind_address + ": " + err);
    }
    if (::listen(listen_fd_, 16) != 0) {
        const std::string err = std::strerror(errno);
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw std::runtime_error("listen: " + err);
    }

    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    bound_port_ = ntohs(bound.sin_port);

    running_.store(true);
    accept_thread_ = std::thread(&IngestServer::accept_loop, this);
}

void IngestServer::stop() {
    if (!running_.exchange(false)) {
        return;
    }
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    if (accept_thread_.joinable()) {
        accept_thread_.join();
    }
    std::vector<std::thread> workers;
    {
        std::lock_guard<std::mutex> lock(connections_mutex_);
        for (int fd : connection_fds_) {
            ::shutdown(fd, SHUT_RD);
        }
        workers.swap(connection_threads_);
    }
    for (std::thread& worker : workers) {
        if (worker.joinable()) {
            worker.join();
        }
    }
}

void IngestServer::accept_loop() {
    while (running_.load()) {
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (errno == EINTR) {
                continue;
            }
            break;  // listener closed
        }
        std::lock_guard<std::mutex> lock(connections_mutex_);
        connection_fds_.push_back(fd);
        connection_threads_.emplace_back(&IngestServer::connection_loop, this, fd);
    }
}

void IngestServer::handle_line(std::string_view line) {
    if (line.empty()) {
        return;
    }
    DecodeResult result = decode_record(line);
    if (const auto* record = std::get_if<MeasurementRecord>(&result)) {
        std::lock_guard<std::mutex> lock(sink_mutex_);
        try {
            sink_(*record);
            accepted_.fetch_add(1);
        } catch (const std::exception& e) {
            std::cerr << "ingest sink error: " << e.what() << "\n";
        }
    } else {
        malformed_.fetch_add(1);
    }
}

void IngestServer::connection_loop(int fd) {
    std::string pending;
    char buf[16384];
    for (;;) {
        const ssize_t n = ::recv(fd, buf, sizeof(buf), 0);
        if (n < 0 && errno == EINTR) {
            continue;
        }
        if (n <= 0) {
            break;
        }
        pending.append(buf, static_cast<std::size_t>(n));
        std::size_t start = 0;
        for (;;) {
            const std::size_t nl = pending.find('\n', start);
            if (nl == std::string::npos) {
                break;
            }
            std::string_view line(pending.data() + start, nl - start);
            if (!line.empty() && line.back() == '\r') {
                line.remove_suffix(1);
            }
            handle_line(line);
            start = nl + 1;
        }
        pending.erase(0, start);
    }
    // Trailing data without a newline still counts as a line.
    if (!pending.empty()) {
        handle_line(pending);
    }
    ::close(fd);
    std::lock_guard<std::mutex> lock(connections_mutex_);
    std::erase(connection_fds_, fd);
}

ReplaySummary replay_trace(const std::filesystem::path& file, double speed,
                           const RecordSink& sink) {
    std::ifstream in(file);
    if (!in) {
        throw std::runtime_error("cannot open trace file: " + file.string());
    }
    const bool paced = std::isfinite(speed) && speed > 0.0;

    ReplaySummary summary;
    bool have_previous = false;
    double previous_timestamp = 0.0;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        DecodeResult result = decode_record(line);
        const auto* record = std::get_if<MeasurementRecord>(&result);
        if (!record) {
            ++summary.malformed;
            continue;
        }
        if (paced && have_previous) {
            const double gap = (record->timestamp - previous_timestamp) / speed;
            if (gap > 0.0) {
                std::this_thread::sleep_for(std::chrono::duration<double>(gap));
            }
        }
        previous_timestamp = record->timestamp;
        have_previous = true;
        sink(*record);
        ++summary.records;
    }
    return summary;
}

void write_trace(const std::filesystem::path& file,
                 std::span<const Measurement> measurements) {
    std::ofstream out(file, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open trace file for writing: " + file.string());
    }
    for (const Measurement& m : measurements) {
        out << encode_record(to_record(m));
    }
    if (!out) {
        throw std::runtime_error("short write to trace file: " + file.string());
    }
}

}  // namespace rfloc
