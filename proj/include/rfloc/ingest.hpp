// SPDX-License-Identifier: Apache-2.0
//
// Measurement stream transport: a TCP listener accepting newline-delimited
// record streams, plus trace-file persistence and paced replay.

#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "rfloc/record.hpp"

namespace rfloc {

using RecordSink = std::function<void(const MeasurementRecord&)>;

// Accepts any number of concurrent connections, each carrying
// newline-delimited JSON records. Valid records reach the sink in
// per-connection arrival order; delivery is serialized across
// connections. Invalid lines are counted and skipped without dropping
// the connection. stop() drains lines already received before returning.
class IngestServer {
public:
    struct Options {
        std::string bind_address = "0.0.0.0";
        std::uint16_t port = 7700;  // 0 picks an ephemeral port
    };

    IngestServer(Options options, RecordSink sink);
    ~IngestServer();

    IngestServer(const IngestServer&) = delete;
    IngestServer& operator=(const IngestServer&) = delete;

    void start();  // throws std::runtime_error when the address cannot be bound
    void stop();

    std::uint16_t port() const { return bound_port_; }
    std::uint64_t accepted_count() const { return accepted_.load(); }
    std::uint64_t malformed_count() const { return malformed_.load(); }

private:
    void accept_loop();
    void connection_loop(int fd);
    void handle_line(std::string_view line);

    Options options_;
    RecordSink sink_;

    int listen_fd_ = -1;
    std::uint16_t bound_port_ = 0;
    std::atomic<bool> running_{false};
    std::thread accept_thread_;

    std::mutex connections_mutex_;
    std::vector<int> connection_fds_;
    std::vector<std::thread> connection_threads_;

    std::mutex sink_mutex_;
    std::atomic<std::uint64_t> accepted_{0};
    std::atomic<std::uint64_t> malformed_{0};
};

struct ReplaySummary {
    std::uint64_t records = 0;
    std::uint64_t malformed = 0;
};

// Delivers a stored trace to the sink, pacing deliveries by the timestamp
// deltas divided by `speed`. Non-finite or non-positive speed disables
// pacing (as fast as possible). Throws std::runtime_error when the file
// cannot be read.
ReplaySummary replay_trace(const std::filesystem::path& file, double speed,
                           const RecordSink& sink);

// Writes measurements in the line protocol (UTF-8, LF endings).
void write_trace(const std::filesystem::path& file,
                 std::span<const Measurement> measurements);

}  // namespace rfloc
