// SPDX-License-Identifier: Apache-2.0
//
// Line protocol for measurement streams: one JSON object per line, fixed
// key order, schema-versioned. Simulated trace files and live ingest
// streams share this format byte for byte.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>

#include "rfloc/localizer.hpp"

namespace rfloc {

inline constexpr int kRecordSchemaVersion = 1;

struct MeasurementRecord {
    int schema_version = kRecordSchemaVersion;
    double timestamp = 0.0;
    std::string anchor_id;
    std::string device_id;
    double rssi = 0.0;

    bool operator==(const MeasurementRecord&) const = default;
};

struct DecodeError {
    enum class Kind {
        MalformedJson,
        MissingField,
        WrongFieldType,
        UnsupportedVersion,
        InvalidValue,
    };
    Kind kind = Kind::MalformedJson;
    std::string detail;        // field name or parser message
    std::size_t byte_offset = 0;  // position reported for malformed JSON
};

using DecodeResult = std::variant<MeasurementRecord, DecodeError>;

MeasurementRecord to_record(const Measurement& m);
Measurement to_measurement(const MeasurementRecord& r);

// Newline-terminated JSON with keys in the fixed order (schema_version,
// timestamp, anchor_id, device_id, rssi); numbers use the shortest
// round-trip decimal form. Byte-deterministic. Throws
// std::invalid_argument on invalid records (empty ids, non-finite
// numbers, foreign schema version).
std::string encode_record(const MeasurementRecord& r);

// Parses one line (trailing newline optional). Unknown extra fields are
// tolerated; missing or mistyped required fields and unsupported schema
// versions come back as DecodeError.
DecodeResult decode_record(std::string_view line);

}  // namespace rfloc
