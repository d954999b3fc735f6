// SPDX-License-Identifier: Apache-2.0

#include "rfloc/record.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace rfloc {

namespace {

void validate_record(const MeasurementRecord& r) {
    if (r.schema_version != kRecordSchemaVersion) {
        throw std::invalid_argument("unsupported record schema version");
    }
    if (r.anchor_id.empty() || r.device_id.empty()) {
        throw std::invalid_argument("record ids must be non-empty");
    }
    if (!std::isfinite(r.timestamp) || !std::isfinite(r.rssi)) {
        throw std::invalid_argument("record numbers must be finite");
    }
}

}  // namespace

MeasurementRecord to_record(const Measurement& m) {
    return {kRecordSchemaVersion, m.timestamp, m.anchor_id, m.device_id, m.rssi};
}

Measurement to_measurement(const MeasurementRecord& r) {
    return {r.timestamp, r.anchor_id, r.device_id, r.rssi};
}

std::string encode_record(const MeasurementRecord& r) {
    validate_record(r);
    nlohmann::ordered_json j;
    j["schema_version"] = r.schema_version;
    j["timestamp"] = r.timestamp;
    j["anchor_id"] = r.anchor_id;
    j["device_id"] = r.device_id;
    j["rssi"] = r.rssi;
    return j.dump() + "\n";
}

DecodeResult decode_record(std::string_view line) {
    using Kind = DecodeError::Kind;

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        return DecodeError{Kind::MalformedJson, e.what(), e.byte};
    }
    if (!j.is_object()) {
        return DecodeError{Kind::MalformedJson, "top-level value is not an object", 0};
    }

    const auto require = [&](const char* field) -> const nlohmann::json* {
        const auto it = j.find(field);
        return it == j.end() ? nullptr : &*it;
    };

    const nlohmann::json* version = require("schema_version");
    if (!version) return DecodeError{Kind::MissingField, "schema_version", 0};
    if (!version->is_number_integer()) {
        return DecodeError{Kind::WrongFieldType, "schema_version", 0};
    }
    if (version->get<int>() != kRecordSchemaVersion) {
        return DecodeError{Kind::UnsupportedVersion,
                           "schema_version " + version->dump(), 0};
    }

    MeasurementRecord record;
    record.schema_version = version->get<int>();

    const nlohmann::json* ts = require("timestamp");
    if (!ts) return DecodeError{Kind::MissingField, "timestamp", 0};
    if (!ts->is_number()) return DecodeError{Kind::WrongFieldType, "timestamp", 0};
    record.timestamp = ts->get<double>();

    const nlohmann::json* anchor = require("anchor_id");
    if (!anchor) return DecodeError{Kind::MissingField, "anchor_id", 0};
    if (!anchor->is_string()) return DecodeError{Kind::WrongFieldType, "anchor_id", 0};
    record.anchor_id = anchor->get<std::string>();

    const nlohmann::json* device = require("device_id");
    if (!device) return DecodeError{Kind::MissingField, "device_id", 0};
    if (!device->is_string()) return DecodeError{Kind::WrongFieldType, "device_id", 0};
    record.device_id = device->get<std::string>();

    const nlohmann::json* rssi = require("rssi");
    if (!rssi) return DecodeError{Kind::MissingField, "rssi", 0};
    if (!rssi->is_number()) return DecodeError{Kind::WrongFieldType, "rssi", 0};
    record.rssi = rssi->get<double>();

    if (record.anchor_id.empty() || record.device_id.empty()) {
        return DecodeError{Kind::InvalidValue, "empty id field", 0};
    }
    if (!std::isfinite(record.timestamp) || !std::isfinite(record.rssi)) {
        return DecodeError{Kind::InvalidValue, "non-finite number", 0};
    }
    return record;
}

}  // namespace rfloc
