// SPDX-License-Identifier: Apache-2.0
//
// Lognormal (log-distance) path-loss model: RSSI <-> distance conversion.

#pragma once

namespace rfloc {

// Calibration pair for one anchor type. `a_one_meter` is the signal
// strength in dBm measured at one meter; `exponent` is the path-loss
// exponent n (2 in free space, up to 6 indoors).
struct PathLossParams {
    double a_one_meter = -59.0;
    double exponent = 2.0;

    // Throws std::invalid_argument if outside the supported ranges
    // (exponent in [2, 6], a_one_meter finite and negative).
    void validate() const;
};

// d = 10^((A - RSSI) / (10 n)). Strictly positive, strictly decreasing
// in rssi. Throws std::domain_error on non-finite rssi.
double distance_from_rssi(const PathLossParams& params, double rssi_dbm);

// RSSI = A - 10 n log10(d). Inverse of distance_from_rssi.
// Throws std::domain_error if d <= 0 or non-finite.
double rssi_from_distance(const PathLossParams& params, double distance_m);

}  // namespace rfloc
