// SPDX-License-Identifier: Apache-2.0

#include "rfloc/pathloss.hpp"

#include <cmath>
#include <stdexcept>

namespace rfloc {

void PathLossParams::validate() const {
    if (!std::isfinite(exponent) || exponent < 2.0 || exponent > 6.0) {
        throw std::invalid_argument("path-loss exponent must lie in [2, 6]");
    }
    if (!std::isfinite(a_one_meter) || a_one_meter >= 0.0) {
        throw std::invalid_argument("a_one_meter must be finite and negative (dBm at 1 m)");
    }
}

double distance_from_rssi(const PathLossParams& params, double rssi_dbm) {
    if (!std::isfinite(rssi_dbm)) {
        throw std::domain_error("invalid measurement: non-finite RSSI");
    }
    return std::pow(10.0, (params.a_one_meter - rssi_dbm) / (10.0 * params.exponent));
}

double rssi_from_distance(const PathLossParams& params, double distance_m) {
    if (!std::isfinite(distance_m) || distance_m <= 0.0) {
        throw std::domain_error("distance must be finite and > 0");
    }
    return params.a_one_meter - 10.0 * params.exponent * std::log10(distance_m);
}

}  // namespace rfloc
