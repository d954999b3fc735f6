// SPDX-License-Identifier: Apache-2.0
//
// JSON floor-plan + scenario configuration (schema version 1).

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "rfloc/simulator.hpp"

namespace rfloc {

inline constexpr int kConfigSchemaVersion = 1;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses and validates; throws ConfigError with a field-level message on
// any schema or invariant violation.
SiteConfig site_config_from_json(const std::string& text);
SiteConfig load_site_config(const std::filesystem::path& path);

std::string site_config_to_json(const SiteConfig& site);
void save_site_config(const std::filesystem::path& path, const SiteConfig& site);

}  // namespace rfloc
