#pragma once

#include <filesystem>
#include <string>

#include "aqi/field.hpp"

namespace aqi {

inline constexpr int config_schema_version = 1;

// Keys absent from the document keep their defaults; unknown keys and type
// mismatches throw Error{validation} naming the key. The time grid is
// resolved but the result is not validated.
DriverConfig config_from_json(const std::string& text);
DriverConfig load_config(const std::filesystem::path& path);

// Canonical serialization with a fixed key order.
std::string config_to_json(const DriverConfig& config);

// Content hash of the canonical serialization (16 hex digits).
std::string config_hash(const DriverConfig& config);

const char* to_string(Envelope e);
const char* to_string(SqueezingKind k);
const char* to_string(FluctuationAxis a);

}  // namespace aqi
