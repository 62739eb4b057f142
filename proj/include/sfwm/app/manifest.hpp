#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace sfwm::app
{
struct RunManifest
{
    std::string command;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string tool_version;
    std::vector<std::string> outputs;  // file names relative to the output directory

    nlohmann::json to_json() const;
};

// Writes manifest.json into dir and returns its path.
std::filesystem::path write_manifest(std::filesystem::path const& dir, RunManifest const& manifest);

} // namespace sfwm::app
