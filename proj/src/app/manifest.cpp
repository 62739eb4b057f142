#include "sfwm/app/manifest.hpp"

#include <fstream>

#include "sfwm/core/errors.hpp"

namespace sfwm::app
{
nlohmann::json RunManifest::to_json() const
{
    return {
        {"command", command},
        {"config_hash", config_hash},
        {"seed", seed},
        {"tool_version", tool_version},
        {"outputs", outputs},
    };
}

std::filesystem::path write_manifest(std::filesystem::path const& dir, RunManifest const& manifest)
{
    auto const path = dir / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw ConfigError("cannot write " + path.string());
    }
    out << manifest.to_json().dump(2) << "\n";
    return path;
}

} // namespace sfwm::app
