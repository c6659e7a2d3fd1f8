#include "uavcov/cli/presets.hpp"

#include "uavcov/preset_data.hpp"

namespace uavcov::cli {

std::vector<std::string> preset_names()
{
    std::vector<std::string> out;
    for (const auto& [name, text] : generated::kPresets) out.emplace_back(name);
    return out;
}

std::optional<std::string_view> preset_text(std::string_view name)
{
    for (const auto& [key, text] : generated::kPresets) {
        if (key == name) return text;
    }
    return std::nullopt;
}

}  // namespace uavcov::cli
