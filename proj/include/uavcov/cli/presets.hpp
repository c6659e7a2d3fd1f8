#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uavcov::cli {

std::vector<std::string> preset_names();

/// Config text of a built-in preset, or nullopt for an unknown name.
std::optional<std::string_view> preset_text(std::string_view name);

}  // namespace uavcov::cli
