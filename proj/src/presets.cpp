#include <algorithm>
#include <cstdlib>
#include <filesystem>

#include "aniscat/errors.hpp"
#include "aniscat/runner.hpp"

#ifndef ANISCAT_PRESET_DIR
#define ANISCAT_PRESET_DIR "presets"
#endif

namespace aniscat {

std::string preset_directory() {
  if (const char* env = std::getenv("ANISCAT_PRESET_DIR")) return env;
  return ANISCAT_PRESET_DIR;
}

std::vector<PresetInfo> list_presets() {
  namespace fs = std::filesystem;
  const fs::path dir(preset_directory());
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCategory::kIo,
                "preset directory " + dir.string() + " not found");
  }
  std::vector<PresetInfo> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".ini") continue;
    const RunConfig config = load_config(entry.path().string());
    out.push_back({config.name, config.description, config.production});
  }
  std::sort(out.begin(), out.end(),
            [](const PresetInfo& a, const PresetInfo& b) { return a.name < b.name; });
  return out;
}

RunConfig load_preset(const std::string& name, const ConfigOverrides& overrides) {
  if (name.empty() || name.find('/') != std::string::npos) {
    throw Error(ErrorCategory::kConfig, "preset: invalid name '" + name + "'");
  }
  const std::filesystem::path path =
      std::filesystem::path(preset_directory()) / (name + ".ini");
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCategory::kConfig,
                "preset: unknown preset '" + name + "' (see `aniscat presets`)");
  }
  return load_config(path.string(), overrides);
}

}  // namespace aniscat
