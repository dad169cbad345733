#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mpgi {

inline constexpr const char* kToolVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key/value settings addressed as "section.key". A config file is
/// INI-style sections; a run manifest embeds the same keys under [config],
/// so any manifest can be fed back as a config for a byte-identical re-run.
class Settings {
public:
    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }

    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::optional<std::string> maybe(const std::string& key) const;

    const std::map<std::string, std::string>& items() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

Settings parse_config_text(const std::string& text);
Settings parse_config_file(const std::filesystem::path& path);

/// Run manifest: resolved config echo, tool version, per-stage timings,
/// output file list. The [config] block reproduces the run.
std::string manifest_text(const Settings& resolved,
                          const std::vector<std::pair<std::string, double>>& timings_s,
                          const std::vector<std::string>& outputs);

}  // namespace mpgi
