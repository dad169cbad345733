#include "mpgi/config.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace mpgi {

std::string Settings::get(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

std::string Settings::require(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing required setting '" + key + "'");
    return it->second;
}

long long Settings::get_int(const std::string& key, long long fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        return std::stoll(it->second);
    } catch (const std::exception&) {
        throw ConfigError("setting '" + key + "' is not an integer: " + it->second);
    }
}

double Settings::get_double(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    if (it->second == "inf") return std::numeric_limits<double>::infinity();
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw ConfigError("setting '" + key + "' is not a number: " + it->second);
    }
}

std::optional<std::string> Settings::maybe(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    return it->second;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Settings parse_config_text(const std::string& text) {
    Settings cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              " is not key=value: " + line);
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!section.empty() && section != "config") key = section + "." + key;
        // A manifest's [run] / [outputs] blocks are informational only.
        if (section == "run" || section == "outputs") continue;
        cfg.set(key, value);
    }
    return cfg;
}

Settings parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string manifest_text(const Settings& resolved,
                          const std::vector<std::pair<std::string, double>>& timings_s,
                          const std::vector<std::string>& outputs) {
    std::ostringstream os;
    os << "# mpgi manifest v1\n[config]\n";
    for (const auto& [k, v] : resolved.items()) os << k << '=' << v << '\n';
    os << "[run]\nversion=" << kToolVersion << '\n';
    for (const auto& [name, secs] : timings_s) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", secs);
        os << "elapsed_" << name << "_s=" << buf << '\n';
    }
    os << "[outputs]\n";
    for (const auto& f : outputs) os << "file=" << f << '\n';
    return os.str();
}

}  // namespace mpgi
