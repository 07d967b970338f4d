#include "cqsr/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "cqsr/types.hpp"

namespace cqsr::config {

const char* const kEnvPrefix = "CQSR_";

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string env_name(const std::string& key) {
    std::string name = kEnvPrefix;
    for (char c : key) name += (c == '.') ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return name;
}

void apply_env(std::map<std::string, std::string>& values, const std::set<std::string>& known_keys) {
    for (const std::string& key : known_keys) {
        if (const char* v = std::getenv(env_name(key).c_str())) values[key] = v;
    }
}

void reject_unknown(const std::map<std::string, std::string>& values, const std::set<std::string>& known) {
    for (const auto& [k, _] : values)
        require(known.count(k) > 0, "unknown config key: " + k);
}

}  // namespace

RunConfig RunConfig::from_file(const std::filesystem::path& path, const std::set<std::string>& known_keys) {
    std::ifstream is(path);
    require(static_cast<bool>(is), "cannot read config file: " + path.string());
    std::map<std::string, std::string> values;
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        require(eq != std::string::npos,
                "config parse error at line " + std::to_string(lineno) + " of " + path.string());
        std::string key = trim(line.substr(0, eq));
        if (!section.empty()) key = section + "." + key;
        values[key] = trim(line.substr(eq + 1));
    }
    return from_values(std::move(values), known_keys);
}

RunConfig RunConfig::from_values(std::map<std::string, std::string> values,
                                 const std::set<std::string>& known_keys) {
    apply_env(values, known_keys);
    reject_unknown(values, known_keys);
    RunConfig cfg;
    cfg.values_ = std::move(values);
    return cfg;
}

std::string RunConfig::get_str(const std::string& key, const std::string& def) {
    const auto it = values_.find(key);
    const std::string v = (it != values_.end()) ? it->second : def;
    resolved_[key] = v;
    return v;
}

long RunConfig::get_int(const std::string& key, long def) {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        resolved_[key] = std::to_string(def);
        return def;
    }
    try {
        size_t pos = 0;
        const long v = std::stol(it->second, &pos);
        require(pos == it->second.size(), "");
        resolved_[key] = it->second;
        return v;
    } catch (...) {
        throw std::invalid_argument("config key " + key + " is not an integer: " + it->second);
    }
}

double RunConfig::get_real(const std::string& key, double def) {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%g", def);
        resolved_[key] = buf;
        return def;
    }
    try {
        size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        require(pos == it->second.size(), "");
        resolved_[key] = it->second;
        return v;
    } catch (...) {
        throw std::invalid_argument("config key " + key + " is not a number: " + it->second);
    }
}

bool RunConfig::get_bool(const std::string& key, bool def) {
    const auto it = values_.find(key);
    if (it == values_.end()) {
        resolved_[key] = def ? "true" : "false";
        return def;
    }
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    resolved_[key] = v;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config key " + key + " is not a boolean: " + it->second);
}

void RunConfig::write_resolved(const std::filesystem::path& path,
                               const std::map<std::string, std::string>& extra) const {
    std::ofstream os(path, std::ios::trunc | std::ios::binary);
    require(static_cast<bool>(os), "cannot write resolved config: " + path.string());
    for (const auto& [k, v] : resolved_) os << k << " = " << v << "\n";
    for (const auto& [k, v] : extra) os << k << " = " << v << "\n";
}

}  // namespace cqsr::config
