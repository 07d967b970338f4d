#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>

namespace cqsr::config {

// Plain-text key=value configuration with [section] headers, '#' comments and
// LF endings. Keys flatten to "section.key". Unknown keys are rejected.
// Any key may be overridden by an environment variable with prefix CQSR_,
// dots replaced by underscores, uppercase (for example CQSR_TRAIN_SEED).
class RunConfig {
  public:
    RunConfig() = default;

    static RunConfig from_file(const std::filesystem::path& path, const std::set<std::string>& known_keys);
    static RunConfig from_values(std::map<std::string, std::string> values,
                                 const std::set<std::string>& known_keys);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get_str(const std::string& key, const std::string& def);
    long get_int(const std::string& key, long def);
    double get_real(const std::string& key, double def);
    bool get_bool(const std::string& key, bool def);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    // Every key that was consulted, with its resolved value (defaults included).
    const std::map<std::string, std::string>& resolved() const { return resolved_; }
    void write_resolved(const std::filesystem::path& path,
                        const std::map<std::string, std::string>& extra = {}) const;

  private:
    std::map<std::string, std::string> values_;
    std::map<std::string, std::string> resolved_;
};

extern const char* const kEnvPrefix;

}  // namespace cqsr::config
