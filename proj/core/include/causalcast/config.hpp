#ifndef CAUSALCAST_CONFIG_HPP
#define CAUSALCAST_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace causalcast {

// Flat key = value configuration with INI-style [section] headers; keys
// are addressed as "section.key". One file drives every command; CLI
// --set overrides land on top.
class Config {
  public:
    static Config load(const std::string& path);
    static Config from_string(const std::string& text);

    void set(const std::string& key, const std::string& value);
    void apply_override(const std::string& key_equals_value);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_list(const std::string& key) const;  // comma separated
    std::vector<double> get_double_list(const std::string& key) const;

    // Sorted key=value lines; the hash of this goes into report headers.
    std::string canonical() const;
    std::string hash() const;

    const std::map<std::string, std::string>& values() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace causalcast

#endif
