#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dki {

/// Line-oriented `key = value` configuration with `#` comments. Keys may carry
/// dotted section prefixes (`channel.gamma`). Every value read through a getter
/// is recorded, defaults included, so the effective configuration can be echoed
/// back in a form that parses to the same run.
class Config {
public:
    static Config parse(std::string_view text, const std::string& source = "config");
    static Config load(const std::string& path);

    /// Fails (config-parse) naming the line of the first key not in `allowed`.
    void check_keys(const std::set<std::string>& allowed) const;

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback);
    std::string require_string(const std::string& key);
    double get_double(const std::string& key, double fallback);
    double require_double(const std::string& key);
    std::int64_t get_int(const std::string& key, std::int64_t fallback);
    std::int64_t require_int(const std::string& key);
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback);
    std::optional<double> get_optional_double(const std::string& key);
    std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback);
    std::vector<std::int64_t> get_int_list(const std::string& key, const std::vector<std::int64_t>& fallback);
    std::vector<std::string> get_string_list(const std::string& key, const std::vector<std::string>& fallback);

    /// `key = value` lines for every value read so far, in first-read order.
    std::vector<std::string> effective_lines() const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };

    const Entry* find(const std::string& key) const;
    [[noreturn]] void bad_value(const std::string& key, const std::string& expected) const;
    void record(const std::string& key, const std::string& value);

    std::string source_;
    std::map<std::string, Entry> values_;
    std::vector<std::pair<std::string, std::string>> used_;
};

}  // namespace dki
