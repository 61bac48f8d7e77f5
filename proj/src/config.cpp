#include "dki/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "dki/csv.hpp"
#include "dki/error.hpp"

namespace dki {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

template <typename T>
std::optional<T> parse_number(const std::string& text) {
    T value{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return value;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        if constexpr (std::is_same_v<T, double>)
            out += format_double(xs[i]);
        else if constexpr (std::is_same_v<T, std::string>)
            out += xs[i];
        else
            out += std::to_string(xs[i]);
    }
    return out;
}

}  // namespace

Config Config::parse(std::string_view text, const std::string& source) {
    Config cfg;
    cfg.source_ = source;
    std::istringstream is{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::ConfigParse, source + ":" + std::to_string(lineno) + ": expected 'key = value', got '" + trim(raw) + "'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) fail(ErrorKind::ConfigParse, source + ":" + std::to_string(lineno) + ": empty key");
        if (cfg.values_.count(key))
            fail(ErrorKind::ConfigParse, source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "' (first on line " +
                                             std::to_string(cfg.values_[key].line) + ")");
        cfg.values_[key] = Entry{value, lineno};
    }
    return cfg;
}

Config Config::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) fail(ErrorKind::ConfigParse, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse(ss.str(), path);
}

void Config::check_keys(const std::set<std::string>& allowed) const {
    for (const auto& [key, entry] : values_)
        if (!allowed.count(key))
            fail(ErrorKind::ConfigParse, source_ + ":" + std::to_string(entry.line) + ": unknown key '" + key + "'");
}

void Config::set(const std::string& key, const std::string& value) {
    auto it = values_.find(key);
    if (it == values_.end())
        values_[key] = Entry{value, 0};
    else
        it->second.value = value;
}

const Config::Entry* Config::find(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

void Config::bad_value(const std::string& key, const std::string& expected) const {
    const Entry* e = find(key);
    const std::string where = e && e->line > 0 ? source_ + ":" + std::to_string(e->line) : source_;
    fail(ErrorKind::ConfigParse, where + ": field '" + key + "' must be " + expected + (e ? ", got '" + e->value + "'" : ""));
}

void Config::record(const std::string& key, const std::string& value) {
    for (auto& [k, v] : used_)
        if (k == key) {
            v = value;
            return;
        }
    used_.emplace_back(key, value);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) {
    const Entry* e = find(key);
    const std::string value = e ? e->value : fallback;
    record(key, value);
    return value;
}

std::string Config::require_string(const std::string& key) {
    if (!find(key)) fail(ErrorKind::ConfigParse, source_ + ": missing required field '" + key + "'");
    return get_string(key, "");
}

double Config::get_double(const std::string& key, double fallback) {
    const Entry* e = find(key);
    double value = fallback;
    if (e) {
        auto parsed = parse_number<double>(e->value);
        if (!parsed) bad_value(key, "a real number");
        value = *parsed;
    }
    record(key, format_double(value));
    return value;
}

double Config::require_double(const std::string& key) {
    if (!find(key)) fail(ErrorKind::ConfigParse, source_ + ": missing required field '" + key + "'");
    return get_double(key, 0.0);
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) {
    const Entry* e = find(key);
    std::int64_t value = fallback;
    if (e) {
        auto parsed = parse_number<std::int64_t>(e->value);
        if (!parsed) bad_value(key, "an integer");
        value = *parsed;
    }
    record(key, std::to_string(value));
    return value;
}

std::int64_t Config::require_int(const std::string& key) {
    if (!find(key)) fail(ErrorKind::ConfigParse, source_ + ": missing required field '" + key + "'");
    return get_int(key, 0);
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) {
    const Entry* e = find(key);
    std::uint64_t value = fallback;
    if (e) {
        auto parsed = parse_number<std::uint64_t>(e->value);
        if (!parsed) bad_value(key, "a non-negative integer");
        value = *parsed;
    }
    record(key, std::to_string(value));
    return value;
}

std::optional<double> Config::get_optional_double(const std::string& key) {
    if (!find(key)) return std::nullopt;
    return get_double(key, 0.0);
}

std::vector<double> Config::get_double_list(const std::string& key, const std::vector<double>& fallback) {
    const Entry* e = find(key);
    std::vector<double> out = fallback;
    if (e) {
        out.clear();
        for (const auto& item : split_list(e->value)) {
            auto parsed = parse_number<double>(item);
            if (!parsed) bad_value(key, "a comma-separated list of reals");
            out.push_back(*parsed);
        }
    }
    record(key, join(out));
    return out;
}

std::vector<std::int64_t> Config::get_int_list(const std::string& key, const std::vector<std::int64_t>& fallback) {
    const Entry* e = find(key);
    std::vector<std::int64_t> out = fallback;
    if (e) {
        out.clear();
        for (const auto& item : split_list(e->value)) {
            auto parsed = parse_number<std::int64_t>(item);
            if (!parsed) bad_value(key, "a comma-separated list of integers");
            out.push_back(*parsed);
        }
    }
    record(key, join(out));
    return out;
}

std::vector<std::string> Config::get_string_list(const std::string& key, const std::vector<std::string>& fallback) {
    const Entry* e = find(key);
    std::vector<std::string> out = e ? split_list(e->value) : fallback;
    record(key, join(out));
    return out;
}

std::vector<std::string> Config::effective_lines() const {
    std::vector<std::string> out;
    out.reserve(used_.size());
    for (const auto& [k, v] : used_) out.push_back(k + " = " + v);
    return out;
}

}  // namespace dki
