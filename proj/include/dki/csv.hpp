#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dki {

/// 17 significant digits; round-trips any double exactly.
std::string format_double(double x);

/// Minimal CSV table: `#`-prefixed comment lines, a header row, then rows.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_comment(std::string line) { comments_.push_back(std::move(line)); }
    void add_comments(const std::vector<std::string>& lines) {
        comments_.insert(comments_.end(), lines.begin(), lines.end());
    }

    class Row {
    public:
        Row& operator<<(double x);
        Row& operator<<(std::int64_t x);
        Row& operator<<(std::uint64_t x);
        Row& operator<<(int x) { return *this << static_cast<std::int64_t>(x); }
        Row& operator<<(bool x);
        Row& operator<<(const std::string& s);
        Row& operator<<(const char* s) { return *this << std::string(s); }

    private:
        friend class CsvTable;
        std::vector<std::string> cells_;
    };

    void add_row(const Row& row);
    std::size_t row_count() const { return rows_.size(); }
    std::string render() const;

private:
    std::vector<std::string> columns_;
    std::vector<std::string> comments_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace dki
