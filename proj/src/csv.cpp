#include "dki/csv.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "dki/error.hpp"

namespace dki {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CsvTable::Row& CsvTable::Row::operator<<(double x) {
    cells_.push_back(format_double(x));
    return *this;
}

CsvTable::Row& CsvTable::Row::operator<<(std::int64_t x) {
    cells_.push_back(std::to_string(x));
    return *this;
}

CsvTable::Row& CsvTable::Row::operator<<(std::uint64_t x) {
    cells_.push_back(std::to_string(x));
    return *this;
}

CsvTable::Row& CsvTable::Row::operator<<(bool x) {
    cells_.emplace_back(x ? "1" : "0");
    return *this;
}

CsvTable::Row& CsvTable::Row::operator<<(const std::string& s) {
    cells_.push_back(s);
    return *this;
}

void CsvTable::add_row(const Row& row) {
    if (row.cells_.size() != columns_.size())
        fail(ErrorKind::InvalidParameter, "csv row has " + std::to_string(row.cells_.size()) + " cells, expected " +
                                              std::to_string(columns_.size()));
    rows_.push_back(row.cells_);
}

std::string CsvTable::render() const {
    std::ostringstream os;
    for (const auto& c : comments_) os << "# " << c << '\n';
    auto line = [&os](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
    };
    line(columns_);
    for (const auto& r : rows_) line(r);
    return os.str();
}

}  // namespace dki
