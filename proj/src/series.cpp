#include "feelab/series.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "feelab/errors.hpp"
#include "json.hpp"

namespace feelab {

SeriesTable::SeriesTable(std::string name, std::vector<std::string> columns)
    : name_(std::move(name)), columns_(std::move(columns)) {
    if (columns_.empty()) {
        throw DomainError("series table needs at least one column");
    }
}

void SeriesTable::add_row(std::vector<double> row) {
    if (row.size() != columns_.size()) {
        throw DomainError("row width " + std::to_string(row.size()) + " does not match " +
                          std::to_string(columns_.size()) + " columns in '" + name_ + "'");
    }
    for (const double v : row) {
        if (!std::isfinite(v)) {
            throw DomainError("non-finite entry in series '" + name_ + "'");
        }
    }
    rows_.push_back(std::move(row));
}

void SeriesTable::set_meta(std::string key, std::string value) {
    for (auto& [k, v] : meta_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    meta_.emplace_back(std::move(key), std::move(value));
}

std::vector<double> SeriesTable::column(std::string_view label) const {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (columns_[c] == label) {
            std::vector<double> out;
            out.reserve(rows_.size());
            for (const auto& row : rows_) out.push_back(row[c]);
            return out;
        }
    }
    throw DomainError("no column '" + std::string(label) + "' in series '" + name_ + "'");
}

std::string format_number(double v) {
    // std::to_chars is locale independent, unlike printf.
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_csv(const SeriesTable& table, std::ostream& out) {
    const auto& cols = table.columns();
    for (std::size_t c = 0; c < cols.size(); ++c) {
        out << (c ? "," : "") << cols[c];
    }
    out << '\n';
    for (const auto& row : table.rows()) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << format_number(row[c]);
        }
        out << '\n';
    }
}

void write_json(const SeriesTable& table, std::ostream& out) {
    nlohmann::ordered_json doc;
    doc["name"] = table.name();
    doc["columns"] = table.columns();
    doc["rows"] = table.rows();
    auto meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : table.meta()) meta[k] = v;
    doc["meta"] = std::move(meta);
    out << doc.dump(2) << '\n';
}

}  // namespace feelab
