#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace feelab {

/// Named, rectangular table of finite reals plus string metadata; the common
/// output of every experiment.
class SeriesTable {
public:
    SeriesTable(std::string name, std::vector<std::string> columns);

    /// Throws DomainError on a width mismatch or a non-finite entry.
    void add_row(std::vector<double> row);
    void set_meta(std::string key, std::string value);

    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }
    const std::vector<std::pair<std::string, std::string>>& meta() const noexcept { return meta_; }

    /// Copy of one column by label; throws DomainError for an unknown label.
    std::vector<double> column(std::string_view label) const;

private:
    std::string name_;
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::pair<std::string, std::string>> meta_;
};

/// 17 significant digits, '.' decimal separator, independent of locale.
std::string format_number(double v);

/// Header row of column labels, then one line per row.
void write_csv(const SeriesTable& table, std::ostream& out);

/// {"name": ..., "columns": [...], "rows": [[...], ...], "meta": {...}}
void write_json(const SeriesTable& table, std::ostream& out);

}  // namespace feelab
