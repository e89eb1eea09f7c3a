#ifndef STA_RESULT_TABLE_HPP
#define STA_RESULT_TABLE_HPP

#include <map>
#include <string>
#include <vector>

namespace sta::experiments {

// Rectangular numeric table plus run metadata (config hash, dimensions,
// tolerances, convergence info). Values print with 17 significant digits so
// a CSV round-trip is bit-exact.
struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, std::string> metadata;

    size_t n_rows() const { return rows.size(); }
    size_t n_cols() const { return columns.size(); }
    void add_row(std::vector<double> row);
    double at(size_t row, const std::string& column) const;
    void set_metadata(const std::string& key, const std::string& value);
    void set_metadata(const std::string& key, double value);
};

std::string format_double(double v); // %.17g

void write_csv(const ResultTable& table, const std::string& path);
ResultTable read_csv(const std::string& path);
void write_json(const ResultTable& table, const std::string& path);
void write_plot_script(const ResultTable& table, const std::string& csv_name,
                       const std::string& title, const std::string& path);
void write_metadata_json(const ResultTable& table, const std::string& path);

} // namespace sta::experiments

#endif
