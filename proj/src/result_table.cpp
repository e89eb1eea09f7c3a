#include "sta/result_table.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sta/errors.hpp"

namespace sta::experiments {

namespace {

// RFC-4180: quote fields containing comma, quote, or newline; double quotes.
std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c == '\r') {
            // tolerated line ending
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

void ResultTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) {
        throw SimError("ResultTable::add_row: row width does not match columns");
    }
    rows.push_back(std::move(row));
}

double ResultTable::at(size_t row, const std::string& column) const {
    const auto it = std::find(columns.begin(), columns.end(), column);
    if (it == columns.end() || row >= rows.size()) {
        throw SimError("ResultTable::at: unknown column or row");
    }
    return rows[row][it - columns.begin()];
}

void ResultTable::set_metadata(const std::string& key, const std::string& value) {
    metadata[key] = value;
}

void ResultTable::set_metadata(const std::string& key, double value) {
    metadata[key] = format_double(value);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const ResultTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SimError("write_csv: cannot open '" + path + "'");
    for (size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out << ",";
        out << csv_quote(table.columns[c]);
    }
    out << "\n";
    for (const auto& row : table.rows) {
        for (size_t c = 0; c < row.size(); ++c) {
            if (c) out << ",";
            out << format_double(row[c]);
        }
        out << "\n";
    }
    if (!out) throw SimError("write_csv: write failed for '" + path + "'");
}

ResultTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SimError("read_csv: cannot open '" + path + "'");
    ResultTable table;
    std::string line;
    if (!std::getline(in, line)) {
        throw SimError("read_csv: empty file '" + path + "'");
    }
    table.columns = csv_split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = csv_split(line);
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(std::stod(f));
        table.add_row(std::move(row));
    }
    return table;
}

void write_json(const ResultTable& table, const std::string& path) {
    nlohmann::json j;
    j["columns"] = table.columns;
    for (const auto& row : table.rows) {
        j["rows"].push_back(row);
    }
    if (table.rows.empty()) j["rows"] = nlohmann::json::array();
    j["metadata"] = table.metadata;
    std::ofstream out(path);
    if (!out) throw SimError("write_json: cannot open '" + path + "'");
    out << j.dump(2) << "\n";
}

void write_metadata_json(const ResultTable& table, const std::string& path) {
    nlohmann::json j = table.metadata;
    std::ofstream out(path);
    if (!out) throw SimError("write_metadata_json: cannot open '" + path + "'");
    out << j.dump(2) << "\n";
}

void write_plot_script(const ResultTable& table, const std::string& csv_name,
                       const std::string& title, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SimError("write_plot_script: cannot open '" + path + "'");
    out << "#!/usr/bin/env python3\n"
        << "# Plots " << csv_name << " (first column as x, remaining as curves).\n"
        << "import csv\n"
        << "import os\n"
        << "import matplotlib\n"
        << "matplotlib.use('Agg')\n"
        << "import matplotlib.pyplot as plt\n\n"
        << "here = os.path.dirname(os.path.abspath(__file__))\n"
        << "with open(os.path.join(here, '" << csv_name << "')) as f:\n"
        << "    reader = csv.reader(f)\n"
        << "    header = next(reader)\n"
        << "    data = [[float(x) for x in row] for row in reader if row]\n\n"
        << "cols = list(zip(*data)) if data else [[] for _ in header]\n"
        << "plt.figure(figsize=(7, 5))\n"
        << "for i in range(1, len(header)):\n"
        << "    plt.plot(cols[0], cols[i], label=header[i])\n"
        << "plt.xlabel(header[0] if header else '')\n"
        << "plt.legend()\n"
        << "plt.title('" << title << "')\n"
        << "plt.tight_layout()\n"
        << "plt.savefig(os.path.join(here, '" << title << ".png'), dpi=150)\n"
        << "print('wrote " << title << ".png')\n";
}

} // namespace sta::experiments
