#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "../core/config.hpp"
#include "../core/run_result.hpp"

namespace tipping::io {

inline std::vector<std::string> series_columns(Engine engine) {
    std::vector<std::string> cols{"t", "u", "pbar", "wbar", "S", "k", "bankruptcies", "active", "inflation"};
    if (engine == Engine::mark1) {
        cols.push_back("R_measured");
        cols.push_back("mean_rate");
    }
    return cols;
}

inline std::string series_header(Engine engine) {
    std::string h;
    for (const auto& c : series_columns(engine)) h += (h.empty() ? "" : ",") + c;
    return h;
}

// Numbers use the shortest round-trip representation, independent of locale.
inline void write_series_csv(std::ostream& os, const RunResult& r) {
    using detail::fmt_double;
    const Engine e = r.manifest.engine;
    os << series_header(e) << '\n';
    for (const auto& s : r.series) {
        os << s.t << ',' << fmt_double(s.u) << ',' << fmt_double(s.p_bar) << ',' << fmt_double(s.w_bar) << ',' << fmt_double(s.savings) << ','
           << fmt_double(s.leverage) << ',' << s.bankruptcies << ',' << s.active << ',' << fmt_double(s.inflation);
        if (e == Engine::mark1) os << ',' << fmt_double(s.r_measured) << ',' << fmt_double(s.mean_rate);
        os << '\n';
    }
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    const std::vector<double>& column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return columns[i];
        throw std::runtime_error("CSV has no column '" + name + "'");
    }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        if (!cell.empty() && cell.back() == '\r') cell.pop_back();
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline CsvTable read_numeric_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("CSV is empty");
    t.header = split_csv_line(line);
    t.columns.resize(t.header.size());
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != t.header.size())
            throw std::runtime_error("CSV row " + std::to_string(row) + " has " + std::to_string(cells.size()) + " fields, expected " +
                                     std::to_string(t.header.size()));
        for (std::size_t i = 0; i < cells.size(); ++i) t.columns[i].push_back(detail::parse_double(t.header[i], cells[i]));
    }
    return t;
}

}  // namespace tipping::io
