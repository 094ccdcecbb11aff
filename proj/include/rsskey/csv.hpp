// SPDX-License-Identifier: Apache-2.0
//
// rsskey - secret key generation rate bounds from RSS over LoS multipath channels
// Copyright (C) 2026 the rsskey authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rsskey/sigproc.hpp"

namespace rsskey {

/// Shortest round-trip decimal form; locale independent, '.' separator.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin != end && *begin == ' ')
        ++begin;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{})
        throw std::runtime_error("csv: cannot parse number '" + s + "'");
    return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

/// Numeric table read from CSV: '#' comment lines are skipped, a leading
/// non-numeric row is kept as the header.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline CsvTable read_numeric_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        const auto fields = split_csv_line(line);
        if (!saw_header) {
            saw_header = true;
            bool numeric = true;
            try {
                parse_double(fields.at(0));
            } catch (const std::exception&) {
                numeric = false;
            }
            if (!numeric) {
                table.header = fields;
                continue;
            }
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields)
            row.push_back(parse_double(f));
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline CsvTable read_numeric_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("csv: cannot open " + path);
    return read_numeric_csv(in);
}

/// RssDataset serialization: '#' metadata comments, then
/// frame,p_a,p_b,p_e rows.
inline void write_rss_csv(std::ostream& out, const RssDataset& ds) {
    out << "# bw_hz=" << format_double(ds.point.bw_hz)
        << " ds_s=" << format_double(ds.point.ds_s)
        << " k_db=" << format_double(ds.point.k_db)
        << " snr_db=" << format_double(ds.point.snr_db) << " seed=" << ds.seed << "\n";
    out << "frame,p_a,p_b,p_e\n";
    for (std::size_t i = 0; i < ds.size(); ++i)
        out << i << ',' << format_double(ds.p_a[i]) << ',' << format_double(ds.p_b[i]) << ','
            << format_double(ds.p_e[i]) << "\n";
}

inline void write_rss_csv_file(const std::string& path, const RssDataset& ds) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("csv: cannot open " + path + " for writing");
    write_rss_csv(out, ds);
}

/// Column-major pull of sample columns out of a generic numeric table.
inline std::vector<std::vector<double>> csv_columns(const CsvTable& table) {
    if (table.rows.empty())
        return {};
    const std::size_t n_cols = table.rows.front().size();
    std::vector<std::vector<double>> cols(n_cols);
    for (auto& c : cols)
        c.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        if (row.size() != n_cols)
            throw std::runtime_error("csv: ragged rows");
        for (std::size_t c = 0; c < n_cols; ++c)
            cols[c].push_back(row[c]);
    }
    return cols;
}

} // namespace rsskey
