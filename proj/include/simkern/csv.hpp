#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "simkern/errors.hpp"
#include "simkern/harness.hpp"
#include "simkern/matrix.hpp"

namespace simkern {

// 17 significant digits: enough that a read-back double is bit-identical,
// so rewriting a matrix file reproduces it byte for byte.
inline std::string format_double_17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline double parse_double_field(const std::string& field) {
    double v = 0.0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw ConfigError("malformed numeric field `" + field + "`");
    return v;
}

inline void write_matrix_csv(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open `" + path + "` for writing");
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_double_17(m(r, c));
        }
        out << '\n';
    }
}

inline Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw KernelNotFound("cannot open `" + path + "`");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        for (const auto& field : split_csv_line(line)) row.push_back(parse_double_field(field));
        if (!rows.empty() && row.size() != rows.front().size())
            throw ConfigError("ragged rows in `" + path + "`");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError("empty matrix file `" + path + "`");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
    return m;
}

// Tabular files with a header row; all cells rendered with the shortest
// round-trip decimal form.
inline void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                            const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open `" + path + "` for writing");
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) out << ',';
        out << header[c];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << row[c];
        }
        out << '\n';
    }
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) return c;
        throw ConfigError("missing column `" + name + "`");
    }
};

inline CsvTable read_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open `" + path + "`");
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty table file `" + path + "`");
    table.header = split_csv_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = split_csv_line(line);
        if (row.size() != table.header.size())
            throw ConfigError("ragged rows in `" + path + "`");
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline void write_results_csv(const std::string& path, const std::vector<ResultRecord>& records) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : records)
        rows.push_back({std::to_string(r.repetition), format_double(r.subsample), r.algorithm,
                        r.hyperparams, format_double_17(r.val_metric),
                        format_double_17(r.test_metric)});
    write_table_csv(path,
                    {"repetition", "subsample", "algorithm", "hyperparams", "val_metric",
                     "test_metric"},
                    rows);
}

inline std::vector<ResultRecord> read_results_csv(const std::string& path) {
    CsvTable t = read_table_csv(path);
    std::size_t c_rep = t.column("repetition"), c_sub = t.column("subsample"),
                c_alg = t.column("algorithm"), c_hp = t.column("hyperparams"),
                c_val = t.column("val_metric"), c_test = t.column("test_metric");
    std::vector<ResultRecord> out;
    for (const auto& row : t.rows) {
        ResultRecord r;
        r.repetition = static_cast<int>(parse_double_field(row[c_rep]));
        r.subsample = parse_double_field(row[c_sub]);
        r.algorithm = row[c_alg];
        r.hyperparams = row[c_hp];
        r.val_metric = row[c_val] == "-inf" ? -std::numeric_limits<double>::infinity()
                                            : parse_double_field(row[c_val]);
        r.test_metric = row[c_test] == "nan" || row[c_test] == "-nan"
                            ? std::numeric_limits<double>::quiet_NaN()
                            : parse_double_field(row[c_test]);
        out.push_back(std::move(r));
    }
    return out;
}

inline void write_boxplot_csv(const std::string& path, const std::vector<BoxplotRow>& rows) {
    std::vector<std::vector<std::string>> table;
    for (const auto& b : rows) {
        std::string outliers;
        for (std::size_t i = 0; i < b.outliers.size(); ++i) {
            if (i) outliers += ';';
            outliers += format_double_17(b.outliers[i]);
        }
        table.push_back({b.algorithm, format_double(b.subsample), format_double_17(b.median),
                         format_double_17(b.q1), format_double_17(b.q3),
                         format_double_17(b.whisker_lo), format_double_17(b.whisker_hi),
                         outliers});
    }
    write_table_csv(path,
                    {"algorithm", "subsample", "median", "q1", "q3", "whisker_lo", "whisker_hi",
                     "outliers"},
                    table);
}

inline void write_lineplot_csv(const std::string& path, const SelectBestResult& standard,
                               const SelectBestResult& simkern) {
    std::vector<std::vector<std::string>> rows;
    auto add = [&](const char* group, const SelectBestResult& r) {
        for (const auto& [s, median] : r.median_line)
            rows.push_back({group, r.algorithm, format_double(s), format_double_17(median)});
    };
    add("standard", standard);
    add("simkern", simkern);
    write_table_csv(path, {"group", "algorithm", "subsample", "median"}, rows);
}

}  // namespace simkern
