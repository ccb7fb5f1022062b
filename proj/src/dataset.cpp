#include "envsdr/dataset.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace envsdr {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool parse_cell(const std::string& cell, double& value, bool& missing) {
    if (cell.empty() || cell == "NA" || cell == "na" || cell == "NaN") {
        missing = true;
        return true;
    }
    missing = false;
    char* end = nullptr;
    value = std::strtod(cell.c_str(), &end);
    if (end == nullptr || *end != '\0' || end == cell.c_str()) return false;
    if (!std::isfinite(value)) missing = true;  // "nan"/"inf" spellings strtod accepts
    return true;
}

}  // namespace

DataSet ingest_csv(const std::string& path, const Schema& schema) {
    std::ifstream f(path);
    if (!f) throw InvalidInput("ingest_csv: cannot open " + path);

    std::string line;
    if (!std::getline(f, line)) throw EmptyData("ingest_csv: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = split_csv_line(line);

    // map schema roles onto file column positions by header name
    std::map<std::string, int> by_name;
    for (size_t j = 0; j < header.size(); ++j) by_name[header[j]] = static_cast<int>(j);

    struct Bound {
        int file_col;
        ColumnSpec spec;
    };
    std::vector<Bound> y_cols, x_cols, w_cols;
    for (const auto& col : schema.columns) {
        if (col.role == Role::IGNORE) continue;
        auto it = by_name.find(col.name);
        if (it == by_name.end())
            throw ParseError("ingest_csv: column '" + col.name + "' not in header", 1);
        Bound b{it->second, col};
        if (col.role == Role::RESPONSE) y_cols.push_back(b);
        else if (col.role == Role::COVARIATE) x_cols.push_back(b);
        else w_cols.push_back(b);
    }
    if (y_cols.size() != 1) throw InvalidInput("ingest_csv: schema needs exactly one response");
    if (x_cols.empty()) throw InvalidInput("ingest_csv: schema needs at least one covariate");

    std::vector<double> ybuf;
    std::vector<std::vector<double>> xbuf, wbuf;
    int dropped = 0;
    long lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() < header.size())
            throw ParseError("ingest_csv: row has " + std::to_string(cells.size()) +
                                 " cells, header has " + std::to_string(header.size()),
                             lineno);

        bool drop = false;
        auto fetch = [&](const Bound& b, double& out) {
            double v = 0.0;
            bool missing = false;
            if (!parse_cell(cells[static_cast<size_t>(b.file_col)], v, missing))
                throw ParseError("ingest_csv: non-numeric cell '" +
                                     cells[static_cast<size_t>(b.file_col)] + "' in column " +
                                     b.spec.name,
                                 lineno);
            if (missing || (b.spec.zero_as_missing && v == 0.0)) drop = true;
            out = v;
        };

        double yv = 0.0;
        fetch(y_cols[0], yv);
        std::vector<double> xrow(x_cols.size()), wrow(w_cols.size());
        for (size_t j = 0; j < x_cols.size(); ++j) fetch(x_cols[j], xrow[j]);
        for (size_t j = 0; j < w_cols.size(); ++j) fetch(w_cols[j], wrow[j]);

        if (drop) {
            ++dropped;
            continue;
        }
        ybuf.push_back(yv);
        xbuf.push_back(std::move(xrow));
        wbuf.push_back(std::move(wrow));
    }

    if (ybuf.empty()) throw EmptyData("ingest_csv: all rows dropped or file has no data rows");

    DataSet ds;
    ds.n = static_cast<int>(ybuf.size());
    ds.dropped_rows = dropped;
    ds.y_name = y_cols[0].spec.name;
    for (const auto& b : x_cols) ds.x_names.push_back(b.spec.name);
    for (const auto& b : w_cols) ds.w_names.push_back(b.spec.name);
    ds.y.resize(ds.n);
    ds.x.resize(ds.n, static_cast<Eigen::Index>(x_cols.size()));
    ds.w.resize(ds.n, static_cast<Eigen::Index>(w_cols.size()));
    for (int i = 0; i < ds.n; ++i) {
        ds.y[i] = ybuf[static_cast<size_t>(i)];
        for (size_t j = 0; j < x_cols.size(); ++j) ds.x(i, static_cast<Eigen::Index>(j)) = xbuf[static_cast<size_t>(i)][j];
        for (size_t j = 0; j < w_cols.size(); ++j) ds.w(i, static_cast<Eigen::Index>(j)) = wbuf[static_cast<size_t>(i)][j];
    }
    return ds;
}

Schema pima_schema() {
    Schema s;
    s.columns = {
        {"Pregnancies", Role::COVARIATE, false},
        {"Glucose", Role::COVARIATE, true},
        {"BloodPressure", Role::COVARIATE, true},
        {"SkinThickness", Role::COVARIATE, true},
        {"Insulin", Role::COVARIATE, true},
        {"BMI", Role::COVARIATE, true},
        {"DiabetesPedigreeFunction", Role::AUXILIARY, false},
        {"Age", Role::COVARIATE, false},
        {"Outcome", Role::RESPONSE, false},
    };
    return s;
}

void write_csv(const std::string& path, const std::vector<std::string>& names,
               const std::vector<Vector>& columns) {
    if (names.size() != columns.size())
        throw InvalidInput("write_csv: name/column count mismatch");
    if (columns.empty()) throw InvalidInput("write_csv: no columns");
    const Eigen::Index n = columns[0].size();
    for (const auto& c : columns)
        if (c.size() != n) throw InvalidInput("write_csv: ragged columns");

    std::ofstream f(path);
    if (!f) throw InvalidInput("write_csv: cannot open " + path);
    for (size_t j = 0; j < names.size(); ++j) f << (j ? "," : "") << names[j];
    f << '\n';
    char buf[40];
    for (Eigen::Index i = 0; i < n; ++i) {
        for (size_t j = 0; j < columns.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", columns[j][i]);
            f << (j ? "," : "") << buf;
        }
        f << '\n';
    }
}

}  // namespace envsdr
