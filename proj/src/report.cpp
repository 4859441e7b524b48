#include "loglap/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace loglap {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CheckRow CheckRow::bounded(std::string name, double measured, double tolerance, std::string note) {
    CheckRow row;
    row.name = std::move(name);
    row.measured = measured;
    row.tolerance = tolerance;
    row.at_least = false;
    row.pass = measured <= tolerance;
    row.note = std::move(note);
    return row;
}

CheckRow CheckRow::exceeds(std::string name, double measured, double tolerance, std::string note) {
    CheckRow row;
    row.name = std::move(name);
    row.measured = measured;
    row.tolerance = tolerance;
    row.at_least = true;
    row.pass = measured >= tolerance;
    row.note = std::move(note);
    return row;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::logic_error("csv row width does not match header");
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& matrix) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
        for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
            if (j) out << ',';
            out << format_double(matrix(i, j));
        }
        out << '\n';
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
}

} // namespace loglap
