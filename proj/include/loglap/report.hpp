#pragma once

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

namespace loglap {

/// One asserted or reported quantity; every row carries the tolerance it was
/// judged against. Most checks require measured <= tolerance; detection
/// checks (at_least = true) require measured >= tolerance.
struct CheckRow {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool at_least = false;
    bool pass = false;
    std::string note;

    static CheckRow bounded(std::string name, double measured, double tolerance,
                            std::string note = "");
    static CheckRow exceeds(std::string name, double measured, double tolerance,
                            std::string note = "");
};

/// 17 significant digits, enough to round-trip a double exactly.
std::string format_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& matrix);

void write_text_file(const std::string& path, const std::string& content);

} // namespace loglap
