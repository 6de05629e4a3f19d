#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace conflictlab {

/// RFC-4180 CSV with a required header row, UTF-8, numeric payload.
struct CsvTable {
    std::vector<std::string> header;
    Eigen::MatrixXd values;
};

/// Serialize with 17 significant digits so values round-trip bit exactly.
std::string csv_to_string(const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);

/// Parse failures name the 1-based line.
CsvTable read_csv_string(const std::string& text);
CsvTable read_csv(const std::string& path);

}  // namespace conflictlab
