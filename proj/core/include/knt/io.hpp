// CSV interchange: comma-separated, '.' decimal point, optional single header
// row (auto-detected: a first row with any non-numeric token is skipped).

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace knt {

Eigen::MatrixXd read_csv_matrix(const std::string& path);

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& header = {});

}  // namespace knt
