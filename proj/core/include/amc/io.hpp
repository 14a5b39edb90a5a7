#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "amc/compensation.hpp"
#include "amc/experiments.hpp"

namespace amc {

/// Shortest decimal representation that round-trips the exact double.
std::string format_double(double value);

/// Square matrix of conductances in siemens: N rows of N comma-separated
/// values. Blank lines and lines starting with '#' are ignored. Throws
/// InvalidInput naming the path on malformed or non-square content.
Eigen::MatrixXd read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);

/// Vector file: one value per line ('#' comments and blank lines ignored).
Eigen::VectorXd read_vector(const std::string& path);
void write_vector(const std::string& path, const Eigen::VectorXd& v);

/// BenchRecord CSV. header_lines are echoed first, one per line, prefixed
/// with "# "; then the column header; then one row per record. Every row
/// parses back losslessly through read_bench_csv (which skips '#' lines and
/// the column header).
void write_bench_csv(std::ostream& out, const std::vector<std::string>& header_lines,
                     const std::vector<BenchRecord>& records);
std::vector<BenchRecord> read_bench_csv(std::istream& in);

/// Bias curve CSV: columns round,ratio,mean_re,trials_used.
void write_curve_csv(std::ostream& out, const std::vector<std::string>& header_lines,
                     const std::vector<BiasCurvePoint>& curve);
std::vector<BiasCurvePoint> read_curve_csv(std::istream& in);

/// One-row summary of a bias search (optimal ratio, min/baseline/delta RE).
void write_search_csv(std::ostream& out, const std::vector<std::string>& header_lines,
                      const BiasSearchResult& result);

/// Scaling report CSV: per-size medians plus a trailing slope comment.
void write_bench_report_csv(std::ostream& out, const std::vector<std::string>& header_lines,
                            const BenchReport& report);

}  // namespace amc
