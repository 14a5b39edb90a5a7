#include "amc/io.hpp"

#include <charconv>
#include <cstddef>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace amc {
namespace {

double parse_double(const std::string& text, const std::string& context) {
    const char* first = text.data();
    const char* last = first + text.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    while (last != first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw InvalidInput(context + ": cannot parse number '" + text + "'");
    return value;
}

long long parse_int(const std::string& text, const std::string& context) {
    const char* first = text.data();
    const char* last = first + text.size();
    while (first != last && (*first == ' ' || *first == '\t')) ++first;
    while (last != first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw InvalidInput(context + ": cannot parse integer '" + text + "'");
    return value;
}

bool comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\r') continue;
        return c == '#';
    }
    return true;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/// Splits one CSV line; double quotes protect commas, doubled quotes escape
/// a literal quote.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

void write_headers(std::ostream& out, const std::vector<std::string>& header_lines) {
    for (const auto& line : header_lines) out << "# " << line << '\n';
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in.is_open()) throw InvalidInput("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out.is_open()) throw InvalidInput("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc()) throw Error("number formatting failed");
    return std::string(buffer, ptr);
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (comment_or_blank(line)) continue;
        const auto fields = split_csv_line(line);
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& field : fields) row.push_back(parse_double(field, path));
        if (!rows.empty() && row.size() != rows.front().size())
            throw InvalidInput(path + ": ragged rows (expected " +
                               std::to_string(rows.front().size()) + " columns)");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InvalidInput(path + ": no matrix data");
    if (rows.size() != rows.front().size())
        throw InvalidInput(path + ": matrix must be square, got " + std::to_string(rows.size()) +
                           "x" + std::to_string(rows.front().size()));
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out = open_output(path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
    if (!out) throw Error("failed writing '" + path + "'");
}

Eigen::VectorXd read_vector(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (comment_or_blank(line)) continue;
        values.push_back(parse_double(line, path));
    }
    if (values.empty()) throw InvalidInput(path + ": no vector data");
    return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                             static_cast<Eigen::Index>(values.size()));
}

void write_vector(const std::string& path, const Eigen::VectorXd& v) {
    std::ofstream out = open_output(path);
    for (Eigen::Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << '\n';
    if (!out) throw Error("failed writing '" + path + "'");
}

void write_bench_csv(std::ostream& out, const std::vector<std::string>& header_lines,
                     const std::vector<BenchRecord>& records) {
    write_headers(out, header_lines);
    out << "circuit,n,r_ohm,trial,re_vs_ideal,re_vs_oracle,assemble_ms,factor_ms,solve_ms,"
           "nnz,sparsity,status,note\n";
    for (const auto& r : records) {
        out << r.circuit << ',' << r.n << ',' << format_double(r.r_ohm) << ',' << r.trial << ','
            << format_double(r.re_vs_ideal) << ','
            << (r.re_vs_oracle ? format_double(*r.re_vs_oracle) : std::string{}) << ','
            << format_double(r.assemble_ms) << ',' << format_double(r.factor_ms) << ','
            << format_double(r.solve_ms) << ',' << r.nnz << ',' << format_double(r.sparsity)
            << ',' << (r.failed ? "failed" : "ok") << ',' << csv_escape(r.note) << '\n';
    }
}

std::vector<BenchRecord> read_bench_csv(std::istream& in) {
    std::vector<BenchRecord> records;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (comment_or_blank(line)) continue;
        if (!saw_header) {
            saw_header = true;  // column header
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 13) throw InvalidInput("bench CSV: expected 13 fields, got row '" + line + "'");
        BenchRecord r;
        r.circuit = f[0];
        r.n = parse_int(f[1], "bench CSV");
        r.r_ohm = parse_double(f[2], "bench CSV");
        r.trial = static_cast<int>(parse_int(f[3], "bench CSV"));
        r.re_vs_ideal = parse_double(f[4], "bench CSV");
        if (!f[5].empty()) r.re_vs_oracle = parse_double(f[5], "bench CSV");
        r.assemble_ms = parse_double(f[6], "bench CSV");
        r.factor_ms = parse_double(f[7], "bench CSV");
        r.solve_ms = parse_double(f[8], "bench CSV");
        r.nnz = parse_int(f[9], "bench CSV");
        r.sparsity = parse_double(f[10], "bench CSV");
        if (f[11] != "ok" && f[11] != "failed")
            throw InvalidInput("bench CSV: unknown status '" + f[11] + "'");
        r.failed = f[11] == "failed";
        r.note = f[12];
        records.push_back(std::move(r));
    }
    return records;
}

void write_curve_csv(std::ostream& out, const std::vector<std::string>& header_lines,
                     const std::vector<BiasCurvePoint>& curve) {
    write_headers(out, header_lines);
    out << "round,ratio,mean_re,trials_used\n";
    for (const auto& p : curve)
        out << p.round << ',' << format_double(p.ratio) << ',' << format_double(p.mean_re) << ','
            << p.trials_used << '\n';
}

std::vector<BiasCurvePoint> read_curve_csv(std::istream& in) {
    std::vector<BiasCurvePoint> curve;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (comment_or_blank(line)) continue;
        if (!saw_header) {
            saw_header = true;
            continue;
        }
        const auto f = split_csv_line(line);
        if (f.size() != 4) throw InvalidInput("curve CSV: expected 4 fields, got row '" + line + "'");
        BiasCurvePoint p;
        p.round = static_cast<int>(parse_int(f[0], "curve CSV"));
        p.ratio = parse_double(f[1], "curve CSV");
        p.mean_re = parse_double(f[2], "curve CSV");
        p.trials_used = static_cast<int>(parse_int(f[3], "curve CSV"));
        curve.push_back(p);
    }
    return curve;
}

void write_search_csv(std::ostream& out, const std::vector<std::string>& header_lines,
                      const BiasSearchResult& result) {
    write_headers(out, header_lines);
    out << "optimal_bias_ratio,min_re,baseline_re,delta_re\n";
    out << format_double(result.optimal_bias_ratio) << ',' << format_double(result.min_re) << ','
        << format_double(result.baseline_re) << ',' << format_double(result.delta_re) << '\n';
}

void write_bench_report_csv(std::ostream& out, const std::vector<std::string>& header_lines,
                            const BenchReport& report) {
    write_headers(out, header_lines);
    out << "n,repetitions,assemble_ms,factor_ms,solve_ms,total_ms,nnz,nnz_per_n2,status,note\n";
    for (const auto& p : report.sizes) {
        out << p.n << ',' << p.repetitions << ',' << format_double(p.assemble_ms) << ','
            << format_double(p.factor_ms) << ',' << format_double(p.solve_ms) << ','
            << format_double(p.total_ms) << ',' << p.nnz << ',' << format_double(p.nnz_per_n2)
            << ',' << (p.skipped ? "skipped" : "ok") << ',' << csv_escape(p.note) << '\n';
    }
    out << "# loglog_slope=" << format_double(report.slope) << '\n';
}

}  // namespace amc
