#include "riemdp/harness/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace riemdp::harness {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_field(const std::string& field, const std::string& path, long line_no) {
    std::size_t consumed = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &consumed);
    } catch (const std::exception&) {
        throw data_error(path + ":" + std::to_string(line_no) + ": malformed number '" + field +
                         "'");
    }
    while (consumed < field.size() && std::isspace(static_cast<unsigned char>(field[consumed]))) {
        ++consumed;
    }
    if (consumed != field.size()) {
        throw data_error(path + ":" + std::to_string(line_no) + ": malformed number '" + field +
                         "'");
    }
    return v;
}

}  // namespace

std::vector<LandmarkConfig> load_landmarks(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open landmark file " + path);
    std::vector<LandmarkConfig> shapes;
    std::string line;
    long line_no = 0;
    Eigen::Index k = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') continue;
        auto fields = split_fields(line);
        if (fields.size() % 2 != 0 || fields.size() < 6) {
            throw data_error(path + ":" + std::to_string(line_no) +
                             ": expected an even number (>= 6) of coordinates, got " +
                             std::to_string(fields.size()));
        }
        const Eigen::Index this_k = static_cast<Eigen::Index>(fields.size() / 2);
        if (k < 0) {
            k = this_k;
        } else if (this_k != k) {
            throw data_error(path + ":" + std::to_string(line_no) + ": shape has " +
                             std::to_string(this_k) + " landmarks, earlier shapes have " +
                             std::to_string(k));
        }
        LandmarkConfig c(k);
        for (Eigen::Index j = 0; j < k; ++j) {
            const double x = parse_field(fields[2 * j], path, line_no);
            const double y = parse_field(fields[2 * j + 1], path, line_no);
            c[j] = std::complex<double>(x, y);
        }
        shapes.push_back(std::move(c));
    }
    if (shapes.empty()) throw data_error(path + ": no shapes found (empty input)");
    return shapes;
}

void write_landmarks(const std::string& path, std::span<const LandmarkConfig> shapes,
                     std::span<const std::string> comments) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write landmark file " + path);
    for (const auto& c : comments) out << "# " << c << "\n";
    for (const auto& shape : shapes) {
        for (Eigen::Index j = 0; j < shape.size(); ++j) {
            if (j > 0) out << ",";
            out << format_double(shape[j].real()) << "," << format_double(shape[j].imag());
        }
        out << "\n";
    }
}

std::string results_to_csv(std::span<const ResultRow> rows) {
    std::ostringstream out;
    out << "manifold,mechanism,n,replicate,utility_euclidean,utility_intrinsic,seed,wall_ms,"
           "error\n";
    for (const auto& r : rows) {
        out << r.manifold << "," << r.mechanism << "," << r.n << "," << r.replicate << ",";
        if (r.has_euclidean) out << format_double(r.utility_euclidean);
        out << ",";
        if (r.has_intrinsic) out << format_double(r.utility_intrinsic);
        out << "," << r.seed << "," << r.wall_ms << "," << r.error << "\n";
    }
    return out.str();
}

void write_results(std::span<const ResultRow> rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write results file " + path);
    out << results_to_csv(rows);
}

std::vector<SummaryRow> summarize(std::span<const ResultRow> rows) {
    std::vector<SummaryRow> out;
    auto find = [&out](const ResultRow& r) -> SummaryRow* {
        for (auto& s : out) {
            if (s.mechanism == r.mechanism && s.n == r.n) return &s;
        }
        return nullptr;
    };
    // two passes: collect counts and means, then spread for the SE
    for (const auto& r : rows) {
        if (!r.error.empty() || !r.has_euclidean) continue;
        SummaryRow* s = find(r);
        if (!s) {
            out.push_back(SummaryRow{r.manifold, r.mechanism, r.n, 0, 0.0, 0.0});
            s = &out.back();
        }
        s->count += 1;
        s->mean_utility += r.utility_euclidean;
    }
    for (auto& s : out) {
        if (s.count > 0) s.mean_utility /= static_cast<double>(s.count);
    }
    for (const auto& r : rows) {
        if (!r.error.empty() || !r.has_euclidean) continue;
        SummaryRow* s = find(r);
        const double d = r.utility_euclidean - s->mean_utility;
        s->two_se += d * d;
    }
    for (auto& s : out) {
        if (s.count > 1) {
            const double var = s.two_se / static_cast<double>(s.count - 1);
            s.two_se = 2.0 * std::sqrt(var / static_cast<double>(s.count));
        } else {
            s.two_se = 0.0;
        }
    }
    return out;
}

std::string summary_to_csv(std::span<const SummaryRow> rows) {
    std::ostringstream out;
    out << "manifold,mechanism,n,replicates,mean_utility,two_se\n";
    for (const auto& s : rows) {
        out << s.manifold << "," << s.mechanism << "," << s.n << "," << s.count << ","
            << format_double(s.mean_utility) << "," << format_double(s.two_se) << "\n";
    }
    return out.str();
}

void write_summary(std::span<const ResultRow> rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write summary file " + path);
    out << summary_to_csv(summarize(rows));
}

void write_plot_script(const std::string& script_path, const std::string& summary_path,
                       std::span<const SummaryRow> rows) {
    std::vector<std::string> mechanisms;
    for (const auto& s : rows) {
        if (std::find(mechanisms.begin(), mechanisms.end(), s.mechanism) == mechanisms.end()) {
            mechanisms.push_back(s.mechanism);
        }
    }
    std::ofstream out(script_path);
    if (!out) throw data_error("cannot write plot script " + script_path);
    out << "set datafile separator ','\n"
        << "set logscale xy\n"
        << "set xlabel 'n'\n"
        << "set ylabel 'mean utility (ambient distance)'\n"
        << "set key top right\n"
        << "plot ";
    for (std::size_t i = 0; i < mechanisms.size(); ++i) {
        if (i > 0) out << ", \\\n     ";
        out << "'" << summary_path << "' using 3:(strcol(2) eq '" << mechanisms[i]
            << "' ? $5 : 1/0):6 with yerrorlines title '" << mechanisms[i] << "'";
    }
    out << "\n";
}

}  // namespace riemdp::harness
