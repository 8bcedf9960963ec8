#pragma once

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "densecode/channels.hpp"
#include "densecode/metrics.hpp"
#include "densecode/protocol.hpp"

namespace densecode {

struct ExperimentRecord {
    double p = 0.0;
    double q = 0.0;
    double fidelity = 0.0;
    double qd = 0.0;
    double eof = 0.0;
    double capacity = 0.0;
};

struct RegressionFit {
    double alpha = 0.0;
    double beta_qd = 0.0;
    double beta_eof = 0.0;
    double r2 = 0.0;
    double mse = 0.0;
};

// Uniform (p, q) grid over the unit square, p as the outer loop, evaluating
// the composite channel on phi+ at every node.
inline std::vector<ExperimentRecord> sweep_noise_grid(int p_steps = 21, int q_steps = 21) {
    if (p_steps < 2 || q_steps < 2)
        throw std::invalid_argument("sweep_noise_grid: need at least 2 steps per axis");
    std::vector<ExperimentRecord> records;
    records.reserve(static_cast<std::size_t>(p_steps) * static_cast<std::size_t>(q_steps));
    const cmatrix bell = bell_state(BellKind::phi_plus);
    for (int i = 0; i < p_steps; ++i) {
        const double p = i / (p_steps - 1.0);
        for (int j = 0; j < q_steps; ++j) {
            const double q = j / (q_steps - 1.0);
            const cmatrix state = composite_channel_apply({p, q}, bell, 0);
            const CorrelationReport rep = correlation_report(state);
            records.push_back(
                {p, q, rep.fidelity, rep.qd, rep.eof, channel_capacity(state)});
        }
    }
    return records;
}

// Two-regressor least squares, fidelity ~ alpha + beta_qd*QD + beta_eof*EoF,
// solved in centered form.  A constant target degenerates gracefully (zero
// slopes, R^2 = 1); collinear regressors are an input error.
inline RegressionFit fit_regression(const std::vector<ExperimentRecord>& records) {
    const auto n = static_cast<double>(records.size());
    if (records.size() < 3)
        throw std::invalid_argument("fit_regression: need at least 3 records");

    double m1 = 0.0, m2 = 0.0, my = 0.0;
    for (const ExperimentRecord& r : records) {
        m1 += r.qd;
        m2 += r.eof;
        my += r.fidelity;
    }
    m1 /= n;
    m2 /= n;
    my /= n;

    double s11 = 0.0, s12 = 0.0, s22 = 0.0, sy1 = 0.0, sy2 = 0.0;
    for (const ExperimentRecord& r : records) {
        const double x1 = r.qd - m1, x2 = r.eof - m2, y = r.fidelity - my;
        s11 += x1 * x1;
        s12 += x1 * x2;
        s22 += x2 * x2;
        sy1 += x1 * y;
        sy2 += x2 * y;
    }
    const double det = s11 * s22 - s12 * s12;
    if (det <= 1e-12 * std::max(s11 * s22, 1e-300))
        throw std::invalid_argument("fit_regression: regressors are collinear");

    RegressionFit fit;
    fit.beta_qd = (s22 * sy1 - s12 * sy2) / det;
    fit.beta_eof = (s11 * sy2 - s12 * sy1) / det;
    fit.alpha = my - fit.beta_qd * m1 - fit.beta_eof * m2;

    double ss_res = 0.0, ss_tot = 0.0;
    for (const ExperimentRecord& r : records) {
        const double pred = fit.alpha + fit.beta_qd * r.qd + fit.beta_eof * r.eof;
        ss_res += (r.fidelity - pred) * (r.fidelity - pred);
        ss_tot += (r.fidelity - my) * (r.fidelity - my);
    }
    fit.r2 = ss_tot < 1e-30 ? 1.0 : 1.0 - ss_res / ss_tot;
    fit.mse = ss_res / n;
    return fit;
}

// Shortest text that round-trips a double exactly.
inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline constexpr const char* csv_header = "p,q,fidelity,qd,eof,capacity";

inline std::string csv_string(const std::vector<ExperimentRecord>& records) {
    std::string out = csv_header;
    out += '\n';
    for (const ExperimentRecord& r : records) {
        out += format_g17(r.p);
        out += ',';
        out += format_g17(r.q);
        out += ',';
        out += format_g17(r.fidelity);
        out += ',';
        out += format_g17(r.qd);
        out += ',';
        out += format_g17(r.eof);
        out += ',';
        out += format_g17(r.capacity);
        out += '\n';
    }
    return out;
}

inline void write_csv(const std::string& path, const std::vector<ExperimentRecord>& records) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::invalid_argument("write_csv: cannot open " + path);
    file << csv_string(records);
    file.flush();
    if (!file) throw std::invalid_argument("write_csv: write failed for " + path);
}

namespace detail {

inline double parse_csv_double(std::string_view token) {
    double value = 0.0;
    const auto* begin = token.data();
    const auto* end = token.data() + token.size();
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw std::invalid_argument("read_csv: bad numeric field '" + std::string(token) + "'");
    return value;
}

}  // namespace detail

inline std::vector<ExperimentRecord> read_csv(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::invalid_argument("read_csv: cannot open " + path);
    std::string line;
    if (!std::getline(file, line) || line != csv_header)
        throw std::invalid_argument("read_csv: missing or wrong header in " + path);
    std::vector<ExperimentRecord> records;
    while (std::getline(file, line)) {
        if (line.empty()) continue;
        std::array<double, 6> fields{};
        std::string_view rest = line;
        for (int k = 0; k < 6; ++k) {
            const std::size_t comma = rest.find(',');
            if ((k < 5) != (comma != std::string_view::npos))
                throw std::invalid_argument("read_csv: row with wrong field count in " + path);
            const std::string_view token = k < 5 ? rest.substr(0, comma) : rest;
            fields[static_cast<std::size_t>(k)] = detail::parse_csv_double(token);
            if (k < 5) rest.remove_prefix(comma + 1);
        }
        records.push_back(
            {fields[0], fields[1], fields[2], fields[3], fields[4], fields[5]});
    }
    return records;
}

}  // namespace densecode
