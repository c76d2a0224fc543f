#include "bhrvt/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bhrvt::csv {

namespace {

std::string sanitize(std::string s) {
    for (char& ch : s)
        if (ch == ' ' || ch == '\t' || ch == ',' || ch == '\n') ch = '_';
    return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

}  // namespace

RunInfo& RunInfo::add(std::string key, std::string value) {
    extra.emplace_back(std::move(key), std::move(value));
    return *this;
}

RunInfo& RunInfo::add(std::string key, double value) { return add(std::move(key), format_number(value)); }

std::string format_number(double v) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

std::string header_line(const RunInfo& info, const std::string& columns) {
    std::string h = "# command=" + sanitize(info.command) + " distribution=" + sanitize(info.distribution) +
                    " rel_tol=" + format_number(info.quadrature.rel_tol) +
                    " abs_tol=" + format_number(info.quadrature.abs_tol) +
                    " max_depth=" + std::to_string(info.quadrature.max_depth);
    for (const auto& [k, v] : info.extra) h += " " + sanitize(k) + "=" + sanitize(v);
    h += " columns=" + columns;
    return h;
}

void write_curve(std::ostream& os, const rvt::DensityCurve& c, RunInfo info) {
    info.add("period", c.period ? std::to_string(*c.period) : std::string("steady"));
    info.add("mass", c.mass);
    os << header_line(info, "x,f") << '\n';
    for (std::size_t i = 0; i < c.x.size(); ++i) os << format_number(c.x[i]) << ',' << format_number(c.f[i]) << '\n';
}

void write_surface(std::ostream& os, const rvt::DensitySurface& s, RunInfo info) {
    info.add("n1", std::to_string(s.n1)).add("n2", std::to_string(s.n2)).add("mass", s.mass);
    os << header_line(info, "x1,x2,f") << '\n';
    for (std::size_t i = 0; i < s.x1.size(); ++i)
        for (std::size_t j = 0; j < s.x2.size(); ++j)
            os << format_number(s.x1[i]) << ',' << format_number(s.x2[j]) << ',' << format_number(s.at(i, j))
               << '\n';
}

void write_moments(std::ostream& os, const stats::MomentSeries& m, RunInfo info) {
    os << header_line(info, "n,mean,std") << '\n';
    for (const auto& e : m.entries)
        os << e.n << ',' << format_number(e.mean) << ',' << format_number(e.std) << '\n';
    os << "steady," << format_number(m.steady_mean) << ',' << format_number(m.steady_std) << '\n';
}

void write_covariance(std::ostream& os, const stats::CovarianceSurface& c, RunInfo info) {
    os << header_line(info, "n1,n2,gamma,cov") << '\n';
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j)
            os << c.periods[i] << ',' << c.periods[j] << ',' << format_number(c.gamma_at(i, j)) << ','
               << format_number(c.cov_at(i, j)) << '\n';
}

void write_histograms(std::ostream& os, const std::vector<LabeledHistogram>& hs, RunInfo info) {
    os << header_line(info, "n,bin_lo,bin_hi,height,stderr") << '\n';
    for (const auto& h : hs) {
        const auto& e = h.density;
        for (std::size_t i = 0; i < e.bins(); ++i)
            os << h.label << ',' << format_number(e.bin_edges[i]) << ',' << format_number(e.bin_edges[i + 1]) << ','
               << format_number(e.heights[i]) << ',' << format_number(e.standard_errors[i]) << '\n';
    }
}

double Table::number(std::size_t r, std::size_t k) const {
    const std::string& s = rows.at(r).at(k);
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

std::string Table::meta(const std::string& key) const {
    std::istringstream ss(header);
    std::string tok;
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq != std::string::npos && tok.compare(0, eq, key) == 0 && eq == key.size()) return tok.substr(eq + 1);
    }
    return {};
}

Table read(std::istream& is) {
    Table t;
    std::string line;
    if (!std::getline(is, line) || line.empty() || line[0] != '#') throw std::runtime_error("CSV lacks a '#' header line");
    t.header = line.substr(1);
    const std::string cols = t.meta("columns");
    if (cols.empty()) throw std::runtime_error("CSV header has no columns= entry");
    t.columns = split(cols, ',');
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != t.columns.size()) {
            throw std::runtime_error("CSV row with " + std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(t.columns.size()));
        }
        t.rows.push_back(std::move(cells));
    }
    return t;
}

}  // namespace bhrvt::csv
