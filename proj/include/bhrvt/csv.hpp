#pragma once
// CSV output: one '#' header line with run metadata and the column names,
// then comma-separated rows. Numbers are written with 17 significant digits
// so that reading a file back reproduces every value bit for bit.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "bhrvt/mc.hpp"
#include "bhrvt/quad.hpp"
#include "bhrvt/rvt.hpp"
#include "bhrvt/stats.hpp"

namespace bhrvt::csv {

struct RunInfo {
    std::string command;
    std::string distribution;
    quad::QuadratureConfig quadrature;
    std::vector<std::pair<std::string, std::string>> extra;  // appended as key=value

    RunInfo& add(std::string key, std::string value);
    RunInfo& add(std::string key, double value);
};

std::string format_number(double v);
std::string header_line(const RunInfo& info, const std::string& columns);

void write_curve(std::ostream& os, const rvt::DensityCurve& c, RunInfo info);
void write_surface(std::ostream& os, const rvt::DensitySurface& s, RunInfo info);
void write_moments(std::ostream& os, const stats::MomentSeries& m, RunInfo info);
void write_covariance(std::ostream& os, const stats::CovarianceSurface& c, RunInfo info);

// One histogram block per label; the label goes in a leading `n` column.
struct LabeledHistogram {
    std::string label;
    mc::EmpiricalDensity density;
};
void write_histograms(std::ostream& os, const std::vector<LabeledHistogram>& hs, RunInfo info);

struct Table {
    std::string header;  // without the leading '#'
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    // Cell (r, k) as a double; throws std::invalid_argument if it is not a number.
    double number(std::size_t r, std::size_t k) const;
    // Value of key=value in the header, or "" when absent.
    std::string meta(const std::string& key) const;
};

// Throws std::runtime_error on a missing header or ragged rows.
Table read(std::istream& is);

}  // namespace bhrvt::csv
