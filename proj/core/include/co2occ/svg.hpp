#ifndef CO2OCC_SVG_HPP
#define CO2OCC_SVG_HPP

#include <map>
#include <string>
#include <vector>

namespace co2occ {

/// Deterministic SVG emitters: identical inputs give byte-identical output.

struct Series {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
};

std::string render_line_chart(const std::vector<Series>& series, const std::string& title,
                              const std::string& x_label, const std::string& y_label);

/// Truth vs estimate traces for one estimates CSV (requires the truth column).
std::string plot_estimates_svg(const std::string& estimates_csv_path);
void plot_estimates(const std::string& estimates_csv_path, const std::string& out_svg_path);

/// tau(x) curves, one per labeled estimator.
std::string plot_tolerance_curves_svg(
    const std::vector<std::pair<std::string, std::map<int, double>>>& curves);

} // namespace co2occ

#endif
