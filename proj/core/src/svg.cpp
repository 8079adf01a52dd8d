#include "co2occ/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "co2occ/errors.hpp"
#include "co2occ/estimator.hpp"

namespace co2occ {

namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 60.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

std::string render_line_chart(const std::vector<Series>& series, const std::string& title,
                              const std::string& x_label, const std::string& y_label) {
    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                first = false;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;

    const double plot_w = kWidth - 2.0 * kMargin;
    const double plot_h = kHeight - 2.0 * kMargin;
    auto sx = [&](double x) { return kMargin + (x - xmin) / (xmax - xmin) * plot_w; };
    auto sy = [&](double y) { return kHeight - kMargin - (y - ymin) / (ymax - ymin) * plot_h; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
        << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
        << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << kHeight / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 18 " << kHeight / 2 << ")\">" << y_label << "</text>\n";
    out << "<text x=\"" << kMargin - 6 << "\" y=\"" << kHeight - kMargin + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(ymin)
        << "</text>\n";
    out << "<text x=\"" << kMargin - 6 << "\" y=\"" << kMargin + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(ymax)
        << "</text>\n";

    double legend_y = kMargin;
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) out << ' ';
            out << fmt(sx(s.x[i])) << ',' << fmt(sy(s.y[i]));
        }
        out << "\"/>\n";
        out << "<text x=\"" << kWidth - kMargin - 150 << "\" y=\"" << legend_y
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << s.color << "\">"
            << s.label << "</text>\n";
        legend_y += 16.0;
    }
    out << "</svg>\n";
    return out.str();
}

std::string plot_estimates_svg(const std::string& estimates_csv_path) {
    const EstimatesCsv data = load_estimates_csv(estimates_csv_path);
    if (!data.has_truth)
        throw DataError(estimates_csv_path + ": truth column required for plotting");
    Series truth{"truth", "#1f77b4", {}, {}};
    Series est{"estimate", "#d62728", {}, {}};
    for (std::size_t k = 0; k < data.minute.size(); ++k) {
        truth.x.push_back(data.minute[k]);
        truth.y.push_back(data.truth[k]);
        if (data.trace.has_estimate[k]) {
            est.x.push_back(data.minute[k]);
            est.y.push_back(data.trace.rounded[k]);
        }
    }
    return render_line_chart({truth, est}, "Occupancy estimate", "minute", "occupants");
}

void plot_estimates(const std::string& estimates_csv_path, const std::string& out_svg_path) {
    const std::string svg = plot_estimates_svg(estimates_csv_path);
    std::ofstream out(out_svg_path);
    if (!out) throw DataError("cannot write " + out_svg_path);
    out << svg;
}

std::string plot_tolerance_curves_svg(
    const std::vector<std::pair<std::string, std::map<int, double>>>& curves) {
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};
    std::vector<Series> series;
    std::size_t i = 0;
    for (const auto& [label, curve] : curves) {
        Series s{label, kColors[i % 6], {}, {}};
        for (const auto& [x, tau] : curve) {
            s.x.push_back(x);
            s.y.push_back(tau);
        }
        series.push_back(std::move(s));
        ++i;
    }
    return render_line_chart(series, "x-tolerance accuracy", "tolerance x", "tau");
}

} // namespace co2occ
