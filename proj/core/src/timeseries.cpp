#include "co2occ/timeseries.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "co2occ/errors.hpp"

namespace co2occ {

void HorizonConfig::validate() const {
    if (l < 2 || s < 1 || s >= l)
        throw ConfigError("horizon config requires 1 <= s < l, got l=" +
                          std::to_string(l) + " s=" + std::to_string(s));
}

void DayRecord::validate() const {
    const std::size_t m = co2.size();
    if (m < 1) throw DataError(day_id + ": empty day");
    if (occupancy.size() != m || venting.size() != m)
        throw DataError(day_id + ": co2/occupancy/venting lengths differ");
    if (sample_interval_s <= 0)
        throw DataError(day_id + ": non-positive sample interval");
    for (std::size_t i = 0; i < m; ++i) {
        if (!std::isfinite(co2[i]) || co2[i] < 0.0)
            throw DataError(day_id + ": bad co2 at row " + std::to_string(i));
        if (occupancy[i] < 0)
            throw DataError(day_id + ": negative occupancy at row " + std::to_string(i));
        if (venting[i] != 0 && venting[i] != 1)
            throw DataError(day_id + ": non-binary venting at row " + std::to_string(i));
    }
}

Eigen::VectorXd InputWindow::flatten() const {
    Eigen::VectorXd x(co2_window.size() + occ_window.size() + vent_window.size());
    Eigen::Index j = 0;
    for (double v : co2_window) x[j++] = v;
    for (double v : occ_window) x[j++] = v;
    for (double v : vent_window) x[j++] = v;
    return x;
}

InputWindow window_at(const std::vector<double>& co2,
                      const std::vector<double>& occ_source,
                      const std::vector<int>& venting,
                      int k, const HorizonConfig& config) {
    config.validate();
    const int l = config.l;
    if (k < l)
        throw DataError("insufficient history: k=" + std::to_string(k) +
                        " < l=" + std::to_string(l));
    if (static_cast<int>(co2.size()) <= k || static_cast<int>(venting.size()) <= k)
        throw DataError("window_at: k out of range");
    if (static_cast<int>(occ_source.size()) < k)
        throw DataError("window_at: occupancy source shorter than k");

    InputWindow w;
    w.co2_window.assign(co2.begin() + (k - l), co2.begin() + k + 1);
    w.occ_window.assign(occ_source.begin() + (k - l), occ_source.begin() + k);
    w.vent_window.reserve(l + 1);
    for (int i = k - l; i <= k; ++i) w.vent_window.push_back(static_cast<double>(venting[i]));
    return w;
}

InputWindow window_at(const DayRecord& day,
                      const std::vector<double>& occ_source,
                      int k, const HorizonConfig& config) {
    return window_at(day.co2, occ_source, day.venting, k, config);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_num(const std::string& cell, std::size_t row, const std::string& col) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &pos);
    } catch (const std::exception&) {
        throw DataError("row " + std::to_string(row) + ": non-numeric " + col +
                        " value '" + cell + "'");
    }
    if (pos != cell.size())
        throw DataError("row " + std::to_string(row) + ": non-numeric " + col +
                        " value '" + cell + "'");
    return v;
}

} // namespace

DayCsv load_day_csv_full(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);

    DayCsv out;
    out.day.day_id = "day";
    std::string line;
    bool header_seen = false;
    std::size_t row = 0;
    std::size_t ncols = 0;
    long expected_minute = 0;

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::stringstream ss(line.substr(1));
            std::string tok;
            while (ss >> tok) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = tok.substr(0, eq);
                const std::string val = tok.substr(eq + 1);
                if (key == "sample_interval_s")
                    out.day.sample_interval_s = static_cast<int>(parse_num(val, 0, key));
                else if (key == "day_id")
                    out.day.day_id = val;
            }
            continue;
        }
        if (!header_seen) {
            auto cols = split_csv_line(line);
            if (cols.size() < 4 || cols[0] != "minute_index" || cols[1] != "co2_ppm" ||
                cols[2] != "occupancy" || cols[3] != "venting")
                throw DataError(path + ": bad header, expected "
                                "minute_index,co2_ppm,occupancy,venting[,...]");
            for (std::size_t i = 4; i < cols.size(); ++i) out.extra_names.push_back(cols[i]);
            out.extra_cols.resize(out.extra_names.size());
            ncols = cols.size();
            header_seen = true;
            continue;
        }
        ++row;
        auto cells = split_csv_line(line);
        if (cells.size() != ncols)
            throw DataError("row " + std::to_string(row) + ": expected " +
                            std::to_string(ncols) + " columns, got " +
                            std::to_string(cells.size()));
        const long minute = static_cast<long>(parse_num(cells[0], row, "minute_index"));
        if (minute != expected_minute)
            throw DataError("row " + std::to_string(row) + ": minute_index " +
                            std::to_string(minute) + ", expected " +
                            std::to_string(expected_minute));
        ++expected_minute;
        const double co2 = parse_num(cells[1], row, "co2_ppm");
        const double occ = parse_num(cells[2], row, "occupancy");
        const double vent = parse_num(cells[3], row, "venting");
        if (occ < 0.0 || occ != std::floor(occ))
            throw DataError("row " + std::to_string(row) + ": occupancy must be a "
                            "non-negative integer, got '" + cells[2] + "'");
        if (vent != 0.0 && vent != 1.0)
            throw DataError("row " + std::to_string(row) + ": venting must be 0 or 1, got '" +
                            cells[3] + "'");
        out.day.co2.push_back(co2);
        out.day.occupancy.push_back(static_cast<int>(occ));
        out.day.venting.push_back(static_cast<int>(vent));
        for (std::size_t i = 0; i < out.extra_cols.size(); ++i)
            out.extra_cols[i].push_back(parse_num(cells[4 + i], row, out.extra_names[i]));
    }
    if (!header_seen) throw DataError(path + ": missing header row");
    out.day.validate();
    return out;
}

DayRecord load_day_csv(const std::string& path) { return load_day_csv_full(path).day; }

void write_day_csv(const std::string& path, const DayRecord& day,
                   const std::vector<std::string>& extra_names,
                   const std::vector<std::vector<double>>& extra_cols) {
    day.validate();
    if (extra_names.size() != extra_cols.size())
        throw ConfigError("write_day_csv: extra column name/data mismatch");
    for (const auto& col : extra_cols)
        if (col.size() != day.size())
            throw ConfigError("write_day_csv: extra column length mismatch");

    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out << "# sample_interval_s=" << day.sample_interval_s << " day_id=" << day.day_id << "\n";
    out << "minute_index,co2_ppm,occupancy,venting";
    for (const auto& name : extra_names) out << ',' << name;
    out << "\n";
    for (std::size_t i = 0; i < day.size(); ++i) {
        out << i << ',' << format_double(day.co2[i]) << ',' << day.occupancy[i] << ','
            << day.venting[i];
        for (const auto& col : extra_cols) out << ',' << format_double(col[i]);
        out << "\n";
    }
}

} // namespace co2occ
