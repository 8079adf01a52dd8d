#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "co2occ/errors.hpp"
#include "co2occ/timeseries.hpp"

using namespace co2occ;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

DayRecord sample_day(int n = 64) {
    DayRecord day;
    day.day_id = "day007";
    day.sample_interval_s = 60;
    for (int i = 0; i < n; ++i) {
        day.co2.push_back(400.0 + 2.5 * i);
        day.occupancy.push_back(i % 5);
        day.venting.push_back(i % 2);
    }
    return day;
}

} // namespace

TEST_CASE("horizon config dimensions and validation") {
    HorizonConfig cfg{30, 10};
    cfg.validate();
    CHECK(cfg.input_dim() == 92);
    CHECK(cfg.feature_dim() == 143);
    CHECK_THROWS_AS((HorizonConfig{30, 0}.validate()), ConfigError);
    CHECK_THROWS_AS((HorizonConfig{30, 30}.validate()), ConfigError);
    CHECK_THROWS_AS((HorizonConfig{0, 0}.validate()), ConfigError);
}

TEST_CASE("day record validation") {
    DayRecord day = sample_day(8);
    day.validate();
    SUBCASE("negative co2") {
        day.co2[3] = -1.0;
        CHECK_THROWS_AS(day.validate(), DataError);
    }
    SUBCASE("non-finite co2") {
        day.co2[3] = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(day.validate(), DataError);
    }
    SUBCASE("negative occupancy") {
        day.occupancy[0] = -2;
        CHECK_THROWS_AS(day.validate(), DataError);
    }
    SUBCASE("venting out of {0,1}") {
        day.venting[1] = 2;
        CHECK_THROWS_AS(day.validate(), DataError);
    }
    SUBCASE("length mismatch") {
        day.venting.pop_back();
        CHECK_THROWS_AS(day.validate(), DataError);
    }
}

TEST_CASE("csv round trip with metadata and extra columns") {
    const auto path = temp_file("co2occ_test_roundtrip.csv");
    const DayRecord day = sample_day();
    std::vector<double> truth_co2;
    for (std::size_t i = 0; i < day.size(); ++i) truth_co2.push_back(401.0 + 2.5 * i);
    write_day_csv(path.string(), day, {"true_co2_ppm"}, {truth_co2});

    const DayCsv loaded = load_day_csv_full(path.string());
    CHECK(loaded.day.day_id == "day007");
    CHECK(loaded.day.sample_interval_s == 60);
    CHECK(loaded.day.co2.size() == day.size());
    for (std::size_t i = 0; i < day.size(); ++i) {
        CHECK(loaded.day.co2[i] == doctest::Approx(day.co2[i]).epsilon(1e-9));
        CHECK(loaded.day.occupancy[i] == day.occupancy[i]);
        CHECK(loaded.day.venting[i] == day.venting[i]);
    }
    REQUIRE(loaded.extra_names == std::vector<std::string>{"true_co2_ppm"});
    REQUIRE(loaded.extra_cols.size() == 1);
    CHECK(loaded.extra_cols[0][10] == doctest::Approx(truth_co2[10]).epsilon(1e-9));
    std::filesystem::remove(path);
}

TEST_CASE("csv write is byte-stable") {
    const auto p1 = temp_file("co2occ_test_stable1.csv");
    const auto p2 = temp_file("co2occ_test_stable2.csv");
    const DayRecord day = sample_day();
    write_day_csv(p1.string(), day);
    write_day_csv(p2.string(), day);
    std::ifstream f1(p1), f2(p2);
    std::string s1((std::istreambuf_iterator<char>(f1)), {});
    std::string s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(s1 == s2);
    CHECK(s1.rfind("# sample_interval_s=60 day_id=day007\n", 0) == 0);
    CHECK(s1.find("minute_index,co2_ppm,occupancy,venting\n") != std::string::npos);
    std::filesystem::remove(p1);
    std::filesystem::remove(p2);
}

TEST_CASE("csv loader rejects malformed input with row numbers") {
    const auto path = temp_file("co2occ_test_bad.csv");
    SUBCASE("gap in minute_index") {
        write_text(path, "minute_index,co2_ppm,occupancy,venting\n"
                         "0,400,0,0\n"
                         "2,401,0,0\n");
        CHECK_THROWS_WITH_AS(load_day_csv(path.string()), doctest::Contains("row 2"), DataError);
    }
    SUBCASE("minute_index not starting at zero") {
        write_text(path, "minute_index,co2_ppm,occupancy,venting\n1,400,0,0\n");
        CHECK_THROWS_AS(load_day_csv(path.string()), DataError);
    }
    SUBCASE("wrong header") {
        write_text(path, "minute,co2,occ,vent\n0,400,0,0\n");
        CHECK_THROWS_AS(load_day_csv(path.string()), DataError);
    }
    SUBCASE("non-numeric cell") {
        write_text(path, "minute_index,co2_ppm,occupancy,venting\n0,abc,0,0\n");
        CHECK_THROWS_AS(load_day_csv(path.string()), DataError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_day_csv("/nonexistent/nope.csv"), DataError);
    }
    std::filesystem::remove(path);
}

TEST_CASE("window extraction slices and flattening order") {
    const HorizonConfig cfg{4, 2};
    std::vector<double> co2, occ;
    std::vector<int> vent;
    for (int i = 0; i < 12; ++i) {
        co2.push_back(100.0 + i);
        occ.push_back(10.0 + i);
        vent.push_back(i % 2);
    }
    const InputWindow w = window_at(co2, occ, vent, 6, cfg);
    REQUIRE(w.co2_window.size() == 5);
    REQUIRE(w.occ_window.size() == 4);
    REQUIRE(w.vent_window.size() == 5);
    // c_{k-l:k}
    CHECK(w.co2_window.front() == 102.0);
    CHECK(w.co2_window.back() == 106.0);
    // o_{k-l:k-1}
    CHECK(w.occ_window.front() == 12.0);
    CHECK(w.occ_window.back() == 15.0);
    // v_{k-l:k}
    CHECK(w.vent_window.front() == 0.0);
    CHECK(w.vent_window.back() == 0.0);

    const Eigen::VectorXd flat = w.flatten();
    REQUIRE(flat.size() == cfg.input_dim());
    CHECK(flat[0] == 102.0);
    CHECK(flat[4] == 106.0);
    CHECK(flat[5] == 12.0);
    CHECK(flat[8] == 15.0);
    CHECK(flat[9] == 0.0);
}

TEST_CASE("window extraction bounds") {
    const HorizonConfig cfg{4, 2};
    std::vector<double> co2(10, 400.0), occ(10, 1.0);
    std::vector<int> vent(10, 0);
    CHECK_THROWS_AS(window_at(co2, occ, vent, 3, cfg), DataError);
    CHECK_THROWS_AS(window_at(co2, occ, vent, 10, cfg), DataError);
    CHECK_NOTHROW(window_at(co2, occ, vent, 4, cfg));
    CHECK_NOTHROW(window_at(co2, occ, vent, 9, cfg));
}

TEST_CASE("format_double is fixed precision") {
    CHECK(format_double(1.0) == "1.000000");
    CHECK(format_double(-0.5) == "-0.500000");
    CHECK(format_double(420.123456) == "420.123456");
}
