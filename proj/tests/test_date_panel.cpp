#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>


#include "factornet/date.hpp"
#include "factornet/error.hpp"
#include "factornet/panel.hpp"
#include "factornet/report.hpp"
#include "test_helpers.hpp"

using namespace factornet;
using namespace std::chrono;

namespace {

Date ymd(int y, unsigned m, unsigned d) { return Date{year{y}, month{m}, day{d}}; }

std::vector<Date> business_days(Date from, std::size_t n) {
    std::vector<Date> out;
    for (Date d = from; out.size() < n; d = add_days(d, 1)) {
        if (is_weekday(d)) out.push_back(d);
    }
    return out;
}

}  // namespace

TEST_CASE("date parsing accepts ISO, compact and US forms") {
    CHECK(parse_date("2019-12-31") == ymd(2019, 12, 31));
    CHECK(parse_date("19910102") == ymd(1991, 1, 2));
    CHECK(parse_date("01/02/1991") == ymd(1991, 1, 2));
    CHECK_FALSE(parse_date("2019-02-30"));
    CHECK_FALSE(parse_date("NA"));
    CHECK(format_date(ymd(2001, 3, 4)) == "2001-03-04");
}

TEST_CASE("month arithmetic clamps to the end of the month") {
    CHECK(add_months(ymd(2000, 1, 31), 1) == ymd(2000, 2, 29));
    CHECK(add_months(ymd(2001, 1, 31), 1) == ymd(2001, 2, 28));
    CHECK(add_months(ymd(2000, 3, 15), -3) == ymd(1999, 12, 15));
    CHECK(days_between(ymd(2000, 1, 1), ymd(2000, 12, 31)) == 365);
}

TEST_CASE("weekday counting matches a day-by-day walk") {
    // 2000-01-01 is a Saturday; an 18-month window holds 78 weeks plus 2 days.
    int count = 0;
    for (Date d = ymd(2000, 1, 1); d <= ymd(2001, 6, 30); d = add_days(d, 1)) {
        const weekday wd{sys_days{d}};
        if (wd != Saturday && wd != Sunday) ++count;
    }
    CHECK(count == 390);
    const auto days = business_days(ymd(2000, 1, 3), 400);
    const ReturnPanel p(days, {"a"}, Eigen::MatrixXd::Ones(1, 400));
    const ReturnPanel s = slice(p, WindowSpec{0, ymd(2000, 1, 1), ymd(2001, 6, 30)}, 100);
    CHECK(s.n_obs() == 390);
}

TEST_CASE("window grid") {
    SUBCASE("the 1991-2019 span gives 111 windows") {
        const auto w = make_windows(ymd(1991, 1, 2), ymd(2019, 12, 31), 18, 3);
        REQUIRE(w.size() == 111);
        CHECK(w.front().start == ymd(1991, 1, 1));
        CHECK(w.front().end == ymd(1992, 6, 30));
        CHECK(w.back().start == ymd(2018, 7, 1));
        CHECK(w.back().end == ymd(2019, 12, 31));
        for (std::size_t k = 0; k < w.size(); ++k) {
            CHECK(w[k].index == static_cast<int>(k));
            CHECK(add_days(add_months(w[k].start, 18), -1) == w[k].end);
            if (k > 0) CHECK(add_months(w[k - 1].start, 3) == w[k].start);
        }
    }
    SUBCASE("exactly one window") { CHECK(make_windows(ymd(2000, 1, 1), ymd(2001, 6, 30)).size() == 1); }
    SUBCASE("24 month span") {
        const auto w = make_windows(ymd(2000, 1, 1), ymd(2001, 12, 31));
        REQUIRE(w.size() == 3);
        CHECK(w[1].start == ymd(2000, 4, 1));
        CHECK(w[2].start == ymd(2000, 7, 1));
    }
    SUBCASE("count formula for month-aligned spans") {
        for (int span = 18; span <= 60; ++span) {
            const auto w = make_windows(ymd(2000, 1, 1), add_days(add_months(ymd(2000, 1, 1), span), -1), 18, 3);
            CHECK(static_cast<int>(w.size()) == (span - 18) / 3 + 1);
        }
    }
    SUBCASE("span shorter than one window") { CHECK_THROWS_AS(make_windows(ymd(2000, 1, 1), ymd(2001, 5, 31)), InputError); }
}

TEST_CASE("load_panel") {
    testutil::TempDir dir("panel");
    SUBCASE("all valid rows") {
        const auto p = dir.write("f.csv", "Date,A,B\n2000-01-03,1.25,2\n2000-01-04,3,4\n2000-01-05,5,6\n");
        const auto load = load_panel(p, "", {}, 0.01);
        CHECK(load.panel.n_obs() == 3);
        CHECK(load.panel.n_factors() == 2);
        CHECK(load.dropped_rows == 0);
        CHECK(load.panel.values()(0, 0) == doctest::Approx(0.0125).epsilon(1e-15));
    }
    SUBCASE("NA row dropped") {
        const auto p = dir.write("f.csv", "Date,A,B\n20000103,1,2\n20000104,NA,4\n20000105,5,6\n");
        const auto load = load_panel(p);
        CHECK(load.panel.n_obs() == 2);
        CHECK(load.dropped_rows == 1);
    }
    SUBCASE("tab separated with column selection") {
        const auto p = dir.write("f.tsv", "x\tdate\ty\n1\t2000-01-03\t7\n2\t2000-01-04\t8\n");
        const auto load = load_panel(p, "date", {"y"});
        CHECK(load.panel.names() == std::vector<std::string>{"y"});
        CHECK(load.panel.values()(0, 1) == 8.0);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(load_panel(dir.path() / "missing.csv"), InputError);
        const auto p = dir.write("f.csv", "Date,A\n2000-01-03,1\n");
        CHECK_THROWS_AS(load_panel(p, "", {"B"}), InputError);
        const auto q = dir.write("g.csv", "Date,A\n2000-01-03,x\n");
        CHECK_THROWS_AS(load_panel(q), InputError);
    }
    SUBCASE("panel CSV round trip is exact") {
        Rng rng(5);
        Eigen::MatrixXd v(3, 50);
        for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = rng.laplace() * 0.01;
        const ReturnPanel panel(business_days(ymd(2010, 1, 1), 50), {"a", "b", "c"}, v);
        const auto p = dir.write("rt.csv", panel_csv(panel));
        const auto back = load_panel(p).panel;
        CHECK(back.dates() == panel.dates());
        CHECK(back.names() == panel.names());
        CHECK(back.values() == panel.values());
    }
}

TEST_CASE("indicator loading and alignment") {
    testutil::TempDir dir("indicator");
    const auto vix = dir.write("vix.csv", "DATE,OPEN,HIGH,LOW,CLOSE\n01/02/1991,20,21,19,22\n01/03/1991,22,23,21,21\n");
    const auto load = load_indicator(vix, "DATE", "OPEN", "CLOSE");
    CHECK(load.series.size() == 2);
    CHECK(load.series.close()[0] == 22.0);
    const auto y = dir.write("y.csv", "DATE,T10Y3M\n1991-01-02,1.5\n1991-01-03,.\n");
    const auto spread = load_indicator(y, "DATE", "T10Y3M", "T10Y3M", -1.0);
    CHECK(spread.series.size() == 1);
    CHECK(spread.dropped_rows == 1);
    CHECK(spread.series.open()[0] == -1.5);

    const std::vector<Date> d = {ymd(2000, 1, 3), ymd(2000, 1, 4), ymd(2000, 1, 5), ymd(2000, 1, 6)};
    const ReturnPanel a({d[0], d[1], d[2]}, {"a"}, Eigen::MatrixXd::Constant(1, 3, 1.0));
    const ReturnPanel b({d[1], d[2], d[3]}, {"b"}, Eigen::MatrixXd::Constant(1, 3, 2.0));
    const auto out = align({a, b});
    CHECK(std::get<ReturnPanel>(out[0]).dates() == std::vector<Date>{d[1], d[2]});
    CHECK(std::get<ReturnPanel>(out[1]).dates() == std::vector<Date>{d[1], d[2]});
    const auto again = align(out);
    CHECK(std::get<ReturnPanel>(again[0]).dates() == std::get<ReturnPanel>(out[0]).dates());
    const ReturnPanel c({d[0], d[3]}, {"c"}, Eigen::MatrixXd::Constant(1, 2, 3.0));
    CHECK_THROWS_AS(align({a, b, c}), InputError);
    const auto same = align({a, a});
    CHECK(std::get<ReturnPanel>(same[0]).values() == a.values());
}

TEST_CASE("slice") {
    const auto days = business_days(ymd(2000, 1, 3), 200);
    const ReturnPanel p(days, {"a"}, Eigen::MatrixXd::Random(1, 200));
    const auto full = slice(p, WindowSpec{0, ymd(1999, 1, 1), ymd(2010, 1, 1)}, 100);
    CHECK(full.n_obs() == 200);
    CHECK_THROWS_AS(slice(p, WindowSpec{0, ymd(2020, 1, 1), ymd(2021, 1, 1)}, 100), InputError);
    const WindowSpec w{0, ymd(2000, 2, 1), ymd(2000, 7, 31)};
    const auto s = slice(p, w, 10);
    for (const auto& d : s.dates()) CHECK(w.contains(d));
}
