#include "test_helpers.hpp"

#include "rgbm/errors.hpp"
#include "rgbm/timeseries.hpp"

#include <doctest.h>

#include <random>

using namespace rgbm;
using rgbm::test::TempDir;

namespace {

IngestError expect_ingest_error(auto &&fn) {
    try {
        fn();
    } catch (const IngestError &e) {
        return e;
    }
    FAIL("expected IngestError");
    throw std::logic_error("unreachable");
}

} // namespace

TEST_CASE("share series loads anchor rows") {
    TempDir dir;
    auto p = dir.write("s.csv", "year,s50\n1951,0.206\n2015,0.147\n");
    auto s = load_share_series(p);
    REQUIRE(s.size() == 2);
    CHECK(s.years[0] == 1951);
    CHECK(s.s50[0] == 0.206);
    CHECK(s.s50[1] == 0.147);
    CHECK_FALSE(s.s10_top.has_value());
    CHECK(s.index_of(2015) == 1u);
    CHECK_FALSE(s.index_of(1990).has_value());
}

TEST_CASE("share above one is rejected with row and column") {
    TempDir dir;
    auto p = dir.write("s.csv", "year,s50\n1989,0.2\n1990,1.2\n");
    auto e = expect_ingest_error([&] { load_share_series(p); });
    CHECK(e.kind() == IngestErrorKind::ShareOutOfRange);
    CHECK(e.line() == 3u);
    CHECK(e.column() == "s50");
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
}

TEST_CASE("share loader errors") {
    TempDir dir;
    SUBCASE("missing column") {
        auto e = expect_ingest_error([&] { load_share_series(dir.write("a.csv", "year,s10\n1951,0.2\n")); });
        CHECK(e.kind() == IngestErrorKind::MissingColumn);
        CHECK(e.column() == "s50");
    }
    SUBCASE("duplicate year") {
        auto e = expect_ingest_error(
            [&] { load_share_series(dir.write("b.csv", "year,s50\n1951,0.2\n1952,0.2\n1951,0.21\n")); });
        CHECK(e.kind() == IngestErrorKind::NonMonotonicYears);
        CHECK(e.line() == 4u);
    }
    SUBCASE("zero share") {
        auto e = expect_ingest_error([&] { load_share_series(dir.write("c.csv", "year,s50\n1951,0\n")); });
        CHECK(e.kind() == IngestErrorKind::ShareOutOfRange);
    }
    SUBCASE("top-1 above top-10") {
        auto e = expect_ingest_error([&] {
            load_share_series(dir.write("d.csv", "year,s50,s10_top,s1_top\n1951,0.2,0.3,0.4\n"));
        });
        CHECK(e.kind() == IngestErrorKind::ShareOutOfRange);
        CHECK(e.column() == "s1_top");
    }
    SUBCASE("garbage value") {
        auto e = expect_ingest_error([&] { load_share_series(dir.write("e.csv", "year,s50\n1951,abc\n")); });
        CHECK(e.kind() == IngestErrorKind::MalformedValue);
    }
    SUBCASE("missing file") {
        auto e = expect_ingest_error([&] { load_share_series(dir.path() / "nope.csv"); });
        CHECK(e.kind() == IngestErrorKind::FileNotFound);
    }
}

TEST_CASE("unsorted unique years are sorted, gaps accepted") {
    TempDir dir;
    auto s = load_share_series(dir.write("s.csv", "year,s50,s10_top,s1_top\n1955,0.21,0.35,0.1\n"
                                                  "1951,0.206,0.367,0.115\n1953,0.2,0.36,0.11\n"));
    CHECK(s.years == std::vector<int>{1951, 1953, 1955});
    CHECK(s.s50 == std::vector<double>{0.206, 0.2, 0.21});
    REQUIRE(s.s10_top.has_value());
    CHECK((*s.s10_top)[0] == 0.367);
    CHECK_FALSE(s.is_consecutive());
}

TEST_CASE("mean income series") {
    TempDir dir;
    SUBCASE("bundled 1947-2017 has 71 rows") {
        auto s = load_mean_income_series(test::data_file("india_mean_income.csv"));
        CHECK(s.size() == 71);
        CHECK(s.years.front() == 1947);
        CHECK(s.years.back() == 2017);
    }
    SUBCASE("single row is valid") {
        CHECK(load_mean_income_series(dir.write("m.csv", "year,mean_income\n1950,100\n")).size() == 1);
    }
    SUBCASE("negative income") {
        auto e = expect_ingest_error(
            [&] { load_mean_income_series(dir.write("m.csv", "year,mean_income\n1950,-5\n")); });
        CHECK(e.kind() == IngestErrorKind::NonPositiveIncome);
        CHECK(e.line() == 2u);
    }
    SUBCASE("duplicate year") {
        auto e = expect_ingest_error([&] {
            load_mean_income_series(dir.write("m.csv", "year,mean_income\n1950,5\n1950,6\n"));
        });
        CHECK(e.kind() == IngestErrorKind::NonMonotonicYears);
    }
}

TEST_CASE("price series") {
    TempDir dir;
    SUBCASE("bundled 20-year weekly rice") {
        auto s = load_price_series(test::data_file("rice.csv"));
        CHECK(s.commodity == "rice");
        CHECK(s.size() > 1000);
        CHECK(s.size() < 1050);
    }
    SUBCASE("bundled 41-year weekly gold") {
        auto s = load_price_series(test::data_file("gold.csv"));
        const auto first = std::chrono::year_month_day{s.observations.front().date}.year();
        const auto last = std::chrono::year_month_day{s.observations.back().date}.year();
        CHECK(static_cast<int>(last) - static_cast<int>(first) + 1 == 41);
    }
    SUBCASE("same date twice") {
        auto e = expect_ingest_error([&] {
            load_price_series(dir.write("p.csv", "date,price\n2000-01-07,10\n2000-01-07,11\n"));
        });
        CHECK(e.kind() == IngestErrorKind::NonMonotonicDates);
    }
    SUBCASE("non-positive price") {
        auto e = expect_ingest_error(
            [&] { load_price_series(dir.write("p.csv", "date,price\n2000-01-07,0\n")); });
        CHECK(e.kind() == IngestErrorKind::NonPositivePrice);
    }
    SUBCASE("invalid date") {
        auto e = expect_ingest_error(
            [&] { load_price_series(dir.write("p.csv", "date,price\n2000-02-30,1\n")); });
        CHECK(e.kind() == IngestErrorKind::MalformedValue);
        CHECK(e.column() == "date");
    }
    SUBCASE("explicit commodity tag") {
        auto s = load_price_series(dir.write("p.csv", "date,price\n2000-01-07,3\n"), "gur");
        CHECK(s.commodity == "gur");
    }
}

TEST_CASE("iso dates") {
    auto d = parse_iso_date("1993-01-04");
    REQUIRE(d.has_value());
    CHECK(format_iso_date(*d) == "1993-01-04");
    CHECK_FALSE(parse_iso_date("1993-1-4").has_value());
    CHECK_FALSE(parse_iso_date("1993-13-01").has_value());
}

TEST_CASE("property: serialise then reload is the identity") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> share(1e-6, 0.999);
    std::uniform_real_distribution<double> positive(1e-3, 1e6);
    TempDir dir;
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 30);
        const int start = 1900 + static_cast<int>(rng() % 100);

        ShareSeries shares;
        MeanIncomeSeries income;
        PriceSeries prices;
        prices.commodity = "p";
        const bool top = trial % 2 == 0;
        if (top) {
            shares.s10_top.emplace();
            shares.s1_top.emplace();
        }
        auto day = std::chrono::sys_days{std::chrono::year{2000} / 1 / 1};
        for (int i = 0; i < n; ++i) {
            shares.years.push_back(start + 2 * i);
            shares.s50.push_back(share(rng));
            if (top) {
                const double s10 = share(rng);
                shares.s10_top->push_back(s10);
                shares.s1_top->push_back(s10 * std::uniform_real_distribution<double>(0.01, 1.0)(rng));
            }
            income.years.push_back(start + i);
            income.mean_income.push_back(positive(rng));
            day += std::chrono::days{1 + static_cast<int>(rng() % 20)};
            prices.observations.push_back({day, positive(rng)});
        }
        CHECK(load_share_series(dir.write("s.csv", to_csv(shares))) == shares);
        CHECK(load_mean_income_series(dir.write("m.csv", to_csv(income))) == income);
        CHECK(load_price_series(dir.write("p.csv", to_csv(prices))) == prices);
    }
}
