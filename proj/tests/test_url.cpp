#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "phishlens/ml/rng.hpp"
#include "phishlens/url.hpp"
#include "support.hpp"

using namespace phishlens;

TEST_CASE("split and features") {
    const auto f = url_features("https://a.b.example/p/q?x=12");
    CHECK(f.https_start == 1);
    CHECK(f.ipv4_like == 0);
    CHECK(f.subdomain_count == 1);  // three labels
    CHECK(f.query_length == 4);
    CHECK(f.path_length == 4);  // "/p/q"
    CHECK(f.length == 28);

    const auto ip = url_features("http://192.168.0.1/x");
    CHECK(ip.ipv4_like == 1);
    CHECK(ip.https_start == 0);
    CHECK(ip.subdomain_count == 0);
    CHECK(url_features("http://256.1.1.1/").ipv4_like == 0);
    CHECK(url_features("HTTPS://X.TEST").https_start == 1);

    const auto ftp = url_features("ftp://host");
    CHECK(ftp.https_start == 0);
    CHECK(ftp.query_length == 0);
    CHECK(ftp.path_length == 0);

    CHECK(test::error_of([] { url_features(""); }) == Errc::invalid_argument);
}

TEST_CASE("ratios and punctuation") {
    const auto f = url_features("http://x.test/a-b_c?d=1&e=2");
    CHECK(f.digit_ratio == doctest::Approx(2.0 / 27));
    CHECK(f.digit_ratio + f.symbol_ratio <= 1.0);
    CHECK(f.path_length <= f.length);
    CHECK(f.punct_char_count == static_cast<double>(punct_char_count("http://x.test/a-b_c?d=1&e=2")));
    CHECK(punct_char_count("a/b-c=d?e&f:g.h_i") == 8);
    CHECK(url_features("https://bit.ly/abc").shortener_flag == 1);
    CHECK(url_features("https://example.org/abc").shortener_flag == 0);
    CHECK(url_schema()->size() == 10);
}

TEST_CASE("cohen's d") {
    const auto e = cohens_d({2, 4}, {1, 3});
    CHECK(e.cohens_d == doctest::Approx(0.7071).epsilon(1e-4));
    CHECK(e.pooled_sd == doctest::Approx(std::sqrt(2.0)));
    CHECK(cohens_d({1, 2, 3}, {1, 2, 3}).cohens_d == 0);
    CHECK(test::error_of([] { cohens_d({0, 0}, {1, 1}); }) == Errc::degenerate_groups);
    CHECK(test::error_of([] { cohens_d({1}, {1, 2}); }) == Errc::insufficient_data);

    const std::vector<double> a{1, 4, 6, 9}, b{2, 2, 5, 3};
    const double d = cohens_d(a, b).cohens_d;
    CHECK(cohens_d(b, a).cohens_d == doctest::Approx(-d));
    std::vector<double> a2, b2;
    for (double x : a) a2.push_back(3 * x + 10);
    for (double x : b) b2.push_back(3 * x + 10);
    CHECK(cohens_d(a2, b2).cohens_d == doctest::Approx(d));
}

TEST_CASE("effect size report sign convention") {
    const std::vector<std::string> benign{"https://example.org/about", "https://example.org/news/today",
                                          "http://shop.example.org/cart"};
    const std::vector<std::string> malicious{"http://198.51.100.7/login123", "http://x9.test/a1b2c3?id=4455",
                                             "https://secure-42.test/v/9981"};
    const auto rows = effect_size_report(benign, malicious);
    REQUIRE(rows.size() == url_schema()->size());
    for (const auto& r : rows) {
        if (r.feature == "digit_ratio") {
            REQUIRE(r.effect);
            CHECK(r.effect->cohens_d > 0);
        }
        if (r.feature == "https_start") {
            REQUIRE(r.effect);
            CHECK(r.effect->cohens_d < 0);
        }
        if (!r.effect) CHECK_FALSE(r.reason.empty());
    }
    CHECK(effects_to_csv(rows).rfind("feature,cohens_d,", 0) == 0);

    const auto same = effect_size_report(benign, benign);
    for (const auto& r : same)
        if (r.effect) CHECK(r.effect->cohens_d == 0);
}

TEST_CASE("constructed corpus reproduces a chosen effect") {
    // digit ratio of each URL is k / 40 for k digits among 40 characters
    ml::Rng rng(68);
    std::vector<std::string> benign, malicious;
    std::vector<double> rb, rm;
    auto make = [&](double mean, std::vector<std::string>& out, std::vector<double>& ratios) {
        for (int i = 0; i < 400; ++i) {
            const int k = std::clamp(static_cast<int>(std::lround(rng.normal(mean, 4.0))), 0, 26);
            std::string url = "http://h.test/";
            for (int j = 0; j < 26; ++j) url += j < k ? '7' : 'q';
            out.push_back(url);
            ratios.push_back(k / 40.0);
        }
    };
    make(10.0, benign, rb);
    make(12.72, malicious, rm);
    const double oracle = cohens_d(rm, rb).cohens_d;
    CHECK(oracle == doctest::Approx(0.68).epsilon(0.08));
    for (const auto& r : effect_size_report(benign, malicious)) {
        if (r.feature != "digit_ratio") continue;
        REQUIRE(r.effect);
        CHECK(r.effect->cohens_d == doctest::Approx(oracle).epsilon(1e-9));
        CHECK(std::abs(r.effect->cohens_d - 0.68) <= 0.05);
    }
}
