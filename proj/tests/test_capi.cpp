#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include "xva.h"

namespace {

struct SessionGuard {
    xva_session* s = xva_session_create();
    ~SessionGuard() { xva_session_destroy(s); }
};

} // namespace

TEST_CASE("session lifecycle and error reporting") {
    SessionGuard g;
    REQUIRE(g.s != nullptr);
    CHECK(std::strcmp(xva_last_error(g.s), "ok") == 0);

    CHECK(xva_load_config(g.s, "no_such_file_capi_test.ini") == XVA_ERR_CONFIG);
    CHECK(std::strlen(xva_last_error(g.s)) > 0);

    xva_option_report report{};
    CHECK(xva_price_option(g.s, nullptr, &report) == XVA_ERR_CONFIG);

    CHECK(xva_price_option(nullptr, nullptr, &report) == XVA_ERR_ARGUMENT);

    xva_session* other = xva_session_create(); // sessions are independent
    REQUIRE(other != nullptr);
    CHECK(std::strcmp(xva_last_error(other), "ok") == 0);
    xva_session_destroy(other);
}

TEST_CASE("built-in option example prices through the C interface") {
    SessionGuard g;
    REQUIRE(xva_use_example1_config(g.s, 1) == XVA_OK);

    int isOption = 0;
    CHECK(xva_trade_is_option(g.s, &isOption) == XVA_OK);
    CHECK(isOption == 1);
    double lamB = 0.0;
    CHECK(xva_seller_hazard_rate(g.s, &lamB) == XVA_OK);
    CHECK(lamB == 0.02);

    xva_mc_params mc;
    xva_mc_params_default(&mc);
    CHECK(mc.seed == 42);
    CHECK(mc.n_paths == 100000);
    mc.n_paths = 2000;

    xva_option_report r{};
    REQUIRE(xva_price_option(g.s, &mc, &r) == XVA_OK);
    CHECK(r.v_e == doctest::Approx(9.4134).epsilon(5e-6));
    CHECK(r.cva_b < 0.0);
    CHECK(r.cva_c == 0.0);
    CHECK(r.fva_s == doctest::Approx(0.4413).epsilon(1e-3));
    CHECK(r.fva_c == 0.0);
    CHECK(r.v_0 == doctest::Approx(r.v_e + r.cva_b + r.cva_c + r.fva_s + r.fva_b + r.fva_c)
                       .epsilon(1e-7));
    CHECK(r.iterations >= 1);
}

TEST_CASE("built-in swap example prices through the C interface") {
    SessionGuard g;
    REQUIRE(xva_use_example2_config(g.s) == XVA_OK);

    xva_swap_report r{};
    REQUIRE(xva_price_swap(g.s, 0.20, &r) == XVA_OK);
    CHECK(r.v_e == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(r.dva < 0.0);
    CHECK(r.cva > 0.0);
    CHECK(r.v_0 == doctest::Approx(r.v_e + r.dva + r.cva).epsilon(1e-12));
    CHECK(r.fair_rate < 0.0145);

    xva_option_report opt{};
    CHECK(xva_price_option(g.s, nullptr, &opt) == XVA_ERR_CONFIG);
}

TEST_CASE("sweeps write CSV files through the C interface") {
    SessionGuard g;
    REQUIRE(xva_use_example1_config(g.s, 1) == XVA_OK);
    xva_mc_params mc;
    xva_mc_params_default(&mc);
    mc.n_paths = 500;

    const char* path = "capi_sweep_test.csv";
    REQUIRE(xva_sweep_option(g.s, &mc, 0.0, 0.01, 0.02, path) == XVA_OK);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "lambda_B,V_e,CVA_B,CVA_C,FVA_S,FVA_B,FVA_C,V_0");
    int rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);
    in.close();
    std::remove(path);

    // Swap sweep refuses an option config.
    CHECK(xva_sweep_swap(g.s, 0.20, 0.0, 0.01, 0.02, path) == XVA_ERR_CONFIG);
}

TEST_CASE("validate surfaces findings through the buffer interface") {
    SessionGuard g;
    char buf[1024];
    int count = -1;
    REQUIRE(xva_validate(g.s, buf, sizeof buf, &count) == XVA_OK);
    CHECK(count == 1); // nothing loaded yet
    CHECK(std::strstr(buf, "no configuration") != nullptr);

    REQUIRE(xva_use_example1_config(g.s, 1) == XVA_OK);
    REQUIRE(xva_validate(g.s, buf, sizeof buf, &count) == XVA_OK);
    CHECK(count == 0);
    CHECK(buf[0] == '\0');

    CHECK(xva_validate(g.s, nullptr, 0, &count) == XVA_ERR_ARGUMENT);
}

TEST_CASE("curve loading reports config errors") {
    SessionGuard g;
    CHECK(xva_load_discount_curve(g.s, "missing_curve_capi_test.csv") == XVA_ERR_CONFIG);
    CHECK(xva_load_forward_curve(g.s, nullptr) == XVA_ERR_CONFIG);
}
