// test_scenario.cpp — Scenario config parsing and the command implementations

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <sstream>

#include <json.hpp>

#include "decotime/commands.hpp"

using namespace decotime;
using namespace decotime::cli;
using testing::thrown_code;

namespace {

const char* kTiltedSigmaX = R"(# tilted superposition under a sigma_x measurement
system.lambda = 1
system.observable = sigma_x
bath.eta = 0.05
bath.omega_c = 1
bath.beta = zero-temperature
initial.rho11 = 0.5
initial.re_rho12 = -0.35355339059327373
initial.im_rho12 = 0.35355339059327373   # trailing comment
threshold.f = 0.3
time.t_end = 1.5
time.samples = 16
)";

std::string error_message(const std::function<void()>& body) {
    try {
        body();
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ConfigError);
        return e.what();
    }
    FAIL("expected ConfigError");
    return {};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        out.push_back(l);
    }
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string cell; std::getline(in, cell, ',');) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

ScenarioConfig random_config(std::mt19937_64& g) {
    ScenarioConfig c;
    auto u = [&](double lo, double hi) { return testing::uniform(g, lo, hi); };
    c.system.lambda = u(0.1, 5.0);
    c.system.omega0 = u(0.0, 1.0) < 0.5 ? 0.0 : u(0.0, 2.0);
    c.system.observable = u(0, 1) < 0.5 ? dynamics::Observable::SigmaZ : dynamics::Observable::SigmaX;
    c.bath.eta = u(0.0, 5.0);
    c.bath.omega_c = u(0.1, 10.0);
    c.bath.temperature =
        u(0, 1) < 0.5 ? bath::InverseTemperature::zero_temperature() : bath::InverseTemperature::finite(u(0.01, 9.0));
    c.rho11 = u(0.0, 1.0);
    const double radius = std::sqrt(c.rho11 * (1.0 - c.rho11)) * u(0.0, 1.0);
    const double phase = u(-3.0, 3.0);
    c.re_rho12 = radius * std::cos(phase);
    c.im_rho12 = radius * std::sin(phase);
    c.basis = u(0, 1) < 0.5 ? core::Basis::Z : core::Basis::X;
    c.f = u(0.01, 0.99);
    c.criterion = u(0, 1) < 0.8 ? measurement::Criterion::Modulus : measurement::Criterion::ImaginaryRatio;
    c.method = static_cast<measurement::MethodSelector>(static_cast<int>(u(0.0, 3.999)));
    c.t_end = u(0.0, 20.0);
    c.samples = 1 + static_cast<std::size_t>(u(0.0, 500.0));
    c.format = u(0, 1) < 0.5 ? OutputFormat::Csv : OutputFormat::Json;
    if (u(0, 1) < 0.5) {
        c.output_path = "out/run_" + std::to_string(static_cast<int>(u(0, 1000))) + ".csv";
    }
    if (u(0, 1) < 0.5) {
        c.dt = u(1e-5, 1e-2);
    }
    if (u(0, 1) < 0.5) {
        SweepAxes s;
        for (int k = 0; k < 1 + static_cast<int>(u(0, 4)); ++k) {
            s.lambdas.push_back(u(0.1, 4.0));
        }
        for (int k = 0; k < 1 + static_cast<int>(u(0, 4)); ++k) {
            s.etas.push_back(u(0.0, 5.0));
        }
        s.baseline = u(0, 1) < 0.5;
        c.sweep = s;
    }
    return c;
}

} // namespace

TEST_CASE("number formatting round-trips doubles") {
    auto g = testing::rng(71);
    for (int k = 0; k < 200; ++k) {
        const double v = testing::uniform(g, -1e3, 1e3) * std::pow(10.0, testing::uniform(g, -200, 200));
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
}

TEST_CASE("config parsing") {
    const auto c = parse_config(kTiltedSigmaX);
    CHECK(c.system.lambda == 1.0);
    CHECK(c.system.observable == dynamics::Observable::SigmaX);
    CHECK(c.bath.temperature.is_zero_temperature());
    CHECK(c.im_rho12 == doctest::Approx(0.35355339059327373));
    CHECK(c.samples == 16);
    CHECK(c.method == measurement::MethodSelector::Auto);
    CHECK_FALSE(c.sweep.has_value());

    const auto hot = parse_config("system.lambda = 2\nthreshold.f = 0.5\nbath.beta = 0.25\n");
    CHECK(hot.bath.temperature.beta() == 0.25);
}

TEST_CASE("config errors name the field") {
    CHECK(error_message([] { parse_config("system.lambda = 0\nthreshold.f = 0.3\n"); })
              .find("lambda must be positive") != std::string::npos);
    CHECK(error_message([] { parse_config("system.lambda = 1\n"); }).find("threshold.f") != std::string::npos);
    CHECK(error_message([] { parse_config("system.lambda = 1\nthreshold.f = 0.3\nsystem.mass = 2\n"); })
              .find("system.mass") != std::string::npos);
    CHECK(error_message([] { parse_config("system.lambda = 1\nsystem.lambda = 2\nthreshold.f = 0.3\n"); })
              .find("duplicate") != std::string::npos);
    CHECK(error_message([] { parse_config("system.lambda = one\nthreshold.f = 0.3\n"); })
              .find("system.lambda") != std::string::npos);
    CHECK(error_message([] { parse_config("system.lambda = 1\nthreshold.f = 1.3\n"); })
              .find("threshold.f") != std::string::npos);
    CHECK(error_message([] { parse_config("system.lambda = 1\nthreshold.f = 0.3\nbath.beta = -1\n"); })
              .find("bath.beta") != std::string::npos);
    CHECK(error_message([] { parse_config("system.lambda 1\n"); }).find("line 1") != std::string::npos);
    CHECK(error_message([] { parse_config("system.lambda = 1\nthreshold.f = 0.3\ninitial.rho11 = 0.5\n"
                                          "initial.re_rho12 = 0.9\n"); })
              .find("initial") != std::string::npos);
    CHECK(error_message([] { parse_config("system.lambda = 1\nthreshold.f = 0.3\nsweep.etas = 0.1\n"); })
              .find("sweep.lambdas") != std::string::npos);
    CHECK(error_message([] { parse_config("system.lambda = 1\nthreshold.f = 0.3\nrun.method = exact\n"); })
              .find("run.method") != std::string::npos);
}

TEST_CASE("config round trip") {
    auto g = testing::rng(72);
    for (int k = 0; k < 20; ++k) {
        const ScenarioConfig c = random_config(g);
        const std::string text = emit_config(c);
        CAPTURE(text);
        const ScenarioConfig back = parse_config(text);
        CHECK(back == c);
        CHECK(emit_config(back) == text);
    }
}

TEST_CASE("trajectory command") {
    const auto c = parse_config(kTiltedSigmaX);
    const std::string csv = run_trajectory(c, OutputFormat::Csv).text;
    const auto rows = lines(csv);
    REQUIRE(rows.size() == 17);
    CHECK(rows[0] == "t,rho11,re_rho12,im_rho12,abs_rho12,method");
    const auto first = split(rows[1]);
    REQUIRE(first.size() == 6);
    CHECK(std::stod(first[4]) == doctest::Approx(0.3535534).epsilon(1e-7));
    CHECK(first[5] == "analytic_x");
    CHECK(run_trajectory(c, OutputFormat::Csv).text == csv);

    SUBCASE("eta = 0: exponential envelope") {
        auto bare = c;
        bare.bath.eta = 0.0;
        bare.system.lambda = 0.8;
        const auto out = lines(run_trajectory(bare, OutputFormat::Csv).text);
        for (std::size_t i = 1; i < out.size(); ++i) {
            const auto cells = split(out[i]);
            const double t = std::stod(cells[0]);
            CHECK(std::abs(std::stod(cells[4]) - 0.35355339059327373 * std::exp(-2.0 * 0.64 * t)) < 1e-10);
        }
    }
    SUBCASE("json envelope") {
        const auto j = nlohmann::json::parse(run_trajectory(c, OutputFormat::Json).text);
        CHECK(j["command"] == "trajectory");
        CHECK(j["version"] == std::string(version()));
        CHECK(j["config"] == emit_config(c));
        CHECK(j["results"].size() == 16);
        CHECK(j["results"][0]["method"] == "analytic_x");
        CHECK(j.contains("wall_clock_seconds"));
    }
    SUBCASE("every method produces rows") {
        for (auto m : {measurement::MethodSelector::Lindblad, measurement::MethodSelector::Hybrid}) {
            auto alt = c;
            alt.method = m;
            alt.t_end = 0.2;
            CHECK(lines(run_trajectory(alt, OutputFormat::Csv).text).size() == 17);
        }
    }
}

TEST_CASE("tmeasure command") {
    auto c = parse_config(kTiltedSigmaX);
    c.bath.eta = 0.0;
    auto j = nlohmann::json::parse(run_tmeasure(c).text);
    CHECK(j["t_m"].get<double>() == doctest::Approx(0.6019864).epsilon(1e-7));
    CHECK(j["upper_bound"].get<double>() == doctest::Approx(0.6019864).epsilon(1e-7));
    for (const char* key : {"t_m", "upper_bound", "f", "lambda", "eta", "residual", "method"}) {
        CHECK(j.contains(key));
    }

    c.bath.eta = 5.0;
    c.method = measurement::MethodSelector::Hybrid;
    j = nlohmann::json::parse(run_tmeasure(c).text);
    CHECK(j["t_m"].get<double>() < 0.6019864);
    CHECK(j["method"] == "hybrid");
}

TEST_CASE("sweep command") {
    auto c = parse_config(std::string(kTiltedSigmaX) + "sweep.lambdas = 0.5, 1, 2\nsweep.etas = 0\n");
    const auto out = run_sweep(c, OutputFormat::Csv, 2);
    CHECK(out.any_success);
    const auto rows = lines(out.text);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "lambda,eta,t_m,upper_bound,status");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto cells = split(rows[i]);
        CHECK(testing::rel_diff(std::stod(cells[2]), std::stod(cells[3])) < 1e-8);
        CHECK(cells[4] == "ok");
    }

    SUBCASE("fixed eta = 1: decreasing in lambda") {
        auto strong = c;
        strong.sweep->etas = {1.0};
        const auto r = lines(run_sweep(strong, OutputFormat::Csv, 1).text);
        CHECK(std::stod(split(r[2])[2]) < std::stod(split(r[1])[2]));
        CHECK(std::stod(split(r[3])[2]) < std::stod(split(r[2])[2]));
    }
    SUBCASE("failed cells leave t_m empty") {
        auto bad = c;
        bad.method = measurement::MethodSelector::Analytic;
        bad.bath.temperature = bath::InverseTemperature::finite(1.0);
        const auto r = run_sweep(bad, OutputFormat::Csv, 1);
        CHECK_FALSE(r.any_success);
        const auto cells = split(lines(r.text)[1]);
        CHECK(cells[2].empty());
        CHECK(cells[4] == "RequiresZeroTemperature");
    }
    SUBCASE("json rows") {
        const auto j = nlohmann::json::parse(run_sweep(c, OutputFormat::Json, 1).text);
        CHECK(j["results"].size() == 3);
        CHECK(j["results"][0]["status"] == "ok");
    }
    SUBCASE("missing sweep block") {
        CHECK(thrown_code([] { run_sweep(parse_config(kTiltedSigmaX), OutputFormat::Csv, 1); }) ==
              ErrorCode::ConfigError);
    }
}

TEST_CASE("selftest passes") {
    std::ostringstream out;
    CHECK(run_selftest(out));
    CHECK(out.str().find("FAIL") == std::string::npos);
}
