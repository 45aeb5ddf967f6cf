#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include "tfrac/experiments.hpp"
#include "tfrac/report.hpp"

using namespace tfrac;

namespace {

std::string strip_wall_clock(std::string text) {
    return std::regex_replace(text, std::regex("\"wall_clock_sec\": [^,}\n]+"),
                              "\"wall_clock_sec\": 0");
}

}  // namespace

TEST_CASE("config round-trips losslessly through JSON") {
    ExperimentConfig c;
    c.experiment = ExperimentId::Edgeworth;
    c.params = ProcessParams(Kind::II, 0.7, 0.3);
    c.n_grid = {1024, 4096};
    c.replicates = 1234;
    c.seed = 0x123456789ABCDEFull;
    c.output_path = "out.json";
    c.format = OutputFormat::Csv;
    c.threads = 3;
    c.hermite_q = 4;
    c.beta = 1.0 / 0.7;
    c.delta = 0.015625;
    c.z_grid = {-2.5, 0.125, 1.75};
    c.lags = 30;
    ExperimentConfig back = ExperimentConfig::from_json_string(c.to_json_string());
    CHECK(back.experiment == c.experiment);
    CHECK(back.params.kind == c.params.kind);
    CHECK(back.params.hurst == c.params.hurst);
    CHECK(back.params.lambda == c.params.lambda);
    CHECK(back.n_grid == c.n_grid);
    CHECK(back.replicates == c.replicates);
    CHECK(back.seed == c.seed);
    CHECK(back.output_path == c.output_path);
    CHECK(back.format == c.format);
    CHECK(back.threads == c.threads);
    CHECK(back.hermite_q == c.hermite_q);
    CHECK(back.beta == c.beta);
    CHECK(back.delta == c.delta);
    CHECK(back.z_grid == c.z_grid);
    CHECK(back.lags == c.lags);
    CHECK(back.to_json_string() == c.to_json_string());
}

TEST_CASE("config JSON rejects unknown keys and bad schema") {
    CHECK_THROWS_AS(ExperimentConfig::from_json_string(
                        R"({"schema":1,"experiment":"sample","bogus":3})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(ExperimentConfig::from_json_string(R"({"experiment":"sample"})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(ExperimentConfig::from_json_string(
                        R"({"schema":2,"experiment":"sample"})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(ExperimentConfig::from_json_string(
                        R"({"schema":1,"experiment":"nope"})"),
                    std::invalid_argument);
}

TEST_CASE("seed defaults to 0xC0FFEE when absent") {
    ExperimentConfig c =
        ExperimentConfig::from_json_string(R"({"schema":1,"experiment":"cov-table"})");
    CHECK(c.seed == 0xC0FFEEull);
    CHECK(c.format == OutputFormat::Json);
    CHECK(c.threads == 0);
}

TEST_CASE("config validation") {
    ExperimentConfig c;
    c.n_grid = {0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.n_grid = {16};
    c.delta = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.delta = 1.0;
    c.beta = 0.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("reports are byte-identical apart from the wall clock") {
    ExperimentConfig c;
    c.experiment = ExperimentId::Spectral;
    c.params = ProcessParams(Kind::I, 0.5, 1.0);
    ExperimentReport a = experiments::run(c);
    ExperimentReport b = experiments::run(c);
    CHECK(strip_wall_clock(a.to_json_string()) == strip_wall_clock(b.to_json_string()));
    CHECK(a.to_csv_string() == b.to_csv_string());
    CHECK(a.all_pass());
}

TEST_CASE("path CSV round-trips bit-for-bit") {
    CovarianceModel m(ProcessParams(Kind::I, 0.7, 1.0));
    SamplePath p = sample_path(m, 1, 0.5, 7);
    std::ostringstream out;
    emit_path_csv(p, out);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "index,t,value");
    std::size_t rows = 0;
    std::string line;
    std::vector<double> parsed;
    while (std::getline(in, line)) {
        ++rows;
        auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
        parsed.push_back(std::strtod(line.c_str() + c2 + 1, nullptr));
    }
    CHECK(rows == 2);  // n = 1 path has t=0 and t=delta
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0] == 0.0);
    CHECK(parsed[1] == p.values[1]);  // 17 significant digits round-trip

    SamplePath big = sample_path(m, 64, 0.25, 9);
    std::ostringstream out2;
    emit_path_csv(big, out2);
    std::istringstream in2(out2.str());
    std::getline(in2, header);
    std::size_t i = 0;
    while (std::getline(in2, line)) {
        auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
        CHECK(std::strtod(line.c_str() + c2 + 1, nullptr) == big.values[i]);
        CHECK(line.back() != '\r');  // LF endings
        ++i;
    }
    CHECK(i == big.values.size());
}

TEST_CASE("experiment runner writes the report file") {
    ExperimentConfig c;
    c.experiment = ExperimentId::CovTable;
    c.params = ProcessParams(Kind::I, 0.5, 1.0);
    c.output_path = "test_report_tmp.json";
    ExperimentReport r = experiments::run(c);
    CHECK(r.all_pass());
    std::ifstream in(c.output_path);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == r.to_json_string());
    in.close();
    std::remove(c.output_path.c_str());
    // the grid contains cov(1,2) ~ 0.43233
    bool found = false;
    for (const auto& rec : r.records)
        if (rec.inputs.find("s=1 t=2") != std::string::npos)
            found = std::fabs(rec.estimate - 0.43233235838169365) < 1e-10;
    CHECK(found);
}

TEST_CASE("kolmogorov critical value") {
    // alpha = 1e-3 root of the Kolmogorov tail, scaled by sqrt(m)
    CHECK(experiments::kolmogorov_critical(1e-3, 2000) ==
          doctest::Approx(1.9494746035043753 / std::sqrt(2000.0)).epsilon(1e-6));
}

TEST_CASE("pvar constants coincide at H = 1/2") {
    CHECK(experiments::pvar_constant_plus(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(experiments::pvar_constant_minus(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(experiments::pvar_constant_plus(0.7) == doctest::Approx(0.74674).epsilon(1e-4));
    CHECK(experiments::pvar_constant_minus(0.7) == doctest::Approx(0.95969).epsilon(1e-4));
}
