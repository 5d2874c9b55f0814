#include <doctest.h>

#include <cstdio>
#include <random>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "yflow/expression.hpp"
#include "yflow/scenario.hpp"
#include "yflow/suites.hpp"

using namespace yflow;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json base_config() {
    return json::parse(R"({
        "name": "unit",
        "m": 3,
        "grid": {"r_max": 6.0, "n": 120},
        "time": {"T": 0.2, "dt": 0.002},
        "initial": {"kind": "constant", "value": 1.0},
        "checks": [{"id": "rigidity"}, {"id": "positivity"}, {"id": "sandwich"}]
    })");
}

} // namespace

TEST_CASE("expression grammar") {
    const Expression flat = Expression::parse("0.25*sech(r/2)^4");
    for (double r : {0.0, 0.5, 1.7, 4.0})
        CHECK(flat(r) == doctest::Approx(euclidean_factor_at(r)).epsilon(1e-14));

    CHECK(Expression::parse("2+3*r")(1.0) == doctest::Approx(5.0));
    CHECK(Expression::parse("2*r^2")(2.0) == doctest::Approx(8.0));
    CHECK(Expression::parse("2^r^2")(2.0) == doctest::Approx(16.0)); // right associative
    CHECK(Expression::parse("-r + 1")(0.25) == doctest::Approx(0.75));
    CHECK(Expression::parse("exp(-r)*cosh(r)")(1.3) ==
          doctest::Approx(std::exp(-1.3) * std::cosh(1.3)));
    CHECK(Expression::parse("(1+tanh(r))/2")(0.0) == doctest::Approx(0.5));
    CHECK(Expression::parse("sinh(r)/cosh(r)")(0.9) == doctest::Approx(std::tanh(0.9)));

    CHECK_THROWS_AS(Expression::parse("2*"), config_error);
    CHECK_THROWS_AS(Expression::parse("foo(r)"), config_error);
    CHECK_THROWS_AS(Expression::parse("cosh r"), config_error);
    CHECK_THROWS_AS(Expression::parse("(r"), config_error);
    CHECK_THROWS_AS(Expression::parse("r r"), config_error);
}

TEST_CASE("config validation reports field paths") {
    const auto rejects = [](json j, const std::string& needle) {
        try {
            ScenarioConfig::from_json(j);
            FAIL_CHECK("expected rejection mentioning " << needle);
        } catch (const config_error& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    json ok = base_config();
    CHECK_NOTHROW(ScenarioConfig::from_json(ok));

    json j = base_config();
    j["m"] = 2;
    rejects(j, "m");

    j = base_config();
    j["time"].erase("dt");
    rejects(j, "time.dt");

    j = base_config();
    j["time"]["dt"] = 0.0;
    rejects(j, "time.dt");

    j = base_config();
    j["checks"][0]["id"] = "no_such_check";
    rejects(j, "checks[0].id");

    j = base_config();
    j["initial"] = {{"kind", "expression"}, {"expr", "2*"}};
    rejects(j, "initial.expr");

    j = base_config();
    j["initial"] = {{"kind", "euclidean"}};
    rejects(j, "checks[0].id"); // rigidity needs constant data

    j = base_config();
    j["initial"] = {{"kind", "constant"}, {"value", -1.0}};
    rejects(j, "initial.value");

    j = base_config();
    j["time"]["output_stamps"] = {0.0, 0.1, 0.05};
    rejects(j, "time.output_stamps");

    j = base_config();
    j["exhaustion"] = {{"k_list", {6.0, 8.0}}, {"r_obs", 3.0}};
    rejects(j, "grid.r_max"); // must equal the largest radius

    j = base_config();
    j["grid"]["r_max"] = 8.0;
    j["grid"]["n"] = 160;
    j["exhaustion"] = {{"k_list", {6.0, 8.0}}, {"r_obs", 4.0}};
    rejects(j, "exhaustion.k_list"); // k >= r_obs + 3
}

TEST_CASE("run_scenario: pure-scaling scenario passes its checks") {
    const ScenarioConfig cfg = ScenarioConfig::from_json(base_config());
    const RunResult res = run_scenario(cfg);
    REQUIRE(res.trajectory.has_value());
    CHECK(res.report.pass);
    REQUIRE(res.report.checks.size() == 3);
    for (const CheckRecord& c : res.report.checks) CHECK(c.pass);
    CHECK(res.report.h == doctest::Approx(0.05));
    CHECK(res.report.dt == doctest::Approx(0.002));
}

TEST_CASE("run_scenario: empty check list still yields a trajectory") {
    json j = base_config();
    j["checks"] = json::array();
    const RunResult res = run_scenario(ScenarioConfig::from_json(j));
    CHECK(res.report.pass);
    CHECK(res.report.checks.empty());
    REQUIRE(res.trajectory.has_value());
    CHECK(res.trajectory->states.size() == 11);
}

TEST_CASE("run_scenario: exhaustion scenario") {
    json j = base_config();
    j["name"] = "exhaust";
    j["grid"] = {{"r_max", 10.0}, {"n", 200}};
    j["initial"] = {{"kind", "euclidean"}};
    j["exhaustion"] = {{"k_list", {6.0, 8.0, 10.0}}, {"r_obs", 3.0}};
    j["checks"] = {{{"id", "completeness"}}, {{"id", "cauchy_decreasing"}},
                   {{"id", "positivity"}}, {{"id", "sandwich"}}};
    const RunResult res = run_scenario(ScenarioConfig::from_json(j));
    REQUIRE(res.exhaustion.has_value());
    CHECK(res.report.pass);
    CHECK(res.report.cauchy_differences.size() == 2);
    CHECK(res.exhaustion->limit.fields.front().grid().r_max() == doctest::Approx(3.0));
}

TEST_CASE("CSV export") {
    RadialGrid g(5.0, 100);
    DirichletProblem problem =
        DirichletProblem::from_raw(Dimension(3), euclidean_factor(g), 0.0);
    const Trajectory traj = solve_dirichlet(problem, 1e-2);

    SUBCASE("single state writes one row per node") {
        const std::string path = "unit_single.csv";
        emit_csv(traj, path);
        std::ifstream in(path);
        std::string line;
        std::size_t rows = 0;
        std::getline(in, line);
        CHECK(line == "t,r,u,U,R");
        while (std::getline(in, line)) ++rows;
        CHECK(rows == g.size());
        std::remove(path.c_str());
    }
    SUBCASE("unwritable path raises io_error") {
        CHECK_THROWS_AS(emit_csv(traj, "/no_such_dir_zz/x.csv"), io_error);
    }
}

TEST_CASE("CSV determinism and constancy per block") {
    const ScenarioConfig cfg = ScenarioConfig::from_json(base_config());
    const RunResult a = run_scenario(cfg);
    const RunResult b = run_scenario(cfg);
    emit_csv(*a.trajectory, "unit_a.csv");
    emit_csv(*b.trajectory, "unit_b.csv");
    const std::string ca = slurp("unit_a.csv");
    CHECK(ca == slurp("unit_b.csv"));
    std::remove("unit_a.csv");
    std::remove("unit_b.csv");

    // constant initial data: within each t-block the u column is constant
    // up to solver round-off
    std::istringstream in(ca);
    std::string line;
    std::getline(in, line); // header
    std::string t_prev;
    double u_first = 0.0;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const auto c3 = line.find(',', c2 + 1);
        const std::string t = line.substr(0, c1);
        const double u = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
        if (t != t_prev) {
            t_prev = t;
            u_first = u;
        } else {
            CHECK(std::abs(u - u_first) <= 1e-12 * std::abs(u_first));
        }
    }
}

TEST_CASE("report round-trips through JSON") {
    const ScenarioConfig cfg = ScenarioConfig::from_json(base_config());
    const RunResult res = run_scenario(cfg);
    emit_report(res.report, "unit_report.json");
    const json j = json::parse(slurp("unit_report.json"));
    std::remove("unit_report.json");

    CHECK(j.at("scenario") == "unit");
    CHECK(j.at("status") == "pass");
    const VerificationReport back = VerificationReport::from_json(j);
    CHECK(back.scenario == res.report.scenario);
    CHECK(back.pass == res.report.pass);
    REQUIRE(back.checks.size() == res.report.checks.size());
    for (std::size_t i = 0; i < back.checks.size(); ++i) {
        CHECK(back.checks[i].id == res.report.checks[i].id);
        CHECK(back.checks[i].anchor == res.report.checks[i].anchor);
        CHECK(back.checks[i].violation == res.report.checks[i].violation);
        CHECK(back.checks[i].tolerance == res.report.checks[i].tolerance);
        CHECK(back.checks[i].pass == res.report.checks[i].pass);
    }
    CHECK(back.h == res.report.h);
    CHECK(back.dt == res.report.dt);
}

TEST_CASE("random bump profiles honor the generator contract") {
    // boundary-nonpositive with a nonempty positivity set, every draw
    RadialGrid grid(2.0, 400);
    std::mt19937 rng(12345);
    for (int i = 0; i < 50; ++i) {
        const RadialField f = suites::random_bump_field(rng, grid);
        CHECK(f[grid.intervals()] <= -0.05 + 1e-12);
        CHECK(f.max() > 0.0);
    }
}

TEST_CASE("failing checks flip the status and keep the offending anchor") {
    json j = base_config();
    // the sandwich saturates at t = 0, so a negative tolerance must fail
    j["initial"] = {{"kind", "euclidean"}};
    j["checks"] = {{{"id", "sandwich"}, {"tolerance", -1.0}}};
    const RunResult res = run_scenario(ScenarioConfig::from_json(j));
    CHECK_FALSE(res.report.pass);
    REQUIRE(res.report.checks.size() == 1);
    CHECK_FALSE(res.report.checks[0].pass);
    CHECK(res.report.checks[0].anchor.find("inf u0") != std::string::npos);
    const auto dumped = res.report.to_json();
    CHECK(dumped.at("status") == "fail");
}
