#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "qbattery/commands.hpp"
#include "qbattery/config.hpp"
#include "qbattery/recipes.hpp"
#include "qbattery/table.hpp"

using namespace qbattery;

namespace {

std::string render(Command cmd, const RunConfig& config, OutputFormat format = OutputFormat::Csv) {
    std::ostringstream out;
    write_table(out, run_command(cmd, config), make_header(cmd, config), format);
    return out.str();
}

}  // namespace

TEST_CASE("config text parsing") {
    RunConfig c;
    apply_config_text(c,
                      "# chain\n"
                      "model.n_sites = 6\n"
                      "model.gamma = 0.25   # trailing comment\n"
                      "\n"
                      "sweep.step=0.1\n"
                      "state.prep = thermal\n"
                      "state.beta = 2\n"
                      "bias.kind = staggered\n"
                      "scaling.sizes = 4, 6\n"
                      "output.format = json\n",
                      "run.cfg");
    CHECK(c.n_sites == 6);
    CHECK(c.gamma == 0.25);
    CHECK(c.sweep.step == 0.1);
    CHECK(c.thermal);
    CHECK(c.beta == 2.0);
    REQUIRE(c.bias.has_value());
    CHECK(*c.bias == BiasKind::Staggered);
    CHECK(c.sizes == std::vector<int>{4, 6});
    CHECK(c.format == OutputFormat::Json);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("config errors name the key and line") {
    RunConfig c;
    try {
        apply_config_text(c, "model.n_sites = 4\nmodel.bogus = 1\n", "run.cfg");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("run.cfg:2") != std::string::npos);
        CHECK(e.key() == "model.bogus");
    }
    CHECK_THROWS_AS(apply_setting(c, "model.n_sites", "four"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "model.gamma", "0.5x"), ConfigError);
    CHECK_THROWS_AS(apply_config_text(c, "no equals sign\n", "x"), ConfigError);

    RunConfig neg;
    apply_setting(neg, "sweep.step", "-0.1");
    try {
        neg.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "sweep.step");
        CHECK(std::string(e.what()).find("sweep.step") != std::string::npos);
    }

    RunConfig big;
    apply_setting(big, "model.n_sites", "20");
    CHECK_THROWS_AS(big.validate(), ValidationError);

    RunConfig bonds;
    apply_setting(bonds, "model.n_sites", "4");
    apply_setting(bonds, "model.xy_couplings", "1, 2");
    CHECK_THROWS_AS(bonds.validate(), ValidationError);

    CHECK_THROWS_AS(apply_config_file(c, "/nonexistent/dir/run.cfg"), IoError);
}

TEST_CASE("describe round-trips every key") {
    RunConfig c;
    c.n_sites = 5;
    c.gamma = 0.1;
    c.j = -0.3;
    c.xy_couplings = {0.1, 0.2, 0.3, 0.4};
    c.sweep.parameter = "delta";
    c.bias = BiasKind::Uniform;
    c.disorder_target = DisorderTarget::ZzCouplings;
    c.seed = 12345;
    c.gammas = {0.1, 0.7};
    const auto settings = describe(c);
    CHECK(settings.size() == config_keys().size());

    RunConfig back;
    for (const auto& [k, v] : settings) apply_setting(back, k, v);
    CHECK(describe(back) == settings);
    CHECK(back.xy_couplings == c.xy_couplings);
    CHECK(back.sweep.parameter == "delta");
    CHECK(back.seed == 12345);
    CHECK(format_exact(0.1) == "0.1");
    CHECK(std::stod(format_exact(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1.5) == "1.5");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
}

TEST_CASE("table writers") {
    Table t{{"a", "b", "c"}, {}};
    t.add_row({1.25, std::int64_t{3}, std::string("x")});
    CHECK_THROWS_AS(t.add_row({1.0}), ValidationError);
    const TableHeader header{"demo", {{"model.n_sites", "4"}}};

    std::ostringstream csv;
    write_csv(csv, t, header);
    CHECK(csv.str() == "# qbattery demo\n# model.n_sites = 4\na,b,c\n1.25,3,x\n");

    std::ostringstream js;
    write_json(js, t, header);
    const auto parsed = nlohmann::json::parse(js.str());
    CHECK(parsed["command"] == "demo");
    CHECK(parsed["settings"]["model.n_sites"] == "4");
    CHECK(parsed["rows"][0]["a"] == 1.25);
    CHECK(parsed["rows"][0]["b"] == 3);
    CHECK(parsed["rows"][0]["c"] == "x");

    const auto dir = std::filesystem::temp_directory_path() / "qbattery_table_test";
    std::filesystem::remove_all(dir);
    write_table(dir / "nested" / "out.csv", t, header, OutputFormat::Csv);
    CHECK(std::filesystem::exists(dir / "nested" / "out.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("power sweep at N = 8 gives 81 rows") {
    RunConfig c;
    c.sweep.step = 0.05;
    const auto t = run_power_sweep(c);
    CHECK(t.rows.size() == 81);
    CHECK(t.columns == std::vector<std::string>{"J_over_h", "p_max", "t_star", "work", "degenerate_ground"});
    for (const auto& row : t.rows) {
        CHECK(std::get<double>(row[1]) >= 0.0);
        CHECK(std::get<double>(row[2]) > 0.0);
    }
}

TEST_CASE("reruns are byte-identical and worker-independent") {
    RunConfig c;
    c.n_sites = 4;
    c.sweep.step = 0.25;
    c.gamma = 0.3;
    const auto first = render(Command::PowerSweep, c);
    CHECK(render(Command::PowerSweep, c) == first);
    RunConfig par = c;
    par.workers = 3;
    CHECK(render(Command::PowerSweep, par) == first);

    RunConfig d = c;
    d.disorder_sigma = 0.5;
    d.realizations = 40;
    d.sweep.step = 1.0;
    const auto dis = render(Command::DisorderSweep, d, OutputFormat::Json);
    RunConfig d2 = d;
    d2.workers = 4;
    CHECK(render(Command::DisorderSweep, d2, OutputFormat::Json) == dis);
}

TEST_CASE("every command runs on a tiny configuration") {
    RunConfig c;
    c.n_sites = 3;
    c.sweep.start = -1.0;
    c.sweep.stop = 1.0;
    c.sweep.step = 0.5;
    c.realizations = 5;
    c.disorder_sigma = 0.2;
    c.beta_stop = 1.0;
    c.beta_step = 0.5;
    c.sizes = {2, 3, 4};
    c.gammas = {0.0, 1.0};
    for (Command cmd : all_commands()) {
        CAPTURE(command_name(cmd));
        const auto t = run_command(cmd, c);
        CHECK_FALSE(t.rows.empty());
        CHECK(parse_command(command_name(cmd)) == cmd);
    }
    CHECK_FALSE(parse_command("nope").has_value());
}

TEST_CASE("sweeps over other parameters") {
    RunConfig c;
    c.n_sites = 3;
    c.j = 0.5;
    c.sweep.parameter = "delta";
    c.sweep.start = 0.0;
    c.sweep.stop = 1.0;
    c.sweep.step = 0.5;
    const auto t = run_power_sweep(c);
    CHECK(t.columns[0] == "delta_over_h");
    CHECK(t.rows.size() == 3);

    c.sweep.parameter = "gamma";
    CHECK(run_order_params(c).columns[0] == "gamma");

    c.sweep.parameter = "delta";
    CHECK_THROWS_AS(run_fidelity_scan(c), ValidationError);
    CHECK_THROWS_AS(run_thermal_map(c), ValidationError);
}

TEST_CASE("recipes") {
    CHECK(recipe_names().size() == 9);
    for (const auto& name : recipe_names()) {
        const auto jobs = recipe_jobs(name);
        CHECK_FALSE(jobs.empty());
        for (const auto& job : jobs) CHECK_NOTHROW(job.config.validate());
    }
    const auto thermal = recipe_jobs("fig6");
    CHECK(thermal.size() == 4);
    for (const auto& job : thermal) {
        CHECK(job.command == Command::ThermalMap);
        CHECK(job.config.n_sites == 4);
    }
    RecipeOptions opts;
    opts.realizations = 10;
    for (const auto& job : recipe_jobs("fig7", opts)) CHECK(job.config.realizations == 10);
    CHECK_THROWS_AS(recipe_jobs("fig99"), ValidationError);
}
