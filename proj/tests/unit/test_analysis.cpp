#include <doctest.h>

#include <cmath>

#include "qbattery/analysis.hpp"
#include "qbattery/errors.hpp"

using namespace qbattery;

namespace {

Curve make_curve(double lo, double hi, double step, double (*f)(double)) {
    Curve c;
    for (double j : linear_grid(lo, hi, step)) c.push_back({j, f(j)});
    return c;
}

}  // namespace

TEST_CASE("linear_grid is inclusive and clean") {
    const auto g = linear_grid(-2.0, 2.0, 0.05);
    CHECK(g.size() == 81);
    CHECK(g.front() == -2.0);
    CHECK(g.back() == doctest::Approx(2.0));
    CHECK(g[40] == 0.0);
    CHECK_FALSE(std::signbit(g[40]));
    CHECK(linear_grid(-2.0, 2.0, 0.01).size() == 401);
    CHECK(linear_grid(0.0, 1.0, 0.3).size() == 4);
    CHECK_THROWS_AS(linear_grid(0.0, 1.0, -0.1), ValidationError);
    CHECK_THROWS_AS(linear_grid(1.0, 0.0, 0.1), ValidationError);
}

TEST_CASE("find_jmax") {
    const auto flat = make_curve(-1.0, 1.0, 0.1, [](double) { return 2.0; });
    const auto a = find_jmax(flat);
    CHECK(a.p_adv == 0.0);
    CHECK(a.j_max_over_h == 0.0);

    const auto peaked = make_curve(-2.0, 2.0, 0.1, [](double j) { return 1.0 - (j - 0.7) * (j - 0.7); });
    const auto b = find_jmax(peaked);
    CHECK(b.j_max_over_h == doctest::Approx(0.7));
    CHECK(b.p_at_zero == doctest::Approx(1.0 - 0.49));
    CHECK(std::abs(b.p_adv - (b.p_at_jmax - b.p_at_zero)) <= 1e-12);
    CHECK(b.relative_gain == doctest::Approx(b.p_adv / b.p_at_zero));

    // Restricting the range excludes the peak.
    const auto c = find_jmax(peaked, Interval{-2.0, 0.3});
    CHECK(c.j_max_over_h == doctest::Approx(0.3));

    Curve shifted = peaked;
    for (auto& pt : shifted) pt.value += 5.0;
    CHECK(find_jmax(shifted).p_adv == doctest::Approx(b.p_adv).epsilon(1e-12));

    CHECK_THROWS_AS(find_jmax(make_curve(0.1, 1.0, 0.1, [](double j) { return j; })), ValidationError);
    CHECK_THROWS_AS(find_jmax(Curve{{0.0, 1.0}, {0.1, 1.0}}), ValidationError);
}

TEST_CASE("first-jump detection") {
    const auto step = make_curve(-2.0, 2.0, 0.01, [](double j) { return 0.1 * j + (j > 0.9 ? 1.0 : 0.0); });
    const auto up = detect_first_jump(step, ScanDirection::Ascending);
    REQUIRE(up.has_value());
    CHECK(std::abs(*up - 0.9) <= 0.01);
    CHECK_FALSE(detect_first_jump(step, ScanDirection::Descending).has_value());

    const auto ramp = make_curve(-2.0, 2.0, 0.01, [](double j) { return 3.0 * j; });
    CHECK_FALSE(detect_first_jump(ramp, ScanDirection::Ascending).has_value());
    CHECK_FALSE(detect_first_jump(ramp, ScanDirection::Descending).has_value());

    // Two steps on the negative side: the one nearer J = 0 comes first.
    const auto two = make_curve(-2.0, 2.0, 0.01, [](double j) {
        return std::sin(j) + (j < -1.1 ? 2.0 : 0.0) + (j < -1.5 ? 1.0 : 0.0);
    });
    const auto jumps = detect_jumps(two, ScanDirection::Descending);
    REQUIRE(jumps.size() == 2);
    CHECK(std::abs(jumps[0] + 1.1) <= 0.01);
    CHECK(std::abs(jumps[1] + 1.5) <= 0.01);

    Curve scaled = step;
    for (auto& pt : scaled) pt.value *= 1e-3;
    CHECK(*detect_first_jump(scaled, ScanDirection::Ascending) == *up);
    CHECK_THROWS_AS(detect_first_jump(step, ScanDirection::Ascending, 0.0), ValidationError);
}

TEST_CASE("non-analytic point detection") {
    const auto kink = make_curve(-1.0, 1.0, 0.01, [](double j) { return std::abs(j - 0.3) + j * j; });
    const auto pts = detect_nonanalytic_points(kink);
    REQUIRE_FALSE(pts.empty());
    for (double x : pts) CHECK(std::abs(x - 0.3) <= 0.01);

    const auto smooth = make_curve(-1.0, 1.0, 0.01, [](double j) { return std::cos(3.0 * j); });
    CHECK(detect_nonanalytic_points(smooth).empty());

    // A flat region next to a spike does not mask the spike.
    const auto spike = make_curve(-1.0, 1.0, 0.01, [](double j) { return std::abs(j - 0.5) < 1e-9 ? -0.3 : 0.0; });
    const auto found = detect_nonanalytic_points(spike);
    REQUIRE_FALSE(found.empty());
    for (double x : found) CHECK(std::abs(x - 0.5) <= 0.01 + 1e-12);
}

TEST_CASE("scaling fit recovers exact power laws") {
    std::map<int, double> data;
    for (int n : {4, 6, 8, 10}) data[n] = 1.0 + 2.0 * std::pow(n, -3.0);
    const auto fit = scaling_fit(data);
    CHECK(std::abs(fit.prefactor - 2.0) <= 1e-10);
    CHECK(std::abs(fit.exponent + 3.0) <= 1e-10);
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK(fit.residuals.size() == 4);

    std::map<int, double> below;
    for (int n : {4, 6, 8}) below[n] = 1.0 - 0.5 * std::pow(n, -1.5);
    const auto fb = scaling_fit(below);
    CHECK(std::abs(fb.prefactor - 0.5) <= 1e-10);
    CHECK(std::abs(fb.exponent + 1.5) <= 1e-10);

    const auto two = scaling_fit({{4, data[4]}, {8, data[8]}});
    CHECK(std::abs(two.exponent - fit.exponent) <= 1e-10);

    std::map<int, double> with_exact = data;
    with_exact[12] = 1.0;
    const auto fe = scaling_fit(with_exact);
    CHECK(fe.excluded == std::vector<int>{12});
    CHECK(std::abs(fe.exponent + 3.0) <= 1e-10);

    std::map<int, double> noisy{{4, 1.3}, {6, 1.1}, {8, 1.09}, {10, 1.02}};
    const auto fn = scaling_fit(noisy);
    CHECK(fn.r_squared >= 0.0);
    CHECK(fn.r_squared <= 1.0);

    CHECK_THROWS_AS(scaling_fit({{4, 1.5}}), ValidationError);
    CHECK_THROWS_AS(scaling_fit({{0, 1.5}, {4, 1.2}}), ValidationError);
}

TEST_CASE("thermal difference map") {
    const auto p = ModelParams::uniform(4, 1.0, 0.0, 0.0, 0.0);
    const std::vector<double> betas{0.0, 100.0};
    const std::vector<double> js{-0.5, 0.0, 0.5};
    const auto map = thermal_diff_map(p, betas, js);
    REQUIRE(map.size() == 6);
    for (std::size_t jj = 0; jj < js.size(); ++jj) {
        auto q = p;
        q.set_uniform_xy(js[jj]);
        const double ground = power_for(q, GroundPrep{}).p_max;
        CHECK(map[jj].beta_over_h == 0.0);
        CHECK(map[jj].j_over_h == js[jj]);
        CHECK(map[jj].p_t_diff == doctest::Approx(-ground).epsilon(1e-10));
        CHECK(map[3 + jj].beta_over_h == 100.0);
        CHECK(std::abs(map[3 + jj].p_t_diff) <= 1e-4);
    }
    CHECK_THROWS_AS(thermal_diff_map(p, std::vector<double>{-1.0}, js), ValidationError);
    CHECK_THROWS_AS(thermal_diff_map(p, std::vector<double>{}, js), ValidationError);
}

TEST_CASE("power curve and advantage on small chains") {
    const auto grid = linear_grid(-2.0, 2.0, 0.05);
    const auto ising = power_curve(ModelParams::uniform(4, 1.0, 1.0, 0.0, 0.0), grid, GroundPrep{});
    CHECK(std::abs(find_jmax(ising).p_adv) <= 1e-6);
    const auto xx = power_curve(ModelParams::uniform(4, 1.0, 0.0, 0.0, 0.0), grid, GroundPrep{}, {}, 2);
    const auto xx1 = power_curve(ModelParams::uniform(4, 1.0, 0.0, 0.0, 0.0), grid, GroundPrep{}, {}, 1);
    CHECK(find_jmax(xx).p_adv > 0.1);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(xx[i].value == xx1[i].value);
}
