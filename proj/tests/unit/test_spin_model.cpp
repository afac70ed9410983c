#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qbattery/errors.hpp"
#include "qbattery/spin_model.hpp"

using namespace qbattery;

TEST_CASE("build_h0 hand-written examples") {
    const Operator single = build_h0(ModelParams::uniform(1, 1.0, 0.0, 0.0, 0.0));
    CHECK(oracle::max_abs(single - Operator(RealVector{{0.5, -0.5}}.cast<Complex>().asDiagonal())) == 0.0);

    // h = 0, J = 1, gamma = 1: (1/2) sx sx.
    Operator xx = Operator::Zero(4, 4);
    xx(0, 3) = xx(3, 0) = xx(1, 2) = xx(2, 1) = 0.5;
    CHECK(oracle::max_abs(build_h0(ModelParams::uniform(2, 0.0, 1.0, 1.0, 0.0)) - xx) <= 1e-15);

    // h = 0, J = 0, Delta = 1: (1/4) sz sz.
    const Operator zz = RealVector{{0.25, -0.25, -0.25, 0.25}}.cast<Complex>().asDiagonal();
    CHECK(oracle::max_abs(build_h0(ModelParams::uniform(2, 0.0, 0.0, 0.0, 1.0)) - zz) <= 1e-15);
}

TEST_CASE("build_h0 matches the Kronecker-product oracle") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 6;
        auto p = oracle::random_params(n, rng);
        p.field_h = trial % 3 == 0 ? -0.7 : 1.0;
        const Operator h = build_h0(p);
        CHECK(oracle::max_abs(h - oracle::h0(p)) <= 1e-14);
        CHECK(hermiticity_defect(h) <= 1e-12);
    }
}

TEST_CASE("XX chain conserves total z magnetization") {
    std::mt19937_64 rng(31);
    auto p = oracle::random_params(6, rng);
    p.anisotropy_gamma = 0.0;
    p.set_uniform_zz(0.0);
    const Operator h = build_h0(p);
    Operator mz = Operator::Zero(h.rows(), h.cols());
    for (int j = 1; j <= 6; ++j) mz += kron_embed(pauli::z(), j, 6);
    CHECK(oracle::max_abs(h * mz - mz * h) <= 1e-10);
}

TEST_CASE("build_h0 enforces the size limit and parameter validity") {
    CHECK_THROWS_AS(build_h0(ModelParams::uniform(6, 1.0, 0.0, 1.0, 0.0), 5), ResourceError);
    CHECK_THROWS_AS(build_h0(ModelParams::uniform(3, 1.0, 1.5, 1.0, 0.0)), ValidationError);
    auto p = ModelParams::uniform(3, 1.0, 0.0, 1.0, 0.0);
    p.xy_couplings.pop_back();
    CHECK_THROWS_AS(build_h0(p), ValidationError);
    p = ModelParams::uniform(3, 1.0, 0.0, 1.0, 0.0);
    p.charging_omega = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    CHECK(ModelParams::uniform(1, 1.0, 0.0, 1.0, 1.0).xy_couplings.empty());
}

TEST_CASE("build_charging examples") {
    const auto p1 = ModelParams::uniform(1, 1.0, 0.0, 0.0, 0.0, 2.0);
    CHECK(oracle::max_abs(build_charging(p1) - Operator(pauli::x())) == 0.0);

    const auto p2 = ModelParams::uniform(2, 1.0, 0.0, 0.0, 0.0, 2.0);
    const Operator h = build_charging(p2);
    CHECK(oracle::max_abs(h - oracle::charging(p2)) <= 1e-15);
    const RealVector w = eigenvalues_hermitian(h);
    CHECK(w(0) == doctest::Approx(-2.0));
    CHECK(std::abs(w(1)) <= 1e-12);
    CHECK(std::abs(w(2)) <= 1e-12);
    CHECK(w(3) == doctest::Approx(2.0));
    CHECK(oracle::max_abs(Operator(charging_site_factor(p2)) - Operator(pauli::x())) == 0.0);
}

TEST_CASE("normalize examples") {
    const Operator d02 = RealVector{{0.0, 2.0}}.cast<Complex>().asDiagonal();
    const auto n = normalize(d02);
    CHECK(n.matrix(0, 0).real() == doctest::Approx(-1.0));
    CHECK(n.matrix(1, 1).real() == doctest::Approx(1.0));
    CHECK(n.e_min == doctest::Approx(0.0));
    CHECK(n.e_max == doctest::Approx(2.0));

    std::mt19937_64 rng(37);
    const Operator r = oracle::random_hermitian(8, rng);
    const RealVector w = eigenvalues_hermitian(r);
    // Build a spectrum symmetric in [-a, a].
    const Operator sym = r - 0.5 * (w(0) + w(7)) * Operator::Identity(8, 8);
    const double a = 0.5 * (w(7) - w(0));
    CHECK(oracle::max_abs(normalize(sym).matrix - sym / a) <= 1e-10);

    const auto single = normalize(build_h0(ModelParams::uniform(1, 1.0, 0.0, 0.0, 0.0)));
    CHECK(oracle::max_abs(single.matrix - Operator(pauli::z())) <= 1e-12);

    CHECK_THROWS_AS(normalize(Operator::Zero(4, 4)), DegenerateSpectrumError);
    CHECK_THROWS_AS(normalize(Operator::Identity(4, 4)), DegenerateSpectrumError);
}

TEST_CASE("normalize properties on random chains") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 8; ++trial) {
        const auto p = oracle::random_params(2 + trial % 5, rng);
        const Operator h = build_h0(p);
        const auto n = normalize(h);
        const RealVector w = eigenvalues_hermitian(n.matrix);
        CHECK(w(0) == doctest::Approx(-1.0).epsilon(1e-10));
        CHECK(w(w.size() - 1) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(hermiticity_defect(n.matrix) <= 1e-12);
        CHECK(oracle::max_abs(normalize(n.matrix).matrix - n.matrix) <= 1e-10);

        const RealVector raw = eigenvalues_hermitian(h);
        const RealVector mapped = ((2.0 * raw.array() - (n.e_max + n.e_min)) / (n.e_max - n.e_min)).matrix();
        CHECK((mapped - w).cwiseAbs().maxCoeff() <= 1e-10);

        const auto both = normalize_and_diagonalize(h);
        CHECK(oracle::max_abs(both.normalized.matrix - n.matrix) <= 1e-12);
        CHECK((both.eig.eigenvalues - w).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("sample_realization contract") {
    const auto base = ModelParams::uniform(5, 1.0, 0.3, 0.7, 0.2);
    DisorderSpec spec;
    spec.mean = -0.4;
    spec.sigma = 0.0;
    spec.n_realizations = 10;
    spec.master_seed = 99;
    for (std::size_t k = 0; k < 10; ++k) {
        const auto r = sample_realization(base, spec, k);
        for (double j : r.xy_couplings) CHECK(j == -0.4);
        CHECK(r.zz_couplings == base.zz_couplings);
    }

    spec.sigma = 1.0;
    spec.target = DisorderTarget::ZzCouplings;
    const auto a = sample_realization(base, spec, 3);
    const auto b = sample_realization(base, spec, 3);
    CHECK(a.zz_couplings == b.zz_couplings);
    CHECK(a.xy_couplings == base.xy_couplings);
    CHECK(a.zz_couplings != sample_realization(base, spec, 4).zz_couplings);
    spec.master_seed = 100;
    CHECK(a.zz_couplings != sample_realization(base, spec, 3).zz_couplings);

    CHECK_THROWS_AS(sample_realization(base, spec, 10), ValidationError);
    spec.sigma = -1.0;
    CHECK_THROWS_AS(sample_realization(base, spec, 0), ValidationError);
}

TEST_CASE("sampled couplings have the requested mean and spread") {
    const auto base = ModelParams::uniform(8, 1.0, 0.0, 0.0, 0.0);
    DisorderSpec spec;
    spec.mean = 0.0;
    spec.sigma = 1.0;
    spec.n_realizations = 5000;
    spec.master_seed = 2024;
    double sum = 0.0, sum_sq = 0.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < spec.n_realizations; ++k) {
        for (double j : sample_realization(base, spec, k).xy_couplings) {
            sum += j;
            sum_sq += j * j;
            ++count;
        }
    }
    const double mean = sum / static_cast<double>(count);
    CHECK(std::abs(mean) <= 3.0 / std::sqrt(7.0 * 5000.0));
    CHECK(sum_sq / static_cast<double>(count) == doctest::Approx(1.0).epsilon(0.03));
}
