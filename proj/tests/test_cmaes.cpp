#include <doctest.h>

#include "conceptid/cmaes.hpp"
#include "conceptid/error.hpp"
#include "conceptid/rng.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

using namespace conceptid;
using namespace conceptid::oracle;

TEST_CASE("strategy constants follow the standard defaults") {
    const std::size_t n = 10, lambda = 10;
    const CmaesParameters p = CmaesParameters::defaults(n, lambda);
    CHECK(p.mu == 5);

    std::vector<double> w(5);
    for (std::size_t i = 0; i < 5; ++i) w[i] = std::log(5.5) - std::log(static_cast<double>(i + 1));
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    double sq = 0.0;
    for (auto& x : w) {
        x /= sum;
        sq += x * x;
    }
    const double mu_eff = 1.0 / sq;
    for (std::size_t i = 0; i < 5; ++i) CHECK(p.weights[i] == doctest::Approx(w[i]));
    CHECK(p.mu_eff == doctest::Approx(mu_eff));

    const double nd = static_cast<double>(n);
    CHECK(p.c_sigma == doctest::Approx((mu_eff + 2) / (nd + mu_eff + 5)));
    CHECK(p.d_sigma == doctest::Approx(1 + 2 * std::max(0.0, std::sqrt((mu_eff - 1) / (nd + 1)) - 1) + p.c_sigma));
    CHECK(p.c_c == doctest::Approx((4 + mu_eff / nd) / (nd + 4 + 2 * mu_eff / nd)));
    CHECK(p.c_1 == doctest::Approx(2 / ((nd + 1.3) * (nd + 1.3) + mu_eff)));
    CHECK(p.c_mu == doctest::Approx(std::min(1 - p.c_1, 2 * (mu_eff - 2 + 1 / mu_eff) / ((nd + 2) * (nd + 2) + mu_eff))));
    CHECK(p.chi_n == doctest::Approx(std::sqrt(nd) * (1 - 1 / (4 * nd) + 1 / (21 * nd * nd))));
}

TEST_CASE("construction") {
    CmaesConfig cfg;
    const Cmaes es(12, cfg);
    CHECK(es.state().mean.size() == 12);
    CHECK(es.state().sigma == cfg.initial_sigma);
    CHECK_NOTHROW(Cmaes(1, cfg));

    CmaesConfig one = cfg;
    one.population_size = 1;
    CHECK_THROWS_AS(Cmaes(3, one), ConfigError);
    CmaesConfig bad_sigma = cfg;
    bad_sigma.initial_sigma = 0.0;
    CHECK_THROWS_AS(Cmaes(3, bad_sigma), ConfigError);
    CHECK_THROWS_AS(Cmaes(0, cfg), ConfigError);
}

TEST_CASE("ask is a pure function of seed and state") {
    CmaesConfig cfg;
    cfg.seed = 42;
    const Cmaes a(5, cfg), b(5, cfg);
    const auto pa = a.ask(), pb = b.ask(), pa2 = a.ask();
    REQUIRE(pa.size() == cfg.population_size);
    for (std::size_t i = 0; i < pa.size(); ++i) {
        CHECK(pa[i] == pb[i]);
        CHECK(pa[i] == pa2[i]);
    }
    cfg.seed = 43;
    CHECK(Cmaes(5, cfg).ask()[0] != pa[0]);
}

TEST_CASE("population spread scales with sigma") {
    for (double sigma : {1e-12, 0.1, 2.0}) {
        CmaesConfig cfg;
        cfg.initial_sigma = sigma;
        cfg.population_size = 1000;
        const Vector mean = Vector::Constant(3, 1.5);
        const auto pop = Cmaes(mean, cfg).ask();
        double ss = 0.0;
        for (const auto& x : pop) ss += (x - mean).squaredNorm();
        const double var = ss / (3.0 * static_cast<double>(pop.size()));
        // sample variance of 3000 standard normals is within ~8% at 3 sigma
        CHECK(var / (sigma * sigma) == doctest::Approx(1.0).epsilon(0.1));
    }
}

TEST_CASE("equal fitness leaves the mean and covariance alone") {
    CmaesConfig cfg;
    cfg.seed = 3;
    Cmaes es(Vector::Constant(4, 0.7), cfg);
    const Vector mean0 = es.state().mean;
    const Eigen::MatrixXd cov0 = es.state().covariance;
    const double sigma0 = es.state().sigma;
    const auto pop = es.ask();
    const std::vector<double> flat(pop.size(), 0.25);
    es.tell(pop, flat);
    CHECK((es.state().mean - mean0).norm() < 1e-12);
    CHECK((es.state().covariance - cov0).norm() < 1e-12);
    CHECK(es.state().sigma > sigma0); // widen the search on a plateau
}

TEST_CASE("tell validates its inputs") {
    Cmaes es(2, CmaesConfig{});
    auto pop = es.ask();
    std::vector<double> short_fit(pop.size() - 1, 0.0);
    CHECK_THROWS_AS(es.tell(pop, short_fit), DimensionError);
}

TEST_CASE("non-finite fitness ranks last") {
    CmaesConfig cfg;
    cfg.seed = 9;
    Cmaes es(2, cfg);
    const auto pop = es.ask();
    std::vector<double> fit(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) fit[i] = -pop[i].squaredNorm();
    fit[0] = std::nan("");
    fit[1] = std::numeric_limits<double>::infinity() * -1;
    es.tell(pop, fit);
    CHECK(std::isfinite(es.state().best_fitness));
    CHECK(std::isfinite(es.state().mean.norm()));
}

TEST_CASE("sphere convergence") {
    const std::size_t dim = 10;
    int converged = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Vector x_star = target_for(seed, dim);
        CmaesConfig cfg;
        cfg.population_size = 10;
        cfg.generations = 1500;
        cfg.seed = seed;
        const CmaesResult r = run_cmaes([&](const Vector& x) { return -(x - x_star).squaredNorm(); }, dim, cfg);
        if ((r.best_genotype - x_star).norm() < 1e-6) ++converged;

        REQUIRE(r.history.size() == cfg.generations);
        for (std::size_t g = 1; g < r.history.size(); ++g) REQUIRE(r.history[g] >= r.history[g - 1]);
        CHECK(r.evaluations == cfg.generations * cfg.population_size);
    }
    CHECK(converged >= 9);
}

TEST_CASE("one-dimensional quadratic") {
    CmaesConfig cfg;
    cfg.generations = 300;
    cfg.seed = 17;
    const CmaesResult r = run_cmaes([](const Vector& x) { return -(x[0] - 3.0) * (x[0] - 3.0); }, 1, cfg);
    CHECK(std::abs(r.best_genotype[0] - 3.0) < 1e-6);
}

TEST_CASE("constant objective") {
    CmaesConfig cfg;
    cfg.generations = 50;
    const CmaesResult r = run_cmaes([](const Vector&) { return 2.5; }, 4, cfg);
    CHECK(r.best_fitness == 2.5);
    CHECK(r.history.size() == 50);
}

TEST_CASE("serial and parallel evaluation give identical runs") {
    CmaesConfig cfg;
    cfg.generations = 80;
    cfg.seed = 5;
    auto f = [](const Vector& x) { return -x.array().square().sum() - std::sin(3 * x[0]); };
    CmaesRunOptions serial, parallel;
    serial.parallel = false;
    parallel.parallel = true;
    const auto a = run_cmaes(f, 6, cfg, serial);
    const auto b = run_cmaes(f, 6, cfg, parallel);
    CHECK(a.best_genotype == b.best_genotype);
    CHECK(a.history == b.history);
}

TEST_CASE("objective failure aborts with the generation") {
    CmaesConfig cfg;
    cfg.generations = 20;
    int calls = 0;
    auto f = [&](const Vector&) -> double {
        if (++calls > 35) throw std::runtime_error("boom");
        return 0.0;
    };
    CmaesRunOptions opts;
    opts.parallel = false;
    try {
        run_cmaes(f, 2, cfg, opts);
        FAIL("expected an abort");
    } catch (const OptimizerAbort& e) {
        CHECK(e.generation() == 3);
    }
}

TEST_CASE("progress is written as one JSON object per generation") {
    CmaesConfig cfg;
    cfg.generations = 5;
    std::ostringstream log;
    CmaesRunOptions opts;
    opts.progress = &log;
    run_cmaes([](const Vector& x) { return -x.squaredNorm(); }, 2, cfg, opts);
    std::istringstream in(log.str());
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        CHECK(line.find("\"gen\"") != std::string::npos);
        ++lines;
    }
    CHECK(lines == 5);
}
