#include <doctest.h>

#include "conceptid/error.hpp"
#include "conceptid/metrics.hpp"
#include "conceptid/rng.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace conceptid;
using namespace conceptid::oracle;

namespace {

double digamma_ref(double x) {
    double r = 0.0;
    while (x < 20.0) {
        r -= 1.0 / x;
        x += 1.0;
    }
    const double f = 1.0 / (x * x);
    return r + std::log(x) - 0.5 / x - f * (1.0 / 12 - f * (1.0 / 120 - f * (1.0 / 252 - f / 240)));
}

// Textbook KSG (first variant) by exhaustive search.
double ksg_reference(const Matrix& x, const Matrix& y, std::size_t k) {
    const auto n = static_cast<std::size_t>(x.rows());
    auto cheb = [](const Matrix& m, std::size_t i, std::size_t j) {
        return (m.row(i) - m.row(j)).cwiseAbs().maxCoeff();
    };
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> d;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) d.push_back(std::max(cheb(x, i, j), cheb(y, i, j)));
        std::nth_element(d.begin(), d.begin() + static_cast<long>(k - 1), d.end());
        const double eps = d[k - 1];
        std::size_t nx = 0, ny = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            nx += cheb(x, i, j) < eps;
            ny += cheb(y, i, j) < eps;
        }
        acc += digamma_ref(static_cast<double>(nx + 1)) + digamma_ref(static_cast<double>(ny + 1));
    }
    return digamma_ref(static_cast<double>(k)) + digamma_ref(static_cast<double>(n)) - acc / static_cast<double>(n);
}

double silhouette_reference(const Matrix& p, const std::vector<int>& labels) {
    double total = 0.0;
    std::size_t count = 0;
    int max_label = *std::max_element(labels.begin(), labels.end());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0) continue;
        std::vector<double> sum(max_label + 1, 0.0);
        std::vector<std::size_t> n(max_label + 1, 0);
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j] < 0 || j == i) continue;
            sum[labels[j]] += (p.row(i) - p.row(j)).norm();
            ++n[labels[j]];
        }
        ++count;
        if (n[labels[i]] == 0) continue; // singleton
        const double a = sum[labels[i]] / n[labels[i]];
        double b = std::numeric_limits<double>::infinity();
        for (int c = 0; c <= max_label; ++c)
            if (c != labels[i] && n[c] > 0) b = std::min(b, sum[c] / n[c]);
        total += (b - a) / std::max(a, b);
    }
    return total / static_cast<double>(count);
}

} // namespace

TEST_CASE("digamma at integers") {
    CHECK(digamma_int(1) == doctest::Approx(-0.5772156649015329).epsilon(1e-14));
    for (std::size_t n = 1; n < 300; ++n) {
        REQUIRE(digamma_int(n + 1) == doctest::Approx(digamma_int(n) + 1.0 / static_cast<double>(n)).epsilon(1e-13));
        REQUIRE(digamma_int(n) == doctest::Approx(digamma_ref(static_cast<double>(n))).epsilon(1e-12));
    }
}

TEST_CASE("KSG matches an exhaustive reference implementation") {
    Rng rng(4);
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t n = 50 + 40 * trial;
        Matrix x(n, 1 + trial % 2), y(n, 1 + (trial / 2) % 2);
        for (std::size_t i = 0; i < n; ++i) {
            for (Eigen::Index d = 0; d < x.cols(); ++d) x(i, d) = rng.normal();
            for (Eigen::Index d = 0; d < y.cols(); ++d) y(i, d) = 0.6 * x(i, 0) + rng.normal();
        }
        for (std::size_t k : {1u, 4u}) {
            const double ref = ksg_reference(x, y, k);
            CHECK(ksg_mi_raw(x, y, k, false) == doctest::Approx(ref).epsilon(1e-10));
            CHECK(ksg_mi_raw(x, y, k, true) == doctest::Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("KSG on a correlated Gaussian pair") {
    const Pair p = gaussian_pair(2000, 0.9, 1);
    const double truth = -0.5 * std::log(1 - 0.81);
    CHECK(truth == doctest::Approx(0.8304).epsilon(1e-4));
    CHECK(std::abs(ksg_mi(p.x, p.y).value - truth) < 0.1);
}

TEST_CASE("KSG on independent data is near zero") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Pair p = independent_uniform(1000, seed);
        REQUIRE(std::abs(ksg_mi(p.x, p.y).value) < 0.05);
    }
}

TEST_CASE("KSG is symmetric") {
    const Pair p = gaussian_pair(700, 0.5, 3);
    CHECK(ksg_mi(p.x, p.y, 4, 77).value == ksg_mi(p.y, p.x, 4, 77).value);
}

TEST_CASE("KSG is insensitive to monotone reparametrisation") {
    const Pair p = gaussian_pair(2000, 0.7, 5);
    const Matrix ex = p.x.array().exp().matrix();
    const Matrix cube = p.y.array().cube().matrix();
    CHECK(std::abs(ksg_mi(p.x, p.y).value - ksg_mi(ex, cube).value) < 0.05);
}

TEST_CASE("KSG input validation") {
    const Pair p = gaussian_pair(10, 0.5, 1);
    CHECK_THROWS_AS(ksg_mi(p.x, p.y.topRows(9)), DimensionError);
    CHECK_THROWS_AS(ksg_mi(p.x, p.y, 0), ConfigError);
    CHECK_THROWS_AS(ksg_mi(p.x, p.y, 10), InsufficientDataError);
}

TEST_CASE("jitter is tiny and depends only on seed and content") {
    const Pair p = gaussian_pair(100, 0.5, 1);
    const Matrix a = jitter(p.x, 5), b = jitter(p.x, 5), c = jitter(p.x, 6);
    CHECK(a == b);
    CHECK(a != c);
    CHECK((a - p.x).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((a - p.x).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("permutation test: perfect dependence") {
    const Pair p = gaussian_pair(300, 0.0, 2);
    const auto r = mi_permutation_test(p.x, p.x, 4, 200, 1);
    CHECK(r.p_value <= 1.0 / 201.0 + 1e-15);
    CHECK(r.null_values.size() == 200);
}

TEST_CASE("permutation test: a single surrogate") {
    const Pair p = independent_uniform(200, 7);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const double pv = mi_permutation_test(p.x, p.y, 4, 1, seed).p_value;
        CHECK((pv == 0.5 || pv == 1.0));
    }
}

TEST_CASE("permutation test: calibration under independence") {
    int rejections = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Pair p = independent_uniform(400, 100 + seed);
        if (mi_permutation_test(p.x, p.y, 4, 200, seed).p_value <= 0.05) ++rejections;
    }
    CHECK(rejections <= 2);
}

TEST_CASE("permutation test does not depend on the thread count") {
    const Pair p = gaussian_pair(300, 0.3, 9);
    const auto a = mi_permutation_test(p.x, p.y, 4, 50, 3, false);
    const auto b = mi_permutation_test(p.x, p.y, 4, 50, 3, true);
    CHECK(a.null_values == b.null_values);
    CHECK(a.p_value == b.p_value);
}

TEST_CASE("silhouette") {
    SUBCASE("tight, far-apart clusters") {
        Rng rng(1);
        Matrix m(100, 2);
        std::vector<int> l(100);
        for (int i = 0; i < 100; ++i) {
            l[i] = i % 2;
            m(i, 0) = 100.0 * l[i] + 0.01 * rng.uniform();
            m(i, 1) = 0.01 * rng.uniform();
        }
        CHECK(silhouette(m, Labeling{l, 2}) > 0.99);
    }
    SUBCASE("equal intra- and inter-cluster distances") {
        // regular tetrahedron: every pair of vertices is equally far apart
        Matrix m(4, 3);
        m << 1, 1, 1, 1, -1, -1, -1, 1, -1, -1, -1, 1;
        CHECK(silhouette(m, Labeling{{0, 0, 1, 1}, 2}) == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("one cluster is undefined") {
        Matrix m(3, 1);
        m << 0, 1, 2;
        CHECK_THROWS_AS(silhouette(m, Labeling{{0, 0, kUnassigned}, 2}), UndefinedMetricError);
    }
    SUBCASE("matches a reference on random labelings with gaps") {
        Rng rng(12);
        Matrix m(150, 3);
        std::vector<int> l(150);
        for (int i = 0; i < 150; ++i) {
            for (int d = 0; d < 3; ++d) m(i, d) = rng.normal();
            l[i] = static_cast<int>(rng.uniform_index(5)) - 1;
        }
        l[0] = 3;
        l[1] = 2; // make sure labels 2 and 3 exist; 3 may be a singleton elsewhere
        CHECK(silhouette(m, Labeling{l, 4}, false) == doctest::Approx(silhouette_reference(m, l)).epsilon(1e-12));
        CHECK(silhouette(m, Labeling{l, 4}, true) == silhouette(m, Labeling{l, 4}, false));
    }
}

TEST_CASE("overlap score") {
    SUBCASE("separated intervals") {
        Matrix m(20, 1);
        std::vector<int> l(20);
        for (int i = 0; i < 20; ++i) {
            m(i, 0) = i < 10 ? 0.1 * i : 5.0 + 0.1 * i;
            l[i] = i < 10 ? 0 : 1;
        }
        CHECK(overlap_score(m, Labeling{l, 2}) == 0.0);
    }
    SUBCASE("random labels on interleaved points") {
        Rng rng(3);
        Matrix m(4000, 1);
        std::vector<int> l(4000);
        for (int i = 0; i < 4000; ++i) {
            m(i, 0) = rng.uniform();
            l[i] = static_cast<int>(rng.uniform_index(2));
        }
        CHECK(overlap_score(m, Labeling{l, 2}) == doctest::Approx(0.5).epsilon(0.06));
    }
    SUBCASE("a single label never overlaps") {
        Matrix m(5, 1);
        m << 0, 1, 2, 3, 4;
        CHECK(overlap_score(m, Labeling{{0, 0, kUnassigned, 0, 0}, 1}) == 0.0);
    }
    SUBCASE("unassigned neighbours are ignored") {
        Matrix m(3, 1);
        m << 0, 1, 2;
        // sample 1 ties between 0 and 2 and takes the lower index
        CHECK(overlap_score(m, Labeling{{0, 1, 1}, 2}) == doctest::Approx(2.0 / 3.0));
        CHECK(overlap_score(m, Labeling{{0, kUnassigned, 0}, 2}) == 0.0);
    }
    SUBCASE("needs two assigned samples") {
        Matrix m(2, 1);
        m << 0, 1;
        CHECK_THROWS_AS(overlap_score(m, Labeling{{0, kUnassigned}, 1}), InsufficientDataError);
    }
}

TEST_CASE("consistency report") {
    Rng rng(2);
    Matrix m(300, 2);
    std::vector<int> l(300);
    for (int i = 0; i < 300; ++i) {
        m(i, 0) = rng.uniform(0, 10);
        m(i, 1) = rng.uniform(0, 10);
        l[i] = m(i, 0) < 5 ? 0 : 1;
    }
    const Dataset ds(m, {"f1", "f2"});
    SubspaceSpec spec;
    spec.subspaces = {{"f1", {"f1"}}, {"f2", {"f2"}}};
    const auto sc = SubspaceConfig::resolve(spec, ds.column_names());
    const Labeling lab{l, 2};
    ReportOptions opts;
    opts.n_perm = 30;
    const ConsistencyReport r = consistency_report(
        ds, sc, {{"a", lab}, {"b", lab}, {"none", Labeling{std::vector<int>(300, kUnassigned), 2}}}, opts);

    REQUIRE(r.methods.size() == 3);
    const MethodReport& a = r.method("a");
    const MethodReport& b = r.method("b");
    CHECK(a.pairs.size() == 1);
    CHECK(a.pairs[0].mi == b.pairs[0].mi);
    CHECK(a.pairs[0].p_value == b.pairs[0].p_value);
    CHECK(a.silhouette_joint == b.silhouette_joint);
    CHECK(a.overlap == b.overlap);
    CHECK(a.overlap[0] == 0.0);

    const MethodReport& none = r.method("none");
    CHECK(none.insufficient_data);
    CHECK_FALSE(none.pairs[0].mi.has_value());
    CHECK_FALSE(none.silhouette_joint.has_value());
    CHECK_THROWS(r.method("missing"));
}
