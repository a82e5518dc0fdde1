#include <doctest.h>

#include "conceptid/baselines.hpp"
#include "conceptid/error.hpp"
#include "conceptid/rng.hpp"
#include "oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>

using namespace conceptid;
using namespace conceptid::oracle;

namespace {

Matrix two_gaussians(std::size_t n_each, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(2 * n_each, 2);
    for (std::size_t i = 0; i < 2 * n_each; ++i) {
        const bool second = i >= n_each;
        m(i, 0) = (second ? 10.0 : -3.0) + (second ? 0.5 : 1.0) * rng.normal();
        m(i, 1) = (second ? 4.0 : 0.0) + (second ? 2.0 : 1.0) * rng.normal();
    }
    return m;
}


} // namespace

TEST_CASE("k-means finds the obvious split") {
    Matrix m(4, 1);
    m << 0, 0.1, 10, 10.1;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const KmeansResult r = kmeans(m, 2, seed);
        std::vector<double> c{r.centers(0, 0), r.centers(1, 0)};
        std::sort(c.begin(), c.end());
        CHECK(c[0] == doctest::Approx(0.05));
        CHECK(c[1] == doctest::Approx(10.05));
        CHECK(r.inertia == doctest::Approx(4 * 0.05 * 0.05));
    }
}

TEST_CASE("k equal to the number of points gives zero inertia") {
    Matrix m(5, 2);
    m << 0, 0, 1, 0, 0, 1, 5, 5, -2, 3;
    CHECK(kmeans(m, 5, 1).inertia == 0.0);
    CHECK_THROWS_AS(kmeans(m, 6, 1), ConfigError);
    CHECK_THROWS_AS(kmeans(m, 0, 1), ConfigError);
}

TEST_CASE("identical points force an empty-cluster repair") {
    const Matrix m = Matrix::Constant(6, 2, 1.5);
    const KmeansResult r = kmeans(m, 2, 4);
    CHECK(r.empty_cluster_repairs >= 1);
    CHECK(r.inertia == 0.0);
}

TEST_CASE("k-means inertia never increases") {
    Rng rng(1);
    Matrix m(800, 3);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index d = 0; d < 3; ++d) m(i, d) = rng.uniform(0, 1);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const KmeansResult r = kmeans(m, 7, seed);
        REQUIRE(r.inertia_history.size() >= 1);
        for (std::size_t i = 1; i < r.inertia_history.size(); ++i)
            CHECK(r.inertia_history[i] <= r.inertia_history[i - 1] * (1 + 1e-12));
    }
}

TEST_CASE("k-means is deterministic and thread-count independent") {
    const Matrix m = two_gaussians(300, 3);
    KmeansOptions serial, parallel;
    serial.parallel = false;
    const KmeansResult a = kmeans(m, 4, 9, serial);
    const KmeansResult b = kmeans(m, 4, 9, parallel);
    CHECK(a.centers == b.centers);
    CHECK(a.labeling.labels == b.labeling.labels);
    CHECK(a.inertia == b.inertia);
}

TEST_CASE("radius truncation keeps points within the fraction of the largest distance") {
    Matrix pts(5, 1);
    pts << -1, 2, 4, 97, 99.5;
    Matrix centers(2, 1);
    centers << 0, 100;
    const Labeling l{{0, 0, 0, 1, 1}, 2};
    // distances 1, 2, 4, 3, 0.5; d_max = 4
    CHECK(truncate_by_radius(l, centers, pts, 0.5).labels == std::vector<int>{0, 0, kUnassigned, kUnassigned, 1});
    CHECK(truncate_by_radius(l, centers, pts, 1.0).labels == l.labels);
    CHECK(truncate_by_radius(l, centers, pts, 1e-12).labels ==
          std::vector<int>(5, kUnassigned));
    CHECK_THROWS_AS(truncate_by_radius(l, centers, pts, 0.0), ConfigError);
    CHECK_THROWS_AS(truncate_by_radius(l, centers, pts, 1.5), ConfigError);

    Matrix with_center(2, 1);
    with_center << 0, 1;
    Matrix c1(1, 1);
    c1 << 0;
    CHECK(truncate_by_radius(Labeling{{0, 0}, 1}, c1, with_center, 1e-9).labels ==
          std::vector<int>{0, kUnassigned});
}

TEST_CASE("GMM recovers separated components") {
    const Matrix m = two_gaussians(1500, 11);
    const GmmResult r = gmm_em(m, 2, 2);
    const Eigen::Index first = r.means(0, 0) < r.means(1, 0) ? 0 : 1;
    const Eigen::Index second = 1 - first;
    CHECK(r.means(first, 0) == doctest::Approx(-3.0).epsilon(0.05));
    CHECK(std::abs(r.means(first, 1)) < 0.15);
    CHECK(r.means(second, 0) == doctest::Approx(10.0).epsilon(0.05));
    CHECK(r.means(second, 1) == doctest::Approx(4.0).epsilon(0.05));
    CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (Eigen::Index i = 0; i < r.responsibilities.rows(); ++i)
        REQUIRE(r.responsibilities.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& c : r.covariances) {
        CHECK((c - c.transpose()).norm() < 1e-12);
        CHECK(Eigen::LLT<Eigen::MatrixXd>(c).info() == Eigen::Success);
    }
}

TEST_CASE("single-component GMM is the sample mean and covariance") {
    const Matrix m = two_gaussians(200, 5);
    const GmmResult r = gmm_em(m, 1, 0);
    const Eigen::RowVectorXd mean = m.colwise().mean();
    const Matrix centred = m.rowwise() - mean;
    const Eigen::MatrixXd cov = (centred.transpose() * centred) / static_cast<double>(m.rows());
    CHECK((r.means.row(0) - mean).norm() < 1e-9);
    // the ridge adds at most 1e-6 of the variance to the diagonal
    CHECK((r.covariances[0] - cov).cwiseAbs().maxCoeff() < 1e-5 * cov.diagonal().maxCoeff());
}

TEST_CASE("EM log-likelihood never decreases") {
    Rng rng(8);
    Matrix m(600, 2);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        m(i, 0) = rng.uniform(0, 10);
        m(i, 1) = (m(i, 0) < 4 ? rng.uniform(0, 4) : rng.uniform(0, 6));
    }
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const GmmResult r = gmm_em(m, 3, seed);
        for (std::size_t i = 1; i < r.log_likelihood_history.size(); ++i)
            REQUIRE(r.log_likelihood_history[i] >= r.log_likelihood_history[i - 1] - 1e-9 * std::abs(r.log_likelihood_history[i - 1]));
    }
}

TEST_CASE("GMM is deterministic and thread-count independent") {
    const Matrix m = two_gaussians(300, 6);
    GmmOptions serial, parallel;
    serial.parallel = false;
    const GmmResult a = gmm_em(m, 3, 1, serial);
    const GmmResult b = gmm_em(m, 3, 1, parallel);
    CHECK(a.means == b.means);
    CHECK(a.log_likelihood == b.log_likelihood);
    CHECK(a.labeling.labels == b.labeling.labels);
}

TEST_CASE("responsibility truncation") {
    GmmResult r;
    r.responsibilities.resize(3, 2);
    r.responsibilities << 0.95, 0.05, 0.6, 0.4, 0.5, 0.5;
    r.labeling = Labeling{{0, 0, 0}, 2};
    CHECK(truncate_by_responsibility(r, 0.9).labels == std::vector<int>{0, kUnassigned, kUnassigned});
    CHECK(truncate_by_responsibility(r, 0.5).labels == std::vector<int>{0, 0, kUnassigned});
    CHECK_THROWS_AS(truncate_by_responsibility(r, 1.0), ConfigError);
}

TEST_CASE("truncations only ever remove samples") {
    const Matrix m = two_gaussians(400, 12);
    const Dataset ds(m, {"a", "b"});
    const KmeansResult km = kmeans(ds, 3, 1);
    const GmmResult gm = gmm_em(ds, 3, 1);
    for (double f : {0.05, 0.1, 0.2, 0.5, 1.0}) {
        CHECK(is_subset(truncate_by_radius(km, ds, f), km.labeling));
        CHECK(is_subset(truncate_by_radius(gm, ds, f), gm.labeling));
    }
    for (double t : {0.3, 0.5, 0.9, 0.999}) CHECK(is_subset(truncate_by_responsibility(gm, t), gm.labeling));
}
