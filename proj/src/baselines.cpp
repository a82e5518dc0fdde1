#include "conceptid/baselines.hpp"

#include "conceptid/error.hpp"
#include "conceptid/kernels.hpp"
#include "conceptid/rng.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>

namespace conceptid {

namespace {

void check_k(std::size_t k, std::size_t n) {
    if (k < 1) throw ConfigError("k must be at least 1");
    if (k > n) {
        throw ConfigError("k = " + std::to_string(k) + " exceeds the sample count " +
                          std::to_string(n));
    }
}

void assign(const Matrix& points, const Matrix& centers, std::vector<int>& labels,
            std::vector<double>& sq_dist, bool parallel) {
    if (parallel) {
        kernels::omp::assign_nearest(points, centers, labels, sq_dist);
    } else {
        kernels::serial::assign_nearest(points, centers, labels, sq_dist);
    }
}

double ordered_sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

Labeling radius_truncation(const Labeling& labeling, const Matrix& centers, const Matrix& points,
                           double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw ConfigError("radius fraction must lie in (0, 1]");
    }
    if (labeling.size() != static_cast<std::size_t>(points.rows())) {
        throw DimensionError("labeling length does not match the data");
    }
    std::vector<double> dist(labeling.size(), 0.0);
    double d_max = 0.0;
    for (std::size_t i = 0; i < labeling.size(); ++i) {
        const int l = labeling.labels[i];
        if (l == kUnassigned) continue;
        dist[i] = (points.row(static_cast<Eigen::Index>(i)) - centers.row(l)).norm();
        d_max = std::max(d_max, dist[i]);
    }
    Labeling out = labeling;
    const double radius = fraction * d_max;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out.labels[i] != kUnassigned && dist[i] > radius) out.labels[i] = kUnassigned;
    }
    return out;
}

Eigen::MatrixXd covariance_of(const Matrix& points) {
    const Vector mean = points.colwise().mean().transpose();
    const Matrix centered = points.rowwise() - mean.transpose();
    return (centered.transpose() * centered) / static_cast<double>(points.rows());
}

} // namespace

Matrix kmeanspp_seed(const Matrix& points, std::size_t k, std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(points.rows());
    check_k(k, n);
    Rng rng(seed);
    Matrix centers(static_cast<Eigen::Index>(k), points.cols());
    std::size_t first = rng.uniform_index(n);
    centers.row(0) = points.row(static_cast<Eigen::Index>(first));

    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) {
        d2[i] = (points.row(static_cast<Eigen::Index>(i)) - centers.row(0)).squaredNorm();
    }
    for (std::size_t c = 1; c < k; ++c) {
        const double total = ordered_sum(d2);
        std::size_t chosen = n - 1;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc > target && d2[i] > 0.0) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = rng.uniform_index(n); // all points coincide with chosen centers
        }
        centers.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(chosen));
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], (points.row(static_cast<Eigen::Index>(i)) -
                                     centers.row(static_cast<Eigen::Index>(c)))
                                        .squaredNorm());
        }
    }
    return centers;
}

KmeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed,
                    const KmeansOptions& options) {
    const auto n = static_cast<std::size_t>(points.rows());
    check_k(k, n);
    if (options.max_iter < 1) throw ConfigError("max_iter must be at least 1");

    KmeansResult result;
    result.centers = kmeanspp_seed(points, k, derive_seed(seed, "kmeans++"));
    std::vector<int> labels(n, kUnassigned);
    std::vector<int> next(n);
    std::vector<double> sq_dist(n);
    bool converged = false;

    for (std::size_t it = 0; it < options.max_iter; ++it) {
        assign(points, result.centers, next, sq_dist, options.parallel);
        result.inertia = ordered_sum(sq_dist);
        result.inertia_history.push_back(result.inertia);
        ++result.iterations;
        if (next == labels) {
            converged = true;
            break;
        }
        labels = next;

        Matrix sums = Matrix::Zero(static_cast<Eigen::Index>(k), points.cols());
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums.row(labels[i]) += points.row(static_cast<Eigen::Index>(i));
            ++sizes[static_cast<std::size_t>(labels[i])];
        }
        for (std::size_t c = 0; c < k; ++c) {
            const auto row = static_cast<Eigen::Index>(c);
            if (sizes[c] > 0) {
                result.centers.row(row) = sums.row(row) / static_cast<double>(sizes[c]);
                continue;
            }
            // empty cluster: move it onto the sample farthest from its center
            const auto far = static_cast<std::size_t>(
                std::max_element(sq_dist.begin(), sq_dist.end()) - sq_dist.begin());
            result.centers.row(row) = points.row(static_cast<Eigen::Index>(far));
            sq_dist[far] = 0.0;
            ++result.empty_cluster_repairs;
        }
    }
    if (!converged) {
        assign(points, result.centers, labels, sq_dist, options.parallel);
        result.inertia = ordered_sum(sq_dist);
    }
    result.labeling = Labeling{std::move(labels), k};
    return result;
}

KmeansResult kmeans(const Dataset& dataset, std::size_t k, std::uint64_t seed,
                    const KmeansOptions& options) {
    return kmeans(dataset.values(), k, seed, options);
}

Labeling truncate_by_radius(const Labeling& labeling, const Matrix& centers, const Matrix& points,
                            double fraction) {
    return radius_truncation(labeling, centers, points, fraction);
}

Labeling truncate_by_radius(const KmeansResult& result, const Dataset& dataset, double fraction) {
    return radius_truncation(result.labeling, result.centers, dataset.values(), fraction);
}

GmmResult gmm_em(const Matrix& points, std::size_t k, std::uint64_t seed,
                 const GmmOptions& options) {
    const auto n = static_cast<std::size_t>(points.rows());
    const Eigen::Index d = points.cols();
    check_k(k, n);
    if (options.max_iter < 1) throw ConfigError("max_iter must be at least 1");

    const Eigen::MatrixXd global_cov = covariance_of(points);
    Vector ridge(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double var = global_cov(j, j);
        ridge[j] = options.reg_fraction * (var > 0.0 ? var : 1.0);
    }

    GmmResult r;
    r.weights = Vector::Constant(static_cast<Eigen::Index>(k), 1.0 / static_cast<double>(k));
    r.means = kmeanspp_seed(points, k, derive_seed(seed, "gmm"));
    r.covariances.assign(k, global_cov + Eigen::MatrixXd(ridge.asDiagonal()));

    const auto e_step = [&]() {
        std::vector<kernels::GaussianComponent> comps(k);
        for (std::size_t c = 0; c < k; ++c) {
            Eigen::LLT<Eigen::MatrixXd> llt(r.covariances[c]);
            comps[c].log_weight = std::log(r.weights[static_cast<Eigen::Index>(c)]);
            comps[c].mean = r.means.row(static_cast<Eigen::Index>(c)).transpose();
            comps[c].chol_lower = llt.matrixL();
            comps[c].log_det = 2.0 * comps[c].chol_lower.diagonal().array().log().sum();
        }
        Matrix logd = options.parallel ? kernels::omp::log_weighted_densities(points, comps)
                                       : kernels::serial::log_weighted_densities(points, comps);
        double ll = 0.0;
        for (Eigen::Index i = 0; i < logd.rows(); ++i) {
            const double m = logd.row(i).maxCoeff();
            double s = 0.0;
            for (Eigen::Index c = 0; c < logd.cols(); ++c) s += std::exp(logd(i, c) - m);
            const double lse = m + std::log(s);
            for (Eigen::Index c = 0; c < logd.cols(); ++c) logd(i, c) = std::exp(logd(i, c) - lse);
            ll += lse;
        }
        r.responsibilities = std::move(logd);
        return ll;
    };

    bool synced = false;
    for (std::size_t it = 0; it < options.max_iter; ++it) {
        const double ll = e_step();
        r.log_likelihood_history.push_back(ll);
        r.log_likelihood = ll;
        ++r.iterations;
        synced = true;
        const std::size_t h = r.log_likelihood_history.size();
        if (h >= 2 && ll - r.log_likelihood_history[h - 2] < options.tol) break;
        if (it + 1 == options.max_iter) break;

        // M-step
        for (std::size_t c = 0; c < k; ++c) {
            const auto ci = static_cast<Eigen::Index>(c);
            const double nk = r.responsibilities.col(ci).sum();
            if (!(nk > 0.0)) {
                r.covariances[c] = global_cov + Eigen::MatrixXd(ridge.asDiagonal());
                r.weights[ci] = std::numeric_limits<double>::min();
                continue;
            }
            r.weights[ci] = nk / static_cast<double>(n);
            const Vector mean = (r.responsibilities.col(ci).transpose() * points).transpose() / nk;
            Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
            for (std::size_t i = 0; i < n; ++i) {
                const Vector diff = points.row(static_cast<Eigen::Index>(i)).transpose() - mean;
                cov.noalias() += r.responsibilities(static_cast<Eigen::Index>(i), ci) * diff * diff.transpose();
            }
            cov /= nk;
            cov.diagonal() += ridge;
            r.means.row(ci) = mean.transpose();
            r.covariances[c] = 0.5 * (cov + cov.transpose());
        }
        r.weights /= r.weights.sum();
        synced = false;
    }
    if (!synced) r.log_likelihood = e_step();

    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        Eigen::Index best = 0;
        r.responsibilities.row(static_cast<Eigen::Index>(i)).maxCoeff(&best);
        labels[i] = static_cast<int>(best);
    }
    r.labeling = Labeling{std::move(labels), k};
    return r;
}

GmmResult gmm_em(const Dataset& dataset, std::size_t k, std::uint64_t seed,
                 const GmmOptions& options) {
    return gmm_em(dataset.values(), k, seed, options);
}

Labeling truncate_by_responsibility(const GmmResult& result, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw ConfigError("responsibility threshold must lie in (0, 1)");
    }
    Labeling out = result.labeling;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(result.responsibilities.row(static_cast<Eigen::Index>(i)).maxCoeff() > threshold)) {
            out.labels[i] = kUnassigned;
        }
    }
    return out;
}

Labeling truncate_by_radius(const GmmResult& result, const Dataset& dataset, double fraction) {
    return radius_truncation(result.labeling, result.means, dataset.values(), fraction);
}

} // namespace conceptid
