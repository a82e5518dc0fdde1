#include "conceptid/cmaes.hpp"

#include "conceptid/error.hpp"
#include "conceptid/rng.hpp"

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <ostream>

namespace conceptid {

void CmaesConfig::validate() const {
    if (population_size < 2) throw ConfigError("population size must be at least 2");
    if (generations < 1) throw ConfigError("at least one generation is required");
    if (!(initial_sigma > 0.0) || !std::isfinite(initial_sigma)) {
        throw ConfigError("initial sigma must be positive and finite");
    }
}

CmaesParameters CmaesParameters::defaults(std::size_t dim, std::size_t lambda) {
    CmaesParameters p;
    const double n = static_cast<double>(dim);
    p.lambda = lambda;
    p.mu = lambda / 2;
    double sum = 0.0;
    for (std::size_t i = 0; i < p.mu; ++i) {
        const double w = std::log((static_cast<double>(lambda) + 1.0) / 2.0) -
                         std::log(static_cast<double>(i) + 1.0);
        p.weights.push_back(w);
        sum += w;
    }
    double sum_sq = 0.0;
    for (double& w : p.weights) {
        w /= sum;
        sum_sq += w * w;
    }
    p.mu_eff = 1.0 / sum_sq;

    p.c_sigma = (p.mu_eff + 2.0) / (n + p.mu_eff + 5.0);
    p.d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((p.mu_eff - 1.0) / (n + 1.0)) - 1.0) + p.c_sigma;
    p.c_c = (4.0 + p.mu_eff / n) / (n + 4.0 + 2.0 * p.mu_eff / n);
    p.c_1 = 2.0 / ((n + 1.3) * (n + 1.3) + p.mu_eff);
    p.c_mu = std::min(1.0 - p.c_1,
                      2.0 * (p.mu_eff - 2.0 + 1.0 / p.mu_eff) / ((n + 2.0) * (n + 2.0) + p.mu_eff));
    p.chi_n = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
    return p;
}

Cmaes::Cmaes(std::size_t dim, const CmaesConfig& cfg)
    : Cmaes(Vector::Zero(static_cast<Eigen::Index>(dim)), cfg) {}

Cmaes::Cmaes(const Vector& initial_mean, const CmaesConfig& cfg)
    : dim_(static_cast<std::size_t>(initial_mean.size())), cfg_(cfg) {
    if (dim_ < 1) throw ConfigError("search dimension must be at least 1");
    cfg_.validate();
    params_ = CmaesParameters::defaults(dim_, cfg_.population_size);

    const auto n = static_cast<Eigen::Index>(dim_);
    state_.mean = initial_mean;
    state_.sigma = cfg_.initial_sigma;
    state_.covariance = Eigen::MatrixXd::Identity(n, n);
    state_.eigvecs = Eigen::MatrixXd::Identity(n, n);
    state_.eigvals_sqrt = Vector::Ones(n);
    state_.path_sigma = Vector::Zero(n);
    state_.path_c = Vector::Zero(n);
    state_.best_genotype = initial_mean;
}

std::vector<Vector> Cmaes::ask() const {
    Rng rng(derive_seed(cfg_.seed, state_.generation));
    const auto n = static_cast<Eigen::Index>(dim_);
    std::vector<Vector> population;
    population.reserve(params_.lambda);
    for (std::size_t j = 0; j < params_.lambda; ++j) {
        Vector z(n);
        for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.normal();
        const Vector y = state_.eigvecs * state_.eigvals_sqrt.cwiseProduct(z);
        population.push_back(state_.mean + state_.sigma * y);
    }
    return population;
}

void Cmaes::tell(const std::vector<Vector>& genotypes, std::span<const double> fitnesses) {
    if (genotypes.size() != params_.lambda || fitnesses.size() != params_.lambda) {
        throw DimensionError("tell() expects exactly lambda genotypes and fitnesses");
    }
    const auto n = static_cast<Eigen::Index>(dim_);
    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<double> fit(fitnesses.begin(), fitnesses.end());
    for (double& f : fit) {
        if (!std::isfinite(f)) f = ninf;
    }

    std::vector<std::size_t> order(params_.lambda);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fit[a] > fit[b]; });

    if (fit[order[0]] > state_.best_fitness) {
        state_.best_fitness = fit[order[0]];
        state_.best_genotype = genotypes[order[0]];
    }

    const bool flat = fit[order.front()] == fit[order.back()];
    if (flat) {
        // No ranking information: keep the distribution, widen the step.
        state_.sigma *= std::exp(0.2 + params_.c_sigma / params_.d_sigma);
        state_.sigma = std::clamp(state_.sigma, kMinSigma, kMaxSigma);
        ++state_.generation;
        return;
    }

    const Vector old_mean = state_.mean;
    Vector new_mean = Vector::Zero(n);
    for (std::size_t i = 0; i < params_.mu; ++i) new_mean += params_.weights[i] * genotypes[order[i]];
    const Vector y_w = (new_mean - old_mean) / state_.sigma;

    // C^{-1/2} y_w = B D^{-1} B^T y_w
    const Vector c_inv_sqrt_y =
        state_.eigvecs * (state_.eigvecs.transpose() * y_w).cwiseQuotient(state_.eigvals_sqrt);
    state_.path_sigma = (1.0 - params_.c_sigma) * state_.path_sigma +
                        std::sqrt(params_.c_sigma * (2.0 - params_.c_sigma) * params_.mu_eff) *
                            c_inv_sqrt_y;

    const double gen = static_cast<double>(state_.generation + 1);
    const double ps_norm = state_.path_sigma.norm();
    const double h_sigma_threshold = (1.4 + 2.0 / (static_cast<double>(dim_) + 1.0)) * params_.chi_n;
    const bool h_sigma =
        ps_norm / std::sqrt(1.0 - std::pow(1.0 - params_.c_sigma, 2.0 * gen)) < h_sigma_threshold;

    state_.path_c = (1.0 - params_.c_c) * state_.path_c;
    if (h_sigma) {
        state_.path_c += std::sqrt(params_.c_c * (2.0 - params_.c_c) * params_.mu_eff) * y_w;
    }

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < params_.mu; ++i) {
        const Vector y = (genotypes[order[i]] - old_mean) / state_.sigma;
        rank_mu.noalias() += params_.weights[i] * y * y.transpose();
    }
    const double delta_h = h_sigma ? 0.0 : params_.c_c * (2.0 - params_.c_c);
    state_.covariance = (1.0 - params_.c_1 - params_.c_mu + params_.c_1 * delta_h) * state_.covariance +
                        params_.c_1 * state_.path_c * state_.path_c.transpose() +
                        params_.c_mu * rank_mu;

    state_.sigma *= std::exp((params_.c_sigma / params_.d_sigma) * (ps_norm / params_.chi_n - 1.0));
    state_.sigma = std::clamp(state_.sigma, kMinSigma, kMaxSigma);
    state_.mean = new_mean;
    ++state_.generation;
    update_eigensystem();
}

void Cmaes::update_eigensystem() {
    Eigen::MatrixXd sym = 0.5 * (state_.covariance + state_.covariance.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        // fall back to the last good factorisation
        state_.covariance = state_.eigvecs * state_.eigvals_sqrt.cwiseAbs2().asDiagonal() *
                            state_.eigvecs.transpose();
        return;
    }
    Vector eigvals = solver.eigenvalues().cwiseMax(kMinEigenvalue);
    state_.eigvecs = solver.eigenvectors();
    state_.eigvals_sqrt = eigvals.cwiseSqrt();
    if ((solver.eigenvalues().array() < kMinEigenvalue).any()) {
        state_.covariance = state_.eigvecs * eigvals.asDiagonal() * state_.eigvecs.transpose();
    } else {
        state_.covariance = sym;
    }
}

CmaesResult run_cmaes(const Objective& objective, std::size_t dim, const CmaesConfig& cfg,
                      const CmaesRunOptions& options) {
    cfg.validate();
    Cmaes es = options.initial_mean ? Cmaes(*options.initial_mean, cfg) : Cmaes(dim, cfg);
    if (es.dim() != dim) throw DimensionError("initial mean does not match the search dimension");

    CmaesResult result;
    result.history.reserve(cfg.generations);
    const std::size_t lambda = cfg.population_size;
    std::vector<double> fitness(lambda);
    std::vector<std::exception_ptr> failures(lambda);

    for (std::size_t gen = 0; gen < cfg.generations; ++gen) {
        const auto population = es.ask();
        const auto count = static_cast<std::ptrdiff_t>(lambda);
#pragma omp parallel for schedule(dynamic) if (options.parallel)
        for (std::ptrdiff_t j = 0; j < count; ++j) {
            const auto idx = static_cast<std::size_t>(j);
            try {
                fitness[idx] = objective(population[idx]);
            } catch (...) {
                failures[idx] = std::current_exception();
            }
        }
        result.evaluations += lambda;
        for (const auto& failure : failures) {
            if (!failure) continue;
            try {
                std::rethrow_exception(failure);
            } catch (const std::exception& e) {
                throw OptimizerAbort("objective failed in generation " + std::to_string(gen) +
                                         ": " + e.what(),
                                     gen);
            } catch (...) {
                throw OptimizerAbort("objective failed in generation " + std::to_string(gen), gen);
            }
        }
        es.tell(population, fitness);
        result.history.push_back(es.state().best_fitness);
        if (options.progress) {
            const nlohmann::json line{{"gen", gen},
                                      {"best", es.state().best_fitness},
                                      {"sigma", es.state().sigma}};
            *options.progress << line.dump() << '\n';
        }
    }
    result.best_genotype = es.state().best_genotype;
    result.best_fitness = es.state().best_fitness;
    return result;
}

} // namespace conceptid
