#ifndef CONCEPTID_CMAES_HPP
#define CONCEPTID_CMAES_HPP

#include "conceptid/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <optional>
#include <vector>

namespace conceptid {

struct CmaesConfig {
    std::size_t population_size = 10;
    std::size_t generations = 1000;
    double initial_sigma = 0.3;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Strategy constants, all derived from dimension and population size.
struct CmaesParameters {
    std::size_t lambda = 0;
    std::size_t mu = 0;
    std::vector<double> weights;
    double mu_eff = 0.0;
    double c_sigma = 0.0;
    double d_sigma = 0.0;
    double c_c = 0.0;
    double c_1 = 0.0;
    double c_mu = 0.0;
    double chi_n = 0.0;

    static CmaesParameters defaults(std::size_t dim, std::size_t lambda);
};

struct CmaesState {
    Vector mean;
    double sigma = 1.0;
    Eigen::MatrixXd covariance;
    Eigen::MatrixXd eigvecs; ///< B
    Vector eigvals_sqrt;     ///< diag(D)
    Vector path_sigma;
    Vector path_c;
    std::size_t generation = 0;
    Vector best_genotype;
    double best_fitness = -std::numeric_limits<double>::infinity();
};

/**
 * (mu/mu_w, lambda) covariance matrix adaptation evolution strategy,
 * maximizing. Ask/tell interface; ask() is a pure function of the state and
 * the seed so that repeated calls return the same population.
 */
class Cmaes {
public:
    Cmaes(std::size_t dim, const CmaesConfig& cfg);
    Cmaes(const Vector& initial_mean, const CmaesConfig& cfg);

    std::vector<Vector> ask() const;

    /// Fitness is higher-is-better; non-finite values rank last.
    void tell(const std::vector<Vector>& genotypes, std::span<const double> fitnesses);

    const CmaesState& state() const noexcept { return state_; }
    const CmaesParameters& parameters() const noexcept { return params_; }
    std::size_t dim() const noexcept { return dim_; }

    static constexpr double kMinEigenvalue = 1e-14;
    static constexpr double kMinSigma = 1e-16;
    static constexpr double kMaxSigma = 1e8;

private:
    void update_eigensystem();

    std::size_t dim_;
    CmaesConfig cfg_;
    CmaesParameters params_;
    CmaesState state_;
};

struct CmaesResult {
    Vector best_genotype;
    double best_fitness = 0.0;
    /// Best-so-far fitness after each generation.
    std::vector<double> history;
    std::size_t evaluations = 0;
};

using Objective = std::function<double(const Vector&)>;

struct CmaesRunOptions {
    std::optional<Vector> initial_mean;
    /// Evaluate the population with OpenMP. The objective must be thread safe.
    bool parallel = true;
    /// JSON-lines progress log: {"gen": .., "best": .., "sigma": ..}.
    std::ostream* progress = nullptr;
};

/// Run for exactly cfg.generations generations (lambda * generations evaluations).
CmaesResult run_cmaes(const Objective& objective, std::size_t dim, const CmaesConfig& cfg,
                      const CmaesRunOptions& options = {});

} // namespace conceptid

#endif
