#include "conceptid/datagen.hpp"

#include "conceptid/error.hpp"
#include "conceptid/rng.hpp"

#include <algorithm>
#include <cmath>

namespace conceptid {

std::string to_string(GeneratorKind kind) {
    switch (kind) {
    case GeneratorKind::Uniform2d: return "uniform2d";
    case GeneratorKind::Gaussian4d: return "gaussian4d";
    case GeneratorKind::EnergySurrogate: return "energy_surrogate";
    }
    return "unknown";
}

GeneratorKind parse_generator_kind(const std::string& name) {
    if (name == "uniform2d") return GeneratorKind::Uniform2d;
    if (name == "gaussian4d") return GeneratorKind::Gaussian4d;
    if (name == "energy_surrogate" || name == "energy") return GeneratorKind::EnergySurrogate;
    throw ConfigError("unknown generator kind '" + name + "'");
}

int uniform2d_region(double x, double y) {
    for (std::size_t r = 0; r < kUniform2dArea.size(); ++r) {
        if (kUniform2dArea[r].contains(x, y)) return static_cast<int>(r);
    }
    return -1;
}

namespace {

void check_n(std::size_t n) {
    if (n < 1) throw ConfigError("at least one sample is required");
}

/// Uniform on [lo, hi), guarding against rounding up to hi.
double uniform_half_open(Rng& rng, double lo, double hi) {
    const double v = lo + (hi - lo) * rng.uniform();
    return v < hi ? v : std::nextafter(hi, lo);
}

} // namespace

Dataset gen_2d(std::size_t n, std::uint64_t seed) {
    check_n(n);
    Rng rng(derive_seed(seed, "uniform2d"));
    double total = 0.0;
    for (const auto& r : kUniform2dArea) total += r.area();

    Matrix values(static_cast<Eigen::Index>(n), 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double pick = rng.uniform() * total;
        std::size_t r = 0;
        double acc = kUniform2dArea[0].area();
        while (pick >= acc && r + 1 < kUniform2dArea.size()) acc += kUniform2dArea[++r].area();
        const Rect& rect = kUniform2dArea[r];
        values(static_cast<Eigen::Index>(i), 0) = uniform_half_open(rng, rect.x0, rect.x1);
        values(static_cast<Eigen::Index>(i), 1) = uniform_half_open(rng, rect.y0, rect.y1);
    }
    return Dataset(std::move(values), {"f1", "f2"});
}

Dataset gen_4d(std::size_t n, std::uint64_t seed, double sigma) {
    check_n(n);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ConfigError("sigma must be positive");
    }
    Rng rng(derive_seed(seed, "gaussian4d"));
    Matrix values(static_cast<Eigen::Index>(n), 4);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& center = kGaussian4dCenters[i % kGaussian4dCenters.size()];
        for (std::size_t j = 0; j < 4; ++j) {
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                center[j] + sigma * rng.normal();
        }
    }
    return Dataset(std::move(values), {"f1", "f2", "f3", "f4"});
}

Dataset gen_energy_surrogate(std::size_t n, std::uint64_t seed,
                             const EnergySurrogateConstants& k) {
    check_n(n);
    Rng rng(derive_seed(seed, "energy_surrogate"));
    Matrix values(static_cast<Eigen::Index>(n), 3);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform(k.investment_lo, k.investment_hi);
        const double yearly = k.a - k.b * u + k.noise_std * rng.normal();
        const double resilience =
            -(k.c * u + k.d * (k.a - yearly)) + k.noise_std * rng.normal();
        const auto r = static_cast<Eigen::Index>(i);
        values(r, 0) = u;
        values(r, 1) = yearly;
        values(r, 2) = std::min(resilience, 0.0);
    }
    return Dataset(std::move(values), {"investment", "yearly_costs", "resilience"});
}

Dataset generate(const GeneratorSpec& spec) {
    switch (spec.kind) {
    case GeneratorKind::Uniform2d: return gen_2d(spec.n_samples, spec.seed);
    case GeneratorKind::Gaussian4d: return gen_4d(spec.n_samples, spec.seed, spec.sigma);
    case GeneratorKind::EnergySurrogate: return gen_energy_surrogate(spec.n_samples, spec.seed);
    }
    throw ConfigError("unknown generator kind");
}

} // namespace conceptid
