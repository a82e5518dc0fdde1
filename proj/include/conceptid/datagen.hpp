#ifndef CONCEPTID_DATAGEN_HPP
#define CONCEPTID_DATAGEN_HPP

#include "conceptid/dataset.hpp"

#include <array>
#include <cstdint>
#include <string>

namespace conceptid {

enum class GeneratorKind { Uniform2d, Gaussian4d, EnergySurrogate };

std::string to_string(GeneratorKind kind);
/// Throws ConfigError on unknown names.
GeneratorKind parse_generator_kind(const std::string& name);

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::Uniform2d;
    std::size_t n_samples = 1000;
    std::uint64_t seed = 0;
    double sigma = 1.0; ///< gaussian4d only
};

/// The L-shaped area: [0,4)x[0,4) u [4,10)x[0,6) u [6,10)x[6,10).
struct Rect {
    double x0, x1, y0, y1;
    double area() const noexcept { return (x1 - x0) * (y1 - y0); }
    bool contains(double x, double y) const noexcept { return x0 <= x && x < x1 && y0 <= y && y < y1; }
};
inline constexpr std::array<Rect, 3> kUniform2dArea{{
    {0.0, 4.0, 0.0, 4.0},
    {4.0, 10.0, 0.0, 6.0},
    {6.0, 10.0, 6.0, 10.0},
}};

/// Index of the rectangle of kUniform2dArea containing (x, y), or -1.
int uniform2d_region(double x, double y);

inline constexpr std::array<std::array<double, 4>, 3> kGaussian4dCenters{{
    {0.0, 0.0, 0.0, 0.0},
    {10.0, 10.0, 10.0, 10.0},
    {10.0, 10.0, 0.0, 0.0},
}};

/// Synthetic stand-in for the energy-management table.
struct EnergySurrogateConstants {
    double a = 100.0;
    double b = 60.0;
    double c = 2.0;
    double d = 0.5;
    double noise_std = 3.0;
    double investment_lo = 0.5;
    double investment_hi = 1.5;
};

/// Area-proportional uniform sampling of kUniform2dArea; columns f1, f2.
Dataset gen_2d(std::size_t n, std::uint64_t seed);

/// Sample i is drawn around center i mod 3 with isotropic std sigma; columns f1..f4.
Dataset gen_4d(std::size_t n, std::uint64_t seed, double sigma = 1.0);

/// Columns investment, yearly_costs, resilience (resilience <= 0).
Dataset gen_energy_surrogate(std::size_t n, std::uint64_t seed,
                             const EnergySurrogateConstants& constants = {});

Dataset generate(const GeneratorSpec& spec);

} // namespace conceptid

#endif
