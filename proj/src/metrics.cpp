#include "conceptid/metrics.hpp"

#include "conceptid/error.hpp"
#include "conceptid/kernels.hpp"
#include "conceptid/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace conceptid {

double digamma_int(std::size_t n) {
    if (n == 0) throw RangeError("digamma is undefined at 0");
    static constexpr double kEulerGamma = 0.57721566490153286061;
    // table for small arguments, asymptotic series beyond
    if (n < 64) {
        double h = 0.0;
        for (std::size_t j = 1; j < n; ++j) h += 1.0 / static_cast<double>(j);
        return h - kEulerGamma;
    }
    const double x = static_cast<double>(n);
    const double x2 = 1.0 / (x * x);
    return std::log(x) - 0.5 / x -
           x2 * (1.0 / 12.0 - x2 * (1.0 / 120.0 - x2 * (1.0 / 252.0 - x2 * (1.0 / 240.0 - x2 / 132.0))));
}

namespace {

std::uint64_t content_hash(const Matrix& block) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    const auto* bytes = reinterpret_cast<const unsigned char*>(block.data());
    const std::size_t len = static_cast<std::size_t>(block.size()) * sizeof(double);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 0x100000001B3ULL;
    }
    h ^= static_cast<std::uint64_t>(block.cols());
    return h;
}

double column_std(const Matrix& m, Eigen::Index j) {
    const double mean = m.col(j).mean();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) acc += (m(i, j) - mean) * (m(i, j) - mean);
    return std::sqrt(acc / static_cast<double>(m.rows()));
}

void check_pair(const Matrix& x, const Matrix& y, std::size_t k) {
    if (x.rows() != y.rows()) throw DimensionError("X and Y must have the same number of rows");
    if (x.cols() < 1 || y.cols() < 1) throw DimensionError("X and Y need at least one column");
    if (k < 1) throw ConfigError("k must be at least 1");
    if (static_cast<std::size_t>(x.rows()) <= k) {
        throw InsufficientDataError("KSG needs more than k = " + std::to_string(k) + " samples, got " +
                                    std::to_string(x.rows()));
    }
}

void check_variance(const Matrix& m, const char* name) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (!(column_std(m, j) > 0.0)) {
            throw InsufficientDataError(std::string("zero-variance column in ") + name);
        }
    }
}

/// Labels restricted to assigned samples and relabelled densely.
struct DenseLabels {
    std::vector<std::size_t> rows;
    std::vector<int> labels;
    std::size_t n_clusters = 0;
};

DenseLabels densify(const Labeling& labeling) {
    DenseLabels out;
    std::map<int, int> remap;
    for (std::size_t i = 0; i < labeling.size(); ++i) {
        const int l = labeling.labels[i];
        if (l == kUnassigned) continue;
        remap.emplace(l, 0);
    }
    int next = 0;
    for (auto& [label, dense] : remap) dense = next++;
    for (std::size_t i = 0; i < labeling.size(); ++i) {
        const int l = labeling.labels[i];
        if (l == kUnassigned) continue;
        out.rows.push_back(i);
        out.labels.push_back(remap[l]);
    }
    out.n_clusters = remap.size();
    return out;
}

Matrix rows_of(const Matrix& m, std::span<const std::size_t> rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.row(static_cast<Eigen::Index>(r)) = m.row(static_cast<Eigen::Index>(rows[r]));
    }
    return out;
}

} // namespace

Matrix jitter(const Matrix& block, std::uint64_t seed) {
    Rng rng(derive_seed(seed, content_hash(block)));
    Matrix out = block;
    std::vector<double> amp(static_cast<std::size_t>(block.cols()));
    for (Eigen::Index j = 0; j < block.cols(); ++j) {
        amp[static_cast<std::size_t>(j)] = kJitterAmplitude * column_std(block, j);
    }
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            out(i, j) += amp[static_cast<std::size_t>(j)] * rng.uniform(-1.0, 1.0);
        }
    }
    return out;
}

double ksg_mi_raw(const Matrix& x, const Matrix& y, std::size_t k, bool parallel) {
    check_pair(x, y, k);
    const auto counts = parallel ? kernels::omp::ksg_counts(x, y, k)
                                 : kernels::serial::ksg_counts(x, y, k);
    const std::size_t n = counts.nx.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += digamma_int(counts.nx[i] + 1) + digamma_int(counts.ny[i] + 1);
    }
    return digamma_int(k) + digamma_int(n) - acc / static_cast<double>(n);
}

MiEstimate ksg_mi(const Matrix& x, const Matrix& y, std::size_t k, std::uint64_t jitter_seed,
                  bool parallel) {
    check_pair(x, y, k);
    const Matrix xj = jitter(x, jitter_seed);
    const Matrix yj = jitter(y, jitter_seed);
    check_variance(xj, "X");
    check_variance(yj, "Y");
    return MiEstimate{ksg_mi_raw(xj, yj, k, parallel), k, static_cast<std::size_t>(x.rows())};
}

PermutationTestResult mi_permutation_test(const Matrix& x, const Matrix& y, std::size_t k,
                                          std::size_t n_perm, std::uint64_t seed, bool parallel) {
    if (n_perm < 1) throw ConfigError("at least one permutation is required");
    check_pair(x, y, k);
    const Matrix xj = jitter(x, seed);
    const Matrix yj = jitter(y, seed);
    check_variance(xj, "X");
    check_variance(yj, "Y");

    PermutationTestResult result;
    result.observed = MiEstimate{ksg_mi_raw(xj, yj, k, parallel), k, static_cast<std::size_t>(x.rows())};
    result.null_values.assign(n_perm, 0.0);
    const auto n = static_cast<std::size_t>(x.rows());
    const auto count = static_cast<std::ptrdiff_t>(n_perm);

    // Surrogates run in parallel; the nested estimator loops then run on one thread.
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::ptrdiff_t p = 0; p < count; ++p) {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        Rng rng(derive_seed(derive_seed(seed, "permutation"), static_cast<std::uint64_t>(p)));
        rng.shuffle(std::span<std::size_t>(perm));
        const Matrix ys = rows_of(yj, perm);
        result.null_values[static_cast<std::size_t>(p)] = ksg_mi_raw(xj, ys, k, parallel);
    }
    std::size_t exceed = 0;
    for (double v : result.null_values) exceed += v >= result.observed.value;
    result.p_value = static_cast<double>(exceed + 1) / static_cast<double>(n_perm + 1);
    return result;
}

double silhouette(const Matrix& points, const Labeling& labeling, bool parallel) {
    if (labeling.size() != static_cast<std::size_t>(points.rows())) {
        throw DimensionError("labeling length does not match the data");
    }
    const DenseLabels dense = densify(labeling);
    if (dense.n_clusters < 2) {
        throw UndefinedMetricError("silhouette needs at least two non-empty clusters");
    }
    const Matrix sub = rows_of(points, dense.rows);
    const auto values = parallel ? kernels::omp::silhouette_values(sub, dense.labels, dense.n_clusters)
                                 : kernels::serial::silhouette_values(sub, dense.labels, dense.n_clusters);
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc / static_cast<double>(values.size());
}

double overlap_score(const Matrix& points, const Labeling& labeling, bool parallel) {
    if (labeling.size() != static_cast<std::size_t>(points.rows())) {
        throw DimensionError("labeling length does not match the data");
    }
    const DenseLabels dense = densify(labeling);
    if (dense.rows.size() < 2) {
        throw InsufficientDataError("overlap score needs at least two assigned samples");
    }
    const Matrix sub = rows_of(points, dense.rows);
    const auto nn = parallel ? kernels::omp::nearest_neighbors(sub)
                             : kernels::serial::nearest_neighbors(sub);
    std::size_t mixed = 0;
    for (std::size_t i = 0; i < nn.size(); ++i) mixed += dense.labels[i] != dense.labels[nn[i]];
    return static_cast<double>(mixed) / static_cast<double>(nn.size());
}

const MethodReport& ConsistencyReport::method(const std::string& name) const {
    for (const auto& m : methods) {
        if (m.method == name) return m;
    }
    throw RangeError("no method named '" + name + "' in report");
}

ConsistencyReport consistency_report(const Dataset& dataset, const SubspaceConfig& subspaces,
                                     const NamedLabelings& labelings, const ReportOptions& options) {
    ConsistencyReport report;
    report.options = options;
    for (const auto& s : subspaces.subspaces()) report.subspace_names.push_back(s.name);
    const std::size_t ns = subspaces.size();

    std::vector<Matrix> projections;
    for (std::size_t k = 0; k < ns; ++k) projections.push_back(project(dataset, subspaces, k));

    for (const auto& [name, labeling] : labelings) {
        if (labeling.size() != dataset.rows()) {
            throw DimensionError("labeling '" + name + "' has " + std::to_string(labeling.size()) +
                                 " entries, dataset has " + std::to_string(dataset.rows()));
        }
        MethodReport m;
        m.method = name;
        const DenseLabels dense = densify(labeling);
        m.n_assigned = dense.rows.size();
        m.n_clusters = dense.n_clusters;
        m.insufficient_data = m.n_assigned < options.k + 1;
        m.silhouette_subspace.assign(ns, std::nullopt);
        m.overlap.assign(ns, std::nullopt);
        for (std::size_t a = 0; a < ns; ++a) {
            for (std::size_t b = a + 1; b < ns; ++b) m.pairs.push_back(SubspacePairResult{a, b, {}, {}});
        }
        if (m.insufficient_data) {
            report.methods.push_back(std::move(m));
            continue;
        }

        for (auto& pair : m.pairs) {
            const Matrix x = rows_of(projections[pair.first], dense.rows);
            const Matrix y = rows_of(projections[pair.second], dense.rows);
            try {
                const auto test = mi_permutation_test(x, y, options.k, options.n_perm,
                                                      options.seed, options.parallel);
                pair.mi = test.observed.value;
                pair.p_value = test.p_value;
            } catch (const InsufficientDataError&) {
                // constant projection among the assigned samples
            }
        }
        if (m.n_clusters >= 2) {
            m.silhouette_joint = silhouette(dataset.values(), labeling, options.parallel);
            for (std::size_t k = 0; k < ns; ++k) {
                m.silhouette_subspace[k] = silhouette(projections[k], labeling, options.parallel);
            }
        }
        for (std::size_t k = 0; k < ns; ++k) {
            m.overlap[k] = overlap_score(projections[k], labeling, options.parallel);
        }
        report.methods.push_back(std::move(m));
    }
    return report;
}

} // namespace conceptid
