#include "latentry/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "latentry/errors.hpp"

namespace latentry {

namespace {

constexpr double kRankTol = 1e-12;

// Cyclic Jacobi eigendecomposition of a symmetric n x n matrix (row-major).
// Sweeps run in a fixed (p, q) order until the off-diagonal Frobenius norm
// is negligible, so the result is deterministic for identical input bytes.
void jacobi_eigen(std::vector<double> a, std::size_t n,
                  std::vector<double>& eigenvalues,
                  std::vector<double>& eigenvectors /* column-major */) {
    eigenvectors.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) eigenvectors[i * n + i] = 1.0;

    auto off_norm2 = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += a[p * n + q] * a[p * n + q];
        return s;
    };
    double total = 0.0;
    for (double v : a) total += v * v;
    const double stop = std::max(total, 1e-300) * 1e-30;

    for (int sweep = 0; sweep < 100 && off_norm2() > stop; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0)
                                     ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                     : -1.0 / (-theta + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = eigenvectors[k * n + p];
                    const double vkq = eigenvectors[k * n + q];
                    eigenvectors[k * n + p] = c * vkp - s * vkq;
                    eigenvectors[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) eigenvalues[i] = a[i * n + i];
}

// Indices of eigenvalues in descending order; equal values keep index order.
std::vector<std::size_t> descending_order(const std::vector<double>& vals) {
    std::vector<std::size_t> idx(vals.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return vals[a] > vals[b];
    });
    return idx;
}

void apply_sign_convention(std::vector<double>& axis) {
    std::size_t imax = 0;
    for (std::size_t i = 1; i < axis.size(); ++i) {
        if (std::abs(axis[i]) > std::abs(axis[imax])) imax = i;
    }
    if (axis[imax] < 0.0) {
        for (double& v : axis) v = -v;
    }
}

// Deterministic unit vector orthogonal to `v` for rank-deficient completion.
std::vector<double> orthonormal_completion(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::size_t imin = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(v[i]) < std::abs(v[imin])) imin = i;
    }
    std::vector<double> w(n, 0.0);
    w[imin] = 1.0;
    double dot = v[imin];
    double norm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] -= dot * v[i];
        norm2 += w[i] * w[i];
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : w) x *= inv;
    return w;
}

} // namespace

bool StandardizationParams::is_constant(std::size_t col) const {
    return std::find(constant_columns.begin(), constant_columns.end(), col) !=
           constant_columns.end();
}

StandardizationParams fit_standardization(const Dataset& ds) {
    if (ds.observations.empty()) throw EmptyDataset("cannot standardize an empty dataset");
    const std::size_t f = ds.feature_count();
    const double n = static_cast<double>(ds.observations.size());

    StandardizationParams sp;
    sp.means.assign(f, 0.0);
    sp.stds.assign(f, 0.0);
    for (const Observation& o : ds.observations) {
        for (std::size_t i = 0; i < f; ++i) sp.means[i] += o.features[i];
    }
    for (std::size_t i = 0; i < f; ++i) sp.means[i] /= n;
    for (const Observation& o : ds.observations) {
        for (std::size_t i = 0; i < f; ++i) {
            const double d = o.features[i] - sp.means[i];
            sp.stds[i] += d * d;
        }
    }
    for (std::size_t i = 0; i < f; ++i) {
        sp.stds[i] = std::sqrt(sp.stds[i] / n); // population convention
        if (sp.stds[i] == 0.0) sp.constant_columns.push_back(i);
    }
    return sp;
}

Dataset standardize(const Dataset& ds, const StandardizationParams& sp) {
    if (ds.feature_count() != sp.size())
        throw DimensionMismatch("standardization width " + std::to_string(sp.size()) +
                                " does not match dataset F=" +
                                std::to_string(ds.feature_count()));
    Dataset out = ds;
    for (Observation& o : out.observations) {
        for (std::size_t i = 0; i < o.features.size(); ++i) {
            o.features[i] = sp.stds[i] > 0.0
                                ? (o.features[i] - sp.means[i]) / sp.stds[i]
                                : 0.0;
        }
    }
    return out;
}

PcaProjection fit_pca(const Dataset& ds_std) {
    const std::size_t n = ds_std.observations.size();
    const std::size_t f = ds_std.feature_count();
    if (n < 3) throw DataError("PCA requires at least 3 observations");
    if (f < 2) throw DataError("PCA requires at least 2 feature columns");

    // Center (input is normally already centered; cheap and keeps the
    // covariance exact for as-is inputs).
    std::vector<double> mean(f, 0.0);
    for (const Observation& o : ds_std.observations)
        for (std::size_t i = 0; i < f; ++i) mean[i] += o.features[i];
    for (double& m : mean) m /= static_cast<double>(n);

    std::vector<double> x(n * f);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 0; i < f; ++i)
            x[r * f + i] = ds_std.observations[r].features[i] - mean[i];

    PcaProjection proj;
    proj.standardization.means.assign(f, 0.0);
    proj.standardization.stds.assign(f, 1.0);

    std::vector<double> eigenvalues;
    std::vector<double> eigenvectors;

    if (n > f) {
        // F x F population covariance route.
        std::vector<double> cov(f * f, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            const double* row = &x[r * f];
            for (std::size_t i = 0; i < f; ++i) {
                const double xi = row[i];
                for (std::size_t j = i; j < f; ++j) cov[i * f + j] += xi * row[j];
            }
        }
        for (std::size_t i = 0; i < f; ++i)
            for (std::size_t j = i; j < f; ++j) {
                cov[i * f + j] /= static_cast<double>(n);
                cov[j * f + i] = cov[i * f + j];
            }

        jacobi_eigen(std::move(cov), f, eigenvalues, eigenvectors);
        const auto order = descending_order(eigenvalues);
        for (int k = 0; k < 2; ++k) {
            proj.explained_variance[k] = std::max(0.0, eigenvalues[order[k]]);
            proj.axes[k].resize(f);
            for (std::size_t i = 0; i < f; ++i)
                proj.axes[k][i] = eigenvectors[i * f + order[k]];
        }
    } else {
        // N x N Gram route: eigenvectors of X X^T / N map to covariance
        // eigenvectors via v = X^T u / sqrt(N * lambda).
        std::vector<double> gram(n * n, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t s = r; s < n; ++s) {
                double dot = 0.0;
                for (std::size_t i = 0; i < f; ++i) dot += x[r * f + i] * x[s * f + i];
                gram[r * n + s] = dot / static_cast<double>(n);
                gram[s * n + r] = gram[r * n + s];
            }
        }
        jacobi_eigen(std::move(gram), n, eigenvalues, eigenvectors);
        const auto order = descending_order(eigenvalues);
        const double scale = std::max(eigenvalues[order[0]], 1.0);
        for (int k = 0; k < 2; ++k) {
            const double lambda = std::max(0.0, eigenvalues[order[k]]);
            proj.explained_variance[k] = lambda;
            proj.axes[k].assign(f, 0.0);
            if (lambda > kRankTol * scale) {
                const double inv = 1.0 / std::sqrt(static_cast<double>(n) * lambda);
                for (std::size_t r = 0; r < n; ++r) {
                    const double u = eigenvectors[r * n + order[k]];
                    for (std::size_t i = 0; i < f; ++i)
                        proj.axes[k][i] += x[r * f + i] * u * inv;
                }
            }
        }
    }

    const double scale = std::max(proj.explained_variance[0], 1.0);
    auto degenerate = [&](int k) {
        double norm2 = 0.0;
        for (double v : proj.axes[k]) norm2 += v * v;
        return proj.explained_variance[k] <= kRankTol * scale || norm2 < 0.5;
    };
    if (degenerate(0)) {
        // No variance at all: fall back to coordinate axes, flagged.
        proj.axes[0].assign(f, 0.0);
        proj.axes[0][0] = 1.0;
        proj.rank_deficient = true;
    }
    if (degenerate(1)) {
        proj.axes[1] = orthonormal_completion(proj.axes[0]);
        proj.rank_deficient = true;
        proj.explained_variance[1] = std::max(0.0, proj.explained_variance[1]);
    }

    apply_sign_convention(proj.axes[0]);
    apply_sign_convention(proj.axes[1]);
    return proj;
}

PcaProjection fit_projection(const Dataset& ds) {
    StandardizationParams sp = fit_standardization(ds);
    PcaProjection proj = fit_pca(standardize(ds, sp));
    proj.standardization = std::move(sp);
    return proj;
}

LatentPoint project(const Observation& obs, const PcaProjection& p) {
    const std::size_t f = p.standardization.size();
    if (obs.features.size() != f || p.axes[0].size() != f)
        throw DimensionMismatch("projection width does not match observation");
    double pc[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < f; ++i) {
        const double z = p.standardization.stds[i] > 0.0
                             ? (obs.features[i] - p.standardization.means[i]) /
                                   p.standardization.stds[i]
                             : 0.0;
        pc[0] += p.axes[0][i] * z;
        pc[1] += p.axes[1][i] * z;
    }
    return LatentPoint{pc[0], pc[1], obs.condition, obs.session};
}

std::vector<LatentPoint> project_all(const Dataset& ds, const PcaProjection& p) {
    std::vector<LatentPoint> out;
    out.reserve(ds.observations.size());
    for (const Observation& o : ds.observations) out.push_back(project(o, p));
    return out;
}

std::string PcaProjection::to_json() const {
    std::ostringstream os;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    auto arr = [&](const std::vector<double>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += num(v[i]);
        }
        return s + "]";
    };
    os << "{\n  \"means\": " << arr(standardization.means) << ",\n  \"stds\": "
       << arr(standardization.stds) << ",\n  \"axes\": [" << arr(axes[0]) << ","
       << arr(axes[1]) << "],\n  \"explained_variance\": ["
       << num(explained_variance[0]) << "," << num(explained_variance[1])
       << "],\n  \"constant_columns\": [";
    for (std::size_t i = 0; i < standardization.constant_columns.size(); ++i) {
        if (i) os << ",";
        os << standardization.constant_columns[i];
    }
    os << "],\n  \"rank_deficient\": " << (rank_deficient ? "true" : "false")
       << "\n}\n";
    return os.str();
}

} // namespace latentry
