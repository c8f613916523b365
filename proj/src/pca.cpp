#include "entity_embed/pca.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace entity_embed {

namespace {

// cyclic Jacobi sweeps; enough precision for projection output
void jacobi_eigen(std::vector<double>& a, int n, std::vector<double>& eigenvalues,
                  std::vector<double>& eigenvectors) {
    eigenvectors.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) eigenvectors[static_cast<std::size_t>(i) * n + i] = 1.0;

    auto at = [&](std::vector<double>& m, int r, int c) -> double& {
        return m[static_cast<std::size_t>(r) * n + c];
    };

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += at(a, p, q) * at(a, p, q);
        if (off < 1e-24) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(a, p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = at(a, i, p), aiq = at(a, i, q);
                    at(a, i, p) = c * aip - s * aiq;
                    at(a, i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = at(a, p, i), aqi = at(a, q, i);
                    at(a, p, i) = c * api - s * aqi;
                    at(a, q, i) = s * api + c * aqi;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = at(eigenvectors, i, p), viq = at(eigenvectors, i, q);
                    at(eigenvectors, i, p) = c * vip - s * viq;
                    at(eigenvectors, i, q) = s * vip + c * viq;
                }
            }
        }
    }

    eigenvalues.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eigenvalues[static_cast<std::size_t>(i)] = at(a, i, i);
}

}  // namespace

Projection2D project_top2(const std::vector<double>& data, std::size_t n, int dim) {
    if (n < 3) throw std::invalid_argument("projection needs at least 3 vectors");
    if (data.size() != n * static_cast<std::size_t>(dim))
        throw std::invalid_argument("projection: data size mismatch");

    std::vector<double> centered(data);
    std::vector<double> mean(static_cast<std::size_t>(dim), 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < dim; ++k)
            mean[static_cast<std::size_t>(k)] += data[i * dim + static_cast<std::size_t>(k)];
    for (double& m : mean) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (int k = 0; k < dim; ++k)
            centered[i * dim + static_cast<std::size_t>(k)] -= mean[static_cast<std::size_t>(k)];

    std::vector<double> cov(static_cast<std::size_t>(dim) * dim, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (int r = 0; r < dim; ++r) {
            const double xr = centered[i * dim + static_cast<std::size_t>(r)];
            for (int c = r; c < dim; ++c)
                cov[static_cast<std::size_t>(r) * dim + c] +=
                    xr * centered[i * dim + static_cast<std::size_t>(c)];
        }
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < r; ++c)
            cov[static_cast<std::size_t>(r) * dim + c] = cov[static_cast<std::size_t>(c) * dim + r];
    for (double& v : cov) v /= static_cast<double>(n - 1);

    std::vector<double> eigenvalues, eigenvectors;
    jacobi_eigen(cov, dim, eigenvalues, eigenvectors);

    // top two components by eigenvalue, index order on ties
    std::vector<int> order(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return eigenvalues[static_cast<std::size_t>(a)] > eigenvalues[static_cast<std::size_t>(b)];
    });

    Projection2D out;
    out.coords.resize(n);
    for (int comp = 0; comp < 2; ++comp) {
        const int col = order[static_cast<std::size_t>(comp)];
        out.eigenvalues[static_cast<std::size_t>(comp)] =
            eigenvalues[static_cast<std::size_t>(col)];
        // fix the sign so output does not depend on rotation details
        double lead = 0.0;
        for (int k = 0; k < dim; ++k) {
            const double v = eigenvectors[static_cast<std::size_t>(k) * dim + col];
            if (std::abs(v) > 1e-12) {
                lead = v;
                break;
            }
        }
        const double sign = lead < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (int k = 0; k < dim; ++k)
                s += centered[i * dim + static_cast<std::size_t>(k)] *
                     eigenvectors[static_cast<std::size_t>(k) * dim + col];
            out.coords[i][static_cast<std::size_t>(comp)] = sign * s;
        }
    }
    return out;
}

}  // namespace entity_embed
