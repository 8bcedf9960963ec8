#pragma once

#include <algorithm>
#include <functional>
#include <vector>

namespace densecode {

struct SimplexResult {
    std::vector<double> x;
    double fx = 0.0;
    int iterations = 0;
};

// Nelder-Mead minimization with the standard coefficients.  Deterministic:
// ties are resolved by stable sorting, so identical inputs give identical
// results.  Terminates when the function-value spread across the simplex
// falls below ftol or max_iter is reached.
inline SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<std::vector<double>> simplex, double ftol,
                                 int max_iter = 400) {
    const size_t n = simplex.front().size();
    struct Vertex {
        std::vector<double> x;
        double fx;
    };
    std::vector<Vertex> verts;
    verts.reserve(simplex.size());
    for (auto& p : simplex) verts.push_back({p, f(p)});

    auto order = [&] {
        std::stable_sort(verts.begin(), verts.end(),
                         [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; });
    };
    order();

    int iter = 0;
    for (; iter < max_iter; ++iter) {
        if (verts.back().fx - verts.front().fx < ftol) break;

        std::vector<double> centroid(n, 0.0);
        for (size_t i = 0; i + 1 < verts.size(); ++i)
            for (size_t d = 0; d < n; ++d) centroid[d] += verts[i].x[d];
        for (double& c : centroid) c /= static_cast<double>(verts.size() - 1);

        auto blend = [&](double coeff) {
            std::vector<double> p(n);
            for (size_t d = 0; d < n; ++d)
                p[d] = centroid[d] + coeff * (centroid[d] - verts.back().x[d]);
            return p;
        };

        const std::vector<double> refl = blend(1.0);
        const double f_refl = f(refl);
        if (f_refl < verts.front().fx) {
            const std::vector<double> expd = blend(2.0);
            const double f_expd = f(expd);
            if (f_expd < f_refl)
                verts.back() = {expd, f_expd};
            else
                verts.back() = {refl, f_refl};
        } else if (f_refl < verts[verts.size() - 2].fx) {
            verts.back() = {refl, f_refl};
        } else {
            const std::vector<double> contr = blend(f_refl < verts.back().fx ? 0.5 : -0.5);
            const double f_contr = f(contr);
            if (f_contr < std::min(f_refl, verts.back().fx)) {
                verts.back() = {contr, f_contr};
            } else {
                for (size_t i = 1; i < verts.size(); ++i) {
                    for (size_t d = 0; d < n; ++d)
                        verts[i].x[d] = verts.front().x[d] + 0.5 * (verts[i].x[d] - verts.front().x[d]);
                    verts[i].fx = f(verts[i].x);
                }
            }
        }
        order();
    }
    return {verts.front().x, verts.front().fx, iter};
}

// Convenience: axis-aligned initial simplex around a start point.
inline std::vector<std::vector<double>> initial_simplex(const std::vector<double>& start,
                                                        const std::vector<double>& steps) {
    std::vector<std::vector<double>> simplex{start};
    for (size_t d = 0; d < start.size(); ++d) {
        std::vector<double> p = start;
        p[d] += steps[d];
        simplex.push_back(p);
    }
    return simplex;
}

}  // namespace densecode
