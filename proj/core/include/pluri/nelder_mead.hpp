#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

namespace pluri {

struct NelderMeadOptions {
    int max_evals = 5000;
    double f_tol = 1e-7;
    double x_tol = 1e-7;
};

struct NelderMeadOutcome {
    std::vector<double> x;
    double f = 0.0;
    int evals = 0;
};

// Standard simplex search (reflection 1, expansion 2, contraction 1/2,
// shrink 1/2).  Deterministic for a fixed start and step.
inline NelderMeadOutcome nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                                     std::vector<double> x0, double step,
                                     const NelderMeadOptions& opt = {}) {
    const int n = static_cast<int>(x0.size());
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return fn(x);
    };

    if (n == 0) return {x0, eval(x0), evals};

    std::vector<std::vector<double>> verts(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (int i = 0; i < n; ++i) verts[i + 1][i] += step;
    for (int i = 0; i <= n; ++i) fv[i] = eval(verts[i]);

    std::vector<int> order(n + 1);
    while (evals < opt.max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        const int best = order[0], worst = order[n], second = order[n - 1];

        double spread = std::abs(fv[worst] - fv[best]);
        double xspread = 0.0;
        for (int i = 0; i < n; ++i)
            xspread = std::max(xspread, std::abs(verts[worst][i] - verts[best][i]));
        if (spread <= opt.f_tol && xspread <= opt.x_tol) break;

        std::vector<double> centroid(n, 0.0);
        for (int v = 0; v <= n; ++v)
            if (v != worst)
                for (int i = 0; i < n; ++i) centroid[i] += verts[v][i] / n;

        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (int i = 0; i < n; ++i) p[i] = centroid[i] + t * (centroid[i] - verts[worst][i]);
            return p;
        };

        std::vector<double> xr = blend(1.0);
        const double fr = eval(xr);
        if (fr < fv[best]) {
            std::vector<double> xe = blend(2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                verts[worst] = std::move(xe);
                fv[worst] = fe;
            } else {
                verts[worst] = std::move(xr);
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            verts[worst] = std::move(xr);
            fv[worst] = fr;
        } else {
            const bool outside = fr < fv[worst];
            std::vector<double> xc = blend(outside ? 0.5 : -0.5);
            const double fc = eval(xc);
            if (fc < std::min(fr, fv[worst])) {
                verts[worst] = std::move(xc);
                fv[worst] = fc;
            } else {
                for (int v = 0; v <= n; ++v) {
                    if (v == best) continue;
                    for (int i = 0; i < n; ++i)
                        verts[v][i] = verts[best][i] + 0.5 * (verts[v][i] - verts[best][i]);
                    fv[v] = eval(verts[v]);
                    if (evals >= opt.max_evals) break;
                }
            }
        }
    }

    int best = 0;
    for (int i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    return {verts[best], fv[best], evals};
}

}  // namespace pluri
