// Small dense optimizer stack: L-BFGS with Armijo backtracking, and an
// augmented-Lagrangian driver for equality-constrained minimization over the
// probability simplex.  The simplex is handled by the smooth positive
// reparameterization p = floor + (1 - K floor) softmax(u), which keeps every
// entry strictly positive and the sum exactly one.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace markovbin {

// objective/constraint callback: fills grad (same size as x) and returns the value
using smooth_fn = std::function<double(const std::vector<double>&, std::vector<double>&)>;

struct lbfgs_options {
    int max_iterations = 500;
    double grad_tolerance = 1e-10;  // infinity norm
    int memory = 8;
};

struct lbfgs_result {
    std::vector<double> x;
    double value = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

inline lbfgs_result lbfgs_minimize(const smooth_fn& f, std::vector<double> x0,
                                   const lbfgs_options& opts = {}) {
    const std::size_t n = x0.size();
    lbfgs_result res;
    res.x = std::move(x0);
    std::vector<double> grad(n), new_grad(n), direction(n), new_x(n);
    std::vector<std::vector<double>> s_hist, y_hist;
    std::vector<double> rho_hist;
    double fx = f(res.x, grad);

    auto inf_norm = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double t : v) m = std::max(m, std::fabs(t));
        return m;
    };

    for (int it = 0; it < opts.max_iterations; ++it) {
        res.iterations = it;
        res.grad_norm = inf_norm(grad);
        if (res.grad_norm <= opts.grad_tolerance) {
            res.converged = true;
            break;
        }

        // two-loop recursion
        direction = grad;
        const int k = static_cast<int>(s_hist.size());
        std::vector<double> alpha(static_cast<std::size_t>(k));
        for (int i = k - 1; i >= 0; --i) {
            double si_q = 0.0;
            for (std::size_t j = 0; j < n; ++j) si_q += s_hist[i][j] * direction[j];
            alpha[i] = rho_hist[i] * si_q;
            for (std::size_t j = 0; j < n; ++j) direction[j] -= alpha[i] * y_hist[i][j];
        }
        if (k > 0) {
            double sy = 0.0, yy = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                sy += s_hist[k - 1][j] * y_hist[k - 1][j];
                yy += y_hist[k - 1][j] * y_hist[k - 1][j];
            }
            const double gamma = (yy > 0.0) ? sy / yy : 1.0;
            for (std::size_t j = 0; j < n; ++j) direction[j] *= gamma;
        }
        for (int i = 0; i < k; ++i) {
            double yi_r = 0.0;
            for (std::size_t j = 0; j < n; ++j) yi_r += y_hist[i][j] * direction[j];
            const double beta = rho_hist[i] * yi_r;
            for (std::size_t j = 0; j < n; ++j) direction[j] += (alpha[i] - beta) * s_hist[i][j];
        }
        for (std::size_t j = 0; j < n; ++j) direction[j] = -direction[j];

        double dg = 0.0;
        for (std::size_t j = 0; j < n; ++j) dg += direction[j] * grad[j];
        if (dg >= 0.0) {  // not a descent direction; reset to steepest descent
            for (std::size_t j = 0; j < n; ++j) direction[j] = -grad[j];
            dg = -inf_norm(grad);
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }

        // Armijo backtracking
        double step = 1.0;
        double new_fx = fx;
        bool accepted = false;
        for (int ls = 0; ls < 50; ++ls) {
            for (std::size_t j = 0; j < n; ++j) new_x[j] = res.x[j] + step * direction[j];
            new_fx = f(new_x, new_grad);
            if (std::isfinite(new_fx) && new_fx <= fx + 1e-4 * step * dg) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // line search failed; gradient is as good as it gets

        std::vector<double> s(n), y(n);
        double sy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            s[j] = new_x[j] - res.x[j];
            y[j] = new_grad[j] - grad[j];
            sy += s[j] * y[j];
        }
        if (sy > 1e-14) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opts.memory) {
                s_hist.erase(s_hist.begin());
                y_hist.erase(y_hist.begin());
                rho_hist.erase(rho_hist.begin());
            }
        }
        const double improvement = fx - new_fx;
        res.x.swap(new_x);
        grad.swap(new_grad);
        fx = new_fx;
        if (improvement <= 1e-16 * (std::fabs(fx) + 1.0)) {
            res.grad_norm = inf_norm(grad);
            break;
        }
    }
    res.value = fx;
    res.grad_norm = inf_norm(grad);
    return res;
}

// p = floor + (1 - K floor) softmax(u); with floor > 0 every entry stays positive
struct simplex_parameterization {
    double floor = 1e-12;

    std::vector<double> to_simplex(const std::vector<double>& u) const {
        const std::size_t n = u.size();
        double mx = u[0];
        for (double v : u) mx = std::max(mx, v);
        std::vector<double> p(n);
        double z = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = std::exp(u[i] - mx);
            z += p[i];
        }
        const double scale = 1.0 - static_cast<double>(n) * floor;
        for (std::size_t i = 0; i < n; ++i) p[i] = floor + scale * p[i] / z;
        return p;
    }

    // grad_u from grad_p via the softmax Jacobian
    void pull_back(const std::vector<double>& p, const std::vector<double>& grad_p,
                   std::vector<double>& grad_u) const {
        const std::size_t n = p.size();
        const double scale = 1.0 - static_cast<double>(n) * floor;
        double mean = 0.0;
        std::vector<double> soft(n);
        for (std::size_t i = 0; i < n; ++i) {
            soft[i] = (p[i] - floor) / scale;
            mean += soft[i] * grad_p[i];
        }
        grad_u.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            grad_u[i] = scale * soft[i] * (grad_p[i] - mean);
    }

    // inverse map for a strictly positive start point
    std::vector<double> from_simplex(const std::vector<double>& p) const {
        std::vector<double> u(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) u[i] = std::log(std::max(p[i], floor));
        return u;
    }
};

struct augmented_lagrangian_options {
    double constraint_tolerance = 1e-8;
    double grad_tolerance = 1e-8;
    int max_total_iterations = 10000;
    int max_outer_rounds = 40;
    double initial_penalty = 10.0;
    double penalty_growth = 10.0;
    double max_penalty = 1e10;
    double floor = 1e-12;
};

struct augmented_lagrangian_result {
    std::vector<double> p;            // point on the simplex
    double objective = 0.0;
    double max_constraint_violation = 0.0;
    double kkt_residual = 0.0;        // stationarity defect, see below
    int iterations = 0;
    bool converged = false;
};

namespace detail {

// In-place dense linear solve by Gaussian elimination with partial pivoting.
// Returns false when the matrix is numerically singular.
inline bool solve_dense(std::vector<std::vector<double>>& a, std::vector<double>& b) {
    const std::size_t k = b.size();
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        if (a[col][col] == 0.0) return false;
        for (std::size_t r = col + 1; r < k; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t cc = col; cc < k; ++cc) a[r][cc] -= f * a[col][cc];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t col = k; col-- > 0;) {
        double s = b[col];
        for (std::size_t cc = col + 1; cc < k; ++cc) s -= a[col][cc] * b[cc];
        b[col] = s / a[col][col];
    }
    return true;
}

// First-order stationarity at p: the least-squares remainder of the
// objective gradient after removing its best fit over the constraint
// gradients and the all-ones direction (the simplex normal).  Refitting the
// multipliers here keeps penalty-scaled noise out of the measure.
inline double kkt_residual_inf(const std::vector<double>& grad_f,
                               const std::vector<smooth_fn>& constraints,
                               const std::vector<double>& p) {
    const std::size_t n = p.size();
    const std::size_t k = constraints.size() + 1;
    std::vector<std::vector<double>> cols(k, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i + 1 < k; ++i) constraints[i](p, cols[i + 1]);

    // normal equations with a tiny ridge
    std::vector<std::vector<double>> ata(k, std::vector<double>(k, 0.0));
    std::vector<double> nu(k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += cols[a][j] * cols[b][j];
            ata[a][b] = ata[b][a] = s;
        }
        ata[a][a] += 1e-12;
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += cols[a][j] * grad_f[j];
        nu[a] = s;
    }
    if (!solve_dense(ata, nu)) std::fill(nu.begin(), nu.end(), 0.0);
    double resid = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double r = grad_f[j];
        for (std::size_t a = 0; a < k; ++a) r -= nu[a] * cols[a][j];
        resid = std::max(resid, std::fabs(r));
    }
    return resid;
}

}  // namespace detail

// minimize objective(p) subject to constraints(p) = 0 over the positive simplex
inline augmented_lagrangian_result minimize_on_simplex(
    const smooth_fn& objective, const std::vector<smooth_fn>& constraints,
    const std::vector<double>& p_start, const augmented_lagrangian_options& opts = {}) {
    const std::size_t n = p_start.size();
    const std::size_t nc = constraints.size();
    simplex_parameterization param;
    param.floor = opts.floor;

    std::vector<double> lambda(nc, 0.0);
    double mu = opts.initial_penalty;
    std::vector<double> u = param.from_simplex(p_start);

    augmented_lagrangian_result out;
    std::vector<double> cvals(nc, 0.0);
    std::vector<double> grad_p(n), cgrad(n), grad_u(n);
    double prev_violation = std::numeric_limits<double>::infinity();
    double best_score = std::numeric_limits<double>::infinity();
    int stalled_rounds = 0;

    auto eval_constraints = [&](const std::vector<double>& p) {
        double viol = 0.0;
        for (std::size_t i = 0; i < nc; ++i) {
            std::vector<double> g(n);
            cvals[i] = constraints[i](p, g);
            viol = std::max(viol, std::fabs(cvals[i]));
        }
        return viol;
    };

    for (int round = 0; round < opts.max_outer_rounds; ++round) {
        smooth_fn al = [&](const std::vector<double>& uvec, std::vector<double>& g_u) -> double {
            const std::vector<double> p = param.to_simplex(uvec);
            double val = objective(p, grad_p);
            for (std::size_t i = 0; i < nc; ++i) {
                const double ci = constraints[i](p, cgrad);
                const double w = lambda[i] + mu * ci;
                val += lambda[i] * ci + 0.5 * mu * ci * ci;
                for (std::size_t j = 0; j < n; ++j) grad_p[j] += w * cgrad[j];
            }
            param.pull_back(param.to_simplex(uvec), grad_p, g_u);
            return val;
        };

        lbfgs_options inner;
        inner.max_iterations =
            std::min(400, std::max(50, opts.max_total_iterations - out.iterations));
        inner.grad_tolerance = std::max(opts.grad_tolerance * 0.1, 1e-12);
        lbfgs_result inner_res = lbfgs_minimize(al, u, inner);
        u = inner_res.x;
        out.iterations += inner_res.iterations + 1;

        const std::vector<double> p = param.to_simplex(u);
        const double violation = eval_constraints(p);
        out.p = p;
        out.objective = objective(p, grad_p);
        out.max_constraint_violation = violation;
        out.kkt_residual = detail::kkt_residual_inf(grad_p, constraints, p);

        if (violation <= opts.constraint_tolerance && out.kkt_residual <= opts.grad_tolerance) {
            out.converged = true;
            break;
        }
        if (out.iterations >= opts.max_total_iterations) break;

        // Double-precision descent bottoms out near the constrained optimum;
        // stop once rounds no longer shrink the worst of the two residuals.
        const double score = std::max(violation, out.kkt_residual);
        if (score > 0.6 * best_score) {
            if (++stalled_rounds >= 4) break;
        } else {
            stalled_rounds = 0;
        }
        best_score = std::min(best_score, score);

        for (std::size_t i = 0; i < nc; ++i) lambda[i] += mu * cvals[i];
        if (violation > opts.constraint_tolerance && violation > 0.25 * prev_violation)
            mu = std::min(mu * opts.penalty_growth, opts.max_penalty);
        prev_violation = violation;
    }
    return out;
}

}  // namespace markovbin
