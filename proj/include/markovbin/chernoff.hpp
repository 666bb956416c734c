// Chernoff information between stationary Markov sources.
//
// The value is the minimum of the conditional relative entropy D_c(p || p1)
// over joint (m+1)-gram distributions p that lie on the decision boundary
// D_c(p || p1) = D_c(p || p2) and satisfy the stationarity (balance)
// constraints.  The boundary constraint is linear in p and the objective is
// convex, so an augmented-Lagrangian scheme over the softmax-parametrized
// simplex converges to the global minimum.  Because line-searched descent
// bottoms out around gradient 1e-7 in double precision, the solve finishes
// with a few Newton steps on the KKT system (the objective Hessian is
// closed-form and every constraint is linear in p), which reaches the 1e-8
// stationarity and boundary tolerances with room to spare.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "markovbin/information.hpp"
#include "markovbin/joint_distribution.hpp"
#include "markovbin/markov_model.hpp"
#include "markovbin/optim.hpp"

namespace markovbin {

struct chernoff_result {
    double value = 0.0;               // bits; D_c at the constrained minimizer
    joint_distribution minimizer;     // the boundary distribution achieving it
    double constraint_gap = 0.0;      // |D_c(p*||p1) - D_c(p*||p2)| at the minimizer
    int iterations = 0;
    bool converged = false;
};

namespace detail {

// Elementwise geometric mean of two joints, renormalized and projected back
// into the balanced class by re-deriving conditional rows and recomputing
// their stationary context distribution.
inline joint_distribution balanced_geometric_mean(const joint_distribution& p1,
                                                  const joint_distribution& p2) {
    joint_distribution mix = p1;
    for (std::size_t g = 0; g < mix.probs.size(); ++g)
        mix.probs[g] = std::sqrt(p1.probs[g] * p2.probs[g]);
    mix.normalize();
    return rebalanced(mix);
}

struct newton_polish_result {
    std::vector<double> p;
    double dual_residual = 0.0;    // |grad f + A^T nu|_inf
    double primal_residual = 0.0;  // |A p - b|_inf
    int iterations = 0;
    bool ok = false;
};

// Infeasible-start Newton on the KKT system of
//   min sum_g p(g) (log2 p(g|ctx) - log2 q1(g|ctx))
//   s.t. boundary weights w . p = w_rhs, balance rows = 0, sum p = 1,
// used to refine an augmented-Lagrangian iterate to machine precision.
// grad f(g) = log2(p(g)/s_c) - log2 q1; the Hessian is block-diagonal over
// contexts: (1/ln2) (diag(1/p) - (1/s_c) within each block).
inline newton_polish_result boundary_newton_polish(std::vector<double> p,
                                                   const std::vector<double>& log2q1,
                                                   const std::vector<double>& w,
                                                   std::size_t n_ctx, std::size_t a_sz,
                                                   double floor, int max_iterations,
                                                   double w_rhs = 0.0) {
    const std::size_t n = p.size();
    const std::size_t k = n_ctx + 1;  // boundary + (n_ctx - 1) balance rows + sum
    const double inv_ln2 = 1.0 / std::log(2.0);

    std::vector<std::vector<double>> a_rows(k, std::vector<double>(n, 0.0));
    std::vector<double> b(k, 0.0);
    a_rows[0] = w;
    b[0] = w_rhs;
    for (std::size_t c = 0; c + 1 < n_ctx; ++c)
        for (std::size_t g = 0; g < n; ++g)
            a_rows[c + 1][g] = (g / a_sz == c ? 1.0 : 0.0) - (g % n_ctx == c ? 1.0 : 0.0);
    for (std::size_t g = 0; g < n; ++g) a_rows[k - 1][g] = 1.0;
    b[k - 1] = 1.0;

    auto context_sums = [&](const std::vector<double>& q) {
        std::vector<double> s(n_ctx, 0.0);
        for (std::size_t g = 0; g < n; ++g) s[g / a_sz] += q[g];
        return s;
    };
    auto grad_f = [&](const std::vector<double>& q, const std::vector<double>& s,
                      std::vector<double>& g_out) {
        for (std::size_t g = 0; g < n; ++g)
            g_out[g] = (std::log(q[g]) - std::log(s[g / a_sz])) * inv_ln2 - log2q1[g];
    };
    auto residuals = [&](const std::vector<double>& q, const std::vector<double>& nu,
                         std::vector<double>& rd, std::vector<double>& rp) {
        const std::vector<double> s = context_sums(q);
        grad_f(q, s, rd);
        for (std::size_t r = 0; r < k; ++r) {
            double v = -b[r];
            for (std::size_t g = 0; g < n; ++g) {
                v += a_rows[r][g] * q[g];
                rd[g] += nu[r] * a_rows[r][g];
            }
            rp[r] = v;
        }
    };
    auto norm2 = [](const std::vector<double>& x, const std::vector<double>& y) {
        double t = 0.0;
        for (double v : x) t += v * v;
        for (double v : y) t += v * v;
        return std::sqrt(t);
    };
    auto norm_inf = [](const std::vector<double>& x) {
        double t = 0.0;
        for (double v : x) t = std::max(t, std::fabs(v));
        return t;
    };

    // start the multipliers at their least-squares fit to -grad f
    std::vector<double> nu(k, 0.0);
    {
        std::vector<double> s = context_sums(p), gf(n);
        grad_f(p, s, gf);
        std::vector<std::vector<double>> aat(k, std::vector<double>(k, 0.0));
        std::vector<double> rhs(k, 0.0);
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t c2 = r; c2 < k; ++c2) {
                double t = 0.0;
                for (std::size_t g = 0; g < n; ++g) t += a_rows[r][g] * a_rows[c2][g];
                aat[r][c2] = aat[c2][r] = t;
            }
            aat[r][r] += 1e-12;
            double t = 0.0;
            for (std::size_t g = 0; g < n; ++g) t += a_rows[r][g] * gf[g];
            rhs[r] = -t;
        }
        if (solve_dense(aat, rhs)) nu = rhs;
    }

    newton_polish_result out;
    std::vector<double> rd(n), rp(k), rd_try(n), rp_try(k);
    residuals(p, nu, rd, rp);
    double rnorm = norm2(rd, rp);

    for (int it = 0; it < max_iterations; ++it) {
        out.iterations = it;
        out.dual_residual = norm_inf(rd);
        out.primal_residual = norm_inf(rp);
        if (out.dual_residual <= 1e-10 && out.primal_residual <= 1e-13) {
            out.ok = true;
            break;
        }

        const std::vector<double> s = context_sums(p);
        const std::size_t nn = n + k;
        std::vector<std::vector<double>> kkt(nn, std::vector<double>(nn, 0.0));
        std::vector<double> step(nn, 0.0);
        for (std::size_t g = 0; g < n; ++g) {
            kkt[g][g] = inv_ln2 / p[g];
            step[g] = -rd[g];
        }
        for (std::size_t g = 0; g < n; ++g) {
            const std::size_t c = g / a_sz;
            for (std::size_t h = c * a_sz; h < (c + 1) * a_sz; ++h)
                kkt[g][h] -= inv_ln2 / s[c];
        }
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t g = 0; g < n; ++g) {
                kkt[g][n + r] = a_rows[r][g];
                kkt[n + r][g] = a_rows[r][g];
            }
            step[n + r] = -rp[r];
        }
        if (!solve_dense(kkt, step)) break;

        // keep every coordinate at or above the positivity floor
        double t_max = 1.0;
        for (std::size_t g = 0; g < n; ++g)
            if (step[g] < 0.0) t_max = std::min(t_max, 0.999 * (p[g] - floor) / (-step[g]));
        if (!(t_max > 1e-14)) break;

        double t = t_max;
        bool accepted = false;
        std::vector<double> p_try(n), nu_try(k);
        for (int ls = 0; ls < 40; ++ls) {
            for (std::size_t g = 0; g < n; ++g) p_try[g] = p[g] + t * step[g];
            for (std::size_t r = 0; r < k; ++r) nu_try[r] = nu[r] + t * step[n + r];
            residuals(p_try, nu_try, rd_try, rp_try);
            const double rnorm_try = norm2(rd_try, rp_try);
            if (std::isfinite(rnorm_try) && rnorm_try <= (1.0 - 0.01 * t) * rnorm) {
                p.swap(p_try);
                nu.swap(nu_try);
                rd.swap(rd_try);
                rp.swap(rp_try);
                rnorm = rnorm_try;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
    }
    out.dual_residual = norm_inf(rd);
    out.primal_residual = norm_inf(rp);
    if (out.dual_residual <= 1e-10 && out.primal_residual <= 1e-13) out.ok = true;
    out.p = std::move(p);
    return out;
}

}  // namespace detail

// Computes the Chernoff information between two strictly positive, balanced
// joint distributions of the same shape.  Throws std::invalid_argument on a
// shape mismatch, a distribution outside the strictly positive balanced
// class, or an (effectively) identical pair.
inline chernoff_result chernoff_information(const joint_distribution& p1,
                                            const joint_distribution& p2,
                                            const augmented_lagrangian_options& opts = {}) {
    require_same_shape(p1, p2);
    if (!p1.in_stationary_class() || !p2.in_stationary_class())
        throw std::invalid_argument(
            "chernoff_information: inputs must be strictly positive, balanced distributions");
    if (l1_distance(p1.probs, p2.probs) < 1e-13)
        throw std::invalid_argument("chernoff_information: the two distributions coincide");

    const int a_sz = p1.alph.size();
    const std::size_t n_ctx = p1.num_contexts();
    const std::size_t n = p1.probs.size();

    conditional_table cond1 = conditional(p1);
    conditional_table cond2 = conditional(p2);

    // Boundary weights: D_c(p||p1) - D_c(p||p2) = sum_g p(g) * w(g).
    std::vector<double> w(n, 0.0);
    for (std::size_t c = 0; c < n_ctx; ++c)
        for (int b = 0; b < a_sz; ++b) {
            const std::size_t g = joint_distribution::gram_of(c, b, a_sz);
            w[g] = std::log2(cond2(c, b)) - std::log2(cond1(c, b));
        }

    std::vector<smooth_fn> constraints;
    constraints.push_back([w](const std::vector<double>& p, std::vector<double>& grad) {
        double v = 0.0;
        for (std::size_t g = 0; g < p.size(); ++g) {
            v += p[g] * w[g];
            grad[g] = w[g];
        }
        return v;
    });
    // Balance at each context: prefix mass minus suffix mass.  The rows sum
    // to zero over contexts, so the last one is implied and omitted.
    const std::size_t a_sz_u = static_cast<std::size_t>(a_sz);
    for (std::size_t c = 0; c + 1 < n_ctx; ++c) {
        constraints.push_back([c, a_sz_u, n_ctx](const std::vector<double>& p,
                                                 std::vector<double>& grad) {
            double v = 0.0;
            for (std::size_t g = 0; g < p.size(); ++g) {
                const double coeff = (g / a_sz_u == c ? 1.0 : 0.0) - (g % n_ctx == c ? 1.0 : 0.0);
                grad[g] = coeff;
                v += coeff * p[g];
            }
            return v;
        });
    }

    smooth_fn objective = [&p1, cond1, a_sz, n_ctx](const std::vector<double>& p,
                                                    std::vector<double>& grad) {
        joint_distribution cur = p1;
        cur.probs = p;
        const std::vector<double> ctx = cur.context_marginal();
        double val = 0.0;
        for (std::size_t c = 0; c < n_ctx; ++c)
            for (int b = 0; b < a_sz; ++b) {
                const std::size_t g = joint_distribution::gram_of(c, b, a_sz);
                const double cond = p[g] / ctx[c];
                const double lg = std::log2(cond) - std::log2(cond1(c, b));
                val += p[g] * lg;
                grad[g] = lg;
            }
        return val;
    };

    joint_distribution start = detail::balanced_geometric_mean(p1, p2);
    augmented_lagrangian_result sol = minimize_on_simplex(objective, constraints, start.probs, opts);

    chernoff_result out;
    out.iterations = sol.iterations;
    out.minimizer = p1;
    out.minimizer.probs = sol.p;

    // Newton refinement on the KKT system, then an exact re-balance so the
    // reported minimizer is consistent to machine precision.
    std::vector<double> log2q1(n, 0.0);
    for (std::size_t c = 0; c < n_ctx; ++c)
        for (int b = 0; b < a_sz; ++b)
            log2q1[joint_distribution::gram_of(c, b, a_sz)] = std::log2(cond1(c, b));
    const int polish_budget =
        std::min(60, std::max(0, opts.max_total_iterations - sol.iterations));
    detail::newton_polish_result polish = detail::boundary_newton_polish(
        sol.p, log2q1, w, n_ctx, a_sz_u, opts.floor, polish_budget);
    out.iterations += polish.iterations;
    if (polish.ok) out.minimizer.probs = polish.p;
    out.minimizer = rebalanced(out.minimizer);

    const double d1 = conditional_relative_entropy(out.minimizer, p1);
    const double d2 = conditional_relative_entropy(out.minimizer, p2);
    out.value = 0.5 * (d1 + d2);
    out.constraint_gap = std::fabs(d1 - d2);
    std::vector<double> grad_final(n);
    objective(out.minimizer.probs, grad_final);
    const double kkt = detail::kkt_residual_inf(grad_final, constraints, out.minimizer.probs);
    out.converged = out.constraint_gap <= opts.constraint_tolerance &&
                    kkt <= opts.grad_tolerance &&
                    out.minimizer.in_stationary_class() &&
                    out.iterations <= opts.max_total_iterations;
    return out;
}

// Independent check for the binary order-1 case.  Balance forces
// p(01) = p(10) =: s; with t := p(11) the joint is (1-2s-t, s, s, t) over a
// triangle in (s, t).  The boundary is the zero set of an affine function, a
// straight line, so it is enough to scan the grid lines of an R x R lattice,
// solve each crossing in closed form, and take the smallest divergence seen.
inline double grid_oracle_chernoff(const joint_distribution& p1,
                                   const joint_distribution& p2,
                                   int resolution = 2000) {
    require_same_shape(p1, p2);
    if (p1.order != 1 || p1.alph.size() != 2)
        throw std::invalid_argument("grid_oracle_chernoff: requires a binary order-1 pair");
    if (resolution < 2) throw std::invalid_argument("grid_oracle_chernoff: resolution too small");

    conditional_table cond1 = conditional(p1);
    conditional_table cond2 = conditional(p2);
    // Affine boundary: phi(s, t) = k0 + ks * s + kt * t with weights
    // w(g) = log2 p2(b|a) - log2 p1(b|a) applied to (1-2s-t, s, s, t).
    double w00 = std::log2(cond2(0, 0)) - std::log2(cond1(0, 0));
    double w01 = std::log2(cond2(0, 1)) - std::log2(cond1(0, 1));
    double w10 = std::log2(cond2(1, 0)) - std::log2(cond1(1, 0));
    double w11 = std::log2(cond2(1, 1)) - std::log2(cond1(1, 1));
    const double k0 = w00;
    const double ks = w01 + w10 - 2.0 * w00;
    const double kt = w11 - w00;

    const double edge = 1e-9;  // keep strictly inside the open triangle
    auto divergence_at = [&](double s, double t) {
        joint_distribution p = p1;
        p.probs = {1.0 - 2.0 * s - t, s, s, t};
        return conditional_relative_entropy(p, p1);
    };

    double best = infinite_divergence;
    const int r = resolution;
    for (int j = 0; j <= r; ++j) {
        // Horizontal scan line t = t_j: solve k0 + ks * s + kt * t_j = 0.
        const double t = static_cast<double>(j) / static_cast<double>(r);
        if (ks != 0.0) {
            const double s = -(k0 + kt * t) / ks;
            const double s_max = (1.0 - t) / 2.0;
            if (s > edge && s < s_max - edge && t > edge && t < 1.0 - edge)
                best = std::min(best, divergence_at(s, t));
        }
        // Vertical scan line s = s_j over the triangle's s range [0, 1/2].
        const double s = 0.5 * static_cast<double>(j) / static_cast<double>(r);
        if (kt != 0.0) {
            const double tv = -(k0 + ks * s) / kt;
            const double t_max = 1.0 - 2.0 * s;
            if (tv > edge && tv < t_max - edge && s > edge)
                best = std::min(best, divergence_at(s, tv));
        }
    }
    if (!(best < infinite_divergence))
        throw std::runtime_error("grid_oracle_chernoff: boundary not found inside the domain");
    return best;
}

struct pairwise_chernoff_entry {
    int first = 0;   // model indices, 0-based
    int second = 0;
    double value = 0.0;
    bool converged = false;
};

struct resolvability_report {
    double c_min = 0.0;                       // smallest pairwise value, bits
    std::pair<int, int> argmin{0, 0};
    double lbar_threshold = 0.0;              // 1 / c_min
    std::vector<pairwise_chernoff_entry> pairs;
    bool all_converged = true;
};

// Minimum pairwise Chernoff information over a community of sources, plus
// the induced normalized-length threshold 1 / C_min.
inline resolvability_report min_pairwise_chernoff(const std::vector<joint_distribution>& sources,
                                                  const augmented_lagrangian_options& opts = {}) {
    if (sources.size() < 2)
        throw std::invalid_argument("min_pairwise_chernoff: need at least two sources");
    resolvability_report report;
    report.c_min = infinite_divergence;
    for (std::size_t i = 0; i < sources.size(); ++i)
        for (std::size_t j = i + 1; j < sources.size(); ++j) {
            chernoff_result res = chernoff_information(sources[i], sources[j], opts);
            pairwise_chernoff_entry entry;
            entry.first = static_cast<int>(i);
            entry.second = static_cast<int>(j);
            entry.value = res.value;
            entry.converged = res.converged;
            report.pairs.push_back(entry);
            report.all_converged = report.all_converged && res.converged;
            if (res.value < report.c_min) {
                report.c_min = res.value;
                report.argmin = {static_cast<int>(i), static_cast<int>(j)};
            }
        }
    report.lbar_threshold = 1.0 / report.c_min;
    return report;
}

}  // namespace markovbin
