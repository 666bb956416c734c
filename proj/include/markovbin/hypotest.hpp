// Binary hypothesis testing between known Markov models and the Monte Carlo
// experiments built on it: Bayes error estimation, error-exponent fitting,
// minimum-length search, divergence-vs-Euclidean classification comparison,
// and a large-deviation tail bound check.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "markovbin/chernoff.hpp"
#include "markovbin/contig.hpp"
#include "markovbin/information.hpp"
#include "markovbin/markov_model.hpp"
#include "markovbin/optim.hpp"
#include "markovbin/random.hpp"
#include "markovbin/simulate.hpp"

namespace markovbin {

struct test_outcome {
    int decision = 1;                    // 1 or 2
    double normalized_llr = 0.0;         // (1/L) log2 q1(x)/q2(x), bits per symbol
    double divergence_to_second = 0.0;   // D_c(type || model 2)
    double divergence_to_first = 0.0;    // D_c(type || model 1)
    double initial_state_term = 0.0;     // (1/L) log2(alpha1/alpha2)
};

// Likelihood-ratio test with the cyclic likelihood under both hypotheses.
// Decides hypothesis 1 iff llr >= log2(pi2/pi1); the tie goes to 1.
inline test_outcome np_decide(const contig& x, const markov_model& p1, const markov_model& p2,
                              std::pair<double, double> priors = {0.5, 0.5}) {
    if (p1.order() != p2.order() || !(p1.alph() == p2.alph()))
        throw std::invalid_argument("np_decide: models must share order and alphabet");
    if (!(priors.first > 0.0) || !(priors.second > 0.0) ||
        std::fabs(priors.first + priors.second - 1.0) > 1e-12)
        throw std::invalid_argument("np_decide: priors must be positive and sum to 1");

    const double ll1 = sequence_log_probability(x, p1);
    const double ll2 = sequence_log_probability(x, p2);
    if (ll1 == -infinite_divergence && ll2 == -infinite_divergence)
        throw std::runtime_error("np_decide: sequence impossible under both hypotheses");

    const double len = static_cast<double>(x.symbols.size());
    test_outcome out;
    double llr;
    if (ll1 == -infinite_divergence) {
        llr = -infinite_divergence;
    } else if (ll2 == -infinite_divergence) {
        llr = infinite_divergence;
    } else {
        llr = ll1 - ll2;
    }
    const double threshold = std::log2(priors.second / priors.first);
    out.decision = llr >= threshold ? 1 : 2;
    out.normalized_llr = llr / len;

    const joint_distribution type = empirical_type(x, p1.order(), p1.alph());
    out.divergence_to_second = conditional_relative_entropy(type, p2.joint);
    out.divergence_to_first = conditional_relative_entropy(type, p1.joint);
    const double a1 = initial_state_log_probability(x, p1);
    const double a2 = initial_state_log_probability(x, p2);
    out.initial_state_term = (a1 - a2) / len;
    return out;
}

struct error_estimate {
    double value = 0.0;             // raw Monte Carlo error frequency
    double wilson_halfwidth = 0.0;  // 95% interval halfwidth
    long long events = 0;
    long long trials = 0;
};

namespace detail {

inline double wilson_halfwidth_95(long long events, long long trials) {
    if (trials <= 0) return 0.0;
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(events) / n;
    const double denom = 1.0 + z * z / n;
    return z * std::sqrt(phat * (1.0 - phat) / n + z * z / (4.0 * n * n)) / denom;
}

}  // namespace detail

// Average error of the likelihood-ratio test with the hypothesis drawn from
// the priors each trial.  Trial t uses stream (seed, t), so any evaluation
// order yields the same counts.
inline error_estimate bayes_error_mc(const markov_model& p1, const markov_model& p2,
                                     std::pair<double, double> priors, int length,
                                     long long trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("bayes_error_mc: trials must be >= 1");
    if (length < p1.order() + 1)
        throw std::invalid_argument("bayes_error_mc: length must be >= m+1");
    long long events = 0;
    for (long long t = 0; t < trials; ++t) {
        std::mt19937_64 rng = make_stream(seed, static_cast<std::uint64_t>(t));
        const int truth = uniform01(rng) < priors.first ? 1 : 2;
        const contig x = sample_sequence(truth == 1 ? p1 : p2,
                                        static_cast<std::size_t>(length), rng);
        if (np_decide(x, p1, p2, priors).decision != truth) ++events;
    }
    error_estimate out;
    out.events = events;
    out.trials = trials;
    out.value = static_cast<double>(events) / static_cast<double>(trials);
    out.wilson_halfwidth = detail::wilson_halfwidth_95(events, trials);
    return out;
}

struct error_exponent_estimate {
    std::vector<int> lengths;
    std::vector<double> log_error_rates;        // per length, (1/L) log2 error; -inf if none seen
    std::vector<double> confidence_halfwidths;  // Wilson halfwidths of the raw error rates
    std::vector<long long> error_counts;
    std::vector<std::uint8_t> used_in_fit;      // lengths with >= 50 error events
    double slope_estimate = 0.0;                // WLS slope of log2 error vs L; exponent = -slope
    double intercept = 0.0;
    bool fit_valid = false;
    double chernoff_reference = 0.0;
    long long trials_per_length = 0;

    double exponent() const { return -slope_estimate; }
};

// Error decay rate across lengths, with the Chernoff value of the pair as
// reference.  The log of a rare-event frequency is heavy-tailed, so the fit
// weights each length by its error count and drops lengths below 50 events.
inline error_exponent_estimate error_exponent(const markov_model& p1, const markov_model& p2,
                                              const std::vector<int>& lengths, long long trials,
                                              std::uint64_t seed) {
    if (lengths.empty()) throw std::invalid_argument("error_exponent: no lengths");
    for (std::size_t i = 1; i < lengths.size(); ++i)
        if (lengths[i] <= lengths[i - 1])
            throw std::invalid_argument("error_exponent: lengths must be strictly increasing");

    error_exponent_estimate out;
    out.lengths = lengths;
    out.trials_per_length = trials;
    out.chernoff_reference = chernoff_information(p1.joint, p2.joint).value;

    for (std::size_t i = 0; i < lengths.size(); ++i) {
        const error_estimate e = bayes_error_mc(p1, p2, {0.5, 0.5}, lengths[i], trials,
                                                derive_seed(seed, static_cast<std::uint64_t>(i)));
        out.error_counts.push_back(e.events);
        out.confidence_halfwidths.push_back(e.wilson_halfwidth);
        out.log_error_rates.push_back(
            e.events == 0 ? -infinite_divergence
                          : std::log2(e.value) / static_cast<double>(lengths[i]));
        out.used_in_fit.push_back(e.events >= 50 ? 1 : 0);
    }

    // weighted least squares of y = log2(error) against L
    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (!out.used_in_fit[i]) continue;
        const double wt = static_cast<double>(out.error_counts[i]);
        const double y = out.log_error_rates[i] * static_cast<double>(lengths[i]);
        sw += wt;
        sx += wt * static_cast<double>(lengths[i]);
        sy += wt * y;
    }
    int usable = 0;
    for (std::uint8_t u : out.used_in_fit) usable += u;
    if (usable >= 2) {
        const double xbar = sx / sw, ybar = sy / sw;
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < lengths.size(); ++i) {
            if (!out.used_in_fit[i]) continue;
            const double wt = static_cast<double>(out.error_counts[i]);
            const double dx = static_cast<double>(lengths[i]) - xbar;
            const double y = out.log_error_rates[i] * static_cast<double>(lengths[i]);
            sxx += wt * dx * dx;
            sxy += wt * dx * (y - ybar);
        }
        if (sxx > 0.0) {
            out.slope_estimate = sxy / sxx;
            out.intercept = ybar - out.slope_estimate * xbar;
            out.fit_valid = true;
        }
    }
    return out;
}

struct min_length_result {
    int l_target = 0;
    double lbar_target = 0.0;
    bool found = false;
    bool monotone = true;  // largest probes were ordered; false means the
                           // bisection result was replaced by a linear scan
    std::vector<std::pair<int, double>> probes;  // (L, error) in probe order
};

// Smallest length whose Monte Carlo error is <= target, by doubling then
// bisection; error decay is assumed monotone in L, checked on the three
// largest probes, with a linear scan as the fallback.
inline min_length_result min_length_for_error(const markov_model& p1, const markov_model& p2,
                                              double target, long long trials, std::uint64_t seed,
                                              int l_max = 100000,
                                              double n_for_normalization = 1e6) {
    if (!(target > 0.0 && target < 0.5))
        throw std::invalid_argument("min_length_for_error: target must lie in (0, 0.5)");
    if (l_max < p1.order() + 1) throw std::invalid_argument("min_length_for_error: l_max too small");

    min_length_result out;
    std::map<int, double> cache;
    auto err_at = [&](int length) {
        auto it = cache.find(length);
        if (it != cache.end()) return it->second;
        const double e =
            bayes_error_mc(p1, p2, {0.5, 0.5}, length, trials,
                           derive_seed(seed, static_cast<std::uint64_t>(length)))
                .value;
        cache.emplace(length, e);
        out.probes.emplace_back(length, e);
        return e;
    };

    const int l_min = p1.order() + 1;
    int hi = l_min;
    if (err_at(l_min) > target) {
        bool reached = false;
        while (hi <= l_max / 2) {
            hi *= 2;
            if (err_at(hi) <= target) {
                reached = true;
                break;
            }
        }
        if (!reached && hi < l_max) {
            hi = l_max;
            reached = err_at(hi) <= target;
        }
        if (!reached) {
            out.found = false;
            return out;
        }
        int lo = hi / 2 < l_min ? l_min : hi / 2;
        while (hi - lo > 1) {
            const int mid = lo + (hi - lo) / 2;
            if (err_at(mid) <= target)
                hi = mid;
            else
                lo = mid;
        }
    }

    // sanity: on the three largest probed lengths the error should not grow
    std::vector<std::pair<int, double>> sorted(cache.begin(), cache.end());
    if (sorted.size() >= 3) {
        const std::size_t k = sorted.size();
        const double e0 = sorted[k - 3].second, e1 = sorted[k - 2].second, e2 = sorted[k - 1].second;
        if (e0 < e1 || e1 < e2) {
            // allow Monte Carlo jitter of a couple of Wilson halfwidths
            const double slack0 = 3.0 * detail::wilson_halfwidth_95(
                                            static_cast<long long>(e1 * static_cast<double>(trials)), trials);
            const double slack1 = 3.0 * detail::wilson_halfwidth_95(
                                            static_cast<long long>(e2 * static_cast<double>(trials)), trials);
            if (e1 > e0 + slack0 || e2 > e1 + slack1) out.monotone = false;
        }
    }
    if (!out.monotone) {
        bool found = false;
        for (int length = l_min; length <= l_max; ++length)
            if (err_at(length) <= target) {
                hi = length;
                found = true;
                break;
            }
        if (!found) {
            out.found = false;
            return out;
        }
    }

    out.found = true;
    out.l_target = hi;
    out.lbar_target = static_cast<double>(hi) / std::log2(n_for_normalization);
    return out;
}

struct metric_comparison_result {
    error_estimate conditional_divergence;
    error_estimate euclidean;
};

// Oracle-metric classification of sampled contigs: each trial's contig is
// classified once by smallest conditional divergence to the true joints and
// once by smallest l2 distance, on the same sample, so the two error rates
// are directly comparable.
inline metric_comparison_result metric_comparison(const markov_model& p1, const markov_model& p2,
                                                  int length, long long trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("metric_comparison: trials must be >= 1");
    if (length < p1.order() + 1)
        throw std::invalid_argument("metric_comparison: length must be >= m+1");
    long long dc_events = 0, euclid_events = 0;
    for (long long t = 0; t < trials; ++t) {
        std::mt19937_64 rng = make_stream(seed, static_cast<std::uint64_t>(t));
        const int truth = uniform01(rng) < 0.5 ? 1 : 2;
        const contig x = sample_sequence(truth == 1 ? p1 : p2,
                                        static_cast<std::size_t>(length), rng);
        const joint_distribution type = empirical_type(x, p1.order(), p1.alph());
        const double d1 = conditional_relative_entropy(type, p1.joint);
        const double d2 = conditional_relative_entropy(type, p2.joint);
        const int by_dc = d1 <= d2 ? 1 : 2;
        const double e1 = l2_distance(type.probs, p1.joint.probs);
        const double e2 = l2_distance(type.probs, p2.joint.probs);
        const int by_euclid = e1 <= e2 ? 1 : 2;
        if (by_dc != truth) ++dc_events;
        if (by_euclid != truth) ++euclid_events;
    }
    metric_comparison_result out;
    out.conditional_divergence = {static_cast<double>(dc_events) / static_cast<double>(trials),
                                  detail::wilson_halfwidth_95(dc_events, trials), dc_events, trials};
    out.euclidean = {static_cast<double>(euclid_events) / static_cast<double>(trials),
                     detail::wilson_halfwidth_95(euclid_events, trials), euclid_events, trials};
    return out;
}

struct ball_complement_rate {
    double rate = 0.0;  // min D_c(p || q) over {p balanced : l1(center, p) >= radius}
    joint_distribution minimizer;
    bool converged = false;
};

namespace detail {

// One equality-constrained solve: minimize D_c(p || q) subject to balance and
// smoothed-l1(center, p) = radius, from a given start.
inline augmented_lagrangian_result sphere_constrained_divergence(
    const joint_distribution& q, const joint_distribution& center, double radius,
    const std::vector<double>& start, const augmented_lagrangian_options& opts) {
    const int a_sz = q.alph.size();
    const std::size_t n_ctx = q.num_contexts();
    conditional_table cond_q = conditional(q);

    smooth_fn objective = [&q, cond_q, a_sz, n_ctx](const std::vector<double>& p,
                                                    std::vector<double>& grad) {
        joint_distribution cur = q;
        cur.probs = p;
        const std::vector<double> ctx = cur.context_marginal();
        double val = 0.0;
        for (std::size_t c = 0; c < n_ctx; ++c)
            for (int b = 0; b < a_sz; ++b) {
                const std::size_t g = joint_distribution::gram_of(c, b, a_sz);
                const double lg = std::log2(p[g] / ctx[c]) - std::log2(cond_q(c, b));
                val += p[g] * lg;
                grad[g] = lg;
            }
        return val;
    };

    std::vector<smooth_fn> constraints;
    const std::vector<double> center_probs = center.probs;
    constraints.push_back([center_probs, radius](const std::vector<double>& p,
                                                 std::vector<double>& grad) {
        const double delta = 1e-9;  // smooth |x| as sqrt(x^2 + delta^2) - delta
        double v = -radius;
        for (std::size_t g = 0; g < p.size(); ++g) {
            const double d = p[g] - center_probs[g];
            const double r = std::sqrt(d * d + delta * delta);
            v += r - delta;
            grad[g] = d / r;
        }
        return v;
    });
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
    augmented_lagrangian_result sol = minimize_on_simplex(objective, constraints, start, opts);

    // Away from its kinks the l1 sphere is affine with a fixed sign pattern,
    // so the boundary solver's KKT Newton refinement applies verbatim; with a
    // coordinate pinned at a kink the pattern is ambiguous and the
    // augmented-Lagrangian iterate is kept as is.
    const std::size_t n = sol.p.size();
    std::vector<double> sigma(n);
    double min_dev = infinite_divergence;
    double rhs = radius;
    for (std::size_t g = 0; g < n; ++g) {
        const double d = sol.p[g] - center_probs[g];
        sigma[g] = d >= 0.0 ? 1.0 : -1.0;
        min_dev = std::min(min_dev, std::fabs(d));
        rhs += sigma[g] * center_probs[g];
    }
    if (min_dev > 1e-6) {
        std::vector<double> log2q(n, 0.0);
        for (std::size_t c = 0; c < n_ctx; ++c)
            for (int b = 0; b < a_sz; ++b)
                log2q[joint_distribution::gram_of(c, b, a_sz)] = std::log2(cond_q(c, b));
        const newton_polish_result polish = boundary_newton_polish(
            sol.p, log2q, sigma, n_ctx, a_sz_u, opts.floor, 40, rhs);
        bool signs_hold = polish.ok;
        for (std::size_t g = 0; signs_hold && g < n; ++g)
            if ((polish.p[g] - center_probs[g]) * sigma[g] < 0.0) signs_hold = false;
        if (signs_hold) {
            sol.p = polish.p;
            std::vector<double> grad(n);
            sol.objective = objective(sol.p, grad);
            sol.kkt_residual = polish.dual_residual;
            sol.max_constraint_violation = polish.primal_residual;
            sol.converged = true;
        }
    }
    return sol;
}

}  // namespace detail

// Smallest divergence to q over balanced distributions at l1 distance at
// least `radius` from `center`.  The feasible set is the complement of a
// ball, which is not convex, so several starts are tried: pushes of q toward
// each vertex of the simplex (small alphabets), seeded random perturbations
// (large ones), and for the binary order-1 case a dense parameter-triangle
// scan whose best feasible point seeds a final refinement.
inline ball_complement_rate min_divergence_outside_ball(const markov_model& q,
                                                        const joint_distribution& center,
                                                        double radius,
                                                        std::uint64_t seed = 0x5eedULL) {
    require_same_shape(q.joint, center);
    if (!(radius > 0.0)) throw std::invalid_argument("min_divergence_outside_ball: radius must be > 0");

    ball_complement_rate out;
    out.minimizer = q.joint;
    if (l1_distance(center.probs, q.joint.probs) >= radius) {
        out.rate = 0.0;  // q itself lies in the feasible set
        out.converged = true;
        return out;
    }

    const std::size_t n = q.joint.probs.size();
    std::vector<std::vector<double>> starts;

    // pushes toward simplex vertices, bisected onto the sphere
    const std::size_t corner_cap = n <= 16 ? n : 0;
    for (std::size_t gc = 0; gc < corner_cap; ++gc) {
        auto pushed = [&](double beta) {
            joint_distribution mix = q.joint;
            for (std::size_t g = 0; g < n; ++g)
                mix.probs[g] = (1.0 - beta) * q.joint.probs[g] + (g == gc ? beta : 0.0);
            mix.normalize();
            return rebalanced(mix);
        };
        double lo = 0.0, hi_beta = -1.0;
        for (double beta = 0.1; beta <= 0.91; beta += 0.1)
            if (l1_distance(center.probs, pushed(beta).probs) >= radius * 1.02) {
                hi_beta = beta;
                break;
            }
        if (hi_beta < 0.0) continue;
        for (int it = 0; it < 12; ++it) {
            const double mid = 0.5 * (lo + hi_beta);
            if (l1_distance(center.probs, pushed(mid).probs) >= radius * 1.02)
                hi_beta = mid;
            else
                lo = mid;
        }
        starts.push_back(pushed(hi_beta).probs);
    }
    if (corner_cap == 0) {
        // large alphabet: seeded balanced perturbations at the right distance
        std::mt19937_64 rng = make_stream(seed, 0);
        for (int s = 0; s < 12; ++s) {
            joint_distribution mix = q.joint;
            double step = 0.0;
            std::vector<double> dir(n);
            for (std::size_t g = 0; g < n; ++g) dir[g] = uniform01(rng) - 0.5;
            for (double beta = 0.05; beta <= 0.95; beta += 0.05) {
                joint_distribution trial = q.joint;
                for (std::size_t g = 0; g < n; ++g)
                    trial.probs[g] = std::max(1e-9, q.joint.probs[g] * (1.0 + beta * dir[g] * 4.0));
                trial.normalize();
                trial = rebalanced(trial);
                if (l1_distance(center.probs, trial.probs) >= radius * 1.02) {
                    mix = trial;
                    step = beta;
                    break;
                }
            }
            if (step > 0.0) starts.push_back(mix.probs);
        }
    }

    // dense oracle scan of the binary order-1 triangle (s = p(01) = p(10),
    // t = p(11)): best feasible grid point becomes one more start
    if (q.order() == 1 && q.alph().size() == 2) {
        const int r = 600;
        double best_val = infinite_divergence;
        std::vector<double> best_probs;
        for (int i = 1; i < r; ++i)
            for (int j = 1; j < r; ++j) {
                const double s = 0.5 * static_cast<double>(i) / static_cast<double>(r);
                const double t = static_cast<double>(j) / static_cast<double>(r);
                const double p00 = 1.0 - 2.0 * s - t;
                if (!(p00 > 1e-9) || !(s > 1e-9) || !(t > 1e-9)) continue;
                const std::vector<double> probs{p00, s, s, t};
                double dist = 0.0;
                for (std::size_t g = 0; g < 4; ++g) dist += std::fabs(probs[g] - center.probs[g]);
                if (dist < radius) continue;
                joint_distribution cand = q.joint;
                cand.probs = probs;
                const double val = conditional_relative_entropy(cand, q.joint);
                if (val < best_val) {
                    best_val = val;
                    best_probs = probs;
                }
            }
        if (!best_probs.empty()) starts.push_back(best_probs);
    }
    if (starts.empty()) return out;  // converged stays false: no feasible start found

    augmented_lagrangian_options opts;
    out.rate = infinite_divergence;
    for (const std::vector<double>& start : starts) {
        const augmented_lagrangian_result sol =
            detail::sphere_constrained_divergence(q.joint, center, radius, start, opts);
        joint_distribution cand = q.joint;
        cand.probs = sol.p;
        if (!sol.converged) continue;
        if (l1_distance(center.probs, cand.probs) < radius - 1e-6) continue;
        const double val = conditional_relative_entropy(cand, q.joint);
        if (val < out.rate) {
            out.rate = val;
            out.minimizer = cand;
            out.converged = true;
        }
    }
    if (out.converged && out.rate < 0.0) out.rate = 0.0;
    return out;
}

struct sanov_check_result {
    double empirical_prob = 0.0;    // MC frequency of types at distance >= eps/2
    double wilson_halfwidth = 0.0;
    double bound = 0.0;             // type-count polynomial times 2^(-L rate + log2 alpha)
    bool bound_available = false;
    double rate = 0.0;              // constrained minimum divergence
    joint_distribution minimizer;
    double log2_type_count = 0.0;
    double log2_alpha = 0.0;
};

// count of achievable types grows at most polynomially; the classical
// exponent for the default tetranucleotide setting, the generic gram count
// otherwise
inline double log2_type_count_bound(int length, int order, int alphabet_size) {
    const double exponent = (order == 3 && alphabet_size == 4)
                                ? 4.0
                                : std::pow(static_cast<double>(alphabet_size), order + 1);
    return exponent * std::log2(static_cast<double>(length) + 1.0);
}

// Tail bound check: Monte Carlo frequency of empirical types falling at l1
// distance >= eps/2 from `center`, against the computable upper bound
// |types| * 2^(-L * rate + log2 alpha) with alpha the largest context
// probability under q.
inline sanov_check_result sanov_bound_check(const markov_model& q, const markov_model& center,
                                            double eps, int length, long long trials,
                                            std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("sanov_bound_check: trials must be >= 1");
    if (length < q.order() + 1)
        throw std::invalid_argument("sanov_bound_check: length must be >= m+1");
    if (!(eps > 0.0)) throw std::invalid_argument("sanov_bound_check: eps must be > 0");
    const double radius = eps / 2.0;

    sanov_check_result out;
    long long events = 0;
    for (long long t = 0; t < trials; ++t) {
        std::mt19937_64 rng = make_stream(seed, static_cast<std::uint64_t>(t));
        const contig x = sample_sequence(q, static_cast<std::size_t>(length), rng);
        const joint_distribution type = empirical_type(x, q.order(), q.alph());
        if (l1_distance(center.joint.probs, type.probs) >= radius) ++events;
    }
    out.empirical_prob = static_cast<double>(events) / static_cast<double>(trials);
    out.wilson_halfwidth = detail::wilson_halfwidth_95(events, trials);

    out.log2_type_count = log2_type_count_bound(length, q.order(), q.alph().size());
    double alpha_max = 0.0;
    for (double v : q.context_marginal) alpha_max = std::max(alpha_max, v);
    out.log2_alpha = std::log2(alpha_max);
    out.minimizer = q.joint;

    if (radius > 2.0) {
        // no distribution is that far in l1; the feasible set is empty
        out.rate = infinite_divergence;
        out.bound = 0.0;
        out.bound_available = true;
        return out;
    }
    const ball_complement_rate solved =
        min_divergence_outside_ball(q, center.joint, radius, derive_seed(seed, 0x600dULL));
    out.rate = solved.rate;
    out.minimizer = solved.minimizer;
    out.bound_available = solved.converged;
    if (out.bound_available)
        out.bound = std::exp2(out.log2_type_count - static_cast<double>(length) * out.rate +
                              out.log2_alpha);
    return out;
}

}  // namespace markovbin
