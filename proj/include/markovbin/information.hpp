// Information measures for Markov (m+1)-gram distributions, all in bits:
// conditional relative entropy D_c, conditional entropy H_c, plain-vector
// divergence/entropy, l1/l2 distances, and exact sequence log-likelihoods.
//
// Conventions: 0 log 0 = 0; a support violation (p(ab) > 0 where q(b|a) = 0)
// yields +infinity as a distinguished value, never an exception.

#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "markovbin/contig.hpp"
#include "markovbin/joint_distribution.hpp"
#include "markovbin/markov_model.hpp"

namespace markovbin {

inline constexpr double infinite_divergence = std::numeric_limits<double>::infinity();

// D_c(p||q) = sum_{ab} p(ab) log2( p(b|a) / q(b|a) )
inline double conditional_relative_entropy(const joint_distribution& p,
                                           const joint_distribution& q) {
    require_same_shape(p, q);
    const std::vector<double> pm = p.context_marginal();
    const std::vector<double> qm = q.context_marginal();
    double d = 0.0;
    for (std::size_t g = 0; g < p.size(); ++g) {
        const double pab = p.probs[g];
        if (pab == 0.0) continue;
        const std::size_t a = p.prefix_context(g);
        const double qab = q.probs[g];
        if (!(qab > 0.0) || !(qm[a] > 0.0)) return infinite_divergence;
        d += pab * (std::log2(pab / pm[a]) - std::log2(qab / qm[a]));
    }
    return d < 0.0 ? 0.0 : d;  // clamp -0 style round-off at identical inputs
}

// H_c(p) = -sum_{ab} p(ab) log2 p(b|a)
inline double conditional_entropy(const joint_distribution& p) {
    const std::vector<double> pm = p.context_marginal();
    double h = 0.0;
    for (std::size_t g = 0; g < p.size(); ++g) {
        const double pab = p.probs[g];
        if (pab == 0.0) continue;
        h -= pab * std::log2(pab / pm[p.prefix_context(g)]);
    }
    return h < 0.0 ? 0.0 : h;
}

// KL divergence between plain probability vectors, bits
inline double kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (!(q[i] > 0.0)) return infinite_divergence;
        d += p[i] * std::log2(p[i] / q[i]);
    }
    return d < 0.0 ? 0.0 : d;
}

inline double entropy(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

inline double l1_distance(const std::vector<double>& p, const std::vector<double>& q) {
    double d = 0.0;
    for (std::size_t g = 0; g < p.size(); ++g) d += std::fabs(p[g] - q[g]);
    return d;
}

inline double l1_distance(const joint_distribution& p, const joint_distribution& q) {
    require_same_shape(p, q);
    return l1_distance(p.probs, q.probs);
}

inline double l2_distance(const std::vector<double>& p, const std::vector<double>& q) {
    double d = 0.0;
    for (std::size_t g = 0; g < p.size(); ++g) {
        const double t = p[g] - q[g];
        d += t * t;
    }
    return std::sqrt(d);
}

inline double l2_distance(const joint_distribution& p, const joint_distribution& q) {
    require_same_shape(p, q);
    return l2_distance(p.probs, q.probs);
}

namespace detail {

inline double log2_or_neg_inf(double v) {
    return v > 0.0 ? std::log2(v) : -std::numeric_limits<double>::infinity();
}

inline std::size_t initial_context(const contig& x, int order, int A) {
    std::size_t ctx = 0;
    for (int i = 0; i < order; ++i)
        ctx = ctx * static_cast<std::size_t>(A) + x.symbols[static_cast<std::size_t>(i)];
    return ctx;
}

}  // namespace detail

// log2 probability of x under q in the cyclical convention: the initial
// m-gram probability plus all L cyclic transition log-probabilities.  Equals
// -L [D_c(p_hat||q) + H_c(p_hat)] + log2 alpha with p_hat the cyclic type.
inline double sequence_log_probability(const contig& x, const markov_model& q) {
    const int m = q.order();
    const int A = q.alph().size();
    const std::size_t L = x.length();
    if (L < static_cast<std::size_t>(m) + 1)
        throw std::invalid_argument("sequence shorter than order + 1");
    std::size_t ctx = detail::initial_context(x, m, A);
    double lp = detail::log2_or_neg_inf(q.context_marginal[ctx]);
    for (std::size_t i = 0; i < L; ++i) {
        const int b = x.symbols[(i + static_cast<std::size_t>(m)) % L];
        if (!q.transitions.row_defined(ctx))
            return -std::numeric_limits<double>::infinity();
        lp += detail::log2_or_neg_inf(q.transitions(ctx, b));
        ctx = q.next_context(ctx, b);
    }
    return lp;
}

// log2 probability of x as a linear realization of the process: initial
// m-gram then the L-m observed transitions.  This is the quantity that sums
// to one over X^L.
inline double sequence_log_probability_linear(const contig& x, const markov_model& q) {
    const int m = q.order();
    const int A = q.alph().size();
    const std::size_t L = x.length();
    if (L < static_cast<std::size_t>(m) + 1)
        throw std::invalid_argument("sequence shorter than order + 1");
    std::size_t ctx = detail::initial_context(x, m, A);
    double lp = detail::log2_or_neg_inf(q.context_marginal[ctx]);
    for (std::size_t i = static_cast<std::size_t>(m); i < L; ++i) {
        const int b = x.symbols[i];
        if (!q.transitions.row_defined(ctx))
            return -std::numeric_limits<double>::infinity();
        lp += detail::log2_or_neg_inf(q.transitions(ctx, b));
        ctx = q.next_context(ctx, b);
    }
    return lp;
}

// log2 of the initial-state probability q(x_1 .. x_m)
inline double initial_state_log_probability(const contig& x, const markov_model& q) {
    const std::size_t ctx = detail::initial_context(x, q.order(), q.alph().size());
    return detail::log2_or_neg_inf(q.context_marginal[ctx]);
}

}  // namespace markovbin
