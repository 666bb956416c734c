// Stationary Markov process of order m: a balanced joint (m+1)-gram law
// together with its context marginal and transition table.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "markovbin/joint_distribution.hpp"

namespace markovbin {

struct markov_model {
    joint_distribution joint;
    std::vector<double> context_marginal;  // over X^m
    conditional_table transitions;

    markov_model() = default;

    explicit markov_model(joint_distribution j, double tol = 1e-9) : joint(std::move(j)) {
        if (!joint.is_distribution(tol))
            throw std::invalid_argument("markov_model: joint is not a distribution");
        if (!joint.is_consistent(tol))
            throw std::invalid_argument("markov_model: joint violates the balance condition");
        context_marginal = joint.context_marginal();
        transitions = conditional(joint);
    }

    int order() const { return joint.order; }
    const alphabet& alph() const { return joint.alph; }

    bool strictly_positive() const { return joint.is_strictly_positive(); }

    // context index following `context` after emitting `symbol`
    std::size_t next_context(std::size_t context, int symbol) const {
        const std::size_t modulus = joint.alph.num_kmers(order() - 1);
        return (context % modulus) * static_cast<std::size_t>(joint.alph.size()) +
               static_cast<std::size_t>(symbol);
    }
};

namespace detail {

// stationary distribution of the context chain induced by transition rows,
// by power iteration (the chain on X^m is sparse: A successors per state)
inline std::vector<double> stationary_context_distribution(const alphabet& alph, int order,
                                                           const std::vector<double>& rows,
                                                           int max_iter = 100000,
                                                           double tol = 1e-15) {
    const std::size_t n_ctx = alph.num_kmers(order);
    const std::size_t mod = alph.num_kmers(order - 1);
    const int A = alph.size();
    std::vector<double> pi(n_ctx, 1.0 / static_cast<double>(n_ctx));
    std::vector<double> next(n_ctx, 0.0);
    for (int it = 0; it < max_iter; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t a = 0; a < n_ctx; ++a) {
            const std::size_t base = (a % mod) * static_cast<std::size_t>(A);
            for (int b = 0; b < A; ++b)
                next[base + static_cast<std::size_t>(b)] +=
                    pi[a] * rows[joint_distribution::gram_of(a, b, A)];
        }
        double diff = 0.0, s = 0.0;
        for (std::size_t a = 0; a < n_ctx; ++a) s += next[a];
        for (std::size_t a = 0; a < n_ctx; ++a) {
            next[a] /= s;
            diff = std::max(diff, std::fabs(next[a] - pi[a]));
        }
        pi.swap(next);
        if (diff < tol) break;
    }
    return pi;
}

}  // namespace detail

// builds the stationary model determined by transition rows p(b|a); the joint
// is pi(a) p(b|a) with pi the stationary context distribution, so the balance
// condition holds by construction
inline markov_model model_from_transitions(const alphabet& alph, int order,
                                           const std::vector<double>& rows) {
    const std::size_t K = alph.num_kmers(order + 1);
    if (rows.size() != K) throw std::invalid_argument("transition table has wrong size");
    const int A = alph.size();
    for (std::size_t a = 0; a < alph.num_kmers(order); ++a) {
        double s = 0.0;
        for (int b = 0; b < A; ++b) {
            const double v = rows[joint_distribution::gram_of(a, b, A)];
            if (!(v >= 0.0)) throw std::invalid_argument("transition probabilities must be >= 0");
            s += v;
        }
        if (std::fabs(s - 1.0) > 1e-9)
            throw std::invalid_argument("each transition row must sum to 1");
    }
    const std::vector<double> pi = detail::stationary_context_distribution(alph, order, rows);
    std::vector<double> joint(K, 0.0);
    for (std::size_t a = 0; a < alph.num_kmers(order); ++a)
        for (int b = 0; b < A; ++b) {
            const std::size_t g = joint_distribution::gram_of(a, b, A);
            joint[g] = pi[a] * rows[g];
        }
    return markov_model(joint_distribution(order, alph, std::move(joint)));
}

// binary order-1 chain from the two conditional probabilities of emitting 1
inline markov_model binary_chain(double p1_given_0, double p1_given_1) {
    return model_from_transitions(alphabet::binary(), 1,
                                  {1.0 - p1_given_0, p1_given_0, 1.0 - p1_given_1, p1_given_1});
}

// projects a positive joint into the balanced class: keep its conditional
// rows, replace the context weights by their stationary distribution
inline joint_distribution rebalanced(const joint_distribution& p) {
    const std::size_t n_ctx = p.num_contexts();
    const int A = p.alph.size();
    std::vector<double> rows(p.size(), 0.0);
    for (std::size_t a = 0; a < n_ctx; ++a) {
        double s = 0.0;
        for (int b = 0; b < A; ++b) s += p.probs[joint_distribution::gram_of(a, b, A)];
        if (!(s > 0.0))
            throw std::invalid_argument("rebalanced: context with zero mass");
        for (int b = 0; b < A; ++b) {
            const std::size_t g = joint_distribution::gram_of(a, b, A);
            rows[g] = p.probs[g] / s;
        }
    }
    const std::vector<double> pi = detail::stationary_context_distribution(p.alph, p.order, rows);
    joint_distribution out = p;
    for (std::size_t a = 0; a < n_ctx; ++a)
        for (int b = 0; b < A; ++b) {
            const std::size_t g = joint_distribution::gram_of(a, b, A);
            out.probs[g] = pi[a] * rows[g];
        }
    out.normalize();
    return out;
}

}  // namespace markovbin
