// Dense order-(m+1) joint distribution over strings from a finite alphabet.
// This is the carrier for both model distributions and empirical types; the
// stationary class requires strict positivity plus the balance condition
// sum_b p(ab) = sum_b p(ba) for every length-m context a.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "markovbin/alphabet.hpp"

namespace markovbin {

struct joint_distribution {
    int order = 1;                 // context length m
    alphabet alph = alphabet::dna();
    std::vector<double> probs;     // length |X|^(m+1), lexicographic (m+1)-gram order

    joint_distribution() = default;

    joint_distribution(int order_, alphabet alph_, std::vector<double> probs_)
        : order(order_), alph(std::move(alph_)), probs(std::move(probs_)) {
        if (order < 1) throw std::invalid_argument("order must be >= 1");
        if (probs.size() != alph.num_kmers(order + 1))
            throw std::invalid_argument("probs size must be |X|^(m+1)");
    }

    std::size_t size() const { return probs.size(); }
    std::size_t num_contexts() const { return alph.num_kmers(order); }

    double operator[](std::size_t gram) const { return probs[gram]; }

    // gram index decomposition; the last symbol is least significant
    std::size_t prefix_context(std::size_t gram) const {
        return gram / static_cast<std::size_t>(alph.size());
    }
    std::size_t suffix_context(std::size_t gram) const {
        return gram % num_contexts();
    }
    static std::size_t gram_of(std::size_t context, int symbol, int alphabet_size) {
        return context * static_cast<std::size_t>(alphabet_size) + static_cast<std::size_t>(symbol);
    }

    // induced distribution over length-m contexts, p(a) = sum_b p(ab)
    std::vector<double> context_marginal() const {
        std::vector<double> out(num_contexts(), 0.0);
        for (std::size_t g = 0; g < probs.size(); ++g) out[prefix_context(g)] += probs[g];
        return out;
    }

    // marginal of the trailing m symbols, sum_b p(ba)
    std::vector<double> suffix_marginal() const {
        std::vector<double> out(num_contexts(), 0.0);
        for (std::size_t g = 0; g < probs.size(); ++g) out[suffix_context(g)] += probs[g];
        return out;
    }

    double sum() const {
        double s = 0.0;
        for (double v : probs) s += v;
        return s;
    }

    bool is_distribution(double tol = 1e-12) const {
        for (double v : probs)
            if (!(v >= 0.0)) return false;
        return std::fabs(sum() - 1.0) <= tol;
    }

    // balance condition making the joint the stationary (m+1)-gram law of a
    // Markov chain: sum_b p(ab) = sum_b p(ba) for all contexts a
    bool is_consistent(double tol = 1e-12) const {
        const std::vector<double> pre = context_marginal();
        const std::vector<double> suf = suffix_marginal();
        for (std::size_t a = 0; a < pre.size(); ++a)
            if (std::fabs(pre[a] - suf[a]) > tol) return false;
        return true;
    }

    double max_consistency_gap() const {
        const std::vector<double> pre = context_marginal();
        const std::vector<double> suf = suffix_marginal();
        double gap = 0.0;
        for (std::size_t a = 0; a < pre.size(); ++a)
            gap = std::max(gap, std::fabs(pre[a] - suf[a]));
        return gap;
    }

    bool is_strictly_positive() const {
        for (double v : probs)
            if (!(v > 0.0)) return false;
        return true;
    }

    // membership in the stationary, irreducible class (all entries positive,
    // balanced, normalized)
    bool in_stationary_class(double tol = 1e-12) const {
        return is_strictly_positive() && is_distribution(tol) && is_consistent(tol);
    }

    void normalize() {
        double s = sum();
        if (!(s > 0.0)) throw std::invalid_argument("cannot normalize an all-zero distribution");
        for (double& v : probs) v /= s;
    }

    // adds c to every (m+1)-gram weight and renormalizes; preserves balance
    joint_distribution with_pseudocount(double c) const {
        joint_distribution out = *this;
        for (double& v : out.probs) v += c;
        out.normalize();
        return out;
    }
};

// conditional table p(b|a); rows for contexts with zero marginal are flagged
// undefined rather than filled with NaN
struct conditional_table {
    int order = 1;
    alphabet alph = alphabet::dna();
    std::vector<double> rows;            // length |X|^(m+1), aligned with joint grams
    std::vector<std::uint8_t> defined;   // per context

    double operator()(std::size_t context, int symbol) const {
        return rows[joint_distribution::gram_of(context, symbol, alph.size())];
    }
    bool row_defined(std::size_t context) const { return defined[context] != 0; }
};

inline conditional_table conditional(const joint_distribution& p) {
    conditional_table t;
    t.order = p.order;
    t.alph = p.alph;
    t.rows.assign(p.size(), 0.0);
    t.defined.assign(p.num_contexts(), 0);
    const std::vector<double> marg = p.context_marginal();
    const int A = p.alph.size();
    for (std::size_t a = 0; a < marg.size(); ++a) {
        if (marg[a] > 0.0) {
            t.defined[a] = 1;
            for (int b = 0; b < A; ++b) {
                const std::size_t g = joint_distribution::gram_of(a, b, A);
                t.rows[g] = p.probs[g] / marg[a];
            }
        }
    }
    return t;
}

inline void require_same_shape(const joint_distribution& p, const joint_distribution& q) {
    if (p.order != q.order || !(p.alph == q.alph))
        throw std::invalid_argument("distributions must share order and alphabet");
}

}  // namespace markovbin
