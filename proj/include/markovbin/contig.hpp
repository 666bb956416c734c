// Contig: a finite symbol sequence with an optional ground-truth species
// label, plus its cyclic empirical type.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "markovbin/joint_distribution.hpp"

namespace markovbin {

struct contig {
    std::vector<std::uint8_t> symbols;  // alphabet indices
    std::optional<int> label;           // species id, 1-based when present

    std::size_t length() const { return symbols.size(); }
};

inline contig contig_from_string(const std::string& s, const alphabet& alph,
                                 std::optional<int> label = std::nullopt) {
    contig c;
    c.symbols.reserve(s.size());
    for (char ch : s) {
        const int idx = alph.index_of(ch);
        if (idx < 0) throw std::invalid_argument(std::string("symbol not in alphabet: ") + ch);
        c.symbols.push_back(static_cast<std::uint8_t>(idx));
    }
    c.label = label;
    return c;
}

inline std::string contig_to_string(const contig& c, const alphabet& alph) {
    std::string s;
    s.reserve(c.length());
    for (std::uint8_t v : c.symbols) s.push_back(alph.symbol(v));
    return s;
}

// integer counts of all L cyclic (m+1)-grams of x (m wrap transitions from the
// end back to the start); the wrap makes the normalized counts balanced by
// construction
inline std::vector<std::uint64_t> cyclic_gram_counts(const contig& x, int order,
                                                     const alphabet& alph) {
    const std::size_t L = x.length();
    const std::size_t m = static_cast<std::size_t>(order);
    if (order < 1) throw std::invalid_argument("order must be >= 1");
    if (L < m + 1) throw std::invalid_argument("sequence shorter than order + 1");
    const std::size_t K = alph.num_kmers(order + 1);
    const int A = alph.size();
    std::vector<std::uint64_t> counts(K, 0);
    // rolling gram index over the cyclic sequence
    std::size_t gram = 0;
    for (std::size_t i = 0; i < m; ++i) gram = gram * static_cast<std::size_t>(A) + x.symbols[i];
    for (std::size_t i = 0; i < L; ++i) {
        const std::uint8_t next = x.symbols[(i + m) % L];
        gram = (gram * static_cast<std::size_t>(A) + next) % K;
        ++counts[gram];
    }
    return counts;
}

// empirical type p_hat of x: cyclic (m+1)-gram counts normalized by L
inline joint_distribution empirical_type(const contig& x, int order, const alphabet& alph) {
    const std::vector<std::uint64_t> counts = cyclic_gram_counts(x, order, alph);
    std::vector<double> probs(counts.size());
    const double L = static_cast<double>(x.length());
    for (std::size_t g = 0; g < counts.size(); ++g)
        probs[g] = static_cast<double>(counts[g]) / L;
    return joint_distribution(order, alph, std::move(probs));
}

}  // namespace markovbin
