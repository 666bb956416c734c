// Contig generation: sampling from known Markov models, fitting models from
// genome sequences, and extracting random substrings of real genomes.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "markovbin/contig.hpp"
#include "markovbin/information.hpp"
#include "markovbin/markov_model.hpp"
#include "markovbin/random.hpp"

namespace markovbin {

struct community_spec {
    std::vector<markov_model> models;
    std::vector<double> priors;      // empty = uniform
    std::size_t contig_length = 0;   // L
    std::size_t contig_count = 0;    // N
    std::uint64_t seed = 0;
};

// L = round(lbar * log2 N), the normalized-length scaling
struct scaling_spec {
    double lbar = 1.0;
    std::size_t n = 2;

    std::size_t contig_length() const {
        if (!(lbar > 0.0) || n < 2) throw std::invalid_argument("need lbar > 0 and n >= 2");
        return static_cast<std::size_t>(std::llround(lbar * std::log2(static_cast<double>(n))));
    }
};

// one stationary realization of length L: initial m-gram from the context
// marginal, then L-m transition draws
inline contig sample_sequence(const markov_model& model, std::size_t length,
                              std::mt19937_64& rng) {
    const int m = model.order();
    const int A = model.alph().size();
    if (length < static_cast<std::size_t>(m) + 1)
        throw std::invalid_argument("contig length must be at least order + 1");
    contig out;
    out.symbols.resize(length);
    std::size_t ctx = static_cast<std::size_t>(sample_index(model.context_marginal, rng));
    for (int i = m - 1; i >= 0; --i) {
        out.symbols[static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>(ctx % static_cast<std::size_t>(A));
        ctx /= static_cast<std::size_t>(A);
    }
    ctx = detail::initial_context(out, m, A);
    for (std::size_t i = static_cast<std::size_t>(m); i < length; ++i) {
        const double u = uniform01(rng);
        double acc = 0.0;
        int b = A - 1;
        for (int s = 0; s < A; ++s) {
            acc += model.transitions(ctx, s);
            if (u < acc) {
                b = s;
                break;
            }
        }
        out.symbols[i] = static_cast<std::uint8_t>(b);
        ctx = model.next_context(ctx, b);
    }
    return out;
}

// N independently labeled contigs; contig i is a pure function of (seed, i)
inline std::vector<contig> generate_contigs(const community_spec& spec) {
    const std::size_t M = spec.models.size();
    if (M < 1) throw std::invalid_argument("community needs at least one model");
    if (spec.contig_count < 1) throw std::invalid_argument("contig_count must be >= 1");
    std::vector<double> priors = spec.priors;
    if (priors.empty()) priors.assign(M, 1.0 / static_cast<double>(M));
    if (priors.size() != M) throw std::invalid_argument("priors size must match model count");
    double s = 0.0;
    for (double v : priors) s += v;
    if (std::fabs(s - 1.0) > 1e-9) throw std::invalid_argument("priors must sum to 1");

    std::vector<contig> out;
    out.reserve(spec.contig_count);
    for (std::size_t i = 0; i < spec.contig_count; ++i) {
        std::mt19937_64 rng = make_stream(spec.seed, i);
        const int k = sample_index(priors, rng);
        contig c = sample_sequence(spec.models[static_cast<std::size_t>(k)], spec.contig_length, rng);
        c.label = k + 1;
        out.push_back(std::move(c));
    }
    return out;
}

// maximum-likelihood fit from a long sequence: the cyclic type, optionally
// regularized by adding `pseudocount` to every (m+1)-gram count
inline markov_model fit_model_from_genome(const contig& genome, int order, double pseudocount,
                                          const alphabet& alph) {
    if (pseudocount < 0.0) throw std::invalid_argument("pseudocount must be >= 0");
    const std::vector<std::uint64_t> counts = cyclic_gram_counts(genome, order, alph);
    std::vector<double> probs(counts.size());
    double total = 0.0;
    for (std::size_t g = 0; g < counts.size(); ++g) {
        probs[g] = static_cast<double>(counts[g]) + pseudocount;
        total += probs[g];
    }
    for (double& v : probs) v /= total;
    return markov_model(joint_distribution(order, alph, std::move(probs)));
}

// N random length-L substrings (uniform starts, with replacement); the genome
// is treated as linear, no wrap
inline std::vector<contig> extract_contigs_from_genome(const contig& genome, std::size_t length,
                                                       std::size_t count, std::uint64_t seed,
                                                       std::optional<int> species = std::nullopt) {
    if (length > genome.length())
        throw std::invalid_argument("contig length exceeds genome length");
    if (length < 1) throw std::invalid_argument("contig length must be >= 1");
    const std::size_t span = genome.length() - length + 1;
    std::vector<contig> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::mt19937_64 rng = make_stream(seed, i);
        const std::size_t start =
            static_cast<std::size_t>(uniform01(rng) * static_cast<double>(span));
        contig c;
        c.symbols.assign(genome.symbols.begin() + static_cast<std::ptrdiff_t>(start),
                         genome.symbols.begin() + static_cast<std::ptrdiff_t>(start + length));
        c.label = species ? species : genome.label;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace markovbin
