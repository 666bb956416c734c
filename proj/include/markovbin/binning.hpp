// Clique-based binning of contigs via the distance geometry of their
// empirical types: epsilon-threshold graph over pairwise l1 distances,
// disjoint clique search, per-clique distribution estimates, and
// divergence-based assignment, plus a relabeling-invariant score.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "markovbin/contig.hpp"
#include "markovbin/information.hpp"
#include "markovbin/joint_distribution.hpp"

namespace markovbin {

enum class bin_metric { conditional_divergence, euclidean, l1 };

struct distance_entry {
    double distance = 0.0;
    int first = 0;   // contig indices, first < second
    int second = 0;
};

// all N(N-1)/2 l1 distances between empirical types, ascending; equal
// distances are ordered by (first, second) so downstream sweeps are
// deterministic
inline std::vector<distance_entry> pairwise_distances(const std::vector<joint_distribution>& types) {
    if (types.size() < 2)
        throw std::invalid_argument("pairwise_distances: need at least two contigs");
    std::vector<distance_entry> out;
    out.reserve(types.size() * (types.size() - 1) / 2);
    for (std::size_t i = 0; i < types.size(); ++i)
        for (std::size_t j = i + 1; j < types.size(); ++j) {
            require_same_shape(types[i], types[j]);
            out.push_back({l1_distance(types[i].probs, types[j].probs),
                           static_cast<int>(i), static_cast<int>(j)});
        }
    std::sort(out.begin(), out.end(), [](const distance_entry& a, const distance_entry& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    return out;
}

// threshold graph: edge (i, j) iff d(type_i, type_j) <= epsilon
struct epsilon_graph {
    double epsilon = 0.0;
    int n = 0;
    std::vector<std::uint8_t> adj;  // n*n, symmetric, zero diagonal
    std::vector<int> degree;

    epsilon_graph() = default;
    epsilon_graph(int n_, double eps)
        : epsilon(eps), n(n_),
          adj(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), 0),
          degree(static_cast<std::size_t>(n_), 0) {}

    bool edge(int i, int j) const {
        return adj[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                   static_cast<std::size_t>(j)] != 0;
    }
    void add_edge(int i, int j) {
        if (i == j || edge(i, j)) return;
        adj[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] = 1;
        adj[static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i)] = 1;
        ++degree[static_cast<std::size_t>(i)];
        ++degree[static_cast<std::size_t>(j)];
    }
};

inline epsilon_graph build_epsilon_graph(const std::vector<joint_distribution>& types, double eps) {
    if (eps < 0.0) throw std::invalid_argument("build_epsilon_graph: epsilon must be >= 0");
    epsilon_graph g(static_cast<int>(types.size()), eps);
    for (std::size_t i = 0; i < types.size(); ++i)
        for (std::size_t j = i + 1; j < types.size(); ++j)
            if (l1_distance(types[i].probs, types[j].probs) <= eps)
                g.add_edge(static_cast<int>(i), static_cast<int>(j));
    return g;
}

namespace detail {

// Greedy disjoint-clique search.  Vertices outside the (min_size-1)-core can
// never join a clique of size min_size and are discarded first.  Each clique
// is seeded with the highest-degree unused vertex and grown by the unused
// vertex adjacent to all current members with maximum remaining degree (ties
// to the lowest index); growth stops when continuing would leave fewer than
// min_size unused vertices per clique still to be built, so maximality is
// relative to that feasibility reserve.  max_size < 0 means uncapped.
inline std::optional<std::vector<std::vector<int>>> greedy_cliques(const epsilon_graph& g, int M,
                                                                   int min_size, int max_size) {
    const int n = g.n;
    if (static_cast<long long>(M) * min_size > n) return std::nullopt;

    std::vector<std::uint8_t> used(static_cast<std::size_t>(n), 0);
    std::vector<int> live_deg = g.degree;
    int unused = n;
    auto retire = [&](int v) {
        used[static_cast<std::size_t>(v)] = 1;
        --unused;
        for (int u = 0; u < n; ++u)
            if (!used[static_cast<std::size_t>(u)] && g.edge(v, u))
                --live_deg[static_cast<std::size_t>(u)];
    };

    // core pass: iteratively drop vertices that cannot reach degree min_size-1
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < n; ++v)
            if (!used[static_cast<std::size_t>(v)] &&
                live_deg[static_cast<std::size_t>(v)] < min_size - 1) {
                retire(v);
                changed = true;
            }
    }
    if (static_cast<long long>(unused) < static_cast<long long>(M) * min_size) return std::nullopt;

    std::vector<std::vector<int>> cliques;
    for (int k = 0; k < M; ++k) {
        const long long reserve = static_cast<long long>(M - k - 1) * min_size;
        int seed = -1, best = -1;
        for (int v = 0; v < n; ++v)
            if (!used[static_cast<std::size_t>(v)] && live_deg[static_cast<std::size_t>(v)] > best) {
                best = live_deg[static_cast<std::size_t>(v)];
                seed = v;
            }
        if (seed < 0) return std::nullopt;

        std::vector<int> clique{seed};
        std::vector<int> cand;
        for (int u = 0; u < n; ++u)
            if (!used[static_cast<std::size_t>(u)] && g.edge(seed, u)) cand.push_back(u);
        retire(seed);

        while (!cand.empty()) {
            if (max_size > 0 && static_cast<int>(clique.size()) >= max_size) break;
            if (static_cast<long long>(unused) <= reserve) break;
            int pick = -1, pd = -1;
            for (int u : cand)
                if (live_deg[static_cast<std::size_t>(u)] > pd) {
                    pd = live_deg[static_cast<std::size_t>(u)];
                    pick = u;
                }
            clique.push_back(pick);
            retire(pick);
            std::vector<int> next;
            for (int u : cand)
                if (u != pick && g.edge(pick, u)) next.push_back(u);
            cand.swap(next);
        }
        if (static_cast<int>(clique.size()) < min_size) return std::nullopt;
        std::sort(clique.begin(), clique.end());
        cliques.push_back(std::move(clique));
    }
    return cliques;
}

// Exhaustive backtracking over families of M vertex-disjoint cliques of size
// exactly min_size (a clique of size >= s contains one of size s, so this
// decides existence).  Families are enumerated canonically: member lists
// ascending, cliques ordered by smallest member.  Bitmask adjacency caps the
// instance at 64 vertices; a node budget guards against blowup.
struct exact_clique_state {
    int n = 0, M = 0, s = 0;
    std::vector<std::uint64_t> nbr;
    long long budget = 0;
    std::vector<std::vector<int>> found;
    std::vector<int> cur;

    bool choose_next(std::uint64_t used_mask, int prev_min) {
        if (static_cast<int>(found.size()) == M) return true;
        for (int v = prev_min + 1; v < n; ++v) {
            if ((used_mask >> v) & 1ULL) continue;
            cur.assign(1, v);
            const std::uint64_t above = (v + 1 >= 64) ? 0ULL : (~0ULL << (v + 1));
            if (extend(used_mask | (1ULL << v), nbr[static_cast<std::size_t>(v)] & ~used_mask & above, v))
                return true;
        }
        return false;
    }

    bool extend(std::uint64_t used_mask, std::uint64_t cand, int clique_min) {
        if (--budget < 0)
            throw std::runtime_error("exact clique search: node budget exhausted");
        if (static_cast<int>(cur.size()) == s) {
            found.push_back(cur);
            // choose_next reuses cur for the next clique; keep this frame's
            // copy so the unwinding pop_backs above stay balanced on failure
            std::vector<int> saved = std::move(cur);
            if (choose_next(used_mask, clique_min)) return true;
            cur = std::move(saved);
            found.pop_back();
            return false;
        }
        if (static_cast<int>(cur.size()) + __builtin_popcountll(cand) < s) return false;
        std::uint64_t rest = cand;
        while (rest) {
            const int v = __builtin_ctzll(rest);
            rest &= rest - 1;
            cur.push_back(v);
            const std::uint64_t above = (v + 1 >= 64) ? 0ULL : (~0ULL << (v + 1));
            if (extend(used_mask | (1ULL << v), cand & nbr[static_cast<std::size_t>(v)] & above, clique_min))
                return true;
            cur.pop_back();
        }
        return false;
    }
};

}  // namespace detail

// greedy search for M vertex-disjoint cliques, each of size >= min_size;
// absence is a valid result, not an error
inline std::optional<std::vector<std::vector<int>>> find_cliques(const epsilon_graph& g, int M,
                                                                 int min_size) {
    if (M < 1) throw std::invalid_argument("find_cliques: M must be >= 1");
    if (min_size < 1) throw std::invalid_argument("find_cliques: min_size must be >= 1");
    return detail::greedy_cliques(g, M, min_size, -1);
}

// complete backtracking search used to validate the greedy procedure on
// small instances (<= 64 vertices)
inline std::optional<std::vector<std::vector<int>>> find_cliques_exact(const epsilon_graph& g, int M,
                                                                       int min_size,
                                                                       long long node_budget = 5000000) {
    if (M < 1) throw std::invalid_argument("find_cliques_exact: M must be >= 1");
    if (min_size < 1) throw std::invalid_argument("find_cliques_exact: min_size must be >= 1");
    if (g.n > 64) throw std::invalid_argument("find_cliques_exact: limited to 64 vertices");
    if (static_cast<long long>(M) * min_size > g.n) return std::nullopt;
    detail::exact_clique_state st;
    st.n = g.n;
    st.M = M;
    st.s = min_size;
    st.budget = node_budget;
    st.nbr.assign(static_cast<std::size_t>(g.n), 0ULL);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            if (i != j && g.edge(i, j)) st.nbr[static_cast<std::size_t>(i)] |= 1ULL << j;
    if (st.choose_next(0ULL, -1)) return st.found;
    return std::nullopt;
}

// arithmetic mean of member types per clique; a mean of balanced
// distributions is balanced, so each estimate stays in the class
inline std::vector<joint_distribution> estimate_distributions(
    const std::vector<std::vector<int>>& cliques, const std::vector<joint_distribution>& types) {
    if (cliques.empty()) throw std::invalid_argument("estimate_distributions: no cliques");
    std::vector<joint_distribution> out;
    out.reserve(cliques.size());
    for (const std::vector<int>& members : cliques) {
        if (members.empty()) throw std::invalid_argument("estimate_distributions: empty clique");
        joint_distribution mean = types[static_cast<std::size_t>(members[0])];
        for (std::size_t i = 1; i < members.size(); ++i) {
            const joint_distribution& t = types[static_cast<std::size_t>(members[i])];
            require_same_shape(mean, t);
            for (std::size_t g = 0; g < mean.probs.size(); ++g) mean.probs[g] += t.probs[g];
        }
        const double inv = 1.0 / static_cast<double>(members.size());
        for (double& v : mean.probs) v *= inv;
        out.push_back(std::move(mean));
    }
    return out;
}

struct bin_assignment {
    std::vector<int> assignment;            // per contig, bin in {1..M}
    std::vector<joint_distribution> estimates;
    bin_metric metric = bin_metric::conditional_divergence;
    double epsilon = 0.0;                   // threshold selected by the sweep
    std::vector<std::vector<int>> cliques;  // clique members per bin (empty in assign-only mode)
    bool clique_search_failed = false;
    std::vector<int> l1_fallback;           // contigs with infinite divergence to every bin
    std::vector<double> best_value;         // per contig, metric value at the chosen bin
    std::vector<double> runner_up_value;    // per contig, second-best metric value
};

// assigns each contig to the estimate minimizing the chosen metric; ties go
// to the smallest bin index; divergence binning floors the estimates at 1e-9
// per entry so zero entries cannot produce infinities by themselves
inline bin_assignment assign_bins(const std::vector<joint_distribution>& types,
                                  std::vector<joint_distribution> estimates, bin_metric metric) {
    if (estimates.empty()) throw std::invalid_argument("assign_bins: no estimates");
    if (types.empty()) throw std::invalid_argument("assign_bins: no contigs");
    if (metric == bin_metric::conditional_divergence)
        for (joint_distribution& e : estimates)
            if (!e.is_strictly_positive()) e = e.with_pseudocount(1e-9);

    bin_assignment out;
    out.estimates = estimates;
    out.metric = metric;
    out.assignment.resize(types.size(), 1);
    out.best_value.resize(types.size(), 0.0);
    out.runner_up_value.resize(types.size(), infinite_divergence);

    const std::size_t M = estimates.size();
    std::vector<double> vals(M, 0.0);
    for (std::size_t x = 0; x < types.size(); ++x) {
        bool all_infinite = true;
        for (std::size_t k = 0; k < M; ++k) {
            require_same_shape(types[x], estimates[k]);
            switch (metric) {
                case bin_metric::conditional_divergence:
                    vals[k] = conditional_relative_entropy(types[x], estimates[k]);
                    break;
                case bin_metric::euclidean:
                    vals[k] = l2_distance(types[x].probs, estimates[k].probs);
                    break;
                case bin_metric::l1:
                    vals[k] = l1_distance(types[x].probs, estimates[k].probs);
                    break;
            }
            if (vals[k] < infinite_divergence) all_infinite = false;
        }
        if (all_infinite) {
            // divergence cannot rank the bins for this contig; fall back to l1
            out.l1_fallback.push_back(static_cast<int>(x));
            for (std::size_t k = 0; k < M; ++k)
                vals[k] = l1_distance(types[x].probs, estimates[k].probs);
        }
        std::size_t arg = 0;
        for (std::size_t k = 1; k < M; ++k)
            if (vals[k] < vals[arg]) arg = k;
        double runner = infinite_divergence;
        for (std::size_t k = 0; k < M; ++k)
            if (k != arg) runner = std::min(runner, vals[k]);
        out.assignment[x] = static_cast<int>(arg) + 1;
        out.best_value[x] = vals[arg];
        out.runner_up_value[x] = runner;
    }
    return out;
}

// default clique-size floor alpha = 1 / log2(L), clamped away from the
// degenerate small-L regime
inline double default_alpha(std::size_t contig_length) {
    if (contig_length < 2) return 0.5;
    return std::clamp(1.0 / std::log2(static_cast<double>(contig_length)), 0.01, 0.5);
}

inline int required_clique_size(int n, int M, double alpha) {
    const double raw = (1.0 - alpha) * static_cast<double>(n) / static_cast<double>(M);
    return std::max(1, static_cast<int>(std::ceil(raw - 1e-9)));
}

// Full binning pipeline: sweep epsilon over the sorted distinct pairwise
// distances; at the first threshold admitting M disjoint cliques of size
// >= (1-alpha)N/M, average each clique into an estimate and assign every
// contig by conditional divergence.  If no threshold succeeds, the complete
// graph is split into M balanced cliques instead and the result is flagged.
inline bin_assignment algorithm1(const std::vector<joint_distribution>& types, int M, double alpha) {
    const int n = static_cast<int>(types.size());
    if (M < 1) throw std::invalid_argument("algorithm1: M must be >= 1");
    if (n < M) throw std::invalid_argument("algorithm1: need at least M contigs");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("algorithm1: alpha must lie in (0, 1)");
    if (n == 1) {
        bin_assignment out = assign_bins(types, {types[0]}, bin_metric::conditional_divergence);
        out.cliques = {{0}};
        return out;
    }

    const int min_size = required_clique_size(n, M, alpha);
    const std::vector<distance_entry> dist = pairwise_distances(types);

    epsilon_graph g(n, 0.0);
    std::optional<std::vector<std::vector<int>>> found;
    double eps_used = 0.0;
    bool failed = false;

    std::size_t idx = 0;
    while (idx < dist.size()) {
        const double eps = dist[idx].distance;
        while (idx < dist.size() && dist[idx].distance == eps) {
            g.add_edge(dist[idx].first, dist[idx].second);
            ++idx;
        }
        g.epsilon = eps;
        // cheap gate: a clique of size s needs s vertices of degree >= s-1
        long long rich = 0;
        for (int v = 0; v < n; ++v)
            if (g.degree[static_cast<std::size_t>(v)] >= min_size - 1) ++rich;
        if (rich < static_cast<long long>(M) * min_size) continue;
        std::optional<std::vector<std::vector<int>>> c = detail::greedy_cliques(g, M, min_size, -1);
        if (c) {
            found = std::move(c);
            eps_used = eps;
            break;
        }
    }
    if (!found) {
        epsilon_graph full(n, dist.empty() ? 0.0 : dist.back().distance);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) full.add_edge(i, j);
        const int cap = (n + M - 1) / M;
        found = detail::greedy_cliques(full, M, 1, cap);
        if (!found) throw std::runtime_error("algorithm1: balanced fallback split failed");
        eps_used = full.epsilon;
        failed = true;
    }

    bin_assignment out = assign_bins(types, estimate_distributions(*found, types),
                                     bin_metric::conditional_divergence);
    out.epsilon = eps_used;
    out.cliques = *found;
    out.clique_search_failed = failed;
    return out;
}

inline std::vector<joint_distribution> empirical_types(const std::vector<contig>& contigs, int order,
                                                       const alphabet& alph) {
    std::vector<joint_distribution> out;
    out.reserve(contigs.size());
    for (const contig& c : contigs) out.push_back(empirical_type(c, order, alph));
    return out;
}

// contig-level entry point; alpha <= 0 selects the default 1 / log2(L) rule
// using the shortest contig length
inline bin_assignment algorithm1(const std::vector<contig>& contigs, int M, int order,
                                 const alphabet& alph, double alpha = 0.0) {
    if (contigs.empty()) throw std::invalid_argument("algorithm1: no contigs");
    if (alpha <= 0.0) {
        std::size_t shortest = contigs[0].symbols.size();
        for (const contig& c : contigs) shortest = std::min(shortest, c.symbols.size());
        alpha = default_alpha(shortest);
    }
    return algorithm1(empirical_types(contigs, order, alph), M, alpha);
}

struct binning_score {
    int misbin_count = 0;
    double misbin_rate = 0.0;
    bool perfect = false;
    std::vector<int> permutation;  // species label matched to each bin, 1-based
};

namespace detail {

// minimum-cost perfect matching on a square matrix via the potentials method
inline std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    const double inf = infinite_divergence;
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> p(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
        std::vector<std::uint8_t> used(static_cast<std::size_t>(n) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = p[static_cast<std::size_t>(j0)];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j)
                if (!used[static_cast<std::size_t>(j)]) {
                    const double cur = a[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                                       u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                    if (cur < minv[static_cast<std::size_t>(j)]) {
                        minv[static_cast<std::size_t>(j)] = cur;
                        way[static_cast<std::size_t>(j)] = j0;
                    }
                    if (minv[static_cast<std::size_t>(j)] < delta) {
                        delta = minv[static_cast<std::size_t>(j)];
                        j1 = j;
                    }
                }
            for (int j = 0; j <= n; ++j)
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        if (p[static_cast<std::size_t>(j)] > 0) row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
    return row_to_col;
}

}  // namespace detail

// misbin count minimized over bin -> species bijections; exhaustive for
// M <= 8, assignment-problem matching beyond
inline binning_score score(const bin_assignment& assignment, const std::vector<int>& truth_labels) {
    const std::size_t n = assignment.assignment.size();
    if (truth_labels.size() != n)
        throw std::invalid_argument("score: one truth label per contig required");
    int M = static_cast<int>(assignment.estimates.size());
    for (int b : assignment.assignment) M = std::max(M, b);
    int species = 0;
    for (int s : truth_labels) {
        if (s < 1) throw std::invalid_argument("score: labels are 1-based");
        species = std::max(species, s);
    }
    if (species > M)
        throw std::invalid_argument("score: more species than bins");

    std::vector<std::vector<long long>> count(static_cast<std::size_t>(M),
                                              std::vector<long long>(static_cast<std::size_t>(M), 0));
    for (std::size_t x = 0; x < n; ++x) {
        const int b = assignment.assignment[x] - 1;
        const int s = truth_labels[x] - 1;
        if (b < 0 || b >= M) throw std::invalid_argument("score: bin out of range");
        ++count[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)];
    }

    std::vector<int> best_map(static_cast<std::size_t>(M));
    long long best_match = -1;
    if (M <= 8) {
        std::vector<int> perm(static_cast<std::size_t>(M));
        for (int i = 0; i < M; ++i) perm[static_cast<std::size_t>(i)] = i;
        do {
            long long matched = 0;
            for (int b = 0; b < M; ++b)
                matched += count[static_cast<std::size_t>(b)][static_cast<std::size_t>(perm[static_cast<std::size_t>(b)])];
            if (matched > best_match) {
                best_match = matched;
                best_map = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        std::vector<std::vector<double>> cost(static_cast<std::size_t>(M),
                                              std::vector<double>(static_cast<std::size_t>(M), 0.0));
        for (int b = 0; b < M; ++b)
            for (int s = 0; s < M; ++s)
                cost[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)] =
                    static_cast<double>(n) - static_cast<double>(count[static_cast<std::size_t>(b)][static_cast<std::size_t>(s)]);
        best_map = detail::min_cost_assignment(cost);
        best_match = 0;
        for (int b = 0; b < M; ++b)
            best_match += count[static_cast<std::size_t>(b)][static_cast<std::size_t>(best_map[static_cast<std::size_t>(b)])];
    }

    binning_score out;
    out.misbin_count = static_cast<int>(static_cast<long long>(n) - best_match);
    out.misbin_rate = n == 0 ? 0.0 : static_cast<double>(out.misbin_count) / static_cast<double>(n);
    out.perfect = out.misbin_count == 0;
    out.permutation.resize(static_cast<std::size_t>(M));
    for (int b = 0; b < M; ++b) out.permutation[static_cast<std::size_t>(b)] = best_map[static_cast<std::size_t>(b)] + 1;
    return out;
}

}  // namespace markovbin
