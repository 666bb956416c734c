// Binning pipeline tests: distance sweeps, threshold graphs, clique search
// (greedy vs exhaustive), clique averaging, divergence assignment, scoring,
// and the purity/coverage properties of the full algorithm.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "markovbin/markovbin.hpp"
#include "oracles.hpp"

using namespace markovbin;

namespace {

std::vector<joint_distribution> types_from_strings(const std::vector<std::string>& xs,
                                                   int order, const alphabet& alph) {
    std::vector<joint_distribution> out;
    for (const std::string& s : xs) out.push_back(empirical_type(contig_from_string(s, alph), order, alph));
    return out;
}

bool is_clique(const epsilon_graph& g, const std::vector<int>& members) {
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if (!g.edge(members[i], members[j])) return false;
    return true;
}

bool are_disjoint(const std::vector<std::vector<int>>& cliques, int n) {
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (const std::vector<int>& c : cliques)
        for (int v : c)
            if (seen[static_cast<std::size_t>(v)]++) return false;
    return true;
}

epsilon_graph random_graph(int n, double p, std::mt19937_64& rng) {
    epsilon_graph g(n, 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (uniform01(rng) < p) g.add_edge(i, j);
    return g;
}

}  // namespace

TEST_CASE("pairwise distances are sorted and complete", "[distance]") {
    const alphabet bin = alphabet::binary();
    const std::vector<joint_distribution> types =
        types_from_strings({"0000", "0101", "0011", "1111"}, 1, bin);
    const std::vector<distance_entry> dist = pairwise_distances(types);
    REQUIRE(dist.size() == 6);
    for (std::size_t i = 0; i + 1 < dist.size(); ++i)
        REQUIRE(dist[i].distance <= dist[i + 1].distance);
    for (const distance_entry& e : dist) {
        REQUIRE(e.first < e.second);
        REQUIRE(e.distance ==
                Catch::Approx(l1_distance(types[static_cast<std::size_t>(e.first)],
                                          types[static_cast<std::size_t>(e.second)])));
    }
    REQUIRE_THROWS_AS(pairwise_distances({types[0]}), std::invalid_argument);
}

TEST_CASE("threshold graphs grow monotonically with epsilon", "[graph]") {
    const alphabet bin = alphabet::binary();
    const std::vector<joint_distribution> types =
        types_from_strings({"0000", "0000", "1111", "0101"}, 1, bin);

    const epsilon_graph g0 = build_epsilon_graph(types, 0.0);
    REQUIRE(g0.edge(0, 1));  // identical types touch at epsilon zero
    REQUIRE_FALSE(g0.edge(0, 2));
    REQUIRE_FALSE(g0.edge(0, 3));
    REQUIRE(g0.degree[0] == 1);

    const epsilon_graph gmax = build_epsilon_graph(types, 2.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) REQUIRE(gmax.edge(i, j));

    for (double lo : {0.0, 0.5, 1.0}) {
        const epsilon_graph a = build_epsilon_graph(types, lo);
        const epsilon_graph b = build_epsilon_graph(types, lo + 0.75);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (a.edge(i, j)) REQUIRE(b.edge(i, j));
    }
    REQUIRE_THROWS_AS(build_epsilon_graph(types, -0.1), std::invalid_argument);
}

TEST_CASE("clique search finds planted components", "[clique]") {
    // two disjoint 4-cliques
    epsilon_graph g(8, 1.0);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            g.add_edge(i, j);
            g.add_edge(i + 4, j + 4);
        }
    const auto found = find_cliques(g, 2, 4);
    REQUIRE(found.has_value());
    REQUIRE(found->size() == 2);
    std::vector<int> all;
    for (const std::vector<int>& c : *found) {
        REQUIRE(c.size() == 4);
        REQUIRE(is_clique(g, c));
        all.insert(all.end(), c.begin(), c.end());
    }
    std::sort(all.begin(), all.end());
    REQUIRE(all == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});

    const auto exact = find_cliques_exact(g, 2, 4);
    REQUIRE(exact.has_value());
    for (const std::vector<int>& c : *exact) REQUIRE(is_clique(g, c));
}

TEST_CASE("a complete graph splits under the feasibility reserve", "[clique]") {
    epsilon_graph g(10, 1.0);
    for (int i = 0; i < 10; ++i)
        for (int j = i + 1; j < 10; ++j) g.add_edge(i, j);

    const auto two = find_cliques(g, 2, 5);
    REQUIRE(two.has_value());
    REQUIRE((*two)[0].size() == 5);  // growth stops to keep the second clique feasible
    REQUIRE((*two)[1].size() == 5);
    REQUIRE(are_disjoint(*two, 10));

    REQUIRE_FALSE(find_cliques(g, 2, 6).has_value());   // 2*6 > 10
    REQUIRE_FALSE(find_cliques_exact(g, 2, 6).has_value());

    const auto one = find_cliques(g, 1, 3);
    REQUIRE(one.has_value());
    REQUIRE((*one)[0].size() == 10);  // uncapped growth absorbs everything
}

TEST_CASE("edgeless graphs defeat the search", "[clique]") {
    epsilon_graph g(6, 0.0);
    REQUIRE_FALSE(find_cliques(g, 1, 2).has_value());
    REQUIRE_FALSE(find_cliques_exact(g, 1, 2).has_value());
    const auto singles = find_cliques(g, 3, 1);
    REQUIRE(singles.has_value());
    REQUIRE(singles->size() == 3);

    REQUIRE_THROWS_AS(find_cliques(g, 0, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(find_cliques(g, 1, 0), std::invalid_argument);
    epsilon_graph big(65, 0.0);
    REQUIRE_THROWS_AS(find_cliques_exact(big, 1, 1), std::invalid_argument);
}

TEST_CASE("greedy clique search is validated by backtracking", "[clique]") {
    std::mt19937_64 rng = make_stream(97, 0);
    int greedy_hits = 0, exact_hits = 0;
    for (int rep = 0; rep < 60; ++rep) {
        const double p = 0.2 + 0.6 * uniform01(rng);
        const epsilon_graph g = random_graph(13, p, rng);
        const int M = 2 + (rep % 2);
        const int s = 2 + (rep % 3);
        const auto greedy = find_cliques(g, M, s);
        const auto exact = find_cliques_exact(g, M, s);
        if (greedy) {
            ++greedy_hits;
            REQUIRE(greedy->size() == static_cast<std::size_t>(M));
            for (const std::vector<int>& c : *greedy) {
                REQUIRE(c.size() >= static_cast<std::size_t>(s));
                REQUIRE(is_clique(g, c));
            }
            REQUIRE(are_disjoint(*greedy, g.n));
            REQUIRE(exact.has_value());  // greedy success implies existence
        }
        if (exact) {
            ++exact_hits;
            for (const std::vector<int>& c : *exact) {
                REQUIRE(c.size() == static_cast<std::size_t>(s));
                REQUIRE(is_clique(g, c));
            }
            REQUIRE(are_disjoint(*exact, g.n));
        }
    }
    REQUIRE(greedy_hits > 10);  // the sweep covered non-trivial instances
    REQUIRE(exact_hits >= greedy_hits);
}

TEST_CASE("exhausting the backtracking budget is reported", "[clique]") {
    std::mt19937_64 rng = make_stream(101, 0);
    const epsilon_graph g = random_graph(40, 0.5, rng);
    REQUIRE_THROWS_AS(find_cliques_exact(g, 3, 12, 50), std::runtime_error);
}

TEST_CASE("clique averaging preserves the stationary class", "[estimate]") {
    const alphabet bin = alphabet::binary();
    const std::vector<joint_distribution> types =
        types_from_strings({"0000", "0101", "00110011"}, 1, bin);

    SECTION("singleton clique returns the type") {
        const auto est = estimate_distributions({{1}}, types);
        for (std::size_t g = 0; g < 4; ++g)
            REQUIRE(est[0].probs[g] == Catch::Approx(types[1].probs[g]).margin(1e-15));
    }
    SECTION("two-member clique returns the midpoint") {
        const auto est = estimate_distributions({{0, 1}}, types);
        for (std::size_t g = 0; g < 4; ++g)
            REQUIRE(est[0].probs[g] ==
                    Catch::Approx(0.5 * (types[0].probs[g] + types[1].probs[g])).margin(1e-15));
    }
    SECTION("averages of balanced types stay balanced") {
        const auto est = estimate_distributions({{0, 1, 2}}, types);
        REQUIRE(est[0].max_consistency_gap() <= 1e-12);
        REQUIRE(est[0].is_distribution());
    }
    SECTION("empty input is rejected") {
        REQUIRE_THROWS_AS(estimate_distributions({}, types), std::invalid_argument);
        REQUIRE_THROWS_AS(estimate_distributions({{}}, types), std::invalid_argument);
    }
}

TEST_CASE("large-clique estimates concentrate on the source", "[estimate]") {
    std::mt19937_64 seeder = make_stream(103, 0);
    const joint_distribution truth = oracle::random_balanced_joint(alphabet::dna(), 3, seeder);
    const markov_model model(truth);
    std::vector<joint_distribution> types;
    std::vector<int> members;
    for (int i = 0; i < 100; ++i) {
        std::mt19937_64 rng = make_stream(103, static_cast<std::uint64_t>(i + 1));
        types.push_back(empirical_type(sample_sequence(model, 10000, rng), 3, alphabet::dna()));
        members.push_back(i);
    }
    const auto est = estimate_distributions({members}, types);
    REQUIRE(l1_distance(est[0], truth) < 0.02);
}

TEST_CASE("assignment minimizes the chosen metric", "[assign]") {
    const alphabet bin = alphabet::binary();
    const std::vector<joint_distribution> types =
        types_from_strings({"0000", "0101", "00110011"}, 1, bin);

    SECTION("own type wins when it is among the estimates") {
        const bin_assignment a = assign_bins(types, types, bin_metric::conditional_divergence);
        REQUIRE(a.assignment == std::vector<int>{1, 2, 3});
        // estimates with zero entries get the 1e-9 floor, so the divergence
        // to the own type is tiny but not exactly zero
        for (double v : a.best_value) REQUIRE(v == Catch::Approx(0.0).margin(1e-7));
        REQUIRE(a.l1_fallback.empty());
    }
    SECTION("exact ties go to the lowest bin") {
        // dyadic entries make both divergences bitwise identical: the only
        // nonzero terms are swapped between the estimates, and two-term sums
        // commute exactly in IEEE arithmetic
        const joint_distribution u(1, bin, {0.25, 0.25, 0.25, 0.25});
        const joint_distribution e1(1, bin, {0.25, 0.25, 0.125, 0.375});
        const joint_distribution e2(1, bin, {0.25, 0.25, 0.375, 0.125});
        REQUIRE(conditional_relative_entropy(u, e1) == conditional_relative_entropy(u, e2));
        const bin_assignment a =
            assign_bins({u}, {e1, e2}, bin_metric::conditional_divergence);
        REQUIRE(a.assignment == std::vector<int>{1});
        REQUIRE(a.best_value[0] == a.runner_up_value[0]);
    }
    SECTION("duplicate estimates tie everywhere") {
        const bin_assignment a = assign_bins(types, {types[0], types[0]}, bin_metric::l1);
        for (int b : a.assignment) REQUIRE(b == 1);
    }
    SECTION("runner-up is the second smallest value") {
        const bin_assignment a = assign_bins(types, types, bin_metric::euclidean);
        for (std::size_t x = 0; x < types.size(); ++x) {
            REQUIRE(a.best_value[x] <= a.runner_up_value[x]);
            double second = infinite_divergence;
            for (std::size_t k = 0; k < types.size(); ++k) {
                if (k == static_cast<std::size_t>(a.assignment[x] - 1)) continue;
                second = std::min(second, l2_distance(types[x].probs, types[k].probs));
            }
            REQUIRE(a.runner_up_value[x] == Catch::Approx(second).margin(1e-12));
        }
    }
    SECTION("invalid inputs are rejected") {
        REQUIRE_THROWS_AS(assign_bins({}, types, bin_metric::l1), std::invalid_argument);
        REQUIRE_THROWS_AS(assign_bins(types, {}, bin_metric::l1), std::invalid_argument);
    }
}

TEST_CASE("divergence and euclidean binning can disagree", "[assign]") {
    // frozen witness: the divergence ranks estimate 1 first, euclidean
    // distance ranks estimate 2 first
    const joint_distribution t = binary_chain(0.091, 0.247).joint;
    const joint_distribution e1 = binary_chain(0.751, 0.783).joint;
    const joint_distribution e2 = binary_chain(0.893, 0.654).joint;
    REQUIRE(conditional_relative_entropy(t, e1) < conditional_relative_entropy(t, e2));
    REQUIRE(l2_distance(t.probs, e1.probs) > l2_distance(t.probs, e2.probs));

    const bin_assignment dc = assign_bins({t}, {e1, e2}, bin_metric::conditional_divergence);
    const bin_assignment eu = assign_bins({t}, {e1, e2}, bin_metric::euclidean);
    REQUIRE(dc.assignment[0] == 1);
    REQUIRE(eu.assignment[0] == 2);
}

TEST_CASE("alpha defaults and clique-size floors", "[alg1]") {
    REQUIRE(default_alpha(1024) == Catch::Approx(0.1));
    REQUIRE(default_alpha(2) == Catch::Approx(0.5));   // clamped from 1.0
    REQUIRE(default_alpha(1) == Catch::Approx(0.5));
    REQUIRE(default_alpha(1u << 20) == Catch::Approx(0.05));

    REQUIRE(required_clique_size(300, 3, 0.1) == 90);
    REQUIRE(required_clique_size(10, 3, 0.1) == 3);    // 3.0 does not round up
    REQUIRE(required_clique_size(20, 2, 0.1) == 9);
    REQUIRE(required_clique_size(7, 2, 0.2) == 3);     // ceil(2.8)
    REQUIRE(required_clique_size(2, 2, 0.9) == 1);     // floored at one
}

TEST_CASE("the pipeline recovers exactly separable communities", "[alg1]") {
    const alphabet dna = alphabet::dna();
    std::vector<contig> contigs;
    std::vector<int> truth;
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 10; ++i) {
            contigs.push_back(contig_from_string(std::string(40, "ACG"[k]), dna));
            truth.push_back(k + 1);
        }
    const bin_assignment a = algorithm1(contigs, 3, 3, dna);
    REQUIRE_FALSE(a.clique_search_failed);
    REQUIRE(a.epsilon == 0.0);  // identical types join at threshold zero
    REQUIRE(a.cliques.size() == 3);
    const binning_score s = score(a, truth);
    REQUIRE(s.perfect);
    REQUIRE(s.misbin_count == 0);
}

TEST_CASE("single-bin runs assign everything to bin one", "[alg1]") {
    const alphabet bin = alphabet::binary();
    const std::vector<joint_distribution> types =
        types_from_strings({"0000", "0101", "1111", "00110011"}, 1, bin);
    const bin_assignment a = algorithm1(types, 1, 0.2);
    for (int b : a.assignment) REQUIRE(b == 1);
    REQUIRE(a.estimates.size() == 1);
    REQUIRE(a.cliques.size() == 1);
}

TEST_CASE("infeasible clique sizes trigger the flagged fallback", "[alg1]") {
    const alphabet bin = alphabet::binary();
    // N=5, M=2, alpha=0.01 needs two disjoint cliques of size 3: impossible
    const std::vector<joint_distribution> types =
        types_from_strings({"0000", "0000", "0101", "0101", "1111"}, 1, bin);
    const bin_assignment a = algorithm1(types, 2, 0.01);
    REQUIRE(a.clique_search_failed);
    REQUIRE(a.assignment.size() == 5);
    for (int b : a.assignment) {
        REQUIRE(b >= 1);
        REQUIRE(b <= 2);
    }
    REQUIRE(a.cliques.size() == 2);
    REQUIRE(are_disjoint(a.cliques, 5));

    REQUIRE_THROWS_AS(algorithm1(types, 0, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(algorithm1(types, 6, 0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(algorithm1(types, 2, 1.0), std::invalid_argument);
}

TEST_CASE("scores are invariant to bin relabeling", "[score]") {
    bin_assignment a;
    a.estimates.resize(2, binary_chain(0.5, 0.5).joint);

    SECTION("identity labeling is perfect") {
        a.assignment = {1, 1, 2, 2};
        const binning_score s = score(a, {1, 1, 2, 2});
        REQUIRE(s.perfect);
        REQUIRE(s.permutation == std::vector<int>{1, 2});
    }
    SECTION("swapped bins are still perfect") {
        a.assignment = {2, 2, 1};
        const binning_score s = score(a, {1, 1, 2});
        REQUIRE(s.perfect);
        REQUIRE(s.permutation == std::vector<int>{2, 1});
    }
    SECTION("one stray contig counts once") {
        a.assignment = {1, 1, 2, 2, 2, 2};
        const binning_score s = score(a, {1, 1, 1, 2, 2, 2});
        REQUIRE(s.misbin_count == 1);
        REQUIRE(s.misbin_rate == Catch::Approx(1.0 / 6.0));
        REQUIRE_FALSE(s.perfect);
    }
    SECTION("invalid labels are rejected") {
        a.assignment = {1, 2};
        REQUIRE_THROWS_AS(score(a, {1}), std::invalid_argument);
        REQUIRE_THROWS_AS(score(a, {0, 1}), std::invalid_argument);
        REQUIRE_THROWS_AS(score(a, {1, 3}), std::invalid_argument);  // more species than bins
    }
}

TEST_CASE("matching-based scoring agrees with brute force", "[score]") {
    std::mt19937_64 rng = make_stream(107, 0);
    for (int rep = 0; rep < 5; ++rep) {
        const int M = 9;  // beyond the exhaustive cutover
        bin_assignment a;
        a.estimates.resize(static_cast<std::size_t>(M), binary_chain(0.5, 0.5).joint);
        std::vector<int> truth;
        for (int x = 0; x < 150; ++x) {
            a.assignment.push_back(1 + static_cast<int>(uniform01(rng) * M));
            truth.push_back(1 + static_cast<int>(uniform01(rng) * M));
        }
        const binning_score s = score(a, truth);

        std::vector<std::vector<int>> count(static_cast<std::size_t>(M),
                                            std::vector<int>(static_cast<std::size_t>(M), 0));
        for (std::size_t x = 0; x < truth.size(); ++x)
            ++count[static_cast<std::size_t>(a.assignment[x] - 1)]
                   [static_cast<std::size_t>(truth[x] - 1)];
        std::vector<int> perm(static_cast<std::size_t>(M));
        for (int i = 0; i < M; ++i) perm[static_cast<std::size_t>(i)] = i;
        long long best = -1;
        do {
            long long matched = 0;
            for (int b = 0; b < M; ++b)
                matched += count[static_cast<std::size_t>(b)][static_cast<std::size_t>(perm[static_cast<std::size_t>(b)])];
            best = std::max(best, matched);
        } while (std::next_permutation(perm.begin(), perm.end()));
        REQUIRE(s.misbin_count == static_cast<int>(150 - best));
    }
}

TEST_CASE("cliques found below half the separation are pure", "[purity]") {
    // Property: at any threshold below half the minimum distance between
    // species distributions, a clique can contain close-to-source contigs of
    // at most one species.
    const std::vector<markov_model> models = {binary_chain(0.15, 0.85),
                                              binary_chain(0.75, 0.25)};
    const double d_min = l1_distance(models[0].joint, models[1].joint);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        community_spec spec;
        spec.models = models;
        spec.contig_length = 400;
        spec.contig_count = 40;
        spec.seed = seed;
        const std::vector<contig> contigs = generate_contigs(spec);
        const std::vector<joint_distribution> types =
            empirical_types(contigs, 1, alphabet::binary());

        for (double eps : {0.1 * d_min, 0.25 * d_min, 0.49 * d_min}) {
            const epsilon_graph g = build_epsilon_graph(types, eps);
            const auto cliques = find_cliques(g, 2, 2);
            if (!cliques) continue;
            for (const std::vector<int>& clique : *cliques) {
                int species_touched = 0;
                for (std::size_t k = 0; k < models.size(); ++k) {
                    bool has_good = false;
                    for (int v : clique) {
                        const std::size_t vi = static_cast<std::size_t>(v);
                        if (*contigs[vi].label == static_cast<int>(k) + 1 &&
                            l1_distance(types[vi], models[k].joint) <= 0.5 * eps)
                            has_good = true;
                    }
                    species_touched += has_good;
                }
                REQUIRE(species_touched <= 1);
            }
        }
    }
}

TEST_CASE("cliques meet the good-contig coverage bound", "[purity]") {
    // Fix a threshold below half the species separation.  Whenever every
    // species has at least (1-alpha)N/M contigs within eps/2 of its source,
    // any family of M disjoint cliques of that size found at eps must be
    // mostly good: fraction >= 1 - alpha*M/(1-alpha).
    const std::vector<markov_model> models = {binary_chain(0.2, 0.8),
                                              binary_chain(0.7, 0.3)};
    const double d_min = l1_distance(models[0].joint, models[1].joint);
    const double eps = 0.35 * d_min;
    const double alpha = 0.2;
    const int per_species = 15, n = 30;
    const int need = required_clique_size(n, 2, alpha);
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        std::vector<joint_distribution> types;
        std::vector<int> truth;
        for (std::size_t k = 0; k < models.size(); ++k)
            for (int i = 0; i < per_species; ++i) {
                std::mt19937_64 rng =
                    make_stream(seed, k * static_cast<std::size_t>(per_species) +
                                          static_cast<std::size_t>(i));
                types.push_back(
                    empirical_type(sample_sequence(models[k], 1000, rng), 1, alphabet::binary()));
                truth.push_back(static_cast<int>(k) + 1);
            }

        std::vector<std::vector<int>> good_of(models.size());
        bool premise = true;
        for (std::size_t k = 0; k < models.size(); ++k) {
            for (std::size_t x = 0; x < types.size(); ++x)
                if (truth[x] == static_cast<int>(k) + 1 &&
                    l1_distance(types[x], models[k].joint) <= 0.5 * eps)
                    good_of[k].push_back(static_cast<int>(x));
            if (static_cast<int>(good_of[k].size()) < need) premise = false;
        }
        if (!premise) continue;
        ++checked;

        // each good set is itself a clique of the required size, so the
        // search cannot come back empty-handed
        const epsilon_graph g = build_epsilon_graph(types, eps);
        auto cliques = find_cliques(g, 2, need);
        if (!cliques) cliques = find_cliques_exact(g, 2, need);
        REQUIRE(cliques.has_value());

        for (const std::vector<int>& clique : *cliques) {
            std::size_t best_overlap = 0;
            for (std::size_t k = 0; k < models.size(); ++k) {
                std::size_t overlap = 0;
                for (int v : clique)
                    overlap += std::binary_search(good_of[k].begin(), good_of[k].end(), v);
                best_overlap = std::max(best_overlap, overlap);
            }
            const double frac =
                static_cast<double>(best_overlap) / static_cast<double>(clique.size());
            REQUIRE(frac >= 1.0 - alpha * 2.0 / (1.0 - alpha) - 1e-12);
        }
    }
    REQUIRE(checked >= 8);  // the premise held often enough to be meaningful
}
