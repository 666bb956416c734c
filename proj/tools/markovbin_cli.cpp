// Command-line front end: model fitting from FASTA, pairwise resolvability
// reports, contig simulation, clique binning, and the Monte Carlo experiment
// sweeps.  Every run writes its artifacts plus a manifest.json with the full
// resolved configuration into --out; rerunning with the same configuration
// reproduces every .json/.csv/.fasta byte for byte (wall time goes to
// run.log, the one file allowed to differ).
//
// Exit codes: 0 success, 2 input or validation error, 3 clique search
// failure, 4 solver non-convergence.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "markovbin/markovbin.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace markovbin;

namespace {

constexpr const char* k_version = "0.1.0";

constexpr int exit_ok = 0;
constexpr int exit_input_error = 2;
constexpr int exit_algorithmic_failure = 3;
constexpr int exit_not_converged = 4;

std::vector<double> split_doubles(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse " + what + " entry '" + item + "'");
        }
    }
    if (out.empty()) throw std::invalid_argument(what + " list is empty");
    return out;
}

std::vector<int> split_ints(const std::string& text, const std::string& what) {
    std::vector<int> out;
    for (double v : split_doubles(text, what)) {
        if (v != std::floor(v)) throw std::invalid_argument(what + " entries must be integers");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

// one binary order-1 pair, given as p(1|0),p(1|1) for each model
struct chain_pair {
    double a1 = 0.0, a2 = 0.0, b1 = 0.0, b2 = 0.0;

    markov_model first() const { return binary_chain(a1, a2); }
    markov_model second() const { return binary_chain(b1, b2); }
    std::string tag() const {
        return format_double(a1) + "," + format_double(a2) + "|" + format_double(b1) + "," +
               format_double(b2);
    }
};

chain_pair parse_pair(const std::string& text) {
    const std::vector<double> v = split_doubles(text, "--pair");
    if (v.size() != 4)
        throw std::invalid_argument("--pair needs four comma-separated values: a1,a2,b1,b2");
    return {v[0], v[1], v[2], v[3]};
}

double pearson_correlation(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n)
        throw std::invalid_argument("pearson correlation needs two equal-length series, n >= 2");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) throw std::invalid_argument("pearson correlation is degenerate");
    return sxy / std::sqrt(sxx * syy);
}

// run-scoped output helper: manifest first, artifacts as produced, timing last
struct run_dir {
    fs::path out;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit run_dir(const std::string& out_dir) : out(out_dir) { fs::create_directories(out); }

    void manifest(const std::string& command, json config) const {
        json j{{"command", command},
               {"config", std::move(config)},
               {"versions", {{"markovbin", k_version}, {"manifest_format", 1}}}};
        write_text((out / "manifest.json").string(), j.dump(2) + "\n");
    }
    void finish(const std::string& status) const {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream log;
        log << "status=" << status << "\n"
            << "wall_seconds=" << secs << "\n";
        write_text((out / "run.log").string(), log.str());
    }
};

int run_fit(const std::vector<std::string>& inputs, int order, double pseudocount,
            const std::string& alphabet_symbols, const std::string& out_dir) {
    run_dir run(out_dir);
    run.manifest("fit", json{{"inputs", inputs},
                             {"order", order},
                             {"pseudocount", pseudocount},
                             {"alphabet", alphabet_symbols},
                             {"out", out_dir}});
    const alphabet alph(alphabet_symbols);
    std::vector<std::string> used_names;
    for (const std::string& path : inputs) {
        const contig genome = read_genome(path, alph);
        const markov_model model = fit_model_from_genome(genome, order, pseudocount, alph);
        std::string name = fs::path(path).stem().string() + ".model.json";
        for (int k = 2; std::find(used_names.begin(), used_names.end(), name) != used_names.end();
             ++k)
            name = fs::path(path).stem().string() + "_" + std::to_string(k) + ".model.json";
        used_names.push_back(name);
        save_model((run.out / name).string(), model);
    }
    run.finish("ok");
    return exit_ok;
}

int run_chernoff(const std::vector<std::string>& inputs, double tol, const std::string& out_dir) {
    run_dir run(out_dir);
    run.manifest("chernoff", json{{"inputs", inputs}, {"tol", tol}, {"out", out_dir}});
    if (inputs.size() < 2) throw std::invalid_argument("chernoff needs at least two model files");
    std::vector<joint_distribution> sources;
    for (const std::string& path : inputs) sources.push_back(load_model(path).joint);

    augmented_lagrangian_options opts;
    opts.constraint_tolerance = tol;
    opts.grad_tolerance = tol;
    const resolvability_report report = min_pairwise_chernoff(sources, opts);

    json j = to_json(report);
    j["models"] = inputs;
    write_text((run.out / "resolvability.json").string(), j.dump(2) + "\n");
    run.finish(report.all_converged ? "ok" : "solver_not_converged");
    return report.all_converged ? exit_ok : exit_not_converged;
}

int run_simulate(const std::vector<std::string>& model_paths, const std::string& genome_path,
                 long long n_contigs, long long length, double lbar,
                 const std::string& priors_text, int species, std::uint64_t seed,
                 const std::string& alphabet_symbols, const std::string& out_dir) {
    run_dir run(out_dir);
    run.manifest("simulate", json{{"models", model_paths},
                                  {"genome", genome_path},
                                  {"n_contigs", n_contigs},
                                  {"length", length},
                                  {"lbar", lbar},
                                  {"priors", priors_text},
                                  {"species", species},
                                  {"seed", seed},
                                  {"alphabet", alphabet_symbols},
                                  {"out", out_dir}});
    if (model_paths.empty() == genome_path.empty())
        throw std::invalid_argument("simulate needs exactly one of --models or --genome");
    if (n_contigs < 1) throw std::invalid_argument("--n-contigs must be >= 1");
    if ((length > 0) == (lbar > 0.0))
        throw std::invalid_argument("simulate needs exactly one of --length or --lbar");
    const std::size_t L =
        length > 0
            ? static_cast<std::size_t>(length)
            : scaling_spec{lbar, static_cast<std::size_t>(n_contigs)}.contig_length();

    std::vector<contig> contigs;
    alphabet alph(alphabet_symbols);
    if (!model_paths.empty()) {
        community_spec spec;
        for (const std::string& path : model_paths) spec.models.push_back(load_model(path));
        for (std::size_t i = 1; i < spec.models.size(); ++i)
            if (spec.models[i].order() != spec.models[0].order() ||
                !(spec.models[i].alph() == spec.models[0].alph()))
                throw std::invalid_argument("simulate: models must share order and alphabet");
        alph = spec.models[0].alph();
        if (!priors_text.empty()) spec.priors = split_doubles(priors_text, "--priors");
        spec.contig_length = L;
        spec.contig_count = static_cast<std::size_t>(n_contigs);
        spec.seed = seed;
        contigs = generate_contigs(spec);
    } else {
        const contig genome = read_genome(genome_path, alph);
        contigs = extract_contigs_from_genome(
            genome, L, static_cast<std::size_t>(n_contigs), seed,
            species > 0 ? std::optional<int>(species) : std::nullopt);
    }
    write_contigs((run.out / "contigs.fasta").string(), contigs, alph);
    run.finish("ok");
    return exit_ok;
}

int run_bin(const std::string& contig_path, int bins, double alpha, int order,
            const std::vector<std::string>& model_paths, const std::string& metric_name,
            const std::string& alphabet_symbols, const std::string& out_dir) {
    run_dir run(out_dir);
    run.manifest("bin", json{{"contigs", contig_path},
                             {"bins", bins},
                             {"alpha", alpha},
                             {"order", order},
                             {"models", model_paths},
                             {"metric", metric_name},
                             {"alphabet", alphabet_symbols},
                             {"out", out_dir}});
    const alphabet alph(alphabet_symbols);
    const std::vector<contig> contigs = read_contigs(contig_path, alph);

    bin_metric metric = bin_metric::conditional_divergence;
    if (metric_name == "euclidean")
        metric = bin_metric::euclidean;
    else if (metric_name == "l1")
        metric = bin_metric::l1;
    else if (metric_name != "dc")
        throw std::invalid_argument("--metric must be one of dc, euclidean, l1");

    bin_assignment result;
    if (!model_paths.empty()) {
        std::vector<joint_distribution> estimates;
        for (const std::string& path : model_paths) {
            const markov_model model = load_model(path);
            if (model.order() != order || !(model.alph() == alph))
                throw std::invalid_argument("bin: model order/alphabet mismatch: " + path);
            estimates.push_back(model.joint);
        }
        result = assign_bins(empirical_types(contigs, order, alph), std::move(estimates), metric);
    } else {
        if (metric != bin_metric::conditional_divergence)
            throw std::invalid_argument("bin: --metric applies to assign-only mode (--models)");
        result = algorithm1(contigs, bins, order, alph, alpha);
    }

    write_assignment_csv((run.out / "assignment.csv").string(), result);
    for (std::size_t k = 0; k < result.estimates.size(); ++k)
        write_text((run.out / ("estimate_" + std::to_string(k + 1) + ".model.json")).string(),
                   to_json(result.estimates[k]).dump(2) + "\n");
    json report{{"mode", model_paths.empty() ? "cluster" : "assign"},
                {"metric", metric_name},
                {"epsilon", result.epsilon},
                {"clique_search_failed", result.clique_search_failed},
                {"cliques", result.cliques},
                {"l1_fallback", result.l1_fallback}};

    std::vector<int> truth;
    bool all_labeled = !contigs.empty();
    for (const contig& c : contigs) {
        if (!c.label) {
            all_labeled = false;
            break;
        }
        truth.push_back(*c.label);
    }
    if (all_labeled) {
        const binning_score s = score(result, truth);
        write_text((run.out / "score.json").string(), to_json(s).dump(2) + "\n");
        report["scored"] = true;
    } else {
        report["scored"] = false;
    }
    write_text((run.out / "binning.json").string(), report.dump(2) + "\n");
    run.finish(result.clique_search_failed ? "clique_search_failed" : "ok");
    return result.clique_search_failed ? exit_algorithmic_failure : exit_ok;
}

int run_experiment_exponent(const std::vector<chain_pair>& pairs, const std::vector<int>& lengths,
                            long long trials, std::uint64_t seed, const run_dir& run) {
    const chain_pair pair = pairs[0];
    const error_exponent_estimate est =
        error_exponent(pair.first(), pair.second(), lengths, trials, seed);

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < est.lengths.size(); ++i) {
        const double value = static_cast<double>(est.error_counts[i]) /
                             static_cast<double>(est.trials_per_length);
        rows.push_back({std::to_string(est.lengths[i]), format_double(value),
                        format_double(est.confidence_halfwidths[i]),
                        std::to_string(est.error_counts[i]),
                        est.used_in_fit[i] ? "1" : "0"});
    }
    write_csv((run.out / "exponent.csv").string(),
              {"length", "error", "halfwidth", "events", "used_in_fit"}, rows);
    json summary{{"pair", pair.tag()},
                 {"slope", est.slope_estimate},
                 {"intercept", est.intercept},
                 {"exponent", est.exponent()},
                 {"chernoff_reference", est.chernoff_reference},
                 {"fit_valid", est.fit_valid},
                 {"trials_per_length", est.trials_per_length}};
    write_text((run.out / "summary.json").string(), summary.dump(2) + "\n");
    run.finish("ok");
    return exit_ok;
}

int run_experiment_l5pct(const std::vector<chain_pair>& pairs, double target, long long trials,
                         std::uint64_t seed, const run_dir& run) {
    std::vector<std::vector<std::string>> rows;
    std::vector<double> inv_c, lbar5;
    bool all_found = true;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const markov_model p1 = pairs[i].first();
        const markov_model p2 = pairs[i].second();
        const chernoff_result c = chernoff_information(p1.joint, p2.joint);
        const min_length_result res =
            min_length_for_error(p1, p2, target, trials, derive_seed(seed, i));
        rows.push_back({format_double(pairs[i].a1), format_double(pairs[i].a2),
                        format_double(pairs[i].b1), format_double(pairs[i].b2),
                        format_double(c.value), format_double(1.0 / c.value),
                        std::to_string(res.l_target), format_double(res.lbar_target),
                        res.found ? "1" : "0"});
        if (res.found) {
            inv_c.push_back(1.0 / c.value);
            lbar5.push_back(res.lbar_target);
        } else {
            all_found = false;
        }
    }
    write_csv((run.out / "l5pct.csv").string(),
              {"a1", "a2", "b1", "b2", "chernoff", "inv_chernoff", "l_target", "lbar_target",
               "found"},
              rows);
    json summary{{"n_pairs", pairs.size()},
                 {"target", target},
                 {"all_found", all_found},
                 {"pearson_lbar_vs_inv_chernoff",
                  inv_c.size() >= 2 ? json(pearson_correlation(inv_c, lbar5)) : json()}};
    write_text((run.out / "summary.json").string(), summary.dump(2) + "\n");
    run.finish("ok");
    return exit_ok;
}

int run_experiment_metric_compare(const std::vector<chain_pair>& pairs,
                                  const std::vector<double>& lbar_multiples, long long trials,
                                  std::uint64_t seed, const run_dir& run) {
    std::vector<std::vector<std::string>> rows;
    std::size_t row_id = 0;
    for (const chain_pair& pair : pairs) {
        const markov_model p1 = pair.first();
        const markov_model p2 = pair.second();
        const chernoff_result c = chernoff_information(p1.joint, p2.joint);
        for (double mult : lbar_multiples) {
            const double lbar = mult / c.value;
            const int length = std::max(
                p1.order() + 1, static_cast<int>(std::llround(lbar * std::log2(1e6))));
            const metric_comparison_result res =
                metric_comparison(p1, p2, length, trials, derive_seed(seed, row_id++));
            rows.push_back({format_double(pair.a1), format_double(pair.a2),
                            format_double(pair.b1), format_double(pair.b2),
                            format_double(mult), format_double(lbar), std::to_string(length),
                            format_double(res.conditional_divergence.value),
                            format_double(res.conditional_divergence.wilson_halfwidth),
                            format_double(res.euclidean.value),
                            format_double(res.euclidean.wilson_halfwidth)});
        }
    }
    write_csv((run.out / "metric_compare.csv").string(),
              {"a1", "a2", "b1", "b2", "lbar_multiple", "lbar", "length", "error_dc",
               "halfwidth_dc", "error_euclid", "halfwidth_euclid"},
              rows);
    json summary{{"n_pairs", pairs.size()}, {"n_rows", rows.size()}, {"trials", trials}};
    write_text((run.out / "summary.json").string(), summary.dump(2) + "\n");
    run.finish("ok");
    return exit_ok;
}

int run_experiment_sanov(const std::vector<chain_pair>& pairs, const std::vector<double>& eps_grid,
                         const std::vector<int>& lengths, long long trials, std::uint64_t seed,
                         const run_dir& run) {
    const markov_model q = pairs[0].first();
    std::vector<std::vector<std::string>> rows;
    bool all_available = true, all_dominated = true;
    std::size_t row_id = 0;
    for (double eps : eps_grid)
        for (int length : lengths) {
            const sanov_check_result res =
                sanov_bound_check(q, q, eps, length, trials, derive_seed(seed, row_id++));
            rows.push_back({format_double(eps), std::to_string(length),
                            format_double(res.empirical_prob),
                            format_double(res.wilson_halfwidth), format_double(res.bound),
                            format_double(res.rate), res.bound_available ? "1" : "0"});
            all_available = all_available && res.bound_available;
            if (res.bound_available && res.empirical_prob > res.bound) all_dominated = false;
        }
    write_csv((run.out / "sanov.csv").string(),
              {"eps", "length", "empirical", "halfwidth", "bound", "rate", "bound_available"},
              rows);
    json summary{{"q", pairs[0].tag()},
                 {"all_bounds_available", all_available},
                 {"all_dominated", all_dominated},
                 {"trials", trials}};
    write_text((run.out / "summary.json").string(), summary.dump(2) + "\n");
    run.finish(all_available ? "ok" : "solver_not_converged");
    return all_available ? exit_ok : exit_not_converged;
}

int run_experiment(const std::string& kind, const std::vector<std::string>& pair_texts,
                   const std::string& lengths_text, const std::string& lbar_grid_text,
                   const std::string& eps_grid_text, double target, long long trials,
                   std::uint64_t seed, const std::string& out_dir) {
    if (trials < 1) throw std::invalid_argument("--trials must be >= 1");
    run_dir run(out_dir);
    run.manifest("experiment", json{{"kind", kind},
                                    {"pairs", pair_texts},
                                    {"lengths", lengths_text},
                                    {"lbar_grid", lbar_grid_text},
                                    {"eps_grid", eps_grid_text},
                                    {"target", target},
                                    {"trials", trials},
                                    {"seed", seed},
                                    {"out", out_dir}});

    std::vector<chain_pair> pairs;
    for (const std::string& text : pair_texts) pairs.push_back(parse_pair(text));
    if (pairs.empty()) {
        if (kind == "l5pct") {
            // default spread of well-separated binary pairs across a wide
            // range of Chernoff values
            pairs = {{0.20, 0.70, 0.60, 0.35}, {0.25, 0.70, 0.55, 0.40}, {0.15, 0.80, 0.65, 0.30},
                     {0.30, 0.65, 0.50, 0.45}, {0.10, 0.85, 0.70, 0.25}, {0.35, 0.60, 0.48, 0.47},
                     {0.22, 0.75, 0.58, 0.38}, {0.28, 0.68, 0.52, 0.42}, {0.12, 0.82, 0.68, 0.28},
                     {0.32, 0.62, 0.49, 0.46}};
        } else {
            pairs = {{0.20, 0.70, 0.60, 0.35}};
        }
    }

    if (kind == "exponent")
        return run_experiment_exponent(pairs, split_ints(lengths_text, "--lengths"), trials, seed,
                                       run);
    if (kind == "l5pct") return run_experiment_l5pct(pairs, target, trials, seed, run);
    if (kind == "metric-compare")
        return run_experiment_metric_compare(pairs, split_doubles(lbar_grid_text, "--lbar-grid"),
                                             trials, seed, run);
    if (kind == "sanov")
        return run_experiment_sanov(pairs, split_doubles(eps_grid_text, "--eps-grid"),
                                    split_ints(lengths_text, "--lengths"), trials, seed, run);
    throw std::invalid_argument(
        "experiment kind must be one of exponent, l5pct, metric-compare, sanov");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Markov-model contig toolkit: fitting, resolvability, simulation, binning, "
                 "and Monte Carlo experiments"};
    app.require_subcommand(1);

    // fit
    std::vector<std::string> fit_inputs;
    int fit_order = 3;
    double fit_pseudocount = 0.5;
    std::string fit_alphabet = "ACGT", fit_out;
    CLI::App* fit = app.add_subcommand("fit", "Fit one Markov model per FASTA file");
    fit->add_option("inputs", fit_inputs, "Input FASTA files")->required()->expected(-1);
    fit->add_option("--order", fit_order, "Model order m")->capture_default_str();
    fit->add_option("--pseudocount", fit_pseudocount, "Added to every gram count")
        ->capture_default_str();
    fit->add_option("--alphabet", fit_alphabet, "Alphabet symbols")->capture_default_str();
    fit->add_option("--out", fit_out, "Output directory")->required();

    // chernoff
    std::vector<std::string> chern_inputs;
    double chern_tol = 1e-8;
    std::string chern_out;
    CLI::App* chern =
        app.add_subcommand("chernoff", "Pairwise Chernoff information and resolvability report");
    chern->add_option("inputs", chern_inputs, "Model JSON files (>= 2)")->required()->expected(-1);
    chern->add_option("--tol", chern_tol, "Solver tolerance")->capture_default_str();
    chern->add_option("--out", chern_out, "Output directory")->required();

    // simulate
    std::vector<std::string> sim_models;
    std::string sim_genome, sim_priors, sim_alphabet = "ACGT", sim_out;
    long long sim_n = 0, sim_length = 0;
    double sim_lbar = 0.0;
    int sim_species = 0;
    std::uint64_t sim_seed = 0;
    CLI::App* sim = app.add_subcommand("simulate", "Generate labeled contigs");
    sim->add_option("--models", sim_models, "Model JSON files (community mode)")
        ->delimiter(',');
    sim->add_option("--genome", sim_genome, "Genome FASTA (extraction mode)");
    sim->add_option("--n-contigs", sim_n, "Number of contigs N")->required();
    sim->add_option("--length", sim_length, "Contig length L");
    sim->add_option("--lbar", sim_lbar, "Normalized length; L = round(lbar * log2 N)");
    sim->add_option("--priors", sim_priors, "Comma-separated species priors");
    sim->add_option("--species", sim_species, "Species label override (extraction mode)");
    sim->add_option("--seed", sim_seed, "Random seed")->capture_default_str();
    sim->add_option("--alphabet", sim_alphabet, "Alphabet symbols (extraction mode)")
        ->capture_default_str();
    sim->add_option("--out", sim_out, "Output directory")->required();

    // bin
    std::string bin_contigs, bin_metric_name = "dc", bin_alphabet = "ACGT", bin_out;
    std::vector<std::string> bin_models;
    int bin_bins = 1, bin_order = 3;
    double bin_alpha = 0.0;
    CLI::App* binc = app.add_subcommand("bin", "Cluster contigs into bins (or assign to models)");
    binc->add_option("contigs", bin_contigs, "Contig FASTA file")->required();
    binc->add_option("--bins", bin_bins, "Number of bins M")->capture_default_str();
    binc->add_option("--alpha", bin_alpha, "Clique-size slack; <= 0 selects 1/log2(L)")
        ->capture_default_str();
    binc->add_option("--order", bin_order, "Model order m")->capture_default_str();
    binc->add_option("--models", bin_models, "Known models: assign-only mode")->delimiter(',');
    binc->add_option("--metric", bin_metric_name, "Assign-only metric: dc, euclidean, l1")
        ->capture_default_str();
    binc->add_option("--alphabet", bin_alphabet, "Alphabet symbols")->capture_default_str();
    binc->add_option("--out", bin_out, "Output directory")->required();

    // experiment
    std::string exp_kind, exp_lengths = "25,50,100,200", exp_lbar_grid = "0.5,1,2";
    std::string exp_eps_grid = "0.2,0.4,0.8", exp_out;
    std::vector<std::string> exp_pairs;
    double exp_target = 0.05;
    long long exp_trials = 10000;
    std::uint64_t exp_seed = 0;
    CLI::App* exp = app.add_subcommand("experiment", "Monte Carlo sweeps over model pairs");
    exp->add_option("kind", exp_kind, "One of: exponent, l5pct, metric-compare, sanov")
        ->required();
    exp->add_option("--pair", exp_pairs, "Binary pair a1,a2,b1,b2; repeatable");
    exp->add_option("--lengths", exp_lengths, "Comma-separated lengths")->capture_default_str();
    exp->add_option("--lbar-grid", exp_lbar_grid,
                    "Normalized lengths as multiples of 1/C (metric-compare)")
        ->capture_default_str();
    exp->add_option("--eps-grid", exp_eps_grid, "Distance thresholds (sanov)")
        ->capture_default_str();
    exp->add_option("--target", exp_target, "Error target (l5pct)")->capture_default_str();
    exp->add_option("--trials", exp_trials, "Monte Carlo trials")->capture_default_str();
    exp->add_option("--seed", exp_seed, "Random seed")->capture_default_str();
    exp->add_option("--out", exp_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input_error;
    }

    try {
        if (fit->parsed())
            return run_fit(fit_inputs, fit_order, fit_pseudocount, fit_alphabet, fit_out);
        if (chern->parsed()) return run_chernoff(chern_inputs, chern_tol, chern_out);
        if (sim->parsed())
            return run_simulate(sim_models, sim_genome, sim_n, sim_length, sim_lbar, sim_priors,
                                sim_species, sim_seed, sim_alphabet, sim_out);
        if (binc->parsed())
            return run_bin(bin_contigs, bin_bins, bin_alpha, bin_order, bin_models,
                           bin_metric_name, bin_alphabet, bin_out);
        if (exp->parsed())
            return run_experiment(exp_kind, exp_pairs, exp_lengths, exp_lbar_grid, exp_eps_grid,
                                  exp_target, exp_trials, exp_seed, exp_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    std::cerr << "error: no subcommand executed\n";
    return exit_input_error;
}
