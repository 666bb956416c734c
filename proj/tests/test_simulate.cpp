// Simulation and persistence tests: sequence sampling, community generation,
// model fitting, genome extraction, FASTA round-trips, and JSON round-trips.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "markovbin/markovbin.hpp"
#include "oracles.hpp"

using namespace markovbin;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("sampling from a deterministic chain walks its orbit", "[sample]") {
    const alphabet dna = alphabet::dna();
    const markov_model orbit =
        fit_model_from_genome(contig_from_string("ACGTACGT", dna), 3, 0.0, dna);
    std::mt19937_64 rng = make_stream(51, 0);
    for (int rep = 0; rep < 10; ++rep) {
        const contig x = sample_sequence(orbit, 20, rng);
        for (std::size_t i = 0; i + 4 < x.length(); ++i)
            REQUIRE(x.symbols[i + 4] == x.symbols[i]);
    }
}

TEST_CASE("long samples have types close to the source", "[sample]") {
    SECTION("binary chain") {
        const markov_model q = binary_chain(0.3, 0.75);
        std::mt19937_64 rng = make_stream(53, 0);
        const contig x = sample_sequence(q, 100000, rng);
        REQUIRE(l1_distance(empirical_type(x, 1, alphabet::binary()), q.joint) < 0.02);
    }
    SECTION("genomic model") {
        std::mt19937_64 rng = make_stream(53, 1);
        const joint_distribution j = oracle::random_balanced_joint(alphabet::dna(), 3, rng);
        const markov_model q(j);
        const contig x = sample_sequence(q, 200000, rng);
        REQUIRE(l1_distance(empirical_type(x, 3, alphabet::dna()), q.joint) < 0.05);
    }
}

TEST_CASE("sampling is a pure function of the stream", "[sample]") {
    const markov_model q = binary_chain(0.4, 0.7);
    std::mt19937_64 a = make_stream(57, 3);
    std::mt19937_64 b = make_stream(57, 3);
    std::mt19937_64 c = make_stream(57, 4);
    const contig xa = sample_sequence(q, 500, a);
    const contig xb = sample_sequence(q, 500, b);
    const contig xc = sample_sequence(q, 500, c);
    REQUIRE(xa.symbols == xb.symbols);
    REQUIRE(xa.symbols != xc.symbols);
    REQUIRE_THROWS_AS(sample_sequence(q, 1, a), std::invalid_argument);
}

TEST_CASE("symbol frequencies are stationary along the sequence", "[sample]") {
    const markov_model q = binary_chain(0.15, 0.6);
    const double pi1 = 0.15 / (1.0 + 0.15 - 0.6);
    const std::size_t draws = 20000;
    std::vector<double> ones(12, 0.0);
    for (std::size_t i = 0; i < draws; ++i) {
        std::mt19937_64 rng = make_stream(59, i);
        const contig x = sample_sequence(q, 12, rng);
        for (std::size_t j = 0; j < 12; ++j) ones[j] += x.symbols[j];
    }
    for (std::size_t j : {std::size_t{0}, std::size_t{5}, std::size_t{11}})
        REQUIRE(ones[j] / static_cast<double>(draws) == Catch::Approx(pi1).margin(0.015));
}

TEST_CASE("community generation labels and reproduces deterministically", "[community]") {
    community_spec spec;
    spec.models = {binary_chain(0.2, 0.8), binary_chain(0.6, 0.3)};
    spec.contig_length = 64;
    spec.contig_count = 1000;
    spec.seed = 61;

    const std::vector<contig> contigs = generate_contigs(spec);
    REQUIRE(contigs.size() == 1000);
    std::size_t first = 0;
    for (const contig& c : contigs) {
        REQUIRE(c.length() == 64);
        REQUIRE(c.label.has_value());
        REQUIRE((*c.label == 1 || *c.label == 2));
        first += (*c.label == 1);
    }
    // uniform priors: species-1 count within 3 sigma of N/2
    REQUIRE(std::fabs(static_cast<double>(first) - 500.0) <= 3.0 * std::sqrt(250.0));

    const std::vector<contig> again = generate_contigs(spec);
    for (std::size_t i = 0; i < contigs.size(); ++i) {
        REQUIRE(again[i].symbols == contigs[i].symbols);
        REQUIRE(again[i].label == contigs[i].label);
    }

    // contig i depends only on (seed, i), so shrinking N keeps a prefix
    spec.contig_count = 10;
    const std::vector<contig> prefix = generate_contigs(spec);
    for (std::size_t i = 0; i < prefix.size(); ++i)
        REQUIRE(prefix[i].symbols == contigs[i].symbols);
}

TEST_CASE("degenerate priors pin every contig to one species", "[community]") {
    community_spec spec;
    spec.models = {binary_chain(0.2, 0.8), binary_chain(0.6, 0.3)};
    spec.priors = {1.0, 0.0};
    spec.contig_length = 32;
    spec.contig_count = 200;
    spec.seed = 67;
    for (const contig& c : generate_contigs(spec)) REQUIRE(*c.label == 1);

    spec.priors = {0.5, 0.4};
    REQUIRE_THROWS_AS(generate_contigs(spec), std::invalid_argument);
    spec.priors = {1.0};
    REQUIRE_THROWS_AS(generate_contigs(spec), std::invalid_argument);
    spec.priors.clear();
    spec.contig_count = 0;
    REQUIRE_THROWS_AS(generate_contigs(spec), std::invalid_argument);
}

TEST_CASE("length scaling rounds the normalized length", "[community]") {
    scaling_spec s;
    s.lbar = 5.0;
    s.n = 1024;
    REQUIRE(s.contig_length() == 50);
    s.lbar = 1.7;
    s.n = 300;
    REQUIRE(s.contig_length() == 14);
    s.n = 1;
    REQUIRE_THROWS_AS(s.contig_length(), std::invalid_argument);
}

TEST_CASE("fitting recovers types and regularizes with pseudocounts", "[fit]") {
    const alphabet dna = alphabet::dna();
    const contig genome = contig_from_string("ACGTACGT", dna);
    SECTION("zero pseudocount equals the cyclic type") {
        const markov_model m = fit_model_from_genome(genome, 3, 0.0, dna);
        const joint_distribution t = empirical_type(genome, 3, dna);
        for (std::size_t g = 0; g < t.size(); ++g)
            REQUIRE(m.joint.probs[g] == Catch::Approx(t.probs[g]).margin(1e-15));
    }
    SECTION("pseudocount gives a strictly positive member of the class") {
        const markov_model m = fit_model_from_genome(genome, 3, 0.5, dna);
        REQUIRE(m.joint.in_stationary_class());
        REQUIRE(m.strictly_positive());
    }
    SECTION("negative pseudocount is rejected") {
        REQUIRE_THROWS_AS(fit_model_from_genome(genome, 3, -1.0, dna), std::invalid_argument);
    }
    SECTION("fits converge to the generating model") {
        const markov_model truth = binary_chain(0.2, 0.65);
        std::mt19937_64 rng = make_stream(71, 0);
        const contig big = sample_sequence(truth, 300000, rng);
        const markov_model fit = fit_model_from_genome(big, 1, 0.0, alphabet::binary());
        REQUIRE(conditional_relative_entropy(fit.joint, truth.joint) < 1e-3);
        REQUIRE(l1_distance(fit.joint, truth.joint) < 0.01);
    }
}

TEST_CASE("genome extraction draws uniform windows", "[extract]") {
    const markov_model q = binary_chain(0.45, 0.55);
    std::mt19937_64 rng = make_stream(73, 0);
    contig genome = sample_sequence(q, 1000, rng);
    genome.label = 9;

    SECTION("full-length extraction is the identity") {
        const std::vector<contig> out = extract_contigs_from_genome(genome, 1000, 3, 5);
        for (const contig& c : out) {
            REQUIRE(c.symbols == genome.symbols);
            REQUIRE(c.label == 9);
        }
    }
    SECTION("species override wins over the genome label") {
        const std::vector<contig> out = extract_contigs_from_genome(genome, 100, 2, 5, 4);
        for (const contig& c : out) REQUIRE(c.label == 4);
    }
    SECTION("windows are substrings with roughly uniform starts") {
        const std::vector<contig> out = extract_contigs_from_genome(genome, 100, 2000, 7);
        std::size_t low = 0, high = 0;
        double mean_start = 0.0;
        for (const contig& c : out) {
            REQUIRE(c.length() == 100);
            // locate the window; every start is in [0, 901)
            bool matched = false;
            for (std::size_t s = 0; s + 100 <= 1000 && !matched; ++s) {
                if (std::equal(c.symbols.begin(), c.symbols.end(), genome.symbols.begin() + s)) {
                    matched = true;
                    mean_start += static_cast<double>(s);
                    low += (s < 90);
                    high += (s >= 810);
                }
            }
            REQUIRE(matched);
        }
        mean_start /= 2000.0;
        REQUIRE(mean_start == Catch::Approx(450.0).margin(30.0));
        REQUIRE(low > 120);   // each decile holds ~200 of 2000 draws
        REQUIRE(high > 120);
    }
    SECTION("reruns with one seed agree") {
        const std::vector<contig> a = extract_contigs_from_genome(genome, 50, 20, 11);
        const std::vector<contig> b = extract_contigs_from_genome(genome, 50, 20, 11);
        for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i].symbols == b[i].symbols);
    }
    SECTION("oversized or empty windows are rejected") {
        REQUIRE_THROWS_AS(extract_contigs_from_genome(genome, 1001, 1, 3), std::invalid_argument);
        REQUIRE_THROWS_AS(extract_contigs_from_genome(genome, 0, 1, 3), std::invalid_argument);
    }
}

TEST_CASE("FASTA files round-trip contigs and labels", "[fasta]") {
    const alphabet dna = alphabet::dna();
    std::mt19937_64 rng = make_stream(79, 0);
    const markov_model u(joint_distribution(3, dna, std::vector<double>(256, 1.0 / 256)));
    std::vector<contig> contigs;
    contigs.push_back(sample_sequence(u, 200, rng));
    contigs[0].label = 1;
    contigs.push_back(sample_sequence(u, 35, rng));
    contigs.push_back(sample_sequence(u, 71, rng));
    contigs[2].label = 4;

    const std::string path = temp_path("markovbin_fasta_roundtrip.fa");
    write_contigs(path, contigs, dna);
    const std::vector<contig> back = read_contigs(path, dna);
    REQUIRE(back.size() == contigs.size());
    for (std::size_t i = 0; i < contigs.size(); ++i) {
        REQUIRE(back[i].symbols == contigs[i].symbols);
        REQUIRE(back[i].label == contigs[i].label);
    }

    const std::vector<fasta_record> raw = read_fasta(path);
    REQUIRE(raw[0].header == "contig_0 species=1");
    REQUIRE(raw[1].header == "contig_1");
    REQUIRE(raw[2].header == "contig_2 species=4");
    std::remove(path.c_str());
}

TEST_CASE("FASTA ingest cleans sequences and parses headers", "[fasta]") {
    const std::string path = temp_path("markovbin_fasta_dirty.fa");
    {
        std::ofstream out(path);
        out << ">scaffold_1 species=12 cov=3.2\n";
        out << "acgtNNacgt\n";
        out << "ACG-T\n";
        out << ">plain header\nTTTT\n";
    }
    const alphabet dna = alphabet::dna();
    const std::vector<contig> contigs = read_contigs(path, dna);
    REQUIRE(contig_to_string(contigs[0], dna) == "ACGTACGTACGT");
    REQUIRE(contigs[0].label == 12);
    REQUIRE(contig_to_string(contigs[1], dna) == "TTTT");
    REQUIRE_FALSE(contigs[1].label.has_value());

    const contig genome = read_genome(path, dna);
    REQUIRE(contig_to_string(genome, dna) == "ACGTACGTACGTTTTT");
    std::remove(path.c_str());

    REQUIRE(species_from_header("contig_3 species=7") == 7);
    REQUIRE_FALSE(species_from_header("no tag here").has_value());
    REQUIRE_THROWS_AS(species_from_header("species=x"), std::runtime_error);
    REQUIRE_THROWS_AS(read_fasta(temp_path("markovbin_missing.fa")), std::runtime_error);
}

TEST_CASE("model JSON round-trips exactly", "[serialize]") {
    std::mt19937_64 rng = make_stream(83, 0);
    const joint_distribution p = oracle::random_balanced_joint(alphabet::dna(), 3, rng);

    const nlohmann::json j = to_json(p);
    REQUIRE(j.at("order") == 3);
    REQUIRE(j.at("alphabet") == "ACGT");
    REQUIRE(j.at("probs").size() == 256);

    const nlohmann::json reparsed = nlohmann::json::parse(j.dump());
    const joint_distribution q = joint_from_json(reparsed);
    REQUIRE(q.order == p.order);
    for (std::size_t g = 0; g < p.size(); ++g) REQUIRE(q.probs[g] == p.probs[g]);

    const std::string path = temp_path("markovbin_model.json");
    save_model(path, markov_model(p));
    const markov_model loaded = load_model(path);
    for (std::size_t g = 0; g < p.size(); ++g) REQUIRE(loaded.joint.probs[g] == p.probs[g]);
    std::remove(path.c_str());
}

TEST_CASE("doubles format to shortest exact decimals", "[serialize]") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789, 0.0, -2.5}) {
        const std::string s = format_double(v);
        REQUIRE(std::stod(s) == v);
    }
    REQUIRE(format_double(0.1) == "0.1");
    REQUIRE(format_double(-2.5) == "-2.5");
}

TEST_CASE("assignment CSV uses the documented schema", "[serialize]") {
    bin_assignment a;
    a.assignment = {1, 2};
    a.best_value = {0.25, 0.5};
    a.runner_up_value = {1.5, 0.75};
    const std::string path = temp_path("markovbin_assign.csv");
    write_assignment_csv(path, a);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    REQUIRE(line == "contig_id,bin,best_divergence,runner_up_divergence");
    std::getline(in, line);
    REQUIRE(line == "0,1,0.25,1.5");
    std::getline(in, line);
    REQUIRE(line == "1,2,0.5,0.75");
    std::remove(path.c_str());
}

TEST_CASE("seed derivation separates labels and reproduces", "[random]") {
    REQUIRE(derive_seed(123, 0) == derive_seed(123, 0));
    REQUIRE(derive_seed(123, 0) != derive_seed(123, 1));
    REQUIRE(derive_seed(123, 0) != derive_seed(124, 0));

    std::mt19937_64 a = make_stream(9, 2);
    std::mt19937_64 b = make_stream(9, 2);
    for (int i = 0; i < 100; ++i) REQUIRE(a() == b());

    std::mt19937_64 c = make_stream(9, 3);
    double mean = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double u = uniform01(c);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        mean += u;
    }
    REQUIRE(mean / 10000.0 == Catch::Approx(0.5).margin(0.02));
}
