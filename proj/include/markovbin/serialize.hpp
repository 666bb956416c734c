// JSON and CSV persistence for models, reports, and assignments.  Doubles go
// through shortest-round-trip formatting, so identical values serialize to
// identical bytes.

#pragma once

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "markovbin/binning.hpp"
#include "markovbin/chernoff.hpp"
#include "markovbin/joint_distribution.hpp"
#include "markovbin/markov_model.hpp"

namespace markovbin {

// shortest decimal string that parses back to the same double
inline std::string format_double(double v) {
    char buf[64];
    const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline nlohmann::json to_json(const joint_distribution& p) {
    return nlohmann::json{{"order", p.order}, {"alphabet", p.alph.symbols()}, {"probs", p.probs}};
}

inline joint_distribution joint_from_json(const nlohmann::json& j) {
    return joint_distribution(j.at("order").get<int>(),
                              alphabet(j.at("alphabet").get<std::string>()),
                              j.at("probs").get<std::vector<double>>());
}

inline void save_model(const std::string& path, const markov_model& model) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << to_json(model.joint).dump(2) << '\n';
}

inline markov_model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    nlohmann::json j;
    in >> j;
    return markov_model(joint_from_json(j));
}

inline nlohmann::json to_json(const resolvability_report& report) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const pairwise_chernoff_entry& e : report.pairs)
        pairs.push_back({{"first", e.first},
                         {"second", e.second},
                         {"value", e.value},
                         {"converged", e.converged}});
    return nlohmann::json{{"c_min", report.c_min},
                          {"argmin", {report.argmin.first, report.argmin.second}},
                          {"lbar_threshold", report.lbar_threshold},
                          {"pairs", pairs},
                          {"all_converged", report.all_converged}};
}

inline nlohmann::json to_json(const binning_score& s) {
    return nlohmann::json{{"misbin_count", s.misbin_count},
                          {"misbin_rate", s.misbin_rate},
                          {"perfect", s.perfect},
                          {"permutation", s.permutation}};
}

inline void write_assignment_csv(const std::string& path, const bin_assignment& a) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write assignment file: " + path);
    out << "contig_id,bin,best_divergence,runner_up_divergence\n";
    for (std::size_t x = 0; x < a.assignment.size(); ++x)
        out << x << ',' << a.assignment[x] << ',' << format_double(a.best_value[x]) << ','
            << format_double(a.runner_up_value[x]) << '\n';
    if (!out) throw std::runtime_error("failed while writing assignment file: " + path);
}

// generic CSV emitter; every cell is already a string
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV file: " + path);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? ',' : '\n');
    for (const std::vector<std::string>& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? ',' : '\n');
    if (!out) throw std::runtime_error("failed while writing CSV file: " + path);
}

inline void write_text(const std::string& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << contents;
    if (!out) throw std::runtime_error("failed while writing file: " + path);
}

}  // namespace markovbin
