// Minimal FASTA reading and writing.  Sequences are uppercased and filtered
// to the target alphabet on ingest; simulated contigs carry their species in
// the header as "species=<k>".

#pragma once

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "markovbin/alphabet.hpp"
#include "markovbin/contig.hpp"

namespace markovbin {

struct fasta_record {
    std::string header;    // text after '>' without the newline
    std::string sequence;  // concatenated sequence lines, as given
};

inline std::vector<fasta_record> read_fasta(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open FASTA file: " + path);
    std::vector<fasta_record> records;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '>') {
            records.push_back({line.substr(1), ""});
        } else {
            if (records.empty())
                throw std::runtime_error("FASTA file does not start with a header: " + path);
            records.back().sequence += line;
        }
    }
    if (records.empty()) throw std::runtime_error("FASTA file has no records: " + path);
    return records;
}

// species index parsed from a "species=<k>" token in the header, if any
inline std::optional<int> species_from_header(const std::string& header) {
    std::istringstream tokens(header);
    std::string tok;
    while (tokens >> tok) {
        if (tok.rfind("species=", 0) == 0) {
            try {
                return std::stoi(tok.substr(8));
            } catch (const std::exception&) {
                throw std::runtime_error("malformed species tag in header: " + header);
            }
        }
    }
    return std::nullopt;
}

// uppercases and drops characters outside the alphabet (ambiguity codes,
// gaps); returns the resulting contig with an optional species label
inline contig contig_from_record(const fasta_record& record, const alphabet& alph) {
    std::string cleaned;
    cleaned.reserve(record.sequence.size());
    for (char ch : record.sequence) {
        const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (alph.contains(up)) cleaned.push_back(up);
    }
    contig out = contig_from_string(cleaned, alph);
    out.label = species_from_header(record.header);
    return out;
}

inline std::vector<contig> read_contigs(const std::string& path, const alphabet& alph) {
    std::vector<contig> out;
    for (const fasta_record& rec : read_fasta(path)) out.push_back(contig_from_record(rec, alph));
    return out;
}

// whole-file genome: all records concatenated in order
inline contig read_genome(const std::string& path, const alphabet& alph) {
    fasta_record merged;
    for (const fasta_record& rec : read_fasta(path)) merged.sequence += rec.sequence;
    contig out = contig_from_record(merged, alph);
    if (out.symbols.empty()) throw std::runtime_error("FASTA file has no usable sequence: " + path);
    return out;
}

inline void write_contigs(const std::string& path, const std::vector<contig>& contigs,
                          const alphabet& alph, int line_width = 70) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write FASTA file: " + path);
    for (std::size_t i = 0; i < contigs.size(); ++i) {
        out << ">contig_" << i;
        if (contigs[i].label) out << " species=" << *contigs[i].label;
        out << '\n';
        const std::string seq = contig_to_string(contigs[i], alph);
        for (std::size_t pos = 0; pos < seq.size(); pos += static_cast<std::size_t>(line_width))
            out << seq.substr(pos, static_cast<std::size_t>(line_width)) << '\n';
    }
    if (!out) throw std::runtime_error("failed while writing FASTA file: " + path);
}

}  // namespace markovbin
