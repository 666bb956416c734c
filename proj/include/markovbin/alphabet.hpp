// Finite symbol alphabet with a fixed symbol <-> index bijection, plus
// helpers for packing length-k strings into dense lexicographic indices.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace markovbin {

class alphabet {
public:
    explicit alphabet(std::string symbols) : symbols_(std::move(symbols)) {
        if (symbols_.size() < 2)
            throw std::invalid_argument("alphabet needs at least 2 symbols");
        index_.assign(256, -1);
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            unsigned char c = static_cast<unsigned char>(symbols_[i]);
            if (index_[c] >= 0)
                throw std::invalid_argument("alphabet symbols must be distinct");
            index_[c] = static_cast<int>(i);
        }
    }

    static alphabet dna() { return alphabet("ACGT"); }
    static alphabet binary() { return alphabet("01"); }

    int size() const { return static_cast<int>(symbols_.size()); }

    char symbol(int idx) const { return symbols_.at(static_cast<std::size_t>(idx)); }

    // -1 for characters outside the alphabet
    int index_of(char c) const { return index_[static_cast<unsigned char>(c)]; }

    bool contains(char c) const { return index_of(c) >= 0; }

    const std::string& symbols() const { return symbols_; }

    // number of length-k strings, |X|^k
    std::size_t num_kmers(int k) const {
        std::size_t n = 1;
        for (int i = 0; i < k; ++i) n *= static_cast<std::size_t>(size());
        return n;
    }

    // lexicographic rank of a symbol-index string (first symbol most significant)
    std::size_t pack(const std::vector<int>& sym) const {
        std::size_t idx = 0;
        for (int s : sym) idx = idx * static_cast<std::size_t>(size()) + static_cast<std::size_t>(s);
        return idx;
    }

    std::string unpack(std::size_t idx, int k) const {
        std::string out(static_cast<std::size_t>(k), symbols_[0]);
        for (int i = k - 1; i >= 0; --i) {
            out[static_cast<std::size_t>(i)] = symbol(static_cast<int>(idx % static_cast<std::size_t>(size())));
            idx /= static_cast<std::size_t>(size());
        }
        return out;
    }

    friend bool operator==(const alphabet& a, const alphabet& b) {
        return a.symbols_ == b.symbols_;
    }

private:
    std::string symbols_;
    std::vector<int> index_;
};

}  // namespace markovbin
