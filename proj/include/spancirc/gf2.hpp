#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace spancirc {

using Bits = boost::dynamic_bitset<std::uint64_t>;

// Dense GF(2) matrix, rows stored as bitsets of length `cols`.
struct Gf2Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Bits> row_bits;

    Gf2Matrix() = default;
    Gf2Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), row_bits(r, Bits(c)) {}

    bool get(std::size_t r, std::size_t c) const { return row_bits[r].test(c); }
    void set(std::size_t r, std::size_t c, bool v) { row_bits[r].set(c, v); }

    Bits column(std::size_t c) const;

    bool operator==(const Gf2Matrix& o) const = default;
};

std::size_t gf2_rank(Gf2Matrix m);

// Basis of {x : m x = 0}, vectors of length m.cols.
std::vector<Bits> gf2_nullspace_basis(const Gf2Matrix& m);

// Reduce a list of vectors to a canonical row-reduced-echelon basis of their span.
std::vector<Bits> gf2_row_reduce(std::vector<Bits> vecs);

// Subset of a ground set, tagged with the ground set's identity so that sets
// from different matroids cannot be mixed up silently.
struct ElementSet {
    Bits bits;
    std::uint64_t ground_id = 0;

    std::size_t count() const { return bits.count(); }
    bool empty() const { return !bits.any(); }
    bool test(std::size_t i) const { return bits.test(i); }

    bool operator==(const ElementSet& o) const = default;
};

struct BinaryMatroid {
    Gf2Matrix matrix;
    std::vector<std::string> labels;   // one per column, pairwise distinct
    std::uint64_t ground_id = 0;       // derived from labels
    std::unordered_map<std::string, std::size_t> label_index;

    BinaryMatroid() = default;
    BinaryMatroid(Gf2Matrix m, std::vector<std::string> lab);

    std::size_t size() const { return labels.size(); }
    std::size_t index_of(const std::string& label) const;
    bool has_label(const std::string& label) const { return label_index.count(label) > 0; }

    ElementSet empty_set() const { return ElementSet{Bits(size()), ground_id}; }
    ElementSet full_set() const;
    ElementSet set_of(const std::vector<std::string>& labs) const;
    ElementSet singleton(const std::string& lab) const { return set_of({lab}); }
    std::vector<std::string> labels_of(const ElementSet& s) const;
};

std::size_t rank(const Gf2Matrix& m);

bool is_independent(const BinaryMatroid& m, const ElementSet& s);
bool is_cycle(const BinaryMatroid& m, const ElementSet& s);
bool is_circuit(const BinaryMatroid& m, const ElementSet& s);

// The unique circuit inside B + e, for a basis B and e outside B.
ElementSet fundamental_circuit(const BinaryMatroid& m, const ElementSet& basis, std::size_t e);

// All circuits, optionally only those of size <= size_cap.  Ground sets above
// 24 elements are refused; this is oracle-scale machinery.
std::vector<ElementSet> enumerate_circuits(const BinaryMatroid& m,
                                           std::optional<std::size_t> size_cap = std::nullopt);

// Some circuit contained in a dependent set, by greedy minimization.
ElementSet circuit_within(const BinaryMatroid& m, const ElementSet& dependent);

// Splits a cycle into the disjoint circuits it is made of.
std::vector<ElementSet> decompose_cycle(const BinaryMatroid& m, const ElementSet& cycle);

BinaryMatroid dual(const BinaryMatroid& m);

BinaryMatroid delete_elements(const BinaryMatroid& m, const ElementSet& s);
BinaryMatroid add_parallel(const BinaryMatroid& m, const std::string& of, const std::string& new_label);

// R10: the 5x10 matrix whose columns are the distinct weight-3 vectors of GF(2)^5,
// in lexicographic order, labeled r1..r10.
BinaryMatroid r10();

ElementSet set_xor(const ElementSet& a, const ElementSet& b);
ElementSet set_and(const ElementSet& a, const ElementSet& b);
ElementSet set_minus(const ElementSet& a, const ElementSet& b);
bool is_subset(const ElementSet& a, const ElementSet& b);

}  // namespace spancirc
