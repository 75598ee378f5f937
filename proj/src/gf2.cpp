#include "spancirc/gf2.hpp"

#include <algorithm>
#include <stdexcept>

namespace spancirc {

Bits Gf2Matrix::column(std::size_t c) const {
    Bits out(rows);
    for (std::size_t r = 0; r < rows; ++r) out.set(r, row_bits[r].test(c));
    return out;
}

std::size_t gf2_rank(Gf2Matrix m) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t pivot = r;
        while (pivot < m.rows && !m.row_bits[pivot].test(c)) ++pivot;
        if (pivot == m.rows) continue;
        std::swap(m.row_bits[r], m.row_bits[pivot]);
        for (std::size_t i = 0; i < m.rows; ++i)
            if (i != r && m.row_bits[i].test(c)) m.row_bits[i] ^= m.row_bits[r];
        ++r;
    }
    return r;
}

std::vector<Bits> gf2_nullspace_basis(const Gf2Matrix& m) {
    Gf2Matrix a = m;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols && r < a.rows; ++c) {
        std::size_t pivot = r;
        while (pivot < a.rows && !a.row_bits[pivot].test(c)) ++pivot;
        if (pivot == a.rows) continue;
        std::swap(a.row_bits[r], a.row_bits[pivot]);
        for (std::size_t i = 0; i < a.rows; ++i)
            if (i != r && a.row_bits[i].test(c)) a.row_bits[i] ^= a.row_bits[r];
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(a.cols, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;

    std::vector<Bits> basis;
    for (std::size_t c = 0; c < a.cols; ++c) {
        if (is_pivot[c]) continue;
        Bits v(a.cols);
        v.set(c);
        for (std::size_t i = 0; i < pivot_col.size(); ++i)
            if (a.row_bits[i].test(c)) v.set(pivot_col[i]);
        basis.push_back(v);
    }
    return basis;
}

std::vector<Bits> gf2_row_reduce(std::vector<Bits> vecs) {
    std::erase_if(vecs, [](const Bits& b) { return !b.any(); });
    if (vecs.empty()) return vecs;
    const std::size_t n = vecs[0].size();
    std::vector<Bits> out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = r;
        while (pivot < vecs.size() && !vecs[pivot].test(c)) ++pivot;
        if (pivot == vecs.size()) continue;
        std::swap(vecs[r], vecs[pivot]);
        for (std::size_t i = 0; i < vecs.size(); ++i)
            if (i != r && vecs[i].test(c)) vecs[i] ^= vecs[r];
        ++r;
        if (r == vecs.size()) break;
    }
    vecs.resize(r);
    return vecs;
}

namespace {

std::uint64_t hash_labels(const std::vector<std::string>& labels) {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& s : labels) {
        for (char ch : s) {
            h ^= static_cast<unsigned char>(ch);
            h *= 1099511628211ull;
        }
        h ^= 0xff;
        h *= 1099511628211ull;
    }
    return h;
}

void check_ground(const BinaryMatroid& m, const ElementSet& s) {
    if (s.ground_id != m.ground_id || s.bits.size() != m.size())
        throw std::invalid_argument("element set does not belong to this ground set");
}

}  // namespace

BinaryMatroid::BinaryMatroid(Gf2Matrix m, std::vector<std::string> lab)
    : matrix(std::move(m)), labels(std::move(lab)) {
    if (matrix.cols != labels.size())
        throw std::invalid_argument("column count must equal ground-set size");
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!label_index.emplace(labels[i], i).second)
            throw std::invalid_argument("duplicate ground-set label: " + labels[i]);
    }
    ground_id = hash_labels(labels);
}

std::size_t BinaryMatroid::index_of(const std::string& label) const {
    auto it = label_index.find(label);
    if (it == label_index.end()) throw std::invalid_argument("unknown element: " + label);
    return it->second;
}

ElementSet BinaryMatroid::full_set() const {
    ElementSet s{Bits(size()), ground_id};
    s.bits.set();
    return s;
}

ElementSet BinaryMatroid::set_of(const std::vector<std::string>& labs) const {
    ElementSet s{Bits(size()), ground_id};
    for (const auto& l : labs) s.bits.set(index_of(l));
    return s;
}

std::vector<std::string> BinaryMatroid::labels_of(const ElementSet& s) const {
    check_ground(*this, s);
    std::vector<std::string> out;
    for (std::size_t i = s.bits.find_first(); i != Bits::npos; i = s.bits.find_next(i))
        out.push_back(labels[i]);
    return out;
}

std::size_t rank(const Gf2Matrix& m) { return gf2_rank(m); }

bool is_independent(const BinaryMatroid& m, const ElementSet& s) {
    check_ground(m, s);
    Gf2Matrix sub(m.matrix.rows, s.count());
    std::size_t j = 0;
    for (std::size_t c = s.bits.find_first(); c != Bits::npos; c = s.bits.find_next(c), ++j)
        for (std::size_t r = 0; r < m.matrix.rows; ++r)
            if (m.matrix.get(r, c)) sub.set(r, j, true);
    return gf2_rank(sub) == sub.cols;
}

bool is_cycle(const BinaryMatroid& m, const ElementSet& s) {
    check_ground(m, s);
    // Cycle space of a binary matroid = null space of the representation.
    for (std::size_t r = 0; r < m.matrix.rows; ++r) {
        if ((m.matrix.row_bits[r] & s.bits).count() % 2 != 0) return false;
    }
    return true;
}

bool is_circuit(const BinaryMatroid& m, const ElementSet& s) {
    check_ground(m, s);
    if (s.empty() || !is_cycle(m, s)) return false;
    // A nonempty cycle is a circuit iff no proper nonempty subset is a cycle,
    // equivalently dropping any one element leaves an independent set.
    for (std::size_t i = s.bits.find_first(); i != Bits::npos; i = s.bits.find_next(i)) {
        ElementSet t = s;
        t.bits.reset(i);
        if (!is_independent(m, t)) return false;
    }
    return true;
}

ElementSet fundamental_circuit(const BinaryMatroid& m, const ElementSet& basis, std::size_t e) {
    check_ground(m, basis);
    if (e >= m.size()) throw std::invalid_argument("element index out of range");
    if (basis.test(e)) throw std::invalid_argument("element already in basis");
    if (!is_independent(m, basis) || basis.count() != gf2_rank(m.matrix))
        throw std::invalid_argument("set is not a basis");
    ElementSet with = basis;
    with.bits.set(e);
    return circuit_within(m, with);
}

ElementSet circuit_within(const BinaryMatroid& m, const ElementSet& dependent) {
    check_ground(m, dependent);
    if (is_independent(m, dependent))
        throw std::invalid_argument("set is independent, contains no circuit");
    ElementSet cur = dependent;
    for (std::size_t i = cur.bits.find_first(); i != Bits::npos;) {
        std::size_t next = cur.bits.find_next(i);
        ElementSet t = cur;
        t.bits.reset(i);
        if (!is_independent(m, t)) cur = t;
        i = next;
    }
    return cur;
}

std::vector<ElementSet> decompose_cycle(const BinaryMatroid& m, const ElementSet& cycle) {
    check_ground(m, cycle);
    if (!is_cycle(m, cycle)) throw std::invalid_argument("set is not a cycle");
    std::vector<ElementSet> parts;
    ElementSet rest = cycle;
    while (!rest.empty()) {
        ElementSet c = circuit_within(m, rest);
        parts.push_back(c);
        rest.bits ^= c.bits;
    }
    return parts;
}

std::vector<ElementSet> enumerate_circuits(const BinaryMatroid& m, std::optional<std::size_t> size_cap) {
    constexpr std::size_t kGroundCap = 24;
    if (m.size() > kGroundCap)
        throw std::invalid_argument("ground set too large for circuit enumeration");
    std::vector<Bits> basis = gf2_nullspace_basis(m.matrix);
    const std::size_t d = basis.size();
    // Every cycle is a combination of null-space basis vectors; circuits are the
    // support-minimal nonzero ones.
    std::vector<std::uint32_t> members;
    members.reserve((std::size_t{1} << d) - 1);
    std::uint32_t cur = 0;
    for (std::uint64_t g = 1; g < (std::uint64_t{1} << d); ++g) {
        // Gray-code walk: flip one basis vector per step.
        std::size_t flip = 0;
        std::uint64_t gray = g ^ (g >> 1), prev = (g - 1) ^ ((g - 1) >> 1);
        std::uint64_t diff = gray ^ prev;
        while (!(diff & 1)) { diff >>= 1; ++flip; }
        std::uint32_t v = 0;
        for (std::size_t i = basis[flip].find_first(); i != Bits::npos; i = basis[flip].find_next(i))
            v |= (std::uint32_t{1} << i);
        cur ^= v;
        if (cur != 0) members.push_back(cur);
    }
    std::sort(members.begin(), members.end(), [](std::uint32_t a, std::uint32_t b) {
        int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    members.erase(std::unique(members.begin(), members.end()), members.end());
    std::vector<std::uint32_t> minimal;
    for (std::uint32_t v : members) {
        bool has_smaller = false;
        for (std::uint32_t c : minimal) {
            if ((c & v) == c) { has_smaller = true; break; }
        }
        if (!has_smaller) minimal.push_back(v);
    }
    std::vector<ElementSet> out;
    for (std::uint32_t v : minimal) {
        if (size_cap && static_cast<std::size_t>(__builtin_popcount(v)) > *size_cap) continue;
        ElementSet s = m.empty_set();
        for (std::size_t i = 0; i < m.size(); ++i)
            if (v & (std::uint32_t{1} << i)) s.bits.set(i);
        out.push_back(s);
    }
    return out;
}

BinaryMatroid dual(const BinaryMatroid& m) {
    // Row-reduce to locate pivot columns P and non-pivot columns N, so the
    // representation reads [I | D] up to column order.  The dual is [D^T | I]
    // with rows indexed by N, columns kept in the original label order.
    Gf2Matrix a = m.matrix;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols && r < a.rows; ++c) {
        std::size_t pivot = r;
        while (pivot < a.rows && !a.row_bits[pivot].test(c)) ++pivot;
        if (pivot == a.rows) continue;
        std::swap(a.row_bits[r], a.row_bits[pivot]);
        for (std::size_t i = 0; i < a.rows; ++i)
            if (i != r && a.row_bits[i].test(c)) a.row_bits[i] ^= a.row_bits[r];
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(a.cols, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;
    std::vector<std::size_t> non_pivot;
    for (std::size_t c = 0; c < a.cols; ++c)
        if (!is_pivot[c]) non_pivot.push_back(c);

    Gf2Matrix d(non_pivot.size(), a.cols);
    for (std::size_t i = 0; i < non_pivot.size(); ++i) {
        d.set(i, non_pivot[i], true);
        for (std::size_t j = 0; j < pivot_col.size(); ++j)
            if (a.get(j, non_pivot[i])) d.set(i, pivot_col[j], true);
    }
    return BinaryMatroid(std::move(d), m.labels);
}

BinaryMatroid delete_elements(const BinaryMatroid& m, const ElementSet& s) {
    check_ground(m, s);
    std::vector<std::string> labels;
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < m.size(); ++c) {
        if (!s.test(c)) {
            keep.push_back(c);
            labels.push_back(m.labels[c]);
        }
    }
    Gf2Matrix a(m.matrix.rows, keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j)
        for (std::size_t r = 0; r < m.matrix.rows; ++r)
            if (m.matrix.get(r, keep[j])) a.set(r, j, true);
    return BinaryMatroid(std::move(a), std::move(labels));
}

BinaryMatroid add_parallel(const BinaryMatroid& m, const std::string& of, const std::string& new_label) {
    if (m.has_label(new_label)) throw std::invalid_argument("label collision: " + new_label);
    std::size_t src = m.index_of(of);
    Gf2Matrix a(m.matrix.rows, m.matrix.cols + 1);
    for (std::size_t r = 0; r < m.matrix.rows; ++r) {
        for (std::size_t c = 0; c < m.matrix.cols; ++c)
            if (m.matrix.get(r, c)) a.set(r, c, true);
        if (m.matrix.get(r, src)) a.set(r, m.matrix.cols, true);
    }
    std::vector<std::string> labels = m.labels;
    labels.push_back(new_label);
    return BinaryMatroid(std::move(a), std::move(labels));
}

BinaryMatroid r10() {
    std::vector<Bits> cols;
    for (std::uint32_t v = 0; v < 32; ++v) {
        if (__builtin_popcount(v) != 3) continue;
        Bits c(5);
        for (std::size_t i = 0; i < 5; ++i)
            if (v & (1u << i)) c.set(i);
        cols.push_back(c);
    }
    Gf2Matrix a(5, cols.size());
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (std::size_t r = 0; r < 5; ++r)
            if (cols[j].test(r)) a.set(r, j, true);
        labels.push_back("r" + std::to_string(j + 1));
    }
    return BinaryMatroid(std::move(a), std::move(labels));
}

ElementSet set_xor(const ElementSet& a, const ElementSet& b) {
    if (a.ground_id != b.ground_id) throw std::invalid_argument("ground-set mismatch");
    return ElementSet{a.bits ^ b.bits, a.ground_id};
}

ElementSet set_and(const ElementSet& a, const ElementSet& b) {
    if (a.ground_id != b.ground_id) throw std::invalid_argument("ground-set mismatch");
    return ElementSet{a.bits & b.bits, a.ground_id};
}

ElementSet set_minus(const ElementSet& a, const ElementSet& b) {
    if (a.ground_id != b.ground_id) throw std::invalid_argument("ground-set mismatch");
    return ElementSet{a.bits & ~b.bits, a.ground_id};
}

bool is_subset(const ElementSet& a, const ElementSet& b) {
    if (a.ground_id != b.ground_id) throw std::invalid_argument("ground-set mismatch");
    return a.bits.is_subset_of(b.bits);
}

}  // namespace spancirc
