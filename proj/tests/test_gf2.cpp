#include "doctest.h"
#include "helpers.hpp"
#include "spancirc/gf2.hpp"
#include "spancirc/graph.hpp"

#include <random>

using namespace spancirc;
using namespace spancirc::testing;

TEST_CASE("rank basic cases") {
    Gf2Matrix id(3, 3);
    for (int i = 0; i < 3; ++i) id.set(i, i, true);
    CHECK(rank(id) == 3);

    Gf2Matrix zero(2, 4);
    CHECK(rank(zero) == 0);

    BinaryMatroid r = r10();
    CHECK(rank(r.matrix) == 5);
    CHECK(naive_rank(to_grid(r.matrix)) == 5);
}

TEST_CASE("rank agrees with naive elimination on random matrices") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        auto m = random_matroid(rng, 1 + static_cast<int>(rng() % 6), 1 + static_cast<int>(rng() % 8));
        CHECK(rank(m.matrix) == static_cast<std::size_t>(naive_rank(to_grid(m.matrix))));
    }
}

TEST_CASE("independence on the triangle matroid") {
    BinaryMatroid m = cycle_matroid(triangle());
    CHECK(is_independent(m, m.set_of({"e1", "e2"})));
    CHECK(is_independent(m, m.set_of({"e1", "e3"})));
    CHECK_FALSE(is_independent(m, m.set_of({"e1", "e2", "e3"})));
    CHECK(is_independent(m, m.empty_set()));
}

TEST_CASE("element sets from another ground set are rejected") {
    BinaryMatroid m1 = cycle_matroid(triangle("a"));
    BinaryMatroid m2 = cycle_matroid(triangle("b"));
    CHECK_THROWS_AS(is_independent(m1, m2.set_of({"b1"})), std::invalid_argument);
    CHECK_THROWS_AS(set_xor(m1.empty_set(), m2.empty_set()), std::invalid_argument);
}

TEST_CASE("cycles: empty set, triangle, symmetric differences") {
    BinaryMatroid m = cycle_matroid(triangle());
    CHECK(is_cycle(m, m.empty_set()));
    CHECK(is_cycle(m, m.set_of({"e1", "e2", "e3"})));
    CHECK_FALSE(is_cycle(m, m.set_of({"e1"})));

    // Symmetric difference of any two circuits stays a cycle.
    BinaryMatroid k4 = cycle_matroid(complete_graph(4));
    auto circuits = enumerate_circuits(k4);
    for (const auto& a : circuits)
        for (const auto& b : circuits) CHECK(is_cycle(k4, set_xor(a, b)));
}

TEST_CASE("circuit recognition") {
    BinaryMatroid m = cycle_matroid(triangle());
    CHECK(is_circuit(m, m.set_of({"e1", "e2", "e3"})));
    CHECK_FALSE(is_circuit(m, m.set_of({"e1"})));
    CHECK_FALSE(is_circuit(m, m.empty_set()));

    BinaryMatroid r = r10();
    // R10 has no circuit of odd size, in particular none of size 3.
    auto labels = r.labels;
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i + 1; j < labels.size(); ++j)
            for (std::size_t k = j + 1; k < labels.size(); ++k)
                CHECK_FALSE(is_circuit(r, r.set_of({labels[i], labels[j], labels[k]})));
}

TEST_CASE("fundamental circuits") {
    BinaryMatroid c4 = cycle_matroid(cycle_graph(4));
    ElementSet basis = c4.set_of({"e1", "e2", "e3"});
    ElementSet fc = fundamental_circuit(c4, basis, c4.index_of("e4"));
    CHECK(fc == c4.set_of({"e1", "e2", "e3", "e4"}));

    BinaryMatroid k3 = cycle_matroid(triangle());
    ElementSet fc2 = fundamental_circuit(k3, k3.set_of({"e1", "e2"}), k3.index_of("e3"));
    CHECK(fc2 == k3.full_set());

    BinaryMatroid par = add_parallel(k3, "e1", "p");
    ElementSet b = par.set_of({"e1", "e2"});
    CHECK(fundamental_circuit(par, b, par.index_of("p")) == par.set_of({"e1", "p"}));

    CHECK_THROWS_AS(fundamental_circuit(k3, k3.set_of({"e1"}), k3.index_of("e2")),
                    std::invalid_argument);
    CHECK_THROWS_AS(fundamental_circuit(k3, k3.set_of({"e1", "e2"}), k3.index_of("e1")),
                    std::invalid_argument);
}

TEST_CASE("enumerate_circuits small cases") {
    BinaryMatroid k3 = cycle_matroid(triangle());
    auto cs = enumerate_circuits(k3);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0] == k3.full_set());

    BinaryMatroid r = r10();
    for (const auto& c : enumerate_circuits(r)) {
        CHECK(c.count() % 2 == 0);
        CHECK(c.count() >= 4);
        CHECK(is_circuit(r, c));
    }

    BinaryMatroid par = add_parallel(k3, "e2", "p");
    auto cs2 = circuit_label_sets(par);
    CHECK(cs2.count({"e2", "p"}) == 1);
}

TEST_CASE("circuit axioms hold on random matroids") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 25; ++t) {
        auto m = random_matroid(rng, 2 + static_cast<int>(rng() % 4), 3 + static_cast<int>(rng() % 8));
        auto cs = enumerate_circuits(m);
        for (const auto& c : cs) CHECK_FALSE(c.empty());  // C1
        for (const auto& a : cs) {
            for (const auto& b : cs) {
                if (a == b) continue;
                CHECK_FALSE(is_subset(a, b));  // C2
                ElementSet common = set_and(a, b);
                for (std::size_t e = common.bits.find_first(); e != Bits::npos;
                     e = common.bits.find_next(e)) {
                    // C3: some circuit inside (a u b) - e.
                    ElementSet un = a;
                    un.bits |= b.bits;
                    un.bits.reset(e);
                    bool found = false;
                    for (const auto& c3 : cs)
                        if (is_subset(c3, un)) { found = true; break; }
                    CHECK(found);
                }
            }
        }
    }
}

TEST_CASE("parallel exchange per Observation 1") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 20; ++t) {
        auto g = random_connected_graph(rng, 4 + static_cast<int>(rng() % 3), 3);
        BinaryMatroid m = cycle_matroid(g);
        auto cs = enumerate_circuits(m);
        for (const auto& pair : cs) {
            if (pair.count() != 2) continue;
            std::size_t e1 = pair.bits.find_first();
            std::size_t e2 = pair.bits.find_next(e1);
            for (const auto& c : cs) {
                if (!c.test(e1) || c.test(e2) || c == pair) continue;
                ElementSet swapped = c;
                swapped.bits.reset(e1);
                swapped.bits.set(e2);
                CHECK(is_circuit(m, swapped));
            }
        }
    }
}

TEST_CASE("dual is an involution and swaps loops with coloops") {
    BinaryMatroid k4 = cycle_matroid(complete_graph(4));
    CHECK(circuit_label_sets(dual(dual(k4))) == circuit_label_sets(k4));

    BinaryMatroid c4 = cycle_matroid(cycle_graph(4));
    auto dual_circuits = circuit_label_sets(dual(c4));
    // Minimal cut-sets of a 4-cycle: every pair of edges.
    std::set<std::set<std::string>> expect;
    std::vector<std::string> labs = {"e1", "e2", "e3", "e4"};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) expect.insert({labs[i], labs[j]});
    CHECK(dual_circuits == expect);

    // A bridge is a coloop of M(G) and a loop of the dual.
    MultiGraph bridge({0, 1, 2}, {{"b", 0, 1, 1}, {"c1", 1, 2, 1}, {"c2", 1, 2, 1}});
    BinaryMatroid m = cycle_matroid(bridge);
    BinaryMatroid md = dual(m);
    CHECK(is_circuit(md, md.set_of({"b"})));

    std::mt19937_64 rng(17);
    for (int t = 0; t < 15; ++t) {
        auto m2 = random_matroid(rng, 3, 6);
        BinaryMatroid dd = dual(dual(m2));
        // Same independent sets: compare circuit families.
        CHECK(circuit_label_sets(dd) == circuit_label_sets(m2));
    }
}

TEST_CASE("delete and add_parallel") {
    BinaryMatroid k3 = cycle_matroid(triangle());
    BinaryMatroid par = add_parallel(k3, "e1", "p");
    CHECK(is_circuit(par, par.set_of({"e1", "p"})));
    CHECK_THROWS_AS(add_parallel(k3, "e1", "e2"), std::invalid_argument);
    CHECK_THROWS_AS(add_parallel(k3, "zzz", "p"), std::invalid_argument);

    BinaryMatroid del = delete_elements(par, par.set_of({"e1", "e2"}));
    CHECK(del.size() == 2);
    CHECK(del.has_label("p"));
    CHECK(del.has_label("e3"));
}

TEST_CASE("r10 facts") {
    BinaryMatroid r = r10();
    CHECK(r.size() == 10);
    for (std::size_t c = 0; c < 10; ++c) CHECK(r.matrix.column(c).count() == 3);
    // All columns distinct.
    for (std::size_t c = 0; c < 10; ++c)
        for (std::size_t d = c + 1; d < 10; ++d) CHECK(r.matrix.column(c) != r.matrix.column(d));
    CHECK(rank(r.matrix) == 5);
    for (const auto& c : enumerate_circuits(r, 3)) CHECK(c.count() > 3);
}

TEST_CASE("cycle decomposition splits into circuits") {
    BinaryMatroid m = cycle_matroid(complete_graph(5));
    auto cs = enumerate_circuits(m);
    std::mt19937_64 rng(23);
    for (int t = 0; t < 20; ++t) {
        const auto& a = cs[rng() % cs.size()];
        const auto& b = cs[rng() % cs.size()];
        ElementSet cyc = set_xor(a, b);
        if (cyc.empty()) continue;
        auto parts = decompose_cycle(m, cyc);
        ElementSet acc = m.empty_set();
        for (const auto& p : parts) {
            CHECK(is_circuit(m, p));
            CHECK(set_and(acc, p).empty());
            acc.bits |= p.bits;
        }
        CHECK(acc == cyc);
    }
}
