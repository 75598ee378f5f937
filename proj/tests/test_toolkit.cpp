#include "doctest.h"
#include "helpers.hpp"
#include "spancirc/cli.hpp"
#include "spancirc/io.hpp"
#include "spancirc/toolkit.hpp"

#include <cstdio>
#include <filesystem>
#include <random>

using namespace spancirc;
using namespace spancirc::testing;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("spancirc_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

// Runs the CLI capturing stdout.
std::pair<int, std::string> run_cli(const std::vector<std::string>& args) {
    TempDir tmp;
    std::string capture = tmp.file("stdout.txt");
    fflush(stdout);
    int saved = dup(fileno(stdout));
    FILE* f = freopen(capture.c_str(), "w", stdout);
    REQUIRE(f != nullptr);
    int code = cli_main(args);
    fflush(stdout);
    dup2(saved, fileno(stdout));
    close(saved);
    return {code, slurp_file(capture)};
}

}  // namespace

TEST_CASE("graph and matroid text formats round-trip bit-exactly") {
    MultiGraph g({0, 1, 5}, {{"ab", 0, 1, 2}, {"loop", 5, 5, 1}, {"p", 0, 1, 3}});
    std::string text = write_graph(g);
    MultiGraph g2 = read_graph(text);
    CHECK(g2 == g);
    CHECK(write_graph(g2) == text);

    BinaryMatroid m = cycle_matroid(g);
    std::string mt = write_matroid(m);
    BinaryMatroid m2 = read_matroid(mt);
    CHECK(m2.labels == m.labels);
    CHECK(m2.matrix == m.matrix);
    CHECK(write_matroid(m2) == mt);

    CHECK_THROWS_AS(read_graph("v 0\n"), std::invalid_argument);  // missing header
}

TEST_CASE("tree JSON round-trips bit-exactly") {
    for (std::uint64_t seed : {1, 7, 19}) {
        ConflictTree t = gen_random_tree(seed, 3, 20);
        std::string text = write_tree(t);
        ConflictTree t2 = read_tree(text);
        CHECK(write_tree(t2) == text);
        CHECK(t2.nodes.size() == t.nodes.size());
        CHECK(validate(t2).ok);
        CHECK(circuit_label_sets(compose(t2)) == circuit_label_sets(compose(t)));
    }
}

TEST_CASE("instance files round-trip") {
    ConflictTree t = gen_random_tree(3, 2, 16);
    WmscInstanceFile f;
    f.matroid = MatroidRef::of(t);
    auto ground = tree_ground_labels(t);
    f.terminals = {*ground.begin()};
    for (const auto& l : ground) f.weights[l] = 2;
    f.budget = 7;
    std::string text = write_wmsc_instance(f);
    WmscInstanceFile f2 = read_wmsc_instance(text);
    CHECK(write_wmsc_instance(f2) == text);
    CHECK(f2.terminals == f.terminals);
    CHECK(f2.budget == f.budget);
    CHECK(f2.weights == f.weights);

    EmwcInstanceFile e;
    e.inst = {cycle_graph(4), {"e1"}, {0}, {2}, 1};
    std::string et = write_emwc_instance(e);
    EmwcInstanceFile e2 = read_emwc_instance(et);
    CHECK(write_emwc_instance(e2) == et);
    CHECK(e2.inst.g == e.inst.g);
    CHECK(e2.inst.r1 == e.inst.r1);

    CtseInstanceFile c;
    c.inst = {complete_graph(4), {"e1", "e6"}, 2};
    std::string ct = write_ctse_instance(c);
    CHECK(write_ctse_instance(read_ctse_instance(ct)) == ct);

    ScirInstanceFile s;
    s.matroid = MatroidRef::of(BasicNode::make_graphic(complete_graph(4)));
    s.terminals = {"e1", "e2"};
    std::string st = write_scir_instance(s);
    CHECK(write_scir_instance(read_scir_instance(st)) == st);
}

TEST_CASE("oracle self-consistency on hand-checked cases") {
    // wmsc on M(C4): only the 4-cycle passes through e1.
    BinaryMatroid c4 = cycle_matroid(cycle_graph(4));
    std::map<std::string, Weight> w{{"e1", 1}, {"e2", 1}, {"e3", 1}, {"e4", 1}};
    auto v = oracle_wmsc(c4, w, {"e1"}, 4);
    CHECK(v.yes);
    CHECK(*v.optimum == 4);
    CHECK_FALSE(oracle_wmsc(c4, w, {"e1"}, 3).yes);

    // emwc on C4: separating opposite vertices through a fixed edge.
    auto e = oracle_emwc({cycle_graph(4), {"e1"}, {0}, {2}, 1});
    CHECK(e.yes);
    CHECK(*e.optimum == 1);

    // ctse: the square through one terminal.
    auto c = oracle_ctse({cycle_graph(4), {"e1"}, 3});
    CHECK(c.yes);
    CHECK(*c.optimum == 3);

    // oracle circuits agree with the library enumeration on random matroids.
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        auto m = random_matroid(rng, 3, 3 + static_cast<int>(rng() % 8));
        auto lib = circuit_label_sets(m);
        auto ora = oracle_circuits(m);
        CHECK(lib == std::set<std::set<std::string>>(ora.begin(), ora.end()));
    }
}

TEST_CASE("gen_random_tree composition satisfies sum characterizations") {
    for (std::uint64_t seed = 30; seed < 36; ++seed) {
        ConflictTree t = gen_random_tree(seed, 2, 16);
        if (t.nodes.size() != 2) continue;
        const auto& shared = t.edges[0].shared;
        BinaryMatroid composed = compose(t);
        if (composed.size() > 16) continue;
        auto direct = circuit_label_sets(composed);
        if (shared.size() == 1) {
            CHECK(sum2_circuits(t.nodes[0].matroid, t.nodes[1].matroid, shared[0]) == direct);
        } else if (shared.size() == 3) {
            CHECK(sum3_circuits(t.nodes[0].matroid, t.nodes[1].matroid,
                                LabelSet(shared.begin(), shared.end())) == direct);
        }
    }
}

TEST_CASE("cli solves the two-triangle tree") {
    TempDir tmp;
    ConflictTree t;
    t.nodes.push_back(BasicNode::make_graphic(
        MultiGraph({0, 1, 2}, {{"s", 0, 1, 1}, {"a1", 1, 2, 1}, {"a2", 0, 2, 1}})));
    t.nodes.push_back(BasicNode::make_graphic(
        MultiGraph({0, 1, 2}, {{"s", 0, 1, 1}, {"b1", 1, 2, 1}, {"b2", 0, 2, 1}})));
    t.edges.push_back({0, 1, {"s"}});
    spit_file(tmp.file("t.json"), write_tree(t));

    auto [code, out] = run_cli({"solve-msc", "--tree", tmp.file("t.json"), "--terminals", "a1",
                                "--budget", "4"});
    CHECK(code == 0);
    CHECK(out.substr(0, 12) == "YES weight=4");
    CHECK(out.find("b1") != std::string::npos);

    auto [code2, out2] = run_cli({"solve-msc", "--tree", tmp.file("t.json"), "--terminals", "a1",
                                  "--budget", "3"});
    CHECK(code2 == 0);
    CHECK(out2 == "NO\n");
}

TEST_CASE("cli verify accepts good witnesses and rejects tampered ones") {
    TempDir tmp;
    MultiGraph c4 = cycle_graph(4);
    EmwcInstanceFile f;
    f.inst = {c4, {"e1"}, {0}, {2}, 1};
    spit_file(tmp.file("inst.json"), write_emwc_instance(f));

    auto [code, out] = run_cli({"solve-emwc", "--instance", tmp.file("inst.json"),
                                "--witness-out", tmp.file("w.txt")});
    REQUIRE(code == 0);
    REQUIRE(out.substr(0, 3) == "YES");

    auto [vcode, vout] = run_cli({"verify", "--instance", tmp.file("inst.json"), "--witness",
                                  tmp.file("w.txt")});
    CHECK(vcode == 0);
    CHECK(vout.substr(0, 3) == "YES");

    // Tamper: drop the terminal edge from the witness.
    auto witness = read_witness(slurp_file(tmp.file("w.txt")));
    witness.erase("e1");
    witness.insert("e2");
    spit_file(tmp.file("bad.txt"), write_witness(witness));
    auto [bcode, bout] = run_cli({"verify", "--instance", tmp.file("inst.json"), "--witness",
                                  tmp.file("bad.txt")});
    CHECK(bcode == 0);
    CHECK(bout == "NO\n");
}

TEST_CASE("cli error paths") {
    auto [code, out] = run_cli({"solve-msc", "--no-such-flag"});
    CHECK(code == 1);
    auto [code2, out2] = run_cli({"frobnicate"});
    CHECK(code2 == 1);
    TempDir tmp;
    spit_file(tmp.file("bad.json"), "{not json");
    auto [code3, out3] = run_cli({"solve-msc", "--tree", tmp.file("bad.json"), "--terminals",
                                  "x", "--budget", "1"});
    CHECK(code3 == 1);
}

TEST_CASE("cli gen random and validate-tree") {
    TempDir tmp;
    auto [code, out] = run_cli({"gen", "random", "--seed", "11", "--nodes", "3", "--size", "20",
                                "--out", tmp.file("t.json")});
    CHECK(code == 0);
    auto [vcode, vout] = run_cli({"validate-tree", "--tree", tmp.file("t.json")});
    CHECK(vcode == 0);
    CHECK(vout == "VALID\n");

    // An invalid tree: two nodes sharing two labels.
    ConflictTree bad;
    bad.nodes.push_back(BasicNode::make_graphic(
        MultiGraph({0, 1, 2}, {{"s1", 0, 1, 1}, {"s2", 1, 2, 1}, {"a", 0, 2, 1}})));
    bad.nodes.push_back(BasicNode::make_graphic(
        MultiGraph({0, 1, 2}, {{"s1", 0, 1, 1}, {"s2", 1, 2, 1}, {"b", 0, 2, 1}})));
    bad.edges.push_back({0, 1, {"s1", "s2"}});
    spit_file(tmp.file("bad.json"), write_tree(bad));
    auto [bcode, bout] = run_cli({"validate-tree", "--tree", tmp.file("bad.json")});
    CHECK(bcode == 0);
    CHECK(bout.substr(0, 8) == "INVALID:");
}

TEST_CASE("cli compose and clique-reduction") {
    TempDir tmp;
    ConflictTree t = gen_random_tree(5, 2, 14);
    spit_file(tmp.file("t.json"), write_tree(t));
    auto [code, out] = run_cli({"compose", "--tree", tmp.file("t.json")});
    CHECK(code == 0);
    BinaryMatroid m = read_matroid(out);
    CHECK(circuit_label_sets(m) == circuit_label_sets(compose(t)));

    spit_file(tmp.file("k4.txt"), write_graph(complete_graph(4)));
    auto [gcode, gout] = run_cli({"gen", "clique-reduction", "--graph", tmp.file("k4.txt"),
                                  "--k", "2", "--partition", "0,1;2,3", "--out",
                                  tmp.file("inst.json")});
    CHECK(gcode == 0);
    CHECK(gout == "budget=16 terminals=2 vertices=42\n");
    WmscInstanceFile f = read_wmsc_instance(slurp_file(tmp.file("inst.json")));
    CHECK(f.budget == 16);
    CHECK(f.terminals.size() == 2);
    CHECK(f.matroid.node->graph.n() == 42);
}

TEST_CASE("cli ctse and sc") {
    TempDir tmp;
    spit_file(tmp.file("c4.txt"), write_graph(cycle_graph(4)));
    auto [code, out] = run_cli({"solve-ctse", "--graph", tmp.file("c4.txt"), "--terminals", "e1",
                                "--k", "3"});
    CHECK(code == 0);
    CHECK(out.substr(0, 12) == "YES weight=4");

    spit_file(tmp.file("k4.txt"), write_graph(complete_graph(4)));
    auto [scode, sout] = run_cli({"solve-sc", "--graph", tmp.file("k4.txt"), "--as", "graphic",
                                  "--terminals", "e1,e2,e4"});
    CHECK(scode == 0);
    CHECK(sout.substr(0, 3) == "YES");
    auto [ncode, nout] = run_cli({"solve-sc", "--graph", tmp.file("k4.txt"), "--as", "graphic",
                                  "--terminals", "e1,e2,e3"});
    CHECK(ncode == 0);
    CHECK(nout == "NO\n");
}
