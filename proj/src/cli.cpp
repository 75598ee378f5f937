#include "spancirc/cli.hpp"

#include "CLI11.hpp"
#include "json.hpp"
#include "spancirc/io.hpp"
#include "spancirc/solvers.hpp"
#include "spancirc/toolkit.hpp"

#include <iostream>
#include <sstream>

namespace spancirc {

namespace {

LabelSet split_labels(const std::string& csv) {
    LabelSet out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.insert(item);
    return out;
}

std::set<VertexId> split_vertices(const std::string& csv) {
    std::set<VertexId> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.insert(std::stoi(item));
    return out;
}

std::map<std::string, Weight> split_weights(const std::string& csv) {
    std::map<std::string, Weight> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("weight entries look like label=value");
        out[item.substr(0, eq)] = std::stoll(item.substr(eq + 1));
    }
    return out;
}

struct MatroidFlags {
    std::string tree_file;
    std::string graph_file;
    std::string as_kind;
    std::string instance_file;
};

void add_matroid_flags(CLI::App* cmd, MatroidFlags& f, bool with_instance) {
    cmd->add_option("--tree", f.tree_file, "conflict tree JSON file");
    cmd->add_option("--graph", f.graph_file, "graph text file (with --as)");
    cmd->add_option("--as", f.as_kind, "graphic or cographic");
    if (with_instance) cmd->add_option("--instance", f.instance_file, "bundled instance JSON");
}

MatroidRef load_matroid(const MatroidFlags& f) {
    if (!f.tree_file.empty()) return MatroidRef::of(read_tree(slurp_file(f.tree_file)));
    if (!f.graph_file.empty()) {
        MultiGraph g = read_graph(slurp_file(f.graph_file));
        if (f.as_kind == "graphic") return MatroidRef::of(BasicNode::make_graphic(std::move(g)));
        if (f.as_kind == "cographic")
            return MatroidRef::of(BasicNode::make_cographic(std::move(g)));
        throw std::invalid_argument("--as must be graphic or cographic");
    }
    throw std::invalid_argument("need --tree, --graph/--as, or --instance");
}

std::map<std::string, Weight> default_ground_weights(const MatroidRef& m) {
    std::map<std::string, Weight> w;
    auto ground = m.ground_labels();
    auto from_node = [&](const BasicNode& n) {
        if (n.kind == NodeKind::r10_derived) {
            for (const auto& l : n.matroid.labels)
                if (ground.count(l)) w.emplace(l, 1);
        } else {
            for (const auto& e : n.graph.edges)
                if (ground.count(e.label)) w.emplace(e.label, e.weight);
        }
    };
    if (m.node) from_node(*m.node);
    if (m.tree)
        for (const auto& n : m.tree->nodes) from_node(n);
    return w;
}

void print_witness(const LabelSet& witness, const std::string& out_file) {
    for (const auto& l : witness) std::cout << l << "\n";
    if (!out_file.empty()) spit_file(out_file, write_witness(witness));
}

SolveOptions make_opts(const std::string& mode, std::uint64_t seed) {
    SolveOptions o;
    o.mode = mode == "rand" ? SearchMode::randomized : SearchMode::deterministic;
    o.seed = seed;
    return o;
}

int run(const std::vector<std::string>& args) {
    CLI::App app{"spanning circuits on regular matroids"};
    app.require_subcommand(1);

    // solve-msc
    auto* msc = app.add_subcommand("solve-msc", "minimum spanning circuit");
    MatroidFlags msc_m;
    add_matroid_flags(msc, msc_m, true);
    std::string msc_terminals, msc_weights, msc_mode = "det", msc_witness_out;
    Weight msc_budget = 0;
    std::uint64_t msc_seed = 1;
    msc->add_option("--terminals", msc_terminals, "comma-separated terminal labels");
    msc->add_option("--budget", msc_budget, "weight budget (ell)");
    msc->add_option("--weights", msc_weights, "label=weight overrides");
    msc->add_option("--mode", msc_mode, "det or rand")->check(CLI::IsMember({"det", "rand"}));
    msc->add_option("--seed", msc_seed, "seed for rand mode");
    msc->add_option("--witness-out", msc_witness_out, "write the witness to a file");

    // solve-sc
    auto* sc = app.add_subcommand("solve-sc", "spanning circuit");
    MatroidFlags sc_m;
    add_matroid_flags(sc, sc_m, true);
    std::string sc_terminals, sc_mode = "det", sc_witness_out;
    std::uint64_t sc_seed = 1;
    sc->add_option("--terminals", sc_terminals, "comma-separated terminal labels");
    sc->add_option("--mode", sc_mode, "det or rand")->check(CLI::IsMember({"det", "rand"}));
    sc->add_option("--seed", sc_seed, "seed for rand mode");
    sc->add_option("--witness-out", sc_witness_out, "write the witness to a file");

    // solve-emwc
    auto* emwc = app.add_subcommand("solve-emwc", "minimal cut-set through terminal edges");
    std::string emwc_graph, emwc_instance, emwc_terminals, emwc_r1, emwc_r2, emwc_mode = "det",
                                                                             emwc_witness_out;
    Weight emwc_k = 0;
    std::int64_t emwc_p = -1, emwc_q = -1;
    std::uint64_t emwc_seed = 1;
    emwc->add_option("--graph", emwc_graph, "graph text file");
    emwc->add_option("--instance", emwc_instance, "bundled instance JSON");
    emwc->add_option("--terminals", emwc_terminals, "terminal edge labels");
    emwc->add_option("--r1", emwc_r1, "vertices the first side must cover");
    emwc->add_option("--r2", emwc_r2, "vertices the second side must cover");
    emwc->add_option("--k", emwc_k, "extra-weight budget");
    emwc->add_option("--p", emwc_p, "separation parameter override");
    emwc->add_option("--q", emwc_q, "separation parameter override");
    emwc->add_option("--mode", emwc_mode, "det or rand")->check(CLI::IsMember({"det", "rand"}));
    emwc->add_option("--seed", emwc_seed, "seed for rand mode");
    emwc->add_option("--witness-out", emwc_witness_out, "write the witness to a file");

    // solve-ctse
    auto* ctse = app.add_subcommand("solve-ctse", "cycle through terminal edges");
    std::string ctse_graph, ctse_instance, ctse_terminals, ctse_mode = "det", ctse_witness_out;
    Weight ctse_k = 0;
    std::uint64_t ctse_seed = 1;
    ctse->add_option("--graph", ctse_graph, "graph text file");
    ctse->add_option("--instance", ctse_instance, "bundled instance JSON");
    ctse->add_option("--terminals", ctse_terminals, "terminal edge labels");
    ctse->add_option("--k", ctse_k, "extra-weight budget");
    ctse->add_option("--mode", ctse_mode, "det or rand")->check(CLI::IsMember({"det", "rand"}));
    ctse->add_option("--seed", ctse_seed, "seed for rand mode");
    ctse->add_option("--witness-out", ctse_witness_out, "write the witness to a file");

    // compose
    auto* comp = app.add_subcommand("compose", "compose a conflict tree into a matroid");
    std::string comp_tree, comp_out;
    comp->add_option("--tree", comp_tree, "conflict tree JSON file")->required();
    comp->add_option("--out", comp_out, "output matroid text file");

    // validate-tree
    auto* val = app.add_subcommand("validate-tree", "check the conflict-tree invariants");
    std::string val_tree;
    val->add_option("--tree", val_tree, "conflict tree JSON file")->required();

    // gen
    auto* gen = app.add_subcommand("gen", "instance generators");
    gen->require_subcommand(1);
    auto* genr = gen->add_subcommand("random", "random conflict tree");
    std::uint64_t genr_seed = 1;
    int genr_nodes = 3, genr_size = 20;
    std::string genr_out;
    genr->add_option("--seed", genr_seed, "seed");
    genr->add_option("--nodes", genr_nodes, "node budget");
    genr->add_option("--size", genr_size, "composed ground-set cap");
    genr->add_option("--out", genr_out, "output tree JSON")->required();
    auto* genc = gen->add_subcommand("clique-reduction", "regular multicolored clique reduction");
    std::string genc_graph, genc_partition, genc_out;
    int genc_k = 0;
    genc->add_option("--graph", genc_graph, "regular source graph (text)")->required();
    genc->add_option("--k", genc_k, "number of classes")->required();
    genc->add_option("--partition", genc_partition, "classes like 0,1;2,3")->required();
    genc->add_option("--out", genc_out, "output wmsc instance JSON")->required();

    // verify
    auto* ver = app.add_subcommand("verify", "re-check a witness against an instance");
    std::string ver_instance, ver_witness;
    ver->add_option("--instance", ver_instance, "instance JSON")->required();
    ver->add_option("--witness", ver_witness, "witness file")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*msc) {
        MatroidRef m = msc_m.instance_file.empty() ? load_matroid(msc_m) : MatroidRef{};
        LabelSet terminals = split_labels(msc_terminals);
        std::map<std::string, Weight> w;
        Weight budget = msc_budget;
        if (!msc_m.instance_file.empty()) {
            WmscInstanceFile f = read_wmsc_instance(slurp_file(msc_m.instance_file));
            m = f.matroid;
            terminals = f.terminals;
            w = f.weights;
            budget = f.budget;
        } else {
            w = default_ground_weights(m);
        }
        for (const auto& [k, v] : split_weights(msc_weights)) w[k] = v;
        SolveOutcome r = solve_wmsc(m, w, terminals, budget, make_opts(msc_mode, msc_seed));
        if (!r.yes) {
            std::cout << "NO\n";
            return 0;
        }
        Weight total = 0;
        for (const auto& l : *r.witness) total += w.at(l);
        std::cout << "YES weight=" << total << "\n";
        print_witness(*r.witness, msc_witness_out);
        return 0;
    }
    if (*sc) {
        MatroidRef m = sc_m.instance_file.empty() ? load_matroid(sc_m) : MatroidRef{};
        LabelSet terminals = split_labels(sc_terminals);
        if (!sc_m.instance_file.empty()) {
            ScirInstanceFile f = read_scir_instance(slurp_file(sc_m.instance_file));
            m = f.matroid;
            terminals = f.terminals;
        }
        SolveOutcome r = solve_sc(m, terminals, make_opts(sc_mode, sc_seed));
        if (!r.yes) {
            std::cout << "NO\n";
            return 0;
        }
        std::cout << "YES\n";
        print_witness(*r.witness, sc_witness_out);
        return 0;
    }
    if (*emwc) {
        EmwcInstance inst;
        if (!emwc_instance.empty()) {
            inst = read_emwc_instance(slurp_file(emwc_instance)).inst;
        } else {
            if (emwc_graph.empty()) throw std::invalid_argument("need --graph or --instance");
            inst.g = read_graph(slurp_file(emwc_graph));
            inst.terminals = split_labels(emwc_terminals);
            inst.r1 = split_vertices(emwc_r1);
            inst.r2 = split_vertices(emwc_r2);
            inst.k = emwc_k;
        }
        EmwcOptions opts;
        opts.mode = emwc_mode == "rand" ? SearchMode::randomized : SearchMode::deterministic;
        opts.seed = emwc_seed;
        if (emwc_p >= 0 && emwc_q >= 0) opts.params = ParamPair{emwc_p, emwc_q};
        auto r = solve_emwc(inst, opts);
        if (!r) {
            std::cout << "NO\n";
            return 0;
        }
        std::cout << "YES weight=" << inst.g.weight_of(*r) << "\n";
        print_witness(LabelSet(r->begin(), r->end()), emwc_witness_out);
        return 0;
    }
    if (*ctse) {
        CtseInstance inst;
        if (!ctse_instance.empty()) {
            inst = read_ctse_instance(slurp_file(ctse_instance)).inst;
        } else {
            if (ctse_graph.empty()) throw std::invalid_argument("need --graph or --instance");
            inst.g = read_graph(slurp_file(ctse_graph));
            inst.terminals = split_labels(ctse_terminals);
            inst.k = ctse_k;
        }
        CtseOptions opts{ctse_mode == "rand" ? SearchMode::randomized : SearchMode::deterministic,
                         ctse_seed};
        auto r = solve_ctse(inst, opts);
        if (!r) {
            std::cout << "NO\n";
            return 0;
        }
        std::cout << "YES weight=" << inst.g.weight_of(*r) << "\n";
        print_witness(LabelSet(r->begin(), r->end()), ctse_witness_out);
        return 0;
    }
    if (*comp) {
        ConflictTree t = read_tree(slurp_file(comp_tree));
        BinaryMatroid m = compose(t);
        std::string text = write_matroid(m);
        if (comp_out.empty()) std::cout << text;
        else spit_file(comp_out, text);
        return 0;
    }
    if (*val) {
        ConflictTree t = read_tree(slurp_file(val_tree));
        Validation v = validate(t);
        if (v.ok) std::cout << "VALID\n";
        else std::cout << "INVALID: " << v.message << "\n";
        return 0;
    }
    if (*genr) {
        ConflictTree t = gen_random_tree(genr_seed, genr_nodes, genr_size);
        spit_file(genr_out, write_tree(t));
        std::cout << "nodes=" << t.nodes.size() << " ground=" << tree_ground_labels(t).size()
                  << "\n";
        return 0;
    }
    if (*genc) {
        MultiGraph g = read_graph(slurp_file(genc_graph));
        std::vector<std::set<VertexId>> partition;
        std::stringstream ss(genc_partition);
        std::string cls;
        while (std::getline(ss, cls, ';')) partition.push_back(split_vertices(cls));
        CliqueReductionInstance inst = gen_clique_reduction(g, genc_k, partition);
        WmscInstanceFile f;
        f.matroid = MatroidRef::of(BasicNode::make_cographic(inst.h));
        f.terminals = inst.terminals;
        for (const auto& e : inst.h.edges) f.weights[e.label] = 1;
        f.budget = inst.budget;
        spit_file(genc_out, write_wmsc_instance(f));
        std::cout << "budget=" << inst.budget << " terminals=" << inst.terminals.size()
                  << " vertices=" << inst.h.n() << "\n";
        return 0;
    }
    if (*ver) {
        std::string text = slurp_file(ver_instance);
        std::set<std::string> witness = read_witness(slurp_file(ver_witness));
        LabelSet wl(witness.begin(), witness.end());
        nlohmann::json j = nlohmann::json::parse(text);
        std::string kind = j.value("kind", "");
        if (kind == "wmsc") {
            WmscInstanceFile f = read_wmsc_instance(text);
            WmscCore core;
            core.terminals = f.terminals;
            core.weights = f.weights;
            Weight wt = 0;
            for (const auto& t : f.terminals) wt += f.weights.at(t);
            core.budget = f.budget - wt;
            bool ok = core.budget >= 0 && wmsc_feasible(f.matroid.full_matroid(), core, wl);
            if (ok) {
                Weight total = 0;
                for (const auto& l : wl) total += f.weights.at(l);
                std::cout << "YES weight=" << total << "\n";
            } else {
                std::cout << "NO\n";
            }
            return 0;
        }
        if (kind == "scir") {
            ScirInstanceFile f = read_scir_instance(text);
            ScCore core;
            for (const auto& t : f.terminals) {
                core.triples.push_back({t});
                core.menus[{t}] = {{t}};
            }
            std::cout << (esc_feasible(f.matroid.full_matroid(), core, wl) ? "YES" : "NO") << "\n";
            return 0;
        }
        if (kind == "emwc") {
            EmwcInstance inst = read_emwc_instance(text).inst;
            bool ok = emwc_solution_ok(inst, witness);
            if (ok) std::cout << "YES weight=" << inst.g.weight_of(witness) << "\n";
            else std::cout << "NO\n";
            return 0;
        }
        if (kind == "ctse") {
            CtseInstance inst = read_ctse_instance(text).inst;
            bool ok = is_simple_cycle_edge_set(inst.g, witness);
            for (const auto& t : inst.terminals)
                if (!witness.count(t)) ok = false;
            if (ok && ctse_extra_weight(inst.g, inst.terminals, witness) > inst.k) ok = false;
            if (ok) std::cout << "YES weight=" << inst.g.weight_of(witness) << "\n";
            else std::cout << "NO\n";
            return 0;
        }
        throw std::invalid_argument("unknown instance kind: " + kind);
    }
    return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args) {
    try {
        return run(args);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace spancirc
