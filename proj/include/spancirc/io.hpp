#pragma once

#include "spancirc/solvers.hpp"
#include "spancirc/toolkit.hpp"

#include <string>

namespace spancirc {

// File formats.  Graphs and matrices are line-oriented text; conflict trees and
// solver instances are JSON.  Every format starts with a format-1 marker and
// serialization is canonical, so parse/serialize round-trips are bit-exact.

std::string write_graph(const MultiGraph& g);
MultiGraph read_graph(const std::string& text);

std::string write_matroid(const BinaryMatroid& m);
BinaryMatroid read_matroid(const std::string& text);

std::string write_tree(const ConflictTree& t);
ConflictTree read_tree(const std::string& text);

struct WmscInstanceFile {
    MatroidRef matroid;
    std::map<std::string, Weight> weights;  // unit when omitted in the file
    LabelSet terminals;
    Weight budget = 0;
};

struct ScirInstanceFile {
    MatroidRef matroid;
    LabelSet terminals;
};

struct EmwcInstanceFile {
    EmwcInstance inst;
};

struct CtseInstanceFile {
    CtseInstance inst;
};

std::string write_wmsc_instance(const WmscInstanceFile& f);
WmscInstanceFile read_wmsc_instance(const std::string& text);

std::string write_scir_instance(const ScirInstanceFile& f);
ScirInstanceFile read_scir_instance(const std::string& text);

std::string write_emwc_instance(const EmwcInstanceFile& f);
EmwcInstanceFile read_emwc_instance(const std::string& text);

std::string write_ctse_instance(const CtseInstanceFile& f);
CtseInstanceFile read_ctse_instance(const std::string& text);

std::string write_witness(const std::set<std::string>& labels);
std::set<std::string> read_witness(const std::string& text);

std::string slurp_file(const std::string& path);
void spit_file(const std::string& path, const std::string& content);

}  // namespace spancirc
