// cli.hpp: configuration, dispatch and emission for the tcsolve front end.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tcq/model.hpp"

namespace tcq::cli {

/// Flat run configuration; JSON keys equal the field names.
struct RunConfig {
    std::string command;  // spectrum, dynamics, concurrence, crossings, verify, converge

    // model
    double omega1{0.25}, omega2{0.25}, g1{0.1}, g2{0.1};
    double omega_c{1.0};
    int n_tr{48};
    double element_tol{1e-6};

    // spectrum / crossings
    std::string sweep;  // name:lo:hi:steps
    std::string method;  // comma list; default depends on the command
    std::string parity{"both"};
    int levels{12};
    int m_max{24};
    bool tied{false};
    int cutoff{-1};  // photon cutoff for oracle methods; -1 = heuristic
    double gap_tol{1e-6};
    double fid_tol{0.01};
    double max_gap{0.02};

    // dynamics / concurrence
    std::string observable{"p10"};
    double z{3.0};
    double tmin{0.0}, tmax{30.0};
    int samples{2048};
    std::string initial{"10"};
    int m_cutoff{30};

    // verify
    int ladder_max{10};

    // converge
    std::vector<int> schedule{8, 16, 24, 32, 40, 48, 56, 64, 72};
    double tol{1e-8};

    // output
    std::string out;  // empty = stdout
    std::string format{"csv"};
    int workers{0};

    void validate() const;
    ModelParams model() const;
};

std::string to_json(const RunConfig& c);
/// Rejects unknown keys and mistyped values with InvalidArgument.
RunConfig from_json(const std::string& text);

/// Runs tcsolve; returns 0 on success, 1 on usage/io errors, 2 on numerical failure.
int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// %.12g formatting used by every emitter.
std::string fmt(double v);

}  // namespace tcq::cli
