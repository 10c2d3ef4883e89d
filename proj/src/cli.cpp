#include "tcq/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "tcq/analysis.hpp"
#include "tcq/dynamics.hpp"
#include "tcq/entanglement.hpp"
#include "tcq/errors.hpp"

namespace tcq::cli {

namespace {

using nlohmann::json;

struct IoError : Error {
    using Error::Error;
};

// ---- config fields: one table drives JSON in both directions ----

struct Field {
    std::function<json(const RunConfig&)> get;
    std::function<void(RunConfig&, const json&)> set;
};

template <typename T>
Field field(T RunConfig::*member) {
    return {[member](const RunConfig& c) { return json(c.*member); },
            [member](RunConfig& c, const json& j) { c.*member = j.get<T>(); }};
}

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> f{
        {"command", field(&RunConfig::command)},
        {"omega1", field(&RunConfig::omega1)},
        {"omega2", field(&RunConfig::omega2)},
        {"g1", field(&RunConfig::g1)},
        {"g2", field(&RunConfig::g2)},
        {"omega_c", field(&RunConfig::omega_c)},
        {"n_tr", field(&RunConfig::n_tr)},
        {"element_tol", field(&RunConfig::element_tol)},
        {"sweep", field(&RunConfig::sweep)},
        {"method", field(&RunConfig::method)},
        {"parity", field(&RunConfig::parity)},
        {"levels", field(&RunConfig::levels)},
        {"m_max", field(&RunConfig::m_max)},
        {"tied", field(&RunConfig::tied)},
        {"cutoff", field(&RunConfig::cutoff)},
        {"gap_tol", field(&RunConfig::gap_tol)},
        {"fid_tol", field(&RunConfig::fid_tol)},
        {"max_gap", field(&RunConfig::max_gap)},
        {"observable", field(&RunConfig::observable)},
        {"z", field(&RunConfig::z)},
        {"tmin", field(&RunConfig::tmin)},
        {"tmax", field(&RunConfig::tmax)},
        {"samples", field(&RunConfig::samples)},
        {"initial", field(&RunConfig::initial)},
        {"m_cutoff", field(&RunConfig::m_cutoff)},
        {"ladder_max", field(&RunConfig::ladder_max)},
        {"schedule", field(&RunConfig::schedule)},
        {"tol", field(&RunConfig::tol)},
        {"out", field(&RunConfig::out)},
        {"format", field(&RunConfig::format)},
        {"workers", field(&RunConfig::workers)},
    };
    return f;
}

// ---- tables ----

struct Cell {
    std::string text;
    bool numeric;
};

Cell num(double v) { return {fmt(v), true}; }
Cell num(int v) { return {std::to_string(v), true}; }
Cell str(std::string s) { return {std::move(s), false}; }

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string render(const Table& t, const std::string& format) {
    std::ostringstream os;
    if (format == "json") {
        json arr = json::array();
        for (const auto& r : t.rows) {
            json o = json::object();
            for (size_t c = 0; c < t.columns.size(); ++c) {
                if (r[c].numeric)
                    o[t.columns[c]] = std::stod(r[c].text);
                else if (r[c].text == "true" || r[c].text == "false")
                    o[t.columns[c]] = r[c].text == "true";
                else
                    o[t.columns[c]] = r[c].text;
            }
            arr.push_back(o);
        }
        os << arr.dump(2) << "\n";
        return os.str();
    }
    for (size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << "\n";
    for (const auto& r : t.rows) {
        for (size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << r[c].text;
        os << "\n";
    }
    return os.str();
}

void emit(const Table& t, const RunConfig& cfg, std::ostream& out) {
    const std::string text = render(t, cfg.format);
    if (cfg.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw IoError("cannot open '" + cfg.out + "' for writing");
    f << text;
    if (!f) throw IoError("write to '" + cfg.out + "' failed");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::logic_error&) {
        throw InvalidArgument("cannot read " + what + " from '" + s + "'");
    }
}

std::vector<Parity> parities(const std::string& p) {
    if (p == "both") return {Parity::Even, Parity::Odd};
    if (p == "even") return {Parity::Even};
    if (p == "odd") return {Parity::Odd};
    throw InvalidArgument("parity must be even, odd or both");
}

std::vector<std::string> methods(const RunConfig& cfg, const std::string& fallback) {
    auto m = split(cfg.method.empty() ? fallback : cfg.method, ',');
    if (m.empty()) throw InvalidArgument("no method given");
    return m;
}

// sweep "name:lo:hi:steps"; steps == 0 means an empty table
SweepSpec sweep_spec(const RunConfig& cfg, int& steps) {
    auto parts = split(cfg.sweep, ':');
    if (parts.size() != 4) throw InvalidArgument("--sweep expects name:lo:hi:steps");
    SweepSpec s;
    s.parameter = parts[0];
    s.lo = to_double(parts[1], "sweep lower bound");
    s.hi = to_double(parts[2], "sweep upper bound");
    double st = to_double(parts[3], "sweep steps");
    if (st < 0 || st != std::floor(st)) throw InvalidArgument("sweep steps must be a whole number");
    steps = static_cast<int>(st);
    s.steps = std::max(steps, 2);
    s.parities = parities(cfg.parity);
    s.levels = cfg.levels;
    s.tied = cfg.tied;
    s.m_max = cfg.m_max;
    s.photon_cutoff = cfg.cutoff;
    s.workers = cfg.workers;
    return s;
}

Truncation truncation(const RunConfig& cfg) { return {cfg.n_tr, cfg.element_tol}; }

// ---- commands ----

Table run_spectrum(const RunConfig& cfg) {
    Table t{{"param", "parity", "level_index", "energy", "method"}, {}};
    int steps = 0;
    SweepSpec base = sweep_spec(cfg, steps);
    if (steps == 0) return t;
    for (const auto& m : methods(cfg, "ed")) {
        SweepSpec s = base;
        s.method = m;
        if (steps == 1) throw InvalidArgument("a sweep needs 0 or at least 2 steps");
        SweepTable tab = sweep_spectrum(cfg.model(), s, truncation(cfg));
        for (const auto& r : tab.rows)
            for (size_t k = 0; k < r.energies.size(); ++k)
                t.rows.push_back({num(r.param), str(to_string(r.parity)),
                                  num(static_cast<int>(k)), num(r.energies[k] * cfg.omega_c), str(m)});
    }
    return t;
}

ConfigBits initial_bits(const std::string& s) {
    if (s == "11") return 0b11;
    if (s == "10") return 0b10;
    if (s == "01") return 0b01;
    if (s == "00") return 0b00;
    throw InvalidArgument("initial must be one of 11, 10, 01, 00");
}

Table trace_table(const std::vector<DynamicsTrace>& traces) {
    Table t{{"t_over_2pi_omega1", "value", "observable", "method"}, {}};
    for (const auto& tr : traces)
        for (size_t k = 0; k < tr.times.size(); ++k)
            t.rows.push_back({num(tr.times[k]), num(tr.values[k]), str(to_string(tr.observable)),
                              str(tr.method)});
    return t;
}

Table run_dynamics(const RunConfig& cfg) {
    const ModelParams p = cfg.model();
    const Observable obs = observable_from_string(cfg.observable);
    if (obs == Observable::Concurrence) throw InvalidArgument("use the concurrence command");
    CoherentPrep prep{cfg.z, initial_bits(cfg.initial), cfg.m_cutoff};
    const auto taus = time_grid(cfg.tmin, cfg.tmax, cfg.samples);
    std::vector<DynamicsTrace> out;
    for (const auto& m : methods(cfg, "zeroth")) {
        if (m == "zeroth") {
            if (obs == Observable::Inversion && prep.initial_config == 0b10)
                out.push_back(inversion(p, prep, taus));
            else
                out.push_back(coherent_observable(p, prep, obs, taus));
        } else if (m == "closed-form") {
            if (prep.initial_config != 0b10)
                throw InvalidArgument("closed-form traces assume the initial state 10");
            out.push_back(revival_observable(p, cfg.z, obs, taus));
        } else if (m == "oracle") {
            out.push_back(oracle_observable(p, prep, obs, taus, cfg.cutoff));
        } else {
            throw InvalidArgument("dynamics method must be zeroth, closed-form or oracle");
        }
    }
    return trace_table(out);
}

Table run_concurrence(const RunConfig& cfg) {
    const ModelParams p = cfg.model();
    const auto taus = time_grid(cfg.tmin, cfg.tmax, cfg.samples);
    std::vector<DynamicsTrace> out;
    for (const auto& m : methods(cfg, "analytic"))
        out.push_back(concurrence_trace(p, cfg.z, taus, m, cfg.m_cutoff, cfg.cutoff));
    return trace_table(out);
}

Table run_crossings(const RunConfig& cfg) {
    Table t{{"param", "parity", "lower_level", "upper_level", "min_gap", "fidelity", "classification",
             "refined"},
            {}};
    int steps = 0;
    SweepSpec s = sweep_spec(cfg, steps);
    if (steps == 0) return t;
    if (steps == 1) throw InvalidArgument("a sweep needs 0 or at least 2 steps");
    if (!cfg.method.empty() && cfg.method != "ed") throw InvalidArgument("crossings use the ed method");
    s.method = "ed";
    SweepTable tab = sweep_spectrum(cfg.model(), s, truncation(cfg));
    CrossingOptions opt;
    opt.gap_tol = cfg.gap_tol;
    opt.fid_tol = cfg.fid_tol;
    opt.max_gap = cfg.max_gap;
    for (Parity par : s.parities)
        for (const auto& r : detect_crossings(tab, par, opt))
            t.rows.push_back({num(r.param), str(to_string(r.parity)), num(r.lower_level),
                              num(r.upper_level), num(r.min_gap * cfg.omega_c), num(r.fidelity),
                              str(r.classification), str(r.refined ? "true" : "false")});
    return t;
}

Table run_verify(const RunConfig& cfg) {
    Table t{{"condition", "energy", "parity", "frame", "residual", "membership_gap"}, {}};
    for (const auto& c : verify_quasi_exact(cfg.model(), truncation(cfg), cfg.ladder_max)) {
        std::string cond = c.state.condition;
        if (c.state.ladder_m >= 0) cond += "(" + std::to_string(c.state.ladder_m) + ")";
        const bool rot = c.state.state.frame == QuantumState::Frame::Rotated;
        t.rows.push_back({str(cond), num(c.state.energy * cfg.omega_c), str(to_string(c.state.parity)),
                          str(rot ? "rotated" : "unrotated"), num(c.residual * cfg.omega_c),
                          num(c.membership_gap * cfg.omega_c)});
    }
    return t;
}

Table run_converge(const RunConfig& cfg) {
    Table t{{"parity", "n_tr", "max_shift", "converged"}, {}};
    for (Parity par : parities(cfg.parity)) {
        ConvergenceResult r =
            convergence_check(cfg.model(), par, cfg.schedule, cfg.levels, cfg.tol, cfg.element_tol);
        for (const auto& row : r.rows)
            t.rows.push_back({str(to_string(par)), num(row.n_tr), num(row.max_shift * cfg.omega_c),
                              str(row.converged ? "true" : "false")});
    }
    return t;
}

int fail(std::ostream& err, const std::string& code, const std::string& msg, int rc) {
    err << "error[" << code << "]: " << msg << "\n";
    return rc;
}

}  // namespace

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void RunConfig::validate() const {
    static const std::vector<std::string> cmds{"spectrum", "dynamics", "concurrence",
                                               "crossings", "verify", "converge"};
    if (std::find(cmds.begin(), cmds.end(), command) == cmds.end())
        throw InvalidArgument("unknown or missing command '" + command + "'");
    if (format != "csv" && format != "json") throw InvalidArgument("format must be csv or json");
    if (n_tr < 0) throw InvalidArgument("n_tr must be >= 0");
    if (!(element_tol > 0.0)) throw InvalidArgument("element_tol must be positive");
    if (levels < 1) throw InvalidArgument("levels must be >= 1");
    if (samples < 1) throw InvalidArgument("samples must be >= 1");
    if (m_cutoff < 0) throw InvalidArgument("m_cutoff must be >= 0");
    if (workers < 0) throw InvalidArgument("workers must be >= 0");
    parities(parity);
    model().validate();
}

ModelParams RunConfig::model() const { return ModelParams::two_qubit(omega1, omega2, g1, g2, omega_c); }

std::string to_json(const RunConfig& c) {
    json j = json::object();
    for (const auto& [k, f] : fields()) j[k] = f.get(c);
    return j.dump(2);
}

RunConfig from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidArgument("config must be a flat JSON object");
    RunConfig c;
    for (const auto& [k, v] : j.items()) {
        auto it = fields().find(k);
        if (it == fields().end()) throw InvalidArgument("unknown config key '" + k + "'");
        try {
            it->second.set(c, v);
        } catch (const json::exception&) {
            throw InvalidArgument("config key '" + k + "' has the wrong type");
        }
    }
    return c;
}

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-qubit cavity model solver: spectra, dynamics, entanglement", "tcsolve"};
    app.require_subcommand(0, 1);

    RunConfig flags;
    std::string config_path;
    bool dump_config = false;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;
    auto opt = [&](const std::string& name, auto RunConfig::*member, const std::string& help) {
        CLI::Option* o = app.add_option(name, flags.*member, help);
        overrides.push_back({o, [member, &flags](RunConfig& c) { c.*member = flags.*member; }});
        return o;
    };

    app.add_option("--config", config_path, "flat JSON config; flags override its values");
    app.add_flag("--dump-config", dump_config, "print the effective config as JSON and exit");
    opt("--omega1", &RunConfig::omega1, "qubit 1 splitting (units of omega_c)");
    opt("--omega2", &RunConfig::omega2, "qubit 2 splitting");
    opt("--g1", &RunConfig::g1, "qubit 1 coupling");
    opt("--g2", &RunConfig::g2, "qubit 2 coupling");
    opt("--omega-c", &RunConfig::omega_c, "scale applied to reported energies");
    opt("--n-tr", &RunConfig::n_tr, "displaced-basis truncation");
    opt("--element-tol", &RunConfig::element_tol, "neglect threshold for matrix elements");
    opt("--sweep", &RunConfig::sweep, "name:lo:hi:steps with name in g1,g2,beta1,omega1,omega2");
    opt("--method", &RunConfig::method, "comma list of methods");
    opt("--parity", &RunConfig::parity, "even, odd or both");
    opt("--levels", &RunConfig::levels, "levels per parity");
    opt("--m-max", &RunConfig::m_max, "highest block for analytic spectra");
    overrides.push_back({app.add_flag("--tied", flags.tied, "beta1 sweep with g1 = g2 = beta1/2"),
                         [&flags](RunConfig& c) { c.tied = flags.tied; }});
    opt("--cutoff", &RunConfig::cutoff, "photon cutoff for oracle methods (-1 = heuristic)");
    opt("--gap-tol", &RunConfig::gap_tol, "gap below which a minimum counts as a crossing");
    opt("--fid-tol", &RunConfig::fid_tol, "fidelity below which a minimum counts as a crossing");
    opt("--max-gap", &RunConfig::max_gap, "ignore gap minima above this");
    opt("--observable", &RunConfig::observable, "p10, p11, p01, p00 or inversion");
    opt("--z", &RunConfig::z, "coherent amplitude");
    opt("--tmin", &RunConfig::tmin, "start of the omega_1 t / 2 pi window");
    opt("--tmax", &RunConfig::tmax, "end of the omega_1 t / 2 pi window");
    opt("--samples", &RunConfig::samples, "time samples");
    opt("--initial", &RunConfig::initial, "initial qubit config, qubit 2 first");
    opt("--m-cutoff", &RunConfig::m_cutoff, "largest block in Poisson sums");
    opt("--ladder-max", &RunConfig::ladder_max, "highest singlet rung to verify");
    opt("--schedule", &RunConfig::schedule, "increasing n_tr values")->delimiter(',');
    opt("--tol", &RunConfig::tol, "convergence tolerance");
    opt("--out", &RunConfig::out, "output path (default stdout)");
    opt("--format", &RunConfig::format, "csv or json");
    opt("--workers", &RunConfig::workers, "threads for sweeps (0 = all cores)");

    for (const char* name : {"spectrum", "dynamics", "concurrence", "crossings", "verify", "converge"})
        app.add_subcommand(name)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        return fail(err, "usage", e.what(), 1);
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw IoError("cannot read config '" + config_path + "'");
            std::stringstream ss;
            ss << f.rdbuf();
            cfg = from_json(ss.str());
        }
        for (auto& [o, copy] : overrides)
            if (o->count() > 0) copy(cfg);
        if (!app.get_subcommands().empty()) cfg.command = app.get_subcommands().front()->get_name();
        cfg.validate();
        if (dump_config) {
            out << to_json(cfg) << "\n";
            return 0;
        }

        Table t;
        if (cfg.command == "spectrum") t = run_spectrum(cfg);
        else if (cfg.command == "dynamics") t = run_dynamics(cfg);
        else if (cfg.command == "concurrence") t = run_concurrence(cfg);
        else if (cfg.command == "crossings") t = run_crossings(cfg);
        else if (cfg.command == "verify") t = run_verify(cfg);
        else t = run_converge(cfg);
        emit(t, cfg, out);
        return 0;
    } catch (const IoError& e) {
        return fail(err, "io", e.what(), 1);
    } catch (const InvalidArgument& e) {
        return fail(err, "invalid-argument", e.what(), 1);
    } catch (const CutoffError& e) {
        return fail(err, "cutoff", e.what(), 2);
    } catch (const ConvergenceError& e) {
        return fail(err, "convergence", e.what(), 2);
    } catch (const NumericalError& e) {
        return fail(err, "numerical", e.what(), 2);
    }
}

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace tcq::cli
