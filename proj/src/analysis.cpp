#include "tcq/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include "tcq/errors.hpp"

namespace tcq {

namespace {

int block_order(const std::string& method) {
    if (method.rfind("block-", 0) != 0) return -1;
    try {
        size_t used = 0;
        int k = std::stoi(method.substr(6), &used);
        if (used != method.size() - 6 || k < 0) throw InvalidArgument("bad block order");
        return k;
    } catch (const std::logic_error&) {
        throw InvalidArgument("method '" + method + "' has no valid block order");
    }
}

std::vector<double> lowest(std::vector<double> e, int n) {
    std::sort(e.begin(), e.end());
    if (static_cast<int>(e.size()) > n) e.resize(n);
    return e;
}

std::map<Parity, std::vector<double>> point_levels(const ModelParams& p, const SweepSpec& spec,
                                                   const Truncation& trunc) {
    std::map<Parity, std::vector<double>> out;
    if (spec.method == "fock-oracle") {
        int cutoff = spec.photon_cutoff >= 0 ? spec.photon_cutoff : oracle_cutoff(p) + spec.levels;
        SpectrumResult r = solve_fock_oracle(p, cutoff);
        for (Parity k : spec.parities) out[k] = lowest(r.energies(k), spec.levels);
        return out;
    }
    for (Parity k : spec.parities) {
        std::vector<double> e;
        if (spec.method == "ed") {
            e = solve_ed(p, k, trunc).energies();
        } else if (spec.method == "zeroth") {
            for (const auto& z : zeroth_spectrum(p, k, spec.m_max)) e.push_back(z.energy);
        } else if (spec.method == "first") {
            for (const auto& f : first_order_spectrum(p, k, spec.m_max)) e.push_back(f.energy);
        } else {
            e = block_truncated_spectrum(p, k, block_order(spec.method), spec.m_max).energies();
        }
        out[k] = lowest(std::move(e), spec.levels);
    }
    return out;
}

double ed_gap(const ModelParams& base, const SweepSpec& spec, const Truncation& trunc, Parity k,
              int lower, double p) {
    SpectrumResult r = solve_ed(apply_parameter(base, spec, p), k, trunc);
    return r.levels.at(lower + 1).energy - r.levels.at(lower).energy;
}

}  // namespace

void SweepSpec::validate() const {
    static const std::vector<std::string> names{"g1", "g2", "beta1", "omega1", "omega2"};
    if (std::find(names.begin(), names.end(), parameter) == names.end())
        throw InvalidArgument("unknown sweep parameter '" + parameter + "'");
    if (!(lo < hi)) throw InvalidArgument("sweep needs lo < hi");
    if (steps < 2) throw InvalidArgument("sweep needs at least 2 steps");
    if (levels < 1) throw InvalidArgument("levels must be >= 1");
    if (parities.empty()) throw InvalidArgument("no parity selected");
    if (method != "ed" && method != "fock-oracle" && method != "zeroth" && method != "first" &&
        block_order(method) < 0)
        throw InvalidArgument("unknown method '" + method + "'");
    if ((method == "zeroth" || method == "first" || block_order(method) >= 0) && m_max < 1)
        throw InvalidArgument("m_max must be >= 1");
}

ModelParams apply_parameter(const ModelParams& base, const SweepSpec& spec, double value) {
    ModelParams p = base;
    if (p.n_qubits != 2 && (spec.parameter == "g2" || spec.parameter == "omega2" ||
                            spec.parameter == "beta1"))
        throw InvalidArgument("sweep parameter needs two qubits");
    if (spec.parameter == "g1") p.couplings[0] = value;
    else if (spec.parameter == "g2") p.couplings[1] = value;
    else if (spec.parameter == "omega1") p.omegas[0] = value;
    else if (spec.parameter == "omega2") p.omegas[1] = value;
    else if (spec.parameter == "beta1") {
        if (spec.tied) {
            p.couplings[0] = 0.5 * value;
            p.couplings[1] = 0.5 * value;
        } else {
            p.couplings[1] = value - p.couplings[0];
        }
    } else {
        throw InvalidArgument("unknown sweep parameter '" + spec.parameter + "'");
    }
    return p;
}

SweepTable sweep_spectrum(const ModelParams& base, const SweepSpec& spec, const Truncation& trunc) {
    spec.validate();
    base.validate();
    SweepTable table;
    table.base = base;
    table.spec = spec;
    table.trunc = trunc;
    table.method = spec.method;

    const int n = spec.steps;
    std::vector<double> grid(n);
    for (int k = 0; k < n; ++k) grid[k] = spec.lo + (spec.hi - spec.lo) * k / (n - 1.0);

    std::vector<std::map<Parity, std::vector<double>>> results(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<int> next{0};
    auto work = [&] {
        for (int k = next++; k < n; k = next++) {
            try {
                results[k] = point_levels(apply_parameter(base, spec, grid[k]), spec, trunc);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    int nw = spec.workers > 0 ? spec.workers : static_cast<int>(std::thread::hardware_concurrency());
    nw = std::clamp(nw, 1, n);
    std::vector<std::thread> pool;
    for (int w = 1; w < nw; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    // curve labels follow nearest-energy matching between neighbouring points
    std::map<Parity, std::vector<int>> prev_track;
    std::map<Parity, int> fresh;
    for (int k = 0; k < n; ++k) {
        for (Parity par : spec.parities) {
            SweepRow row;
            row.param = grid[k];
            row.parity = par;
            row.energies = results[k][par];
            row.track.assign(row.energies.size(), -1);
            if (k == 0) {
                for (size_t j = 0; j < row.track.size(); ++j) row.track[j] = fresh[par]++;
            } else {
                const auto m = match_levels(results[k - 1][par], row.energies);
                for (size_t i = 0; i < m.size(); ++i)
                    if (m[i] >= 0) row.track[m[i]] = prev_track[par][i];
                for (int& t : row.track)
                    if (t < 0) t = fresh[par]++;
            }
            prev_track[par] = row.track;
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

double fidelity(const QuantumState& a, const QuantumState& b) {
    return std::clamp(std::norm(inner(a, b)), 0.0, 1.0);
}

double subspace_fidelity(const QuantumState& a, const std::vector<QuantumState>& subspace) {
    double f = 0.0;
    for (const auto& b : subspace) f += std::norm(inner(b, a));
    return std::clamp(f, 0.0, 1.0);
}

std::vector<CrossingReport> detect_crossings(const SweepTable& table, Parity parity,
                                             const CrossingOptions& opt) {
    if (table.method != "ed") throw InvalidArgument("crossing detection needs an ed sweep");
    std::vector<const SweepRow*> rows;
    for (const auto& r : table.rows)
        if (r.parity == parity) rows.push_back(&r);
    std::vector<CrossingReport> out;
    if (rows.size() < 3) return out;

    size_t nl = rows.front()->energies.size();
    for (const auto* r : rows) nl = std::min(nl, r->energies.size());

    for (size_t l = 0; l + 1 < nl; ++l) {
        std::vector<double> gap(rows.size());
        for (size_t k = 0; k < rows.size(); ++k)
            gap[k] = rows[k]->energies[l + 1] - rows[k]->energies[l];
        for (size_t k = 1; k + 1 < rows.size(); ++k) {
            if (!(gap[k] <= gap[k - 1] && gap[k] < gap[k + 1])) continue;
            if (gap[k] > opt.max_gap) continue;

            CrossingReport rep;
            rep.parity = parity;
            rep.lower_level = static_cast<int>(l);
            rep.upper_level = static_cast<int>(l + 1);

            // golden-section search on the bracket
            double a = rows[k - 1]->param, b = rows[k + 1]->param;
            const double ir = (std::sqrt(5.0) - 1.0) / 2.0;
            double x1 = b - ir * (b - a), x2 = a + ir * (b - a);
            double f1 = ed_gap(table.base, table.spec, table.trunc, parity, l, x1);
            double f2 = ed_gap(table.base, table.spec, table.trunc, parity, l, x2);
            while (b - a > 1e-9) {
                if (f1 < f2) {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - ir * (b - a);
                    f1 = ed_gap(table.base, table.spec, table.trunc, parity, l, x1);
                } else {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + ir * (b - a);
                    f2 = ed_gap(table.base, table.spec, table.trunc, parity, l, x2);
                }
            }
            double xs = 0.5 * (a + b);
            double fs = ed_gap(table.base, table.spec, table.trunc, parity, l, xs);
            const double lo_end = rows[k - 1]->param, hi_end = rows[k + 1]->param;
            const double edge = 1e-6 * (hi_end - lo_end);
            if (xs - lo_end < edge || hi_end - xs < edge || fs > gap[k] * (1.0 + 1e-9)) {
                rep.refined = false;
                rep.warning = "gap not unimodal on the bracket; reporting the grid point";
                xs = rows[k]->param;
                fs = gap[k];
            }
            rep.param = xs;
            rep.min_gap = fs;

            // fidelity probe on both sides, in the plain Fock basis
            const ModelParams pl = apply_parameter(table.base, table.spec, xs - opt.fid_step);
            const ModelParams pr = apply_parameter(table.base, table.spec, xs + opt.fid_step);
            const SpectrumResult el = solve_ed(pl, parity, table.trunc);
            const SpectrumResult er = solve_ed(pr, parity, table.trunc);
            double bmax = 0.0;
            for (double v : el.kept_betas) bmax = std::max(bmax, std::fabs(v));
            for (double v : er.kept_betas) bmax = std::max(bmax, std::fabs(v));
            const int cutoff = table.trunc.n_tr + static_cast<int>(std::ceil(8.0 * bmax)) + 20;
            double fl = fidelity(to_fock_representation(displaced_state(el, l), cutoff),
                                 to_fock_representation(displaced_state(er, l), cutoff));
            double fu = fidelity(to_fock_representation(displaced_state(el, l + 1), cutoff),
                                 to_fock_representation(displaced_state(er, l + 1), cutoff));
            rep.fidelity = std::max(fl, fu);
            if (rep.min_gap < opt.gap_tol && rep.fidelity < opt.fid_tol)
                rep.classification = "crossing";
            else if (rep.fidelity >= opt.avoided_fid)
                rep.classification = "avoided";
            else
                rep.classification = "ambiguous";
            out.push_back(rep);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const CrossingReport& x, const CrossingReport& y) {
        return x.param < y.param;
    });
    return out;
}

std::vector<QuasiExactCheck> verify_quasi_exact(const ModelParams& params, const Truncation& trunc,
                                                int max_ladder) {
    std::vector<QuasiExactCheck> out;
    auto states = quasi_exact_states(params, trunc);
    if (states.empty()) return out;
    std::map<Parity, std::vector<double>> ed;
    for (Parity k : {Parity::Even, Parity::Odd}) ed[k] = solve_ed(params, k, trunc).energies();
    for (auto& s : states) {
        if (max_ladder >= 0 && s.ladder_m > max_ladder) continue;
        QuasiExactCheck c;
        c.residual = eigen_residual(params, s.state, s.energy);
        double best = std::numeric_limits<double>::infinity();
        for (double e : ed[s.parity]) best = std::min(best, std::fabs(e - s.energy));
        c.membership_gap = best;
        c.state = std::move(s);
        out.push_back(std::move(c));
    }
    return out;
}

ConvergenceResult convergence_check(const ModelParams& params, Parity kappa,
                                    const std::vector<int>& schedule, int levels, double tol,
                                    double element_tol) {
    if (levels < 1) throw InvalidArgument("levels must be >= 1");
    if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
    for (size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i] <= schedule[i - 1]) throw InvalidArgument("schedule must be increasing");
    ConvergenceResult res;
    std::map<int, std::vector<double>> cache;
    auto lev = [&](int ntr) -> const std::vector<double>& {
        auto it = cache.find(ntr);
        if (it == cache.end()) {
            Truncation t{ntr, element_tol};
            it = cache.emplace(ntr, lowest(solve_ed(params, kappa, t).energies(), levels)).first;
        }
        return it->second;
    };
    for (size_t i = 0; i + 1 < schedule.size(); ++i) {
        if (params.n_kept() * (schedule[i] + 1) < levels) continue;
        const auto& a = lev(schedule[i]);
        const auto& b = lev(schedule[i + 1]);
        double shift = 0.0;
        for (int k = 0; k < levels; ++k) shift = std::max(shift, std::fabs(a[k] - b[k]));
        ConvergenceRow row{schedule[i], shift, shift < tol};
        res.rows.push_back(row);
        if (row.converged) {
            res.n_tr = schedule[i];
            return res;
        }
    }
    throw ConvergenceError("lowest levels did not settle within the truncation schedule");
}

}  // namespace tcq
