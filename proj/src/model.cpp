#include "tcq/model.hpp"

#include <cmath>

#include "tcq/errors.hpp"

namespace tcq {

std::string to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

ModelParams ModelParams::two_qubit(double omega1, double omega2, double g1, double g2,
                                   double omega_c) {
    ModelParams p;
    p.n_qubits = 2;
    p.omega_c = omega_c;
    p.omegas = {omega1, omega2};
    p.couplings = {g1, g2};
    return p;
}

void ModelParams::validate() const {
    if (n_qubits < 1 || n_qubits > 20)
        throw InvalidArgument("n_qubits must be in [1, 20]");
    if (!(omega_c > 0.0)) throw InvalidArgument("omega_c must be positive");
    if (static_cast<int>(omegas.size()) != n_qubits ||
        static_cast<int>(couplings.size()) != n_qubits)
        throw InvalidArgument("omegas and couplings need exactly n_qubits entries");
    for (double w : omegas)
        if (!(w >= 0.0) || !std::isfinite(w))
            throw InvalidArgument("qubit splittings must be finite and >= 0");
    for (double g : couplings)
        if (!std::isfinite(g)) throw InvalidArgument("couplings must be finite");
}

std::string SpinConfig::label(int n_qubits) const {
    std::string s;
    for (int j = n_qubits - 1; j >= 0; --j) s += ((bits >> j) & 1u) ? '1' : '0';
    return s;
}

double config_beta(const ModelParams& params, ConfigBits bits) {
    double b = 0.0;
    for (int j = 0; j < params.n_qubits; ++j)
        b += ((bits >> j) & 1u) ? params.couplings[j] : -params.couplings[j];
    return b;
}

std::vector<KeptPair> kept_configs(const ModelParams& params) {
    params.validate();
    const int n = params.n_qubits;
    const ConfigBits full = (ConfigBits{1} << n) - 1;
    std::vector<KeptPair> out;
    out.reserve(params.n_kept());
    for (int i = 0; i < params.n_kept(); ++i) {
        ConfigBits kb = full - static_cast<ConfigBits>(i);
        ConfigBits pb = full ^ kb;
        out.push_back({{kb, config_beta(params, kb)}, {pb, config_beta(params, pb)}});
    }
    return out;
}

double displaced_overlap(int m, int n, double beta_ij) {
    if (m < 0 || n < 0) throw InvalidArgument("displaced_overlap: negative quantum number");
    if (beta_ij == 0.0) return m == n ? 1.0 : 0.0;
    // canonical order m >= n; the swap costs (-1)^(m+n)
    double swap_sign = 1.0;
    if (m < n) {
        std::swap(m, n);
        if ((m + n) & 1) swap_sign = -1.0;
    }
    const int alpha = m - n;
    const double x = beta_ij * beta_ij;

    // L_n^(alpha)(x), upward three-term recurrence
    double l_prev = 1.0, l_cur = 1.0 + alpha - x;
    if (n == 0) l_cur = 1.0;
    for (int k = 1; k < n; ++k) {
        double l_next = ((2.0 * k + 1.0 + alpha - x) * l_cur - (k + alpha) * l_prev) / (k + 1.0);
        l_prev = l_cur;
        l_cur = l_next;
    }

    double log_pref = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)) +
                      alpha * std::log(std::fabs(beta_ij)) - 0.5 * x;
    double sgn = (beta_ij < 0.0 && (alpha & 1)) ? -1.0 : 1.0;
    return swap_sign * sgn * std::exp(log_pref) * l_cur;
}

Eigen::MatrixXd overlap_table(double beta_ij, int size) {
    Eigen::MatrixXd t(size, size);
    for (int m = 0; m < size; ++m)
        for (int n = 0; n <= m; ++n) {
            double v = displaced_overlap(m, n, beta_ij);
            t(m, n) = v;
            t(n, m) = ((m + n) & 1) ? -v : v;
        }
    return t;
}

double omega_element(const ModelParams& params, const Truncation& trunc, Parity kappa, int i,
                     int m, int j, int n) {
    const int K = params.n_kept();
    if (i < 0 || i >= K || j < 0 || j >= K)
        throw InvalidArgument("omega_element: kept index out of range");
    if (m < 0 || n < 0 || m > trunc.n_tr || n > trunc.n_tr)
        throw InvalidArgument("omega_element: quantum number outside truncation");

    const int N = params.n_qubits;
    const ConfigBits full = (ConfigBits{1} << N) - 1;
    const ConfigBits bi = full - static_cast<ConfigBits>(i);
    const ConfigBits bj = full - static_cast<ConfigBits>(j);
    const double beta_i = config_beta(params, bi);
    const double beta_j = config_beta(params, bj);
    const double fold = sign(kappa) * ((n & 1) ? -1.0 : 1.0);

    double acc = 0.0;
    for (int b = 0; b < N; ++b) {
        ConfigBits c = bi ^ (ConfigBits{1} << b);
        double half_w = -0.5 * params.omegas[b];
        if (c == bj) acc += half_w * displaced_overlap(m, n, beta_i - beta_j);
        if (c == (full ^ bj)) acc += half_w * fold * displaced_overlap(m, n, beta_i + beta_j);
    }
    return acc;
}

}  // namespace tcq
