#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "spiderweb/levels.hpp"
#include "spiderweb/profile.hpp"
#include "spiderweb/util.hpp"

namespace spiderweb {

inline constexpr double kGrowthSlack = 1.01;

// --- regularity of growth -----------------------------------------------------
// Checks, for each n, that log M(L,|lambda|^n r) / log M(L,r) lies between
// prod_{i<n}(d + k_eps / log M_i) and prod_{i<n}(d + K_eps / log M_i), with a
// 1% multiplicative slack absorbing circle-sampling error.

struct RegularityRow {
    int n = 0;
    double lower = 0.0;
    double ratio = 0.0;
    double upper = 0.0;
    bool pass = false;
};

struct RegularityTable {
    double r = 0.0;
    std::vector<RegularityRow> rows;
    bool all_pass = false;
};

inline RegularityTable verify_regularity(const LinearizerSeries& s, const Polynomial& p,
                                         const GrowthBounds& gb, double r, int n_max,
                                         double R_L = 0.0, int samples = 1024) {
    if (!(r > std::max(gb.R_eps, R_L)))
        throw PreconditionError("verify_regularity: need r > max(R_eps, R_L)");
    Evaluator ev(s, p);
    const double log_lambda = std::log(std::abs(s.lambda));
    std::vector<double> logM(static_cast<std::size_t>(n_max) + 1);
    for (int i = 0; i <= n_max; ++i)
        logM[i] = log_max_modulus(ev, std::log(r) + i * log_lambda, samples);

    RegularityTable table;
    table.r = r;
    const double d = p.degree();
    double lower = 1.0, upper = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        lower *= d + gb.k_eps / logM[n - 1];
        upper *= d + gb.K_eps / logM[n - 1];
        RegularityRow row;
        row.n = n;
        row.lower = lower;
        row.upper = upper;
        row.ratio = logM[n] / logM[0];
        row.pass = (lower / kGrowthSlack <= row.ratio) && (row.ratio <= upper * kGrowthSlack);
        table.rows.push_back(row);
    }
    table.all_pass = true;
    for (const auto& row : table.rows) table.all_pass = table.all_pass && row.pass;
    return table;
}

// --- fast growth of the r_n sequence -------------------------------------------
// Checks log M(L,r_n) > m log r_{n+1}. Direct route samples M(L,r_n); when the
// tower leaves double range (or the pullback budget) the check falls back to
// the certified bound log M(L,r_n) >= d^n u_{n+1} + q_n(d) k_eps, which
// factors the inequality into u_{n+1} (d^n - m) > m(n+1) log|lambda| -
// q_n(d) k_eps, needing only a lower bound on u_{n+1} = log M^{n+1}(L,R).

struct FastGrowthRow {
    int n = 0;
    int m = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass_raw = false;
    bool pass = false;  // with slack on the dominant side
    std::string mode;   // "direct" or "bound"
};

struct FastGrowthTable {
    int k = 1;
    std::vector<FastGrowthRow> rows;
    bool all_pass = false;
};

// Sufficient R_k from the proof: log R_k > max{2|k_eps|, (2k/d)|k_eps|,
// sqrt(e) log|lambda| / ((2-sqrt(e))(k+2))}.
inline double fast_growth_Rk(const Polynomial& p, const LinearizerSeries& s, const GrowthBounds& gb,
                       int k) {
    const double ke = std::abs(gb.k_eps);
    const double d = p.degree();
    const double sqe = std::sqrt(std::exp(1.0));
    double log_rk = std::max({2.0 * ke, (2.0 * k / d) * ke,
                              sqe * std::log(std::abs(s.lambda)) / ((2.0 - sqe) * (k + 2))});
    return std::exp(log_rk);
}

inline FastGrowthTable verify_fast_growth(const LinearizerSeries& s, const Polynomial& p, int k,
                                          const LevelParams& params,
                                          const std::vector<int>& ns, const std::vector<int>& ms,
                                          int samples = 1024) {
    const int d = p.degree();
    const double dk = std::pow(static_cast<double>(d), k);
    GrowthBounds gb = make_growth_bounds(p);
    if (k >= 2 && !(params.R > fast_growth_Rk(p, s, gb, k)))
        throw PreconditionError("verify_fast_growth: R below the R_k threshold");
    if (k == 1 && !(params.R > params.R_1))
        throw PreconditionError("verify_fast_growth: R must exceed R_1");

    Evaluator ev(s, p);
    const double log_lambda = std::log(std::abs(s.lambda));
    FastGrowthTable table;
    table.k = k;
    for (int n : ns) {
        if (!(n > k)) throw PreconditionError("verify_fast_growth: need n > k");
        for (int m : ms) {
            if (!(m >= 2 && m <= dk))
                throw PreconditionError("verify_fast_growth: need 2 <= m <= d^k");
            FastGrowthRow row;
            row.n = n;
            row.m = m;
            bool direct = n + 1 <= params.available_depth() && n <= params.available_depth();
            if (direct) {
                double log_rn = params.r_seq[static_cast<std::size_t>(n) - 1];
                double log_rn1 = params.r_seq[static_cast<std::size_t>(n)];
                try {
                    CircleExtremum mx = circle_extremum(ev, log_rn, samples, true);
                    row.lhs = mx.lo;
                    row.rhs = m * log_rn1;
                    row.mode = "direct";
                } catch (const NumericError&) {
                    direct = false;
                }
            }
            if (!direct) {
                // deepest available u as the condition-(1) lower bound on u_{n+1}
                if (params.u_lo.empty())
                    throw NumericError("verify_fast_growth: no M-ladder available");
                std::size_t j = std::min<std::size_t>(params.u_lo.size(),
                                                      static_cast<std::size_t>(n) + 1);
                double u_lb = params.u_lo[j - 1];
                double dn = std::pow(static_cast<double>(d), n);
                double qn = q_n(d, n);
                row.lhs = u_lb * (dn - m) + qn * gb.k_eps;
                row.rhs = m * (n + 1.0) * log_lambda;
                row.mode = "bound";
            }
            row.pass_raw = row.lhs > row.rhs;
            row.pass = row.lhs > row.rhs * kGrowthSlack ||
                       (row.rhs <= 0.0 && row.lhs > row.rhs);
            table.rows.push_back(row);
        }
    }
    table.all_pass = !table.rows.empty();
    for (const auto& row : table.rows) table.all_pass = table.all_pass && row.pass;
    return table;
}

}  // namespace spiderweb
