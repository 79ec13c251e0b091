#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "spiderweb/escape.hpp"
#include "spiderweb/growth_checks.hpp"
#include "spiderweb/levels.hpp"
#include "spiderweb/rings.hpp"
#include "spiderweb/util.hpp"

namespace spiderweb {

enum class WebVerdict { spiders_web_evidence, not_spiders_web_evidence, inconclusive };

inline const char* to_string(WebVerdict v) {
    switch (v) {
        case WebVerdict::spiders_web_evidence: return "spiders_web_evidence";
        case WebVerdict::not_spiders_web_evidence: return "not_spiders_web_evidence";
        case WebVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct FalsifyRow {
    double r = 0.0;
    double log_min = 0.0;  // sampled upper bound on log m(L,S_r)
    cplx argmin;
    bool pass = false;  // log_min <= log K + slack
};

struct FalsifyReport {
    double K = 0.0;
    std::vector<FalsifyRow> rows;
    bool all_pass = false;
};

struct WebReport {
    std::string case_label;
    double K = 0.0;
    double R = 0.0;
    double R_1 = 0.0;
    std::vector<RingCertificate> certificates;
    std::vector<bool> nesting_ok;
    std::vector<bool> containment_ok;
    WebVerdict verdict = WebVerdict::inconclusive;
    bool depth_capped = false;
    FalsifyReport falsify;            // filled on the negative path
    std::vector<double> log_r_seq;    // log r_n ladder the rings were built on
};

// Positive direction of the dichotomy: for n = 1..depth build the ring at
// r_n with m = d and check
//   containment: min |z| on the ring exceeds M^n(L,R), and
//   nesting:     log m(L, Gamma^{r_n}) > d log r_{n+1}.
inline WebReport build_web(const LinearizerSeries& s, const Polynomial& p, const LevelParams& params,
                           int depth, CurveScaling& cs, int samples = 1024) {
    WebReport report;
    report.R = params.R;
    report.R_1 = params.R_1;
    report.K = filled_julia_bound(p);
    report.depth_capped = params.depth_capped;
    if (depth <= 0) return report;
    if (params.available_depth() < depth + 1)
        throw PreconditionError("build_web: level parameters too shallow for the requested depth");

    const int d = p.degree();
    report.log_r_seq.assign(params.r_seq.begin(),
                            params.r_seq.begin() + std::min<std::size_t>(params.r_seq.size(),
                                                                         static_cast<std::size_t>(depth) + 1));
    bool all_ok = true;
    for (int n = 1; n <= depth; ++n) {
        double log_rn = params.r_seq[static_cast<std::size_t>(n) - 1];
        RingCertificate cert = ring_certificate(s, p, cs, log_rn, d, samples);
        cert.n = n;
        double ring_min_logabs = std::log(cs.s) + static_cast<double>(cert.l_t) *
                                                      std::log(std::abs(s.lambda));
        bool contain = ring_min_logabs > params.u_hi[static_cast<std::size_t>(n) - 1];
        double log_rn1 = params.r_seq[static_cast<std::size_t>(n)];
        double rhs = d * log_rn1;
        bool nest = rhs > 0.0 ? cert.log_min_on_ring > rhs * kGrowthSlack
                              : cert.log_min_on_ring > rhs;
        report.certificates.push_back(cert);
        report.containment_ok.push_back(contain);
        report.nesting_ok.push_back(nest);
        all_ok = all_ok && cert.verdict && cert.verdict_slacked && contain && nest;
    }
    report.verdict = all_ok ? WebVerdict::spiders_web_evidence : WebVerdict::inconclusive;
    return report;
}

// The dichotomy holds for every base radius satisfying condition (1), and the
// fast-growth inequality behind the nesting check only enters its asymptotic
// regime once the base is deep enough (it needs n > k). When the shallowest
// ring fails at R = max(R_L, R_1), rebase at lambda * M(L,R) = r_1 and retry.
inline WebReport certify_web(const LinearizerSeries& s, const Polynomial& p,
                             const LevelParams& params0, int depth, CurveScaling& cs,
                             int samples = 1024, int max_boosts = 3) {
    LevelParams params = params0;
    WebReport last;
    for (int boost = 0; boost <= max_boosts; ++boost) {
        try {
            last = build_web(s, p, params, depth, cs, samples);
        } catch (const PreconditionError&) {
            break;  // ladder too shallow to rebase further
        }
        if (last.verdict == WebVerdict::spiders_web_evidence) return last;
        if (params.r_seq.empty()) break;
        params = level_params_from_base(s, p, std::exp(params.r_seq.front()), params.R_L,
                                        params.R_1, params.depth, samples);
    }
    return last;
}

// Negative direction: every sampled circle carries a point whose image stays
// inside the K-disk, the numerical shadow of L(bd G_n) meeting the filled
// Julia set.
inline FalsifyReport falsify_web(const LinearizerSeries& s, const Polynomial& p, double K,
                                 const std::vector<double>& radii, int samples = 1024,
                                 double log_slack = 1e-6) {
    if (!(K > 0.0)) throw PreconditionError("falsify_web: K must be positive");
    Evaluator ev(s, p);
    FalsifyReport rep;
    rep.K = K;
    rep.all_pass = true;
    for (double r : radii) {
        CircleExtremum mn = circle_extremum(ev, std::log(r), samples, false);
        FalsifyRow row;
        row.r = r;
        row.log_min = mn.hi;  // certified upper bound on the sampled point
        row.argmin = r * cplx(std::cos(mn.theta), std::sin(mn.theta));
        row.pass = row.log_min <= std::log(K) + log_slack;
        rep.rows.push_back(row);
        rep.all_pass = rep.all_pass && row.pass;
    }
    return rep;
}

// JSON with a fixed field order and 17-significant-digit reals, so repeated
// runs are byte-identical.
inline std::string web_report_json(const WebReport& rep) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"case_label\": \"" << rep.case_label << "\",\n";
    os << "  \"K\": " << fmt17(rep.K) << ",\n";
    os << "  \"R\": " << fmt17(rep.R) << ",\n";
    os << "  \"R_1\": " << fmt17(rep.R_1) << ",\n";
    os << "  \"certificates\": [";
    for (std::size_t i = 0; i < rep.certificates.size(); ++i) {
        const auto& c = rep.certificates[i];
        os << (i ? ",\n    " : "\n    ");
        os << "{\"n\": " << c.n << ", \"l_t\": " << c.l_t
           << ", \"log_min_on_ring\": " << fmt17(c.log_min_on_ring)
           << ", \"log_max_inner\": " << fmt17(c.log_max_inner)
           << ", \"separates\": " << (c.separates ? "true" : "false")
           << ", \"verdict\": " << (c.verdict ? "true" : "false") << "}";
    }
    os << (rep.certificates.empty() ? "],\n" : "\n  ],\n");
    auto bools = [&os](const char* name, const std::vector<bool>& v) {
        os << "  \"" << name << "\": [";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << (v[i] ? "true" : "false");
        os << "],\n";
    };
    bools("nesting_ok", rep.nesting_ok);
    bools("containment_ok", rep.containment_ok);
    os << "  \"verdict\": \"" << to_string(rep.verdict) << "\"\n";
    os << "}\n";
    return os.str();
}

}  // namespace spiderweb
