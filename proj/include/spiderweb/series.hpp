#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spiderweb/affine.hpp"
#include "spiderweb/polynomial.hpp"
#include "spiderweb/roots.hpp"
#include "spiderweb/util.hpp"

namespace spiderweb {

// Truncated Taylor expansion at 0 of the linearizer L: L(0) = z0,
// p(L(z)) = L(lambda z), coeffs[n] = c_n with c_0 = z0, c_1 = normalization.
struct LinearizerSeries {
    cplx z0;
    cplx lambda;
    std::vector<cplx> coeffs;  // c_0 .. c_N
    cplx normalization{1.0, 0.0};
    double r0 = 0.0;  // validated evaluation radius (0 until validated)
    double residual_tol = 1e-8;

    int order() const { return static_cast<int>(coeffs.size()) - 1; }

    cplx eval(cplx z) const {
        cplx v = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) v = v * z + coeffs[i];
        return v;
    }
    cplx eval_prime(cplx z) const {
        cplx v = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 1;) v = v * z + coeffs[i] * static_cast<double>(i);
        return v;
    }
    cplx eval_second(cplx z) const {
        cplx v = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 2;)
            v = v * z + coeffs[i] * static_cast<double>(i) * static_cast<double>(i - 1);
        return v;
    }
};

// Coefficients from the functional equation: expanding p(z0 + W) - z0 with
// W = sum c_m z^m and matching against sum c_n lambda^n z^n gives
//   c_n (lambda^n - lambda) = sum_{k=2}^{min(d,n)} b_k [z^n] W^k,
// where b_k are the coefficients of p recentered at z0. The right side only
// involves c_1..c_{n-1}; |lambda| > 1 keeps every divisor nonzero.
inline LinearizerSeries koenigs_series(const Polynomial& p, const FixedPointInfo& fp, int N = 64,
                                       cplx normalization = cplx(1.0, 0.0)) {
    if (fp.cls != FixedPointClass::repelling)
        throw PreconditionError("koenigs_series: fixed point must be repelling");
    if (!fp.simple)
        throw PreconditionError("koenigs_series: fixed point must be a simple root of p(z)-z");
    if (N < 2) throw PreconditionError("koenigs_series: need N >= 2");
    if (normalization == cplx(0.0, 0.0))
        throw PreconditionError("koenigs_series: normalization must be nonzero");

    const int d = p.degree();
    const cplx lambda = fp.multiplier;
    std::vector<cplx> b = recenter(p.coeffs, fp.z0);  // b_0 = z0, b_1 = lambda

    // pw[k][n] = [z^n] W^k, filled degree by degree
    std::vector<std::vector<cplx>> pw(static_cast<std::size_t>(d) + 1,
                                      std::vector<cplx>(static_cast<std::size_t>(N) + 1, cplx(0.0, 0.0)));
    pw[1][1] = normalization;

    std::vector<cplx> c(static_cast<std::size_t>(N) + 1, cplx(0.0, 0.0));
    c[0] = fp.z0;
    c[1] = normalization;

    cplx lambda_pow = lambda;  // lambda^n
    for (int n = 2; n <= N; ++n) {
        lambda_pow *= lambda;
        for (int k = 2; k <= d && k <= n; ++k) {
            KahanSumC acc;
            for (int j = 1; j <= n - (k - 1); ++j) acc.add(c[j] * pw[k - 1][n - j]);
            pw[k][n] = acc.value();
        }
        KahanSumC rhs;
        for (int k = 2; k <= d && k <= n; ++k) rhs.add(b[k] * pw[k][n]);
        cplx denom = lambda_pow - lambda;
        c[n] = rhs.value() / denom;
        if (!std::isfinite(c[n].real()) || !std::isfinite(c[n].imag()))
            throw NumericError("koenigs_series: coefficient overflow at n = " + std::to_string(n) +
                               "; reduce N");
        pw[1][n] = c[n];
    }

    LinearizerSeries s;
    s.z0 = fp.z0;
    s.lambda = lambda;
    s.coeffs = std::move(c);
    s.normalization = normalization;
    return s;
}

// L_c(z) = L(c z): c_n -> c_n * c^n. Any rescale of a linearizer is again one.
inline LinearizerSeries rescale_series(const LinearizerSeries& s, cplx c) {
    if (c == cplx(0.0, 0.0)) throw PreconditionError("rescale_series: c must be nonzero");
    LinearizerSeries out = s;
    cplx pw = 1.0;
    for (std::size_t n = 0; n < out.coeffs.size(); ++n) {
        out.coeffs[n] = s.coeffs[n] * pw;
        pw *= c;
    }
    out.normalization = s.normalization * c;
    if (out.r0 > 0.0) out.r0 = s.r0 / std::abs(c);
    return out;
}

// Series of phi^{-1} o L o (phi - b) with phi(z) = a z + b: a linearizer of
// phi^{-1} o p o phi at phi^{-1}(z0) with the same normalization.
inline LinearizerSeries conjugate_linearizer(const LinearizerSeries& s, const AffineMap& phi) {
    if (phi.a == cplx(0.0, 0.0)) throw PreconditionError("conjugate_linearizer: phi.a must be nonzero");
    LinearizerSeries out = s;
    out.z0 = (s.z0 - phi.b) / phi.a;
    out.coeffs[0] = out.z0;
    cplx apow = 1.0;  // a^{n-1}
    for (std::size_t n = 1; n < out.coeffs.size(); ++n) {
        out.coeffs[n] = s.coeffs[n] * apow;
        apow *= phi.a;
    }
    return out;
}

// Functional-equation residual |p(L(z)) - L(lambda z)| / (1 + |L(lambda z)|),
// both sides straight from the series.
inline double series_residual(const LinearizerSeries& s, const Polynomial& p, cplx z) {
    cplx left = poly_eval(p.coeffs, s.eval(z));
    cplx right = s.eval(s.lambda * z);
    return std::abs(left - right) / (1.0 + std::abs(right));
}

// Largest radius from a geometric ladder where (a) the tail of the truncated
// series stays under tol and (b) the functional-equation residual passes on
// three sampled circles. Self-limiting: the residual evaluates the series at
// |lambda| r as well.
inline double validated_radius(const LinearizerSeries& s, const Polynomial& p, double tol = 1e-8) {
    const int N = s.order();
    auto tail_ok = [&](double r) {
        double worst = 0.0;
        for (int n = std::max(2, (3 * N) / 4); n <= N; ++n)
            worst = std::max(worst, std::abs(s.coeffs[n]) * std::pow(r, n));
        return worst < tol;
    };
    auto residual_ok = [&](double r) {
        for (double frac : {0.5, 0.75, 1.0}) {
            for (int k = 0; k < 64; ++k) {
                double th = 2.0 * kPi * k / 64.0;
                cplx z = frac * r * cplx(std::cos(th), std::sin(th));
                if (series_residual(s, p, z) > tol) return false;
            }
        }
        return true;
    };
    auto passes = [&](double r) { return tail_ok(r) && residual_ok(r); };
    // coarse doubling ladder, then a fine geometric sweep of the last octave
    double best = 0.0, first_fail = 0.0;
    for (double r = 0x1.0p-10; r <= 0x1.0p40; r *= 2.0) {
        if (passes(r)) {
            best = r;
        } else if (best > 0.0) {
            first_fail = r;
            break;
        }
    }
    if (best <= 0.0)
        throw NumericError("validated_radius: no radius passed; increase the series length N");
    if (first_fail > 0.0) {
        const double ratio = std::pow(first_fail / best, 1.0 / 64.0);
        double r = best;
        for (int i = 0; i < 64; ++i) {
            double cand = r * ratio;
            if (!passes(cand)) break;
            r = cand;
        }
        best = r;
    }
    return best;
}

inline LinearizerSeries build_linearizer(const Polynomial& p, const FixedPointInfo& fp, int N = 64,
                                         cplx normalization = cplx(1.0, 0.0), double tol = 1e-8) {
    LinearizerSeries s = koenigs_series(p, fp, N, normalization);
    s.residual_tol = tol;
    s.r0 = validated_radius(s, p, tol);
    return s;
}

// --- series cache file ------------------------------------------------------
// Text format, hexadecimal floats for bit-exact round trips:
//   LINEARIZER-SERIES v1
//   z0 <hex> <hex>
//   lambda <hex> <hex>
//   normalization <hex> <hex>
//   N <int>
//   r0 <hex>
//   residual_tol <hex>
//   c <index> <hex> <hex>     (one line per coefficient)

inline std::string series_to_text(const LinearizerSeries& s) {
    std::ostringstream os;
    os << "LINEARIZER-SERIES v1\n";
    os << "z0 " << fmt_hex(s.z0.real()) << " " << fmt_hex(s.z0.imag()) << "\n";
    os << "lambda " << fmt_hex(s.lambda.real()) << " " << fmt_hex(s.lambda.imag()) << "\n";
    os << "normalization " << fmt_hex(s.normalization.real()) << " "
       << fmt_hex(s.normalization.imag()) << "\n";
    os << "N " << s.order() << "\n";
    os << "r0 " << fmt_hex(s.r0) << "\n";
    os << "residual_tol " << fmt_hex(s.residual_tol) << "\n";
    for (std::size_t n = 0; n < s.coeffs.size(); ++n)
        os << "c " << n << " " << fmt_hex(s.coeffs[n].real()) << " " << fmt_hex(s.coeffs[n].imag())
           << "\n";
    return os.str();
}

inline LinearizerSeries series_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "LINEARIZER-SERIES v1")
        throw PreconditionError("series cache: bad header, expected LINEARIZER-SERIES v1");
    LinearizerSeries s;
    int N = -1;
    auto parse2 = [](std::istringstream& ls) {
        std::string a, b;
        ls >> a >> b;
        return cplx(std::strtod(a.c_str(), nullptr), std::strtod(b.c_str(), nullptr));
    };
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "z0") s.z0 = parse2(ls);
        else if (key == "lambda") s.lambda = parse2(ls);
        else if (key == "normalization") s.normalization = parse2(ls);
        else if (key == "N") {
            ls >> N;
            s.coeffs.assign(static_cast<std::size_t>(N) + 1, cplx(0.0, 0.0));
        } else if (key == "r0") {
            std::string a;
            ls >> a;
            s.r0 = std::strtod(a.c_str(), nullptr);
        } else if (key == "residual_tol") {
            std::string a;
            ls >> a;
            s.residual_tol = std::strtod(a.c_str(), nullptr);
        } else if (key == "c") {
            std::size_t idx;
            ls >> idx;
            if (N < 0 || idx >= s.coeffs.size())
                throw PreconditionError("series cache: coefficient index out of range");
            s.coeffs[idx] = parse2(ls);
        } else {
            throw PreconditionError("series cache: unknown key '" + key + "'");
        }
    }
    if (N < 0) throw PreconditionError("series cache: missing N");
    return s;
}

inline void write_series_cache(const LinearizerSeries& s, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw NumericError("cannot open series cache for writing: " + path);
    f << series_to_text(s);
}

inline LinearizerSeries read_series_cache(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw PreconditionError("cannot open series cache: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return series_from_text(ss.str());
}

}  // namespace spiderweb
