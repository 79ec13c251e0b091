#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "spiderweb/big_complex.hpp"
#include "spiderweb/growth.hpp"
#include "spiderweb/series.hpp"
#include "spiderweb/util.hpp"

namespace spiderweb {

// Result of evaluating L far from 0. In exact mode the full log-polar value is
// known; in log_interval mode only the bracket [lo, hi] on log|L(z)| is (the
// arg field of value is meaningless there).
struct EvalOutcome {
    enum class Mode { exact, log_interval };
    BigComplex value;
    Mode mode = Mode::exact;
    double lo = 0.0;
    double hi = 0.0;

    bool exact() const { return mode == Mode::exact; }
    double mid() const { return 0.5 * (lo + hi); }
};

inline constexpr double kThetaLogmod = 600.0;  // exact -> log_interval switch

// Iterates p on a starting value, exactly while representable and through
// iterate_log_bounds past the Theta threshold. Exact stepping has three
// regimes: plain complex Horner, then dominant-term log-polar once |v| is
// large (p(v) = a_d v^d (1 + sum a_k/a_d v^{k-d}), correction summed in
// complex), then the closed-form bracket.
class PolyPusher {
  public:
    PolyPusher(const Polynomial& p, const GrowthBounds& gb) : p_(p), gb_(gb) {
        double coeff_sum = 1.0;
        for (const auto& a : p.coeffs) coeff_sum += std::abs(a);
        complex_limit_ = std::min(kThetaLogmod, (700.0 - std::log(coeff_sum)) / p.degree());
        cplx ad = p.coeffs.back();
        big_ad_ = BigComplex::from(ad);
        ratios_.resize(p.coeffs.size() - 1);
        for (std::size_t k = 0; k + 1 < p.coeffs.size(); ++k) ratios_[k] = p.coeffs[k] / ad;
    }

    const Polynomial& poly() const { return p_; }
    const GrowthBounds& growth_bounds() const { return gb_; }

    EvalOutcome push(BigComplex v0, long long n) const {
        cplx v = v0.representable() ? v0.to_complex() : cplx(0.0, 0.0);
        BigComplex big = v0;
        bool big_mode = !(v0.representable() && big.logmod < complex_limit_);
        for (long long i = 0; i < n; ++i) {
            if (!big_mode && big.logmod < complex_limit_) {
                v = poly_eval(p_.coeffs, v);
                big = BigComplex::from(v);
                continue;
            }
            big_mode = true;
            if (big.logmod >= kThetaLogmod) {
                LogInterval iv =
                    iterate_log_bounds_from_logmod(p_, big.logmod, static_cast<int>(n - i), gb_);
                EvalOutcome out;
                out.mode = EvalOutcome::Mode::log_interval;
                out.lo = iv.lo;
                out.hi = iv.hi;
                out.value = BigComplex(out.mid(), 0.0);
                return out;
            }
            big = step_big(big);
        }
        EvalOutcome out;
        out.mode = EvalOutcome::Mode::exact;
        out.value = big;
        out.lo = out.hi = big.logmod;
        return out;
    }

    // value and derivative product along the orbit; exact range only
    void push_with_derivative(BigComplex& big, BigComplex& dbig, long long n) const {
        for (long long i = 0; i < n; ++i) {
            if (big.logmod >= kThetaLogmod)
                throw NumericError("push_with_derivative: left exact range");
            if (big.logmod < complex_limit_) {
                cplx vv = big.to_complex();
                auto [pv, dpv] = spiderweb::eval_with_derivative(p_, vv);
                dbig = BigComplex::from(dpv) * dbig;
                big = BigComplex::from(pv);
            } else {
                dbig = step_big_prime(big) * dbig;
                big = step_big(big);
            }
        }
    }

  private:
    BigComplex step_big(const BigComplex& v) const {
        const int d = p_.degree();
        cplx corr = 1.0;
        for (int k = 0; k < d; ++k) {
            BigComplex t = BigComplex::from(ratios_[k]) * v.pow_int(k - d);
            corr += t.to_complex();
        }
        return big_ad_ * v.pow_int(d) * BigComplex::from(corr);
    }

    // p'(v) = d a_d v^{d-1} (1 + sum (k a_k)/(d a_d) v^{k-d})
    BigComplex step_big_prime(const BigComplex& v) const {
        const int d = p_.degree();
        cplx corr = 1.0;
        for (int k = 1; k < d; ++k) {
            BigComplex t =
                BigComplex::from(ratios_[k] * (static_cast<double>(k) / d)) * v.pow_int(k - d);
            corr += t.to_complex();
        }
        return BigComplex::from(cplx(static_cast<double>(d), 0.0)) * big_ad_ * v.pow_int(d - 1) *
               BigComplex::from(corr);
    }

    const Polynomial& p_;
    GrowthBounds gb_;
    double complex_limit_ = 300.0;
    BigComplex big_ad_;
    std::vector<cplx> ratios_;
};

// Evaluates L(z) = p^n(L(z / lambda^n)) with n chosen so the series argument
// lands in the validated disk.
class Evaluator {
  public:
    Evaluator(const LinearizerSeries& s, const Polynomial& p, double eps = 0.01)
        : s_(s), p_(p), gb_(make_growth_bounds(p, eps)), pusher_(p_, gb_) {
        if (!(s.r0 > 0.0)) throw PreconditionError("Evaluator: series has no validated radius");
        log_r0_ = std::log(s.r0);
        log_lambda_ = std::log(std::abs(s.lambda));
        arg_lambda_ = std::arg(s.lambda);
    }

    static constexpr long long kMaxDepth = 2'000'000;

    const GrowthBounds& growth_bounds() const { return gb_; }
    const LinearizerSeries& series() const { return s_; }
    const Polynomial& poly() const { return p_; }
    const PolyPusher& pusher() const { return pusher_; }

    long long pullback_depth(const BigComplex& z) const {
        if (z.is_zero() || z.logmod <= log_r0_) return 0;
        double n = std::ceil((z.logmod - log_r0_) / log_lambda_);
        if (!(n < static_cast<double>(kMaxDepth)))
            throw NumericError("eval_L: pullback depth exceeds step budget");
        return static_cast<long long>(n);
    }

    EvalOutcome eval(const BigComplex& z) const { return eval_at_depth(z, pullback_depth(z)); }

    EvalOutcome eval(cplx z) const {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw PreconditionError("eval_L: input must be finite");
        return eval(BigComplex::from(z));
    }

    // Forced pullback depth (>= the minimal one); exposed for the depth
    // consistency property.
    EvalOutcome eval_at_depth(const BigComplex& z, long long n) const {
        if (n < pullback_depth(z)) throw PreconditionError("eval_at_depth: depth too small");
        BigComplex w = pull_back(z, n);
        cplx v = s_.eval(w.to_complex());
        return pusher_.push(BigComplex::from(v), n);
    }

    // L and L' together via the differentiated functional equation
    //   L'(z) = (p^n)'(L(z/lambda^n)) L'(z/lambda^n) / lambda^n.
    // Exact range only.
    void eval_with_derivative(const BigComplex& z, BigComplex& val, BigComplex& deriv) const {
        long long n = pullback_depth(z);
        cplx wz = pull_back(z, n).to_complex();
        BigComplex big = BigComplex::from(s_.eval(wz));
        BigComplex dbig = BigComplex::from(s_.eval_prime(wz));
        pusher_.push_with_derivative(big, dbig, n);
        val = big;
        deriv = dbig / BigComplex::from(s_.lambda).pow_int(n);
    }

  private:
    BigComplex pull_back(const BigComplex& z, long long n) const {
        if (z.is_zero()) return BigComplex::zero();
        return BigComplex(z.logmod - static_cast<double>(n) * log_lambda_,
                          z.arg - static_cast<double>(n) * arg_lambda_);
    }

    const LinearizerSeries& s_;
    const Polynomial& p_;
    GrowthBounds gb_;
    PolyPusher pusher_;
    double log_r0_ = 0.0;
    double log_lambda_ = 0.0;
    double arg_lambda_ = 0.0;
};

inline EvalOutcome eval_L(const LinearizerSeries& s, const Polynomial& p, cplx z) {
    return Evaluator(s, p).eval(z);
}

inline EvalOutcome eval_L(const LinearizerSeries& s, const Polynomial& p, const BigComplex& z) {
    return Evaluator(s, p).eval(z);
}

}  // namespace spiderweb
