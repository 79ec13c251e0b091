#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "spiderweb/util.hpp"

namespace spiderweb {

// Log-polar complex value: carries log|z| and arg z, so magnitudes far beyond
// double range stay usable. arg is kept only mod 2*pi, folded into (-pi, pi].
struct BigComplex {
    double logmod = -std::numeric_limits<double>::infinity();
    double arg = 0.0;

    BigComplex() = default;
    BigComplex(double lm, double a) : logmod(lm), arg(normalize_angle(a)) {}

    static BigComplex zero() { return BigComplex(); }

    static BigComplex from(cplx z) {
        if (z == cplx(0.0, 0.0)) return zero();
        return BigComplex(std::log(std::abs(z)), std::arg(z));
    }

    static BigComplex from_real(double x) {
        if (x == 0.0) return zero();
        return BigComplex(std::log(std::abs(x)), x > 0 ? 0.0 : kPi);
    }

    bool is_zero() const { return std::isinf(logmod) && logmod < 0.0; }

    // safe margin below log(DBL_MAX) ~ 709.78
    bool representable() const { return is_zero() || logmod < 700.0; }

    cplx to_complex() const {
        if (is_zero()) return {0.0, 0.0};
        double m = std::exp(logmod);
        return {m * std::cos(arg), m * std::sin(arg)};
    }

    BigComplex pow_int(long long k) const {
        if (is_zero()) return zero();
        return BigComplex(logmod * static_cast<double>(k), arg * static_cast<double>(k));
    }

    friend BigComplex operator*(const BigComplex& a, const BigComplex& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        return BigComplex(a.logmod + b.logmod, a.arg + b.arg);
    }

    friend BigComplex operator/(const BigComplex& a, const BigComplex& b) {
        return BigComplex(a.logmod - b.logmod, a.arg - b.arg);
    }
};

}  // namespace spiderweb
