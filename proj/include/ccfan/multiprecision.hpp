#pragma once

// Optional MPFR scalar. Deep seeds on matrices with large p_ij have entries far beyond
// double range; every template in the library accepts mp_real as well as double.

#include <boost/multiprecision/mpfr.hpp>

#include <algorithm>
#include <cmath>

#include "seed.hpp"

namespace ccfan {

using mp_real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                              boost::multiprecision::et_off>;

/// Sets the default mp_real precision (decimal digits) for the lifetime of the scope.
class DigitsScope {
public:
    explicit DigitsScope(unsigned digits) : old_(mp_real::default_precision()) {
        mp_real::default_precision(digits);
    }
    ~DigitsScope() { mp_real::default_precision(old_); }
    DigitsScope(const DigitsScope&) = delete;
    DigitsScope& operator=(const DigitsScope&) = delete;

private:
    unsigned old_;
};

/// Internal sign/zero tolerances for a working precision of `digits`, of which `reserve`
/// digits are expected to be lost to cancellation in thin cones.
inline Tol tol_for_digits(unsigned digits, unsigned reserve = 0) {
    Tol t;
    long double e = static_cast<long double>(digits) - reserve - 6;
    e = std::clamp(e, 9.0L, 4800.0L);
    t.sign = std::pow(10.0L, -e);
    t.eq = 1e3L * t.sign;
    return t;
}

template <class T> T to_scalar(const mp_real& x) { return static_cast<T>(x); }

template <class S, class T>
Vec3<S> convert(const Vec3<T>& v) { return {S(v[0]), S(v[1]), S(v[2])}; }

template <class S, class T>
Mat3<S> convert(const Mat3<T>& m) {
    Mat3<S> r;
    for (int k = 0; k < 9; ++k) r.a[k] = S(m.a[k]);
    return r;
}

/// log10 of |x|, finite for any nonzero mp_real regardless of magnitude
inline double log10_abs(const mp_real& x) {
    if (x == 0) return -1e9;
    return static_cast<double>(log10(abs(x)));
}

/// the same matrix over mp_real; the symmetrizer is carried over and re-checked
template <class T>
ExchangeMatrix<mp_real> to_mp(const ExchangeMatrix<T>& B, const Tol& tol = {}) {
    return validate(convert<mp_real>(B.b), std::optional<Vec3<mp_real>>(convert<mp_real>(B.d)), tol);
}

/// largest log10 |entry| of B, C and G over all seeds to `depth`, from a 40-digit pass
template <class T>
double max_log10_entry(const ExchangeMatrix<T>& B, int depth) {
    DigitsScope scope(40);
    ExchangeMatrix<mp_real> Bm = to_mp(B);
    mp_real out(1);
    walk_tree<mp_real>(initial_seed(Bm), depth, [&](const Seed<mp_real>& s) {
        for (const Mat3<mp_real>* m : {&s.B.b, &s.C, &s.G})
            for (const mp_real& x : m->a)
                if (abs(x) > out) out = abs(x);
        return true;
    });
    return log10_abs(out);
}

struct Precision {
    unsigned digits;
    Tol tol;
    double log10_max_entry;
};

/// Working precision for checks to `depth`. Cones at entry size 10^L are about 10^-2L wide
/// and their coordinates lose about 2L digits, so 4L + 40 digits leave a band of 10^-(2L+34).
template <class T>
Precision auto_precision(const ExchangeMatrix<T>& B, int depth) {
    double L = max_log10_entry(B, depth);
    unsigned reserve = static_cast<unsigned>(std::ceil(2 * L));
    unsigned digits = 2 * reserve + 40u;
    return {digits, tol_for_digits(digits, reserve), L};
}

/// the same with a caller-fixed precision
template <class T>
Precision fixed_precision(const ExchangeMatrix<T>& B, int depth, unsigned digits) {
    double L = max_log10_entry(B, depth);
    unsigned reserve = static_cast<unsigned>(std::ceil(2 * L));
    return {digits, tol_for_digits(digits, std::min(reserve, digits > 40 ? digits - 40 : 0u)), L};
}

}  // namespace ccfan
