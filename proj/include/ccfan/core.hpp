#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace ccfan {

enum class ErrorKind {
    Input,
    NotSkewSymmetrizable,
    NoSymmetrizer,
    NotCyclic,
    NotClusterCyclic,
    Domain,
    AmbiguousDescent,
    LabelContradiction,
    DepthExceeded,
    NotBranch,
    AtAntipode,
};

inline const char* error_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::Input: return "InputError";
    case ErrorKind::NotSkewSymmetrizable: return "NotSkewSymmetrizable";
    case ErrorKind::NoSymmetrizer: return "NoSymmetrizer";
    case ErrorKind::NotCyclic: return "NotCyclic";
    case ErrorKind::NotClusterCyclic: return "NotClusterCyclic";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::AmbiguousDescent: return "AmbiguousDescent";
    case ErrorKind::LabelContradiction: return "LabelContradiction";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::NotBranch: return "NotBranch";
    case ErrorKind::AtAntipode: return "AtAntipode";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

/// Tolerances. `sign` decides zero/sign questions, `eq` bounds residuals.
/// Both are relative to max(1, |lhs|, |rhs|) unless a caller supplies its own scale.
struct Tol {
    long double sign = 1e-9L;
    long double eq = 1e-7L;
};

struct Config {
    Tol tol{};
    int depth_cap = 24;
};

// scalar helpers; unqualified calls so that multiprecision types resolve by ADL

template <class T> T abs_(const T& x) { using std::abs; return abs(x); }
template <class T> T sqrt_(const T& x) { using std::sqrt; return sqrt(x); }
template <class T> T pow_(const T& x, int n) { using std::pow; return pow(x, n); }
template <class T> T atan2_(const T& y, const T& x) { using std::atan2; return atan2(y, x); }
template <class T> bool isfinite_(const T& x) { using std::isfinite; return isfinite(x); }
template <class T> T log10_(const T& x) { using std::log10; return log10(x); }
template <class T> T max_(const T& a, const T& b) { return a < b ? b : a; }
template <class T> T min_(const T& a, const T& b) { return b < a ? b : a; }
template <class T> T pos_(const T& x) { return x > T(0) ? x : T(0); }
template <class T> double dbl(const T& x) { return static_cast<double>(x); }

template <class T> int sign_exact(const T& x) { return (x > T(0)) - (x < T(0)); }

/// sign with a zero band of half-width eps * scale
template <class T> int sign_tol(const T& x, long double eps, const T& scale = T(1)) {
    T band = T(eps) * max_(T(1), abs_(scale));
    if (x > band) return 1;
    if (x < -band) return -1;
    return 0;
}

template <class T> T rel_scale(const T& a, const T& b) {
    return max_(T(1), max_(abs_(a), abs_(b)));
}

template <class T> bool close_rel(const T& a, const T& b, long double eps) {
    return abs_(a - b) <= T(eps) * rel_scale(a, b);
}

template <class T>
struct Vec3 {
    std::array<T, 3> x{T(0), T(0), T(0)};

    Vec3() = default;
    Vec3(T a, T b, T c) : x{a, b, c} {}

    T& operator[](int i) { return x[i]; }
    const T& operator[](int i) const { return x[i]; }

    Vec3& operator+=(const Vec3& o) { for (int i = 0; i < 3; ++i) x[i] += o.x[i]; return *this; }
    Vec3& operator-=(const Vec3& o) { for (int i = 0; i < 3; ++i) x[i] -= o.x[i]; return *this; }
    Vec3& operator*=(const T& s) { for (int i = 0; i < 3; ++i) x[i] *= s; return *this; }

    friend Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend Vec3 operator-(Vec3 a) { for (auto& v : a.x) v = -v; return a; }
    friend Vec3 operator*(const T& s, Vec3 a) { return a *= s; }
    friend Vec3 operator*(Vec3 a, const T& s) { return a *= s; }

    static Vec3 unit(int i) { Vec3 v; v[i] = T(1); return v; }
};

template <class T> T dot(const Vec3<T>& a, const Vec3<T>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <class T> Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <class T> T norm(const Vec3<T>& a) { return sqrt_(dot(a, a)); }

template <class T> T max_abs(const Vec3<T>& a) {
    return max_(abs_(a[0]), max_(abs_(a[1]), abs_(a[2])));
}

template <class T> Vec3<T> normalized(const Vec3<T>& a) {
    T n = norm(a);
    return n > T(0) ? a * (T(1) / n) : a;
}

template <class T>
struct Mat3 {
    std::array<T, 9> a{T(0), T(0), T(0), T(0), T(0), T(0), T(0), T(0), T(0)};

    T& operator()(int i, int j) { return a[3 * i + j]; }
    const T& operator()(int i, int j) const { return a[3 * i + j]; }

    static Mat3 identity() {
        Mat3 m;
        for (int i = 0; i < 3; ++i) m(i, i) = T(1);
        return m;
    }
    static Mat3 from_rows(std::initializer_list<double> v) {
        Mat3 m;
        int k = 0;
        for (double x : v) m.a[k++] = T(x);
        return m;
    }

    Vec3<T> col(int j) const { return {a[j], a[3 + j], a[6 + j]}; }
    Vec3<T> row(int i) const { return {a[3 * i], a[3 * i + 1], a[3 * i + 2]}; }
    void set_col(int j, const Vec3<T>& v) { for (int i = 0; i < 3; ++i) (*this)(i, j) = v[i]; }

    friend Mat3 operator*(const Mat3& p, const Mat3& q) {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                T s(0);
                for (int k = 0; k < 3; ++k) s += p(i, k) * q(k, j);
                r(i, j) = s;
            }
        return r;
    }
    friend Vec3<T> operator*(const Mat3& p, const Vec3<T>& v) {
        return {dot(p.row(0), v), dot(p.row(1), v), dot(p.row(2), v)};
    }
    friend Mat3 operator-(const Mat3& p) {
        Mat3 r = p;
        for (auto& v : r.a) v = -v;
        return r;
    }

    Mat3 transpose() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

    T max_abs() const {
        T m(0);
        for (const auto& v : a) m = max_(m, abs_(v));
        return m;
    }
};

template <class T> T det(const Mat3<T>& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
         - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
         + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

template <class T> Mat3<T> from_cols(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) {
    Mat3<T> m;
    m.set_col(0, a);
    m.set_col(1, b);
    m.set_col(2, c);
    return m;
}

/// Cramer solve of M y = x; returns false when |det M| is below pivot * (product of column norms).
template <class T>
bool solve3(const Mat3<T>& m, const Vec3<T>& x, Vec3<T>& y, double pivot = 0.0) {
    T dm = det(m);
    T vol = norm(m.col(0)) * norm(m.col(1)) * norm(m.col(2));
    if (abs_(dm) <= T(pivot) * vol) return false;
    for (int j = 0; j < 3; ++j) {
        Mat3<T> mj = m;
        mj.set_col(j, x);
        y[j] = det(mj) / dm;
    }
    return true;
}

// index conventions: rows/cols and word letters are 0-based internally, 1-based in I/O

/// pi(i,j) = +1 on (1,2),(2,3),(3,1) and -1 on the reversed pairs
inline int cyc(int i, int j) {
    if (i == j) return 0;
    return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

inline int third(int a, int b) { return 3 - a - b; }

/// Low-discrepancy Halton point in (0,1), deterministic
inline double halton(int index, int base) {
    double f = 1.0, r = 0.0;
    int i = index + 1;
    while (i > 0) {
        f /= base;
        r += f * (i % base);
        i /= base;
    }
    return r;
}

}  // namespace ccfan
