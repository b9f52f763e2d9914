#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core.hpp"

namespace ccfan {

/// 3x3 exchange matrix with skew-symmetrizer D = diag(d), D*B skew-symmetric, min d_i = 1.
template <class T>
struct ExchangeMatrix {
    Mat3<T> b;
    Vec3<T> d{T(1), T(1), T(1)};

    const T& operator()(int i, int j) const { return b(i, j); }
};

namespace detail {

template <class T>
bool symmetrizer_consistent(const Mat3<T>& b, const Vec3<T>& d, long double eps) {
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (!close_rel(T(d[i] * b(i, j)), T(-d[j] * b(j, i)), eps)) return false;
    return true;
}

template <class T>
Vec3<T> normalize_min_one(Vec3<T> d) {
    T m = min_(d[0], min_(d[1], d[2]));
    return d * (T(1) / m);
}

}  // namespace detail

template <class T>
ExchangeMatrix<T> validate(Mat3<T> raw, const std::optional<Vec3<T>>& d_in = std::nullopt,
                           const Tol& tol = {}) {
    T scale = max_(T(1), raw.max_abs());
    for (int i = 0; i < 3; ++i)
        if (sign_tol(raw(i, i), tol.sign, scale) != 0)
            throw Error(ErrorKind::NotSkewSymmetrizable, "nonzero diagonal entry");
    for (int i = 0; i < 3; ++i) raw(i, i) = T(0);

    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            int sij = sign_tol(raw(i, j), tol.sign, scale);
            int sji = sign_tol(raw(j, i), tol.sign, scale);
            if ((sij == 0) != (sji == 0))
                throw Error(ErrorKind::NotSkewSymmetrizable,
                            "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                ") is zero but its transpose is not");
            if (sij != 0 && sij == sji)
                throw Error(ErrorKind::NotSkewSymmetrizable,
                            "entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                ") and its transpose have the same sign");
            if (sij == 0) raw(i, j) = raw(j, i) = T(0);
        }

    T up = abs_(raw(0, 1) * raw(1, 2) * raw(2, 0));
    T down = abs_(raw(1, 0) * raw(2, 1) * raw(0, 2));
    if (!close_rel(up, down, tol.eq))
        throw Error(ErrorKind::NotSkewSymmetrizable, "|b12 b23 b31| != |b21 b32 b13|");

    Vec3<T> d{T(1), T(1), T(1)};
    if (d_in) {
        d = *d_in;
        for (int i = 0; i < 3; ++i)
            if (!(d[i] > T(0))) throw Error(ErrorKind::NoSymmetrizer, "symmetrizer entries must be positive");
        if (!detail::symmetrizer_consistent(raw, d, tol.eq))
            throw Error(ErrorKind::NoSymmetrizer, "d_i b_ij != -d_j b_ji for the given d");
    } else {
        std::array<bool, 3> seen{false, false, false};
        for (int root = 0; root < 3; ++root) {
            if (seen[root]) continue;
            seen[root] = true;
            d[root] = T(1);
            std::vector<int> queue{root};
            for (std::size_t q = 0; q < queue.size(); ++q) {
                int i = queue[q];
                for (int j = 0; j < 3; ++j) {
                    if (j == i || seen[j] || raw(i, j) == T(0)) continue;
                    d[j] = -d[i] * raw(i, j) / raw(j, i);
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        if (!detail::symmetrizer_consistent(raw, d, tol.eq))
            throw Error(ErrorKind::NoSymmetrizer, "inconsistent symmetrizer system");
    }
    d = detail::normalize_min_one(d);

    // make D*B skew-symmetric to working precision, keeping the upper triangle
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) raw(j, i) = -d[i] * raw(i, j) / d[j];

    return ExchangeMatrix<T>{raw, d};
}

/// Builds b_ij = sigma * pi(i,j) * p_ij * sqrt(d_j / d_i) from the skew-symmetrized data.
template <class T>
ExchangeMatrix<T> from_skew(const T& p12, const T& p23, const T& p31, int sigma, Vec3<T> d) {
    d = detail::normalize_min_one(d);
    Mat3<T> p;
    p(0, 1) = p(1, 0) = p12;
    p(1, 2) = p(2, 1) = p23;
    p(2, 0) = p(0, 2) = p31;
    ExchangeMatrix<T> B;
    B.d = d;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) B.b(i, j) = T(sigma * cyc(i, j)) * p(i, j) * sqrt_(d[j] / d[i]);
    return B;
}

template <class T>
ExchangeMatrix<T> mutate(const ExchangeMatrix<T>& B, int k) {
    ExchangeMatrix<T> R = B;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            if (i == k || j == k)
                R.b(i, j) = -B(i, j);
            else
                R.b(i, j) = B(i, j) + T(sign_exact(B(i, k))) * pos_(T(B(i, k) * B(k, j)));
        }
    return R;
}

template <class T>
ExchangeMatrix<T> mutate_word(ExchangeMatrix<T> B, const std::vector<int>& word) {
    for (int k : word) B = mutate(B, k);
    return B;
}

template <class T> T pval(const ExchangeMatrix<T>& B, int i, int j) {
    return sqrt_(abs_(T(B(i, j) * B(j, i))));
}

/// Sk(B)_ij = sign(b_ij) sqrt|b_ij b_ji|
template <class T>
Mat3<T> skew_symmetrize(const ExchangeMatrix<T>& B) {
    Mat3<T> s;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) s(i, j) = T(sign_exact(B(i, j))) * pval(B, i, j);
    return s;
}

/// +1 or -1 when sign(B) is that multiple of the pattern pi, 0 when B is not cyclic
template <class T>
int cyclic_sign(const ExchangeMatrix<T>& B) {
    int s = sign_exact(B(0, 1));
    if (s == 0) return 0;
    if (sign_exact(B(1, 2)) != s || sign_exact(B(2, 0)) != s) return 0;
    return s;
}

template <class T>
T markov_constant(const ExchangeMatrix<T>& B) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j && B(i, j) == T(0)) throw Error(ErrorKind::NotCyclic, "zero off-diagonal entry");
    T p12 = pval(B, 0, 1), p23 = pval(B, 1, 2), p31 = pval(B, 2, 0);
    return p12 * p12 + p23 * p23 + p31 * p31 - p12 * p23 * p31;
}

struct Verdict {
    bool ok = false;
    std::string reason;
};

template <class T>
Verdict is_cluster_cyclic(const ExchangeMatrix<T>& B, const Tol& tol = {}) {
    if (cyclic_sign(B) == 0) return {false, "NotCyclic"};
    static const char* names[3] = {"p12", "p23", "p31"};
    for (int e = 0; e < 3; ++e) {
        T p = pval(B, e, (e + 1) % 3);
        if (p < T(2) - T(tol.sign)) return {false, std::string(names[e]) + " < 2"};
    }
    T p12 = pval(B, 0, 1), p23 = pval(B, 1, 2), p31 = pval(B, 2, 0);
    T c = markov_constant(B);
    T scale = max_(T(1), p12 * p23 * p31);
    if (c > T(4) + T(tol.sign) * scale) return {false, "C(B) > 4"};
    return {true, ""};
}

template <class T>
void require_cluster_cyclic(const ExchangeMatrix<T>& B, const Tol& tol = {}) {
    Verdict v = is_cluster_cyclic(B, tol);
    if (!v.ok) throw Error(ErrorKind::NotClusterCyclic, v.reason);
}

/// diagonal 2, off-diagonal |b_ij|
template <class T>
Mat3<T> pseudo_cartan(const Mat3<T>& b) {
    Mat3<T> a;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = i == j ? T(2) : abs_(b(i, j));
    return a;
}

template <class T>
Mat3<T> pseudo_cartan(const ExchangeMatrix<T>& B) {
    if (cyclic_sign(B) == 0) throw Error(ErrorKind::NotCyclic, "pseudo Cartan companion needs a cyclic matrix");
    return pseudo_cartan(B.b);
}

/// companion of Sk(B); off-diagonals are p_ij
template <class T>
Mat3<T> pseudo_cartan_skew(const ExchangeMatrix<T>& B) {
    if (cyclic_sign(B) == 0) throw Error(ErrorKind::NotCyclic, "pseudo Cartan companion needs a cyclic matrix");
    return pseudo_cartan(skew_symmetrize(B));
}

template <class T>
T alpha(const T& p, const Tol& tol = {}) {
    if (p < T(2) - T(tol.sign)) throw Error(ErrorKind::Domain, "alpha(p) needs p >= 2");
    T q = max_(p, T(2));
    return (q + sqrt_(T(q * q - 4))) / 2;
}

/// 1/alpha(p) = (p - sqrt(p^2-4))/2, evaluated without cancellation
template <class T>
T alpha_inv(const T& p, const Tol& tol = {}) {
    if (p < T(2) - T(tol.sign)) throw Error(ErrorKind::Domain, "alpha(p) needs p >= 2");
    T q = max_(p, T(2));
    return T(2) / (q + sqrt_(T(q * q - 4)));
}

/// u_{-2} = -1, u_{-1} = 0, u_{n+1} = p u_n - u_{n-1}
template <class T>
T chebyshev_u(int n, const T& p, const Tol& tol = {}) {
    if (n < -2) throw Error(ErrorKind::Domain, "u_n needs n >= -2");
    if (p < T(2) - T(tol.sign)) throw Error(ErrorKind::Domain, "u_n needs p >= 2");
    if (p <= T(2) + T(tol.sign)) return T(n + 1);
    T a = alpha(p, tol);
    T r = sqrt_(T(p * p - 4));
    return (pow_(a, n + 1) - pow_(a, -(n + 1))) / r;
}

enum class SurfaceKind { TwoSheets, Cylinder, ParallelPlanes };

inline const char* surface_name(SurfaceKind k) {
    switch (k) {
    case SurfaceKind::TwoSheets: return "TwoSheets";
    case SurfaceKind::Cylinder: return "Cylinder";
    case SurfaceKind::ParallelPlanes: return "ParallelPlanes";
    }
    return "?";
}

template <class T>
struct EigenData {
    T lambda;
    T nu1, nu2;
    Vec3<T> v;
    SurfaceKind kind;
};

template <class T>
EigenData<T> eigen_analysis(const Mat3<T>& At, const Tol& tol = {}) {
    T p12 = At(0, 1), p23 = At(1, 2), p31 = At(2, 0);
    T s2 = p12 * p12 + p23 * p23 + p31 * p31;
    T p3 = p12 * p23 * p31;
    T c = s2 - p3;
    // f(t) at t = 0 equals 2(C - 4)
    if (T(2) * (c - 4) > T(tol.eq) * max_(T(1), p3))
        throw Error(ErrorKind::NotClusterCyclic, "C(B) > 4, no positive eigenvalue structure");

    auto f = [&](const T& m) { return m * m * m - s2 * m - 2 * p3; };
    auto fp = [&](const T& m) { return 3 * m * m - s2; };
    T pmax = max_(p12, max_(p23, p31));
    const T lo0 = sqrt_(s2), hi0 = sqrt_(s2) + 2 * pmax + 4;
    T lo = lo0, hi = hi0;
    for (int it = 0; it < 300 && hi - lo > T(1e-13) * hi; ++it) {
        T mid = (lo + hi) / 2;
        if (f(mid) > T(0)) hi = mid; else lo = mid;
    }
    T mu = (lo + hi) / 2;
    T prev_step(0);
    for (int it = 0; it < 100; ++it) {
        T d = fp(mu);
        if (d == T(0)) break;
        T step = f(mu) / d;
        T next = mu - step;
        if (next < lo0 || next > hi0) break;
        if (it > 2 && abs_(step) >= abs_(prev_step)) break;
        mu = next;
        prev_step = step;
        if (step == T(0)) break;
    }

    EigenData<T> e;
    e.lambda = 2 + mu;
    Vec3<T> v{mu * mu + (p12 + p31) * mu + p12 * p23 + p31 * p23 - p23 * p23,
              mu * mu + (p23 + p12) * mu + p23 * p31 + p12 * p31 - p31 * p31,
              mu * mu + (p31 + p23) * mu + p31 * p12 + p23 * p12 - p12 * p12};
    e.v = normalized(v);

    T sum = 6 - e.lambda;
    T prod = 2 * (4 - c) / e.lambda;
    T disc = max_(T(0), T(sum * sum - 4 * prod));
    e.nu1 = (sum + sqrt_(disc)) / 2;
    e.nu2 = (sum - sqrt_(disc)) / 2;

    bool all_two = abs_(T(p12 - 2)) <= T(tol.sign) && abs_(T(p23 - 2)) <= T(tol.sign) &&
                   abs_(T(p31 - 2)) <= T(tol.sign);
    if (all_two)
        e.kind = SurfaceKind::ParallelPlanes;
    else if (abs_(T(c - 4)) <= T(tol.sign) * max_(T(1), sqrt_(s2)))
        e.kind = SurfaceKind::Cylinder;
    else
        e.kind = SurfaceKind::TwoSheets;
    return e;
}

enum class Order { LEQ, GEQ, BOTH, INCOMPARABLE };

inline const char* order_name(Order o) {
    switch (o) {
    case Order::LEQ: return "LEQ";
    case Order::GEQ: return "GEQ";
    case Order::BOTH: return "BOTH";
    case Order::INCOMPARABLE: return "INCOMPARABLE";
    }
    return "?";
}

/// entrywise comparison of absolute values: LEQ means |B| <= |B2|
template <class T>
Order abs_leq(const ExchangeMatrix<T>& B, const ExchangeMatrix<T>& B2, const Tol& tol = {}) {
    bool le = true, ge = true;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            T a = abs_(B(i, j)), b = abs_(B2(i, j));
            T slack = T(tol.sign) * rel_scale(a, b);
            if (a > b + slack) le = false;
            if (b > a + slack) ge = false;
        }
    if (le && ge) return Order::BOTH;
    if (le) return Order::LEQ;
    if (ge) return Order::GEQ;
    return Order::INCOMPARABLE;
}

/// true when mu_k(B) >= B
template <class T>
bool mutation_not_smaller(const ExchangeMatrix<T>& B, int k, const Tol& tol = {}) {
    Order o = abs_leq(mutate(B, k), B, tol);
    return o == Order::GEQ || o == Order::BOTH;
}

template <class T>
struct Descent {
    std::vector<int> word;
    ExchangeMatrix<T> minimum;
    bool finite = false;
};

template <class T>
Descent<T> decreasing_sequence(const ExchangeMatrix<T>& B0, int max_len, const Tol& tol = {}) {
    require_cluster_cyclic(B0, tol);
    Descent<T> out;
    ExchangeMatrix<T> B = B0;
    for (int step = 0; step <= max_len; ++step) {
        std::vector<int> down;
        for (int k = 0; k < 3; ++k)
            if (!mutation_not_smaller(B, k, tol)) down.push_back(k);
        if (down.empty()) {
            out.finite = true;
            break;
        }
        if (down.size() > 1)
            throw Error(ErrorKind::AmbiguousDescent, "two strictly decreasing directions");
        if (step == max_len) break;
        B = mutate(B, down[0]);
        out.word.push_back(down[0]);
    }
    out.minimum = B;
    return out;
}

}  // namespace ccfan
