#pragma once

// Independent reference computations used by the tests. Nothing here calls into the
// library's recursions or closed forms.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "ccfan/ccfan.hpp"

namespace oracle {

using M3 = std::array<std::array<double, 3>, 3>;

inline double pos(double x) { return x > 0 ? x : 0; }

inline M3 to_m3(const ccfan::Mat3<double>& m) {
    M3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = m(i, j);
    return r;
}

inline M3 identity() {
    M3 r{};
    for (int i = 0; i < 3; ++i) r[i][i] = 1;
    return r;
}

/// matrix mutation without any sign bookkeeping
inline M3 mutate_b(const M3& b, int k) {
    M3 r = b;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == k || j == k)
                r[i][j] = -b[i][j];
            else
                r[i][j] = b[i][j] + pos(b[i][k]) * pos(b[k][j]) - pos(-b[i][k]) * pos(-b[k][j]);
        }
    return r;
}

struct SeedRef {
    M3 b, c, g;
};

/// One step of the sign-free recursions: C as the coefficient block of the principal
/// extension, G by the sign-free g-vector rule against the initial matrix b0.
inline SeedRef step(const SeedRef& s, const M3& b0, int k) {
    SeedRef r = s;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (j == k)
                r.c[i][j] = -s.c[i][k];
            else
                r.c[i][j] = s.c[i][j] + pos(s.c[i][k]) * pos(s.b[k][j]) - pos(-s.c[i][k]) * pos(-s.b[k][j]);
        }
    for (int i = 0; i < 3; ++i) {
        double acc = -s.g[i][k];
        for (int l = 0; l < 3; ++l) acc += pos(-s.b[l][k]) * s.g[i][l];
        for (int j = 0; j < 3; ++j) acc -= pos(-s.c[j][k]) * b0[i][j];
        r.g[i][k] = acc;
    }
    r.b = mutate_b(s.b, k);
    return r;
}

inline SeedRef walk(const M3& b0, const std::vector<int>& w) {
    SeedRef s{b0, identity(), identity()};
    for (int k : w) s = step(s, b0, k);
    return s;
}

/// three-term recursion from u_{-2} = -1, u_{-1} = 0
inline double chebyshev(int n, double p) {
    if (n == -2) return -1;
    double a = -1, b = 0;
    for (int m = -1; m < n; ++m) {
        double c = p * b - a;
        a = b;
        b = c;
    }
    return b;
}

inline long double chebyshev_ld(int n, long double p) {
    if (n == -2) return -1;
    long double a = -1, b = 0;
    for (int m = -1; m < n; ++m) {
        long double c = p * b - a;
        a = b;
        b = c;
    }
    return b;
}

/// Intersects the line through N and x/|x| with the tangent plane at c = -N by a
/// generic 3x3 solve, then reads coordinates in the frame (u, w) at c.
inline std::array<double, 2> project_line_plane(const std::array<double, 3>& x) {
    Eigen::Vector3d c = Eigen::Vector3d::Ones() / std::sqrt(3.0);
    Eigen::Vector3d N = -c;
    Eigen::Vector3d p(x[0], x[1], x[2]);
    p.normalize();
    Eigen::Vector3d u(1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 0);
    Eigen::Vector3d w(1 / std::sqrt(6.0), 1 / std::sqrt(6.0), -2 / std::sqrt(6.0));
    // N + s (p - N) = c + a u + b w
    Eigen::Matrix3d A;
    A.col(0) = p - N;
    A.col(1) = -u;
    A.col(2) = -w;
    Eigen::Vector3d sol = A.colPivHouseholderQr().solve(c - N);
    return {sol[1], sol[2]};
}

struct EigenRef {
    double lambda, nu1, nu2;
    Eigen::Vector3d v;
};

inline EigenRef eigen(const ccfan::Mat3<double>& At) {
    Eigen::Matrix3d A;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = At(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(A);
    EigenRef r;
    r.lambda = es.eigenvalues()[2];
    r.nu1 = es.eigenvalues()[1];
    r.nu2 = es.eigenvalues()[0];
    r.v = es.eigenvectors().col(2);
    if (r.v.sum() < 0) r.v = -r.v;
    return r;
}

/// (K,S,T) from the measured signs of the C-columns and of the entries of B
inline std::array<int, 3> labels_measured(const SeedRef& s, int K) {
    auto sgn = [](double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); };
    std::array<int, 3> eps{};
    for (int j = 0; j < 3; ++j) {
        double sum = s.c[0][j] + s.c[1][j] + s.c[2][j];
        eps[j] = sgn(sum);
    }
    int S = -1;
    for (int t = 0; t < 3; ++t)
        if (t != K && eps[t] != eps[K] && eps[t] * sgn(s.b[K][t]) == -1) S = t;
    return {K, S, 3 - K - S};
}

/// random cluster-cyclic matrix: p12, p23 in [2, 6], p31 inside the window allowed by C <= 4,
/// random sign pattern and, optionally, a random symmetrizer
inline ccfan::ExchangeMatrix<double> random_cluster_cyclic(std::mt19937_64& rng, bool with_d = true) {
    std::uniform_real_distribution<double> U(0, 1);
    for (;;) {
        double a = 2 + 4 * U(rng), b = 2 + 4 * U(rng);
        double disc = a * a * b * b - 4 * (a * a + b * b - 4);
        if (disc < 0) continue;
        double lo = std::max(2.0, (a * b - std::sqrt(disc)) / 2), hi = (a * b + std::sqrt(disc)) / 2;
        if (hi <= lo) continue;
        double c = lo + (hi - lo) * U(rng);
        if (a * a + b * b + c * c - a * b * c > 4) continue;
        ccfan::Vec3<double> d{1, 1, 1};
        if (with_d)
            for (int k = 0; k < 3; ++k) d[k] = static_cast<double>(1 + rng() % 4);
        int sigma = (rng() % 2) ? 1 : -1;
        return ccfan::from_skew(a, b, c, sigma, d);
    }
}

/// random integer-entry skew-symmetric cluster-cyclic matrix with entries up to `max_entry`
inline ccfan::ExchangeMatrix<double> random_integer_cluster_cyclic(std::mt19937_64& rng, int max_entry = 9) {
    for (;;) {
        int a = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_entry - 1));
        int b = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_entry - 1));
        int c = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_entry - 1));
        if (a * a + b * b + c * c - a * b * c > 4) continue;
        int sigma = (rng() % 2) ? 1 : -1;
        return ccfan::from_skew<double>(a, b, c, sigma, {1, 1, 1});
    }
}

}  // namespace oracle
