#pragma once

#include <array>
#include <vector>

#include "seed.hpp"

namespace ccfan {

/// three-valued answer for strict/open tests decided under a tolerance
enum class Tri { Yes, No, Undecided };

inline const char* tri_name(Tri t) {
    switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    case Tri::Undecided: return "undecided";
    }
    return "?";
}

/// sign of <x, n>_D for unit-normalized x and n, with a zero band of eps
template <class T>
int side(const Vec3<T>& x, const Vec3<T>& n, const Vec3<T>& d, long double eps) {
    T nx = normD(x, d), nn = normD(n, d);
    if (nx == T(0) || nn == T(0)) return 0;
    return sign_tol(T(dotD(x, n, d) / (nx * nn)), eps);
}

/// polyhedral cone over at most three generators
template <class T>
struct Cone {
    std::vector<Vec3<T>> gens;

    std::size_t size() const { return gens.size(); }
    Mat3<T> matrix() const { return from_cols(gens.at(0), gens.at(1), gens.at(2)); }
};

/// Coefficients of x in the basis (a,b,c) after scaling every vector to unit length,
/// so the tolerance applies to comparable numbers. False when the basis is degenerate.
template <class T>
bool unit_coords(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c, const Vec3<T>& x, Vec3<T>& y) {
    Mat3<T> m = from_cols(normalized(a), normalized(b), normalized(c));
    return solve3(m, normalized(x), y);
}

/// closed membership (weak, tolerance eps) in a cone of 0..3 generators
template <class T>
bool cone_contains(const Cone<T>& k, const Vec3<T>& x, long double eps) {
    T nx = norm(x);
    if (nx == T(0)) return true;
    const auto& g = k.gens;
    if (g.empty()) return false;
    Vec3<T> xu = normalized(x);
    if (g.size() == 1) {
        Vec3<T> a = normalized(g[0]);
        return norm(cross(a, xu)) <= T(eps) && dot(a, xu) > T(0);
    }
    if (g.size() == 2) {
        Vec3<T> a = normalized(g[0]), b = normalized(g[1]);
        Vec3<T> nrm = cross(a, b);
        T nn = norm(nrm);
        if (nn == T(0)) return false;
        if (abs_(dot(nrm, xu)) > T(eps) * nn) return false;
        // coefficients inside the plane via a third direction along the normal
        Vec3<T> y;
        if (!solve3(from_cols(a, b, normalized(nrm)), xu, y)) return false;
        return y[0] >= -T(eps) && y[1] >= -T(eps);
    }
    Vec3<T> y;
    if (!unit_coords(g[0], g[1], g[2], x, y)) return false;
    return y[0] >= -T(eps) && y[1] >= -T(eps) && y[2] >= -T(eps);
}

/// open-interior membership of a simplicial cone
template <class T>
Tri cone_interior(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c, const Vec3<T>& x, long double eps) {
    Vec3<T> y;
    if (!unit_coords(a, b, c, x, y)) return Tri::Undecided;
    bool undecided = false;
    for (int k = 0; k < 3; ++k) {
        if (y[k] < -T(eps)) return Tri::No;
        if (y[k] <= T(eps)) undecided = true;
    }
    return undecided ? Tri::Undecided : Tri::Yes;
}

/// cone over the modified g-columns indexed by J
template <class T>
Cone<T> g_cone(const Seed<T>& s, const std::vector<int>& J) {
    Cone<T> k;
    for (int j : J) k.gens.push_back(gt(s, j));
    return k;
}

template <class T>
Cone<T> g_cone(const Seed<T>& s) { return g_cone(s, {0, 1, 2}); }

/// deterministic interior samples sum lambda_k * unit(gen_k), lambda from a Halton sequence
template <class T>
std::vector<Vec3<T>> interior_samples(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c, int count,
                                      unsigned seed = 0) {
    std::vector<Vec3<T>> out;
    out.reserve(static_cast<std::size_t>(count));
    Vec3<T> ua = normalized(a), ub = normalized(b), uc = normalized(c);
    for (int q = 0; q < count; ++q) {
        int idx = q + static_cast<int>(seed % 100000u);
        T l1(halton(idx, 2)), l2(halton(idx, 3)), l3(halton(idx, 5));
        out.push_back(ua * l1 + ub * l2 + uc * l3);
    }
    return out;
}

// ---------------------------------------------------------------- global bounds

enum class QClass { Zero, QPlus, QMinus, Outside, Undecided };

inline const char* qclass_name(QClass q) {
    switch (q) {
    case QClass::Zero: return "zero";
    case QClass::QPlus: return "Q+";
    case QClass::QMinus: return "Q-";
    case QClass::Outside: return "outside";
    case QClass::Undecided: return "undecided";
    }
    return "?";
}

template <class T>
struct QuadraticBound {
    int i = -1;  // -1: built from the initial matrix itself
    Mat3<T> At;
    Vec3<T> d;
    EigenData<T> eigen;

    Vec3<T> half(const Vec3<T>& x) const {
        return {sqrt_(d[0]) * x[0], sqrt_(d[1]) * x[1], sqrt_(d[2]) * x[2]};
    }
    T quadform(const Vec3<T>& x) const {
        Vec3<T> y = half(x);
        return dot(y, At * y);
    }
    T v_pairing(const Vec3<T>& x) const { return dot(half(x), eigen.v); }
    /// magnitude against which quadform residuals are judged
    T scale(const Vec3<T>& x) const {
        Vec3<T> y = half(x);
        return max_(T(1), dot(y, y) * At.max_abs());
    }

    QClass classify(const Vec3<T>& x, long double eps) const {
        if (max_abs(x) == T(0)) return QClass::Zero;
        Vec3<T> y = half(x);
        T yy = dot(y, y);
        int q = sign_tol(quadform(x), eps, T(yy * At.max_abs()));
        if (q < 0) return QClass::Outside;
        if (q == 0) return QClass::Undecided;
        int v = sign_tol(v_pairing(x), eps, sqrt_(yy));
        if (v > 0) return QClass::QPlus;
        if (v < 0) return QClass::QMinus;
        return QClass::Undecided;
    }
    Tri in_qplus(const Vec3<T>& x, long double eps) const {
        QClass c = classify(x, eps);
        if (c == QClass::QPlus || c == QClass::Zero) return Tri::Yes;
        if (c == QClass::Undecided) return Tri::Undecided;
        return Tri::No;
    }
};

template <class T>
QuadraticBound<T> bound_from(const ExchangeMatrix<T>& B, int i, const Tol& tol) {
    QuadraticBound<T> q;
    q.i = i;
    q.At = pseudo_cartan_skew(B);
    q.d = B.d;
    q.eigen = eigen_analysis(q.At, tol);
    return q;
}

/// Q_i: built from mu_i(B)
template <class T>
QuadraticBound<T> global_bound(const ExchangeMatrix<T>& B, int i, const Tol& tol = {}) {
    require_cluster_cyclic(B, tol);
    return bound_from(mutate(B, i), i, tol);
}

/// Q_initial: built from B itself
template <class T>
QuadraticBound<T> initial_bound(const ExchangeMatrix<T>& B, const Tol& tol = {}) {
    require_cluster_cyclic(B, tol);
    return bound_from(B, -1, tol);
}

// ---------------------------------------------------------------- local bounds

template <class T>
struct LocalBound {
    Word w;
    Labels L;
    T aSK, aTK;
    Vec3<T> gS, gT, gK, gbar;
    Vec3<T> cbar;
    Vec3<T> nS, nT, nK;  // plane normals: limits of c~_S along wS^n and wTS^n, and c~_K
    Vec3<T> d;

    /// membership in V^w = C(gS,gT) union C°(gS,gT,gbar)
    Tri contains(const Vec3<T>& x, long double eps) const {
        if (max_abs(x) == T(0)) return Tri::Yes;
        Vec3<T> y;
        if (!unit_coords(gS, gT, gbar, x, y)) return Tri::Undecided;
        for (int k = 0; k < 3; ++k)
            if (y[k] < -T(eps)) return Tri::No;
        if (y[2] <= T(eps)) return Tri::Yes;  // closed facet C(gS,gT)
        if (y[0] > T(eps) && y[1] > T(eps)) return Tri::Yes;
        return Tri::Undecided;  // on an open face through gbar
    }
    bool closure_contains(const Vec3<T>& x, long double eps) const {
        Vec3<T> y;
        if (max_abs(x) == T(0)) return true;
        if (!unit_coords(gS, gT, gbar, x, y)) return false;
        return y[0] >= -T(eps) && y[1] >= -T(eps) && y[2] >= -T(eps);
    }
    Tri interior_contains(const Vec3<T>& x, long double eps) const {
        return cone_interior(gS, gT, gbar, x, eps);
    }
    /// the half-space description of the open part
    Tri interior_by_planes(const Vec3<T>& x, long double eps) const {
        int a = side(x, nS, d, eps), b = side(x, nT, d, eps), c = side(x, nK, d, eps);
        if (a < 0 || b < 0 || c < 0) return Tri::No;
        if (a == 0 || b == 0 || c == 0) return Tri::Undecided;
        return Tri::Yes;
    }
};

template <class T>
LocalBound<T> local_bound(const Seed<T>& s, const Tol& tol = {}) {
    if (s.word.empty() || s.position().kind != PosKind::Branch)
        throw Error(ErrorKind::NotBranch, "local bound needs a branch seed, got " + s.st());
    LocalBound<T> lb;
    lb.w = s.word;
    lb.L = s.labels();
    const int K = lb.L.K, S = lb.L.S, Tt = lb.L.T;
    lb.d = s.B.d;
    lb.aSK = alpha(pval(s.B, S, K), tol);
    lb.aTK = alpha(pval(s.B, Tt, K), tol);
    lb.gS = gt(s, S);
    lb.gT = gt(s, Tt);
    lb.gK = gt(s, K);
    lb.gbar = lb.gK - lb.gS * (T(1) / lb.aSK) - lb.gT * (T(1) / lb.aTK);
    Vec3<T> cS = ct(s, S), cT = ct(s, Tt), cK = ct(s, K);
    lb.cbar = cS * lb.aSK - cT * lb.aTK;
    lb.nS = cS * lb.aSK + cK;
    lb.nT = cT * lb.aTK + cK;
    lb.nK = cK;
    return lb;
}

// ---------------------------------------------------------------- trunks and separating vectors

/// p-values of the trunk seed [i]S^n, keyed by its labels
template <class T>
struct TrunkData {
    Labels L0;  // (k0,s0,t0)
    Labels Ln;  // labels at [i]S^n
    T pKS, pST, pTK;
};

template <class T>
TrunkData<T> trunk_data(const ExchangeMatrix<T>& B, int i, int n, const Tol& tol = {}) {
    if (n < 0) throw Error(ErrorKind::Domain, "trunk index n must be >= 0");
    ExchangeMatrix<T> B1 = mutate(B, i);
    TrunkData<T> t;
    t.L0 = initial_labels(B, i);
    const int k0 = t.L0.K, s0 = t.L0.S, t0 = t.L0.T;
    T p = pval(B1, k0, s0), pKT = pval(B1, k0, t0), pST = pval(B1, s0, t0);
    T un = chebyshev_u(n, p, tol), un1 = chebyshev_u(n - 1, p, tol), un2 = chebyshev_u(n - 2, p, tol);
    t.Ln = (n % 2 == 0) ? Labels{k0, s0, t0} : Labels{s0, k0, t0};
    t.pKS = p;
    t.pST = -un1 * pKT + un * pST;
    t.pTK = -un2 * pKT + un1 * pST;
    return t;
}

/// separating vectors c_i^{+}(n) (sign > 0) and c_i^{-}(n) (sign < 0)
template <class T>
Vec3<T> frak_c(const ExchangeMatrix<T>& B, int i, int n, int sign, const Tol& tol = {}) {
    require_cluster_cyclic(B, tol);
    TrunkData<T> td = trunk_data(B, i, n, tol);
    const int k0 = td.L0.K, s0 = td.L0.S, t0 = td.L0.T;
    const T& p = td.pKS;
    const Vec3<T>& d = B.d;
    if (sign > 0)
        return e_tilde(d, t0) * alpha(td.pST, tol) + e_tilde(d, s0) * chebyshev_u(n, p, tol) +
               e_tilde(d, k0) * chebyshev_u(n + 1, p, tol);
    return e_tilde(d, t0) * (-alpha_inv(td.pTK, tol)) - e_tilde(d, s0) * chebyshev_u(n - 1, p, tol) -
           e_tilde(d, k0) * chebyshev_u(n, p, tol);
}

/// n -> infinity direction of c_i^{+}(n); for the minus sign the n = 0 vector
template <class T>
Vec3<T> frak_c_limit(const ExchangeMatrix<T>& B, int i, int sign, const Tol& tol = {}) {
    if (sign < 0) return frak_c(B, i, 0, -1, tol);
    Labels L = initial_labels(B, i);
    const int k0 = L.K, s0 = L.S, t0 = L.T;
    T a = alpha(pval(B, s0, k0), tol);
    const Vec3<T>& d = B.d;
    return e_tilde(d, t0) * (-pval(B, s0, t0) + a * pval(B, k0, t0)) + e_tilde(d, s0) + e_tilde(d, k0) * a;
}

template <class T>
struct TrunkSupport {
    int i;
    Labels L0;
    T alpha_ks;
    Vec3<T> d;
    std::array<Vec3<T>, 3> gens;     // e~_t0, e~_s0, alpha e~_s0 - e~_k0
    std::array<Vec3<T>, 3> normals;  // e~_k0 (< 0), e~_t0 (> 0), alpha e~_k0 + e~_s0 (> 0)

    /// open interior, half-space form
    Tri interior_by_planes(const Vec3<T>& x, long double eps) const {
        int a = -side(x, normals[0], d, eps), b = side(x, normals[1], d, eps), c = side(x, normals[2], d, eps);
        if (a < 0 || b < 0 || c < 0) return Tri::No;
        if (a == 0 || b == 0 || c == 0) return Tri::Undecided;
        return Tri::Yes;
    }
    Tri interior_by_generators(const Vec3<T>& x, long double eps) const {
        return cone_interior(gens[0], gens[1], gens[2], x, eps);
    }
    /// |Delta^{<[i]S^inf}|, half-space form: closed in e~_k0, e~_t0, open in the limit plane, plus C(e~_t0)
    Tri support_by_planes(const Vec3<T>& x, long double eps) const {
        if (max_abs(x) == T(0)) return Tri::Yes;
        if (cone_contains(Cone<T>{{gens[0]}}, x, eps)) return Tri::Yes;
        int a = -side(x, normals[0], d, eps), b = side(x, normals[1], d, eps), c = side(x, normals[2], d, eps);
        if (a < 0 || b < 0 || c < 0) return Tri::No;
        if (c == 0) return Tri::Undecided;
        return Tri::Yes;
    }
    /// generator form: C°(t0,s0,r) u C(s0,t0) u C°(s0,r)
    Tri support_by_generators(const Vec3<T>& x, long double eps) const {
        if (max_abs(x) == T(0)) return Tri::Yes;
        Vec3<T> y;
        if (!unit_coords(gens[0], gens[1], gens[2], x, y)) return Tri::Undecided;
        for (int k = 0; k < 3; ++k)
            if (y[k] < -T(eps)) return Tri::No;
        bool zt = y[0] <= T(eps), zs = y[1] <= T(eps), zr = y[2] <= T(eps);
        if (!zt && !zs && !zr) return Tri::Yes;  // interior
        if (zr) return Tri::Yes;                  // C(s0,t0)
        if (zt && !zs) return Tri::Yes;           // C°(s0,r)
        return Tri::Undecided;                    // on the open ray or face through r only
    }
};

template <class T>
TrunkSupport<T> trunk_support(const ExchangeMatrix<T>& B, int i, const Tol& tol = {}) {
    require_cluster_cyclic(B, tol);
    TrunkSupport<T> ts;
    ts.i = i;
    ts.L0 = initial_labels(B, i);
    ts.d = B.d;
    const int k0 = ts.L0.K, s0 = ts.L0.S, t0 = ts.L0.T;
    ts.alpha_ks = alpha(pval(B, k0, s0), tol);
    const Vec3<T>& d = B.d;
    ts.gens = {e_tilde(d, t0), e_tilde(d, s0), e_tilde(d, s0) * ts.alpha_ks - e_tilde(d, k0)};
    ts.normals = {e_tilde(d, k0), e_tilde(d, t0), e_tilde(d, k0) * ts.alpha_ks + e_tilde(d, s0)};
    return ts;
}

/// root seed [i]S^n T of a maximal branch
template <class T>
Seed<T> branch_root(const ExchangeMatrix<T>& B, int i, int n, const Config& cfg = {}) {
    Seed<T> s = mutate_seed(initial_seed(B, cfg.tol), i, cfg.depth_cap);
    s = s_power_fast(s, n, cfg.tol);
    if (static_cast<int>(s.word.size()) + 1 > cfg.depth_cap)
        throw Error(ErrorKind::DepthExceeded, "branch root beyond depth cap");
    return act(s, "T", cfg.depth_cap);
}

}  // namespace ccfan
