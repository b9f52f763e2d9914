#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace ccfan {

/// Reduced word; letters are 0-based direction indices.
using Word = std::vector<int>;

inline bool is_reduced(const Word& w) {
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (w[k] < 0 || w[k] > 2) return false;
        if (k > 0 && w[k] == w[k - 1]) return false;
    }
    return true;
}

/// w[k]: append k, or cancel it when it equals the last letter
inline Word word_times(Word w, int k) {
    if (!w.empty() && w.back() == k)
        w.pop_back();
    else
        w.push_back(k);
    return w;
}

inline std::string word_string(const Word& w, const char* sep = " ") {
    std::string s;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (k) s += sep;
        s += std::to_string(w[k] + 1);
    }
    return s;
}

struct Labels {
    int K = -1, S = -1, T = -1;
    bool operator==(const Labels&) const = default;
};

enum class PosKind { Origin, Trunk, Branch };

/// w = [i] S^n (trunk) or w = [i] S^n T suffix (branch); `suffix` is over {S,T}
struct Position {
    PosKind kind = PosKind::Origin;
    int i = -1;
    int n = 0;
    std::string suffix;
};

inline const char* pos_name(PosKind k) {
    switch (k) {
    case PosKind::Origin: return "Origin";
    case PosKind::Trunk: return "Trunk";
    case PosKind::Branch: return "Branch";
    }
    return "?";
}

// Labels and tropical signs depend on the sign pattern only, and the sign pattern of a
// cluster-cyclic B^w is sigma0 * (-1)^|w| * pi. LabelState tracks exactly that.
struct LabelState {
    int sigma = 1;  // cyclic sign of the current matrix
    std::array<int, 3> eps{1, 1, 1};
    std::optional<Labels> kst;
    Word word;
    std::string moves;  // S/T letters after the first one

    int bsign(int i, int j) const { return sigma * cyc(i, j); }
};

inline Labels labels_from(const std::array<int, 3>& eps, int K, int sigma) {
    int found = -1, count = 0;
    for (int s = 0; s < 3; ++s) {
        if (s == K) continue;
        if (eps[s] != eps[K] && eps[s] * sigma * cyc(K, s) == -1) {
            found = s;
            ++count;
        }
    }
    if (count != 1)
        throw Error(ErrorKind::LabelContradiction,
                    std::to_string(count) + " candidates for S at K=" + std::to_string(K + 1));
    return {K, found, third(K, found)};
}

/// one step of the tropical sign recursion and relabeling; k must differ from the last letter
inline LabelState label_step(const LabelState& s, int k) {
    LabelState r = s;
    if (s.word.empty()) {
        r.eps[k] = -r.eps[k];
    } else {
        const Labels& L = *s.kst;
        if (k == L.S) {
            r.eps[L.S] = -r.eps[L.S];
            r.eps[L.K] = -r.eps[L.K];
            r.moves += 'S';
        } else if (k == L.T) {
            r.eps[L.T] = -r.eps[L.T];
            r.moves += 'T';
        } else {
            throw Error(ErrorKind::Input, "label_step expects an extending letter");
        }
    }
    r.sigma = -s.sigma;
    r.word.push_back(k);
    r.kst = labels_from(r.eps, k, r.sigma);
    return r;
}

inline LabelState label_walk(int sigma0, const Word& w) {
    if (!is_reduced(w)) throw Error(ErrorKind::Input, "word is not reduced");
    LabelState s;
    s.sigma = sigma0;
    for (int k : w) s = label_step(s, k);
    return s;
}

inline Position position_from_moves(int i, const std::string& moves) {
    Position p;
    if (i < 0) return p;
    p.i = i;
    std::size_t t = moves.find('T');
    if (t == std::string::npos) {
        p.kind = PosKind::Trunk;
        p.n = static_cast<int>(moves.size());
    } else {
        p.kind = PosKind::Branch;
        p.n = static_cast<int>(t);
        p.suffix = moves.substr(t + 1);
    }
    return p;
}

/// "[1]SST" style coordinate
inline std::string st_form(const Word& w, const std::string& moves) {
    if (w.empty()) return "[]";
    return "[" + std::to_string(w.front() + 1) + "]" + moves;
}

/// (K,S,T) of the single-letter word [i]
template <class T>
Labels initial_labels(const ExchangeMatrix<T>& B, int i) {
    int s0 = cyclic_sign(B);
    if (s0 == 0) throw Error(ErrorKind::NotCyclic, "labels need a cyclic matrix");
    return *label_walk(s0, {i}).kst;
}

template <class T>
Position classify_position(const Word& w, const ExchangeMatrix<T>& B) {
    int s0 = cyclic_sign(B);
    if (s0 == 0) throw Error(ErrorKind::NotCyclic, "classification needs a cyclic matrix");
    LabelState s = label_walk(s0, w);
    return position_from_moves(w.empty() ? -1 : w.front(), s.moves);
}

template <class T>
struct Seed {
    ExchangeMatrix<T> B0;
    ExchangeMatrix<T> B;
    int sigma0 = 1;
    Word word;
    std::string moves;
    Mat3<T> C, G;
    std::array<int, 3> eps{1, 1, 1};
    std::optional<Labels> kst;

    int sigma() const { return (word.size() % 2) ? -sigma0 : sigma0; }
    /// exact sign of b^w_ij from the tracked cyclic pattern
    int bsign(int i, int j) const { return sigma() * cyc(i, j); }
    Position position() const { return position_from_moves(word.empty() ? -1 : word.front(), moves); }
    std::string st() const { return st_form(word, moves); }
    const Labels& labels() const {
        if (!kst) throw Error(ErrorKind::Input, "the initial seed has no K/S/T labels");
        return *kst;
    }
};

template <class T>
Seed<T> initial_seed(const ExchangeMatrix<T>& B, const Tol& tol = {}) {
    require_cluster_cyclic(B, tol);
    Seed<T> s;
    s.B0 = s.B = B;
    s.sigma0 = cyclic_sign(B);
    s.C = s.G = Mat3<T>::identity();
    return s;
}

namespace detail {

template <class T>
bool all_finite(const Mat3<T>& m) {
    for (const auto& v : m.a)
        if (!isfinite_(v)) return false;
    return true;
}

template <class T>
Seed<T> extend(const Seed<T>& s, int k, int depth_cap) {
    if (static_cast<int>(s.word.size()) + 1 > depth_cap)
        throw Error(ErrorKind::DepthExceeded, "word length exceeds depth cap " + std::to_string(depth_cap));
    Seed<T> r = s;
    const int ek = s.eps[k];
    for (int j = 0; j < 3; ++j) {
        if (j == k) continue;
        // [eps_k b_kj]_+ on the c side, [-eps_k b_jk]_+ on the g side
        if (ek * s.bsign(k, j) > 0)
            for (int i = 0; i < 3; ++i) r.C(i, j) = s.C(i, j) + abs_(s.B(k, j)) * s.C(i, k);
    }
    for (int i = 0; i < 3; ++i) r.C(i, k) = -s.C(i, k);
    for (int i = 0; i < 3; ++i) {
        T acc = -s.G(i, k);
        for (int j = 0; j < 3; ++j)
            if (j != k && -ek * s.bsign(j, k) > 0) acc += abs_(s.B(j, k)) * s.G(i, j);
        r.G(i, k) = acc;
    }
    r.B = mutate(s.B, k);

    LabelState ls;
    ls.sigma = s.sigma();
    ls.eps = s.eps;
    ls.kst = s.kst;
    ls.word = s.word;
    ls.moves = s.moves;
    LabelState nx = label_step(ls, k);
    r.eps = nx.eps;
    r.kst = nx.kst;
    r.moves = nx.moves;
    r.word.push_back(k);
    if (!all_finite(r.C) || !all_finite(r.G) || !all_finite(r.B.b))
        throw Error(ErrorKind::DepthExceeded, "entries overflow the scalar type at depth " +
                                                  std::to_string(r.word.size()));
    return r;
}

}  // namespace detail

/// Seed at w[k]; equal k pops the last letter, recomputing the parent from the initial seed.
template <class T>
Seed<T> mutate_seed(const Seed<T>& s, int k, int depth_cap = 1 << 20) {
    if (k < 0 || k > 2) throw Error(ErrorKind::Input, "mutation index out of range");
    if (!s.word.empty() && s.word.back() == k) {
        Seed<T> r;
        r.B0 = r.B = s.B0;
        r.sigma0 = s.sigma0;
        r.C = r.G = Mat3<T>::identity();
        for (std::size_t q = 0; q + 1 < s.word.size(); ++q) r = detail::extend(r, s.word[q], depth_cap);
        return r;
    }
    return detail::extend(s, k, depth_cap);
}

template <class T>
Seed<T> seed_at(const ExchangeMatrix<T>& B, const Word& w, const Config& cfg = {}) {
    if (!is_reduced(w)) throw Error(ErrorKind::Input, "word is not reduced");
    Seed<T> s = initial_seed(B, cfg.tol);
    for (int k : w) s = mutate_seed(s, k, cfg.depth_cap);
    return s;
}

template <class T>
Labels kst_labels(const Seed<T>& s) {
    return s.labels();
}

/// right action of a word over {S,T}
template <class T>
Seed<T> act(Seed<T> s, const std::string& X, int depth_cap = 1 << 20) {
    for (char ch : X) {
        const Labels& L = s.labels();
        if (ch == 'S')
            s = mutate_seed(s, L.S, depth_cap);
        else if (ch == 'T')
            s = mutate_seed(s, L.T, depth_cap);
        else
            throw Error(ErrorKind::Input, std::string("unknown monoid letter '") + ch + "'");
    }
    return s;
}

/// columns divided by sqrt(d_j)
template <class T>
Mat3<T> modified(const Mat3<T>& m, const Vec3<T>& d) {
    Mat3<T> r = m;
    for (int j = 0; j < 3; ++j) {
        T f = T(1) / sqrt_(d[j]);
        for (int i = 0; i < 3; ++i) r(i, j) *= f;
    }
    return r;
}

template <class T>
Mat3<T> unmodified(const Mat3<T>& m, const Vec3<T>& d) {
    Mat3<T> r = m;
    for (int j = 0; j < 3; ++j) {
        T f = sqrt_(d[j]);
        for (int i = 0; i < 3; ++i) r(i, j) *= f;
    }
    return r;
}

template <class T> Vec3<T> gt(const Seed<T>& s, int j) { return s.G.col(j) * (T(1) / sqrt_(s.B.d[j])); }
template <class T> Vec3<T> ct(const Seed<T>& s, int j) { return s.C.col(j) * (T(1) / sqrt_(s.B.d[j])); }

/// e~_i = e_i / sqrt(d_i)
template <class T> Vec3<T> e_tilde(const Vec3<T>& d, int i) { return Vec3<T>::unit(i) * (T(1) / sqrt_(d[i])); }

template <class T> T dotD(const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& d) {
    return d[0] * a[0] * b[0] + d[1] * a[1] * b[1] + d[2] * a[2] * b[2];
}

template <class T> T normD(const Vec3<T>& a, const Vec3<T>& d) { return sqrt_(dotD(a, a, d)); }

/// Seed at wS^n from the closed Chebyshev forms.
template <class T>
Seed<T> s_power_fast(const Seed<T>& s, int n, const Tol& tol = {}) {
    if (n < 0) throw Error(ErrorKind::Domain, "s_power_fast needs n >= 0");
    if (n == 0) return s;
    const Labels L = s.labels();
    const int K = L.K, S = L.S, Tt = L.T;
    const Vec3<T>& d = s.B.d;
    const T pSK = pval(s.B, S, K), pKT = pval(s.B, K, Tt), pST = pval(s.B, S, Tt);
    auto u = [&](int m) { return chebyshev_u(m, pSK, tol); };
    const T un = u(n), un1 = u(n - 1), un2 = u(n - 2);
    const int Kn = (n % 2 == 0) ? K : S;
    const int Sn = (n % 2 == 0) ? S : K;

    Vec3<T> gK = gt(s, K), gS = gt(s, S), cK = ct(s, K), cS = ct(s, S);
    Vec3<T> g_Kn = gS * (-un1) + gK * un;
    Vec3<T> g_Sn = gS * (-un2) + gK * un1;
    Vec3<T> c_Kn = cK * (-un2) - cS * un1;
    Vec3<T> c_Sn = cK * un1 + cS * un;

    Seed<T> r = s;
    r.G.set_col(Kn, g_Kn * sqrt_(d[Kn]));
    r.G.set_col(Sn, g_Sn * sqrt_(d[Sn]));
    r.C.set_col(Kn, c_Kn * sqrt_(d[Kn]));
    r.C.set_col(Sn, c_Sn * sqrt_(d[Sn]));

    Mat3<T> p;
    p(K, S) = p(S, K) = pSK;
    p(Sn, Tt) = p(Tt, Sn) = -un1 * pKT + un * pST;
    p(Kn, Tt) = p(Tt, Kn) = -un2 * pKT + un1 * pST;
    int sig = (n % 2) ? -s.sigma() : s.sigma();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) r.B.b(i, j) = T(sig * cyc(i, j)) * p(i, j) * sqrt_(d[j] / d[i]);

    if (n % 2) {
        r.eps[K] = -r.eps[K];
        r.eps[S] = -r.eps[S];
    }
    for (int m = 0; m < n; ++m) r.word.push_back(m % 2 == 0 ? S : K);
    r.moves.append(static_cast<std::size_t>(n), 'S');
    r.kst = Labels{Kn, Sn, Tt};
    return r;
}

/// projectivized limits of g~_K and c~_S along wS^n, unit in the D-norm
template <class T>
std::pair<Vec3<T>, Vec3<T>> limit_directions(const Seed<T>& s, const Tol& tol = {}) {
    const Labels L = s.labels();
    T a = alpha(pval(s.B, L.S, L.K), tol);
    Vec3<T> g = gt(s, L.K) * a - gt(s, L.S);
    Vec3<T> c = ct(s, L.S) * a + ct(s, L.K);
    const Vec3<T>& d = s.B.d;
    return {g * (T(1) / normD(g, d)), c * (T(1) / normD(c, d))};
}

/// closed form of the tropical signs from the S/T coordinate
inline std::array<int, 3> eps_closed_form(const Labels& L, const Position& pos, const std::string& moves) {
    std::array<int, 3> e{};
    if (pos.kind == PosKind::Trunk) {
        e[L.K] = -1;
        e[L.S] = 1;
        e[L.T] = 1;
    } else {
        int nt = 0;
        for (char c : moves) nt += c == 'T';
        int par = (nt % 2) ? -1 : 1;
        e[L.K] = par;
        e[L.T] = par;
        e[L.S] = -par;
    }
    return e;
}

/// expected eps_M * sign(b_{M'M}) for (M,M') in the order KS, KT, SK, ST, TK, TS
inline std::array<int, 6> mutation_sign_table(PosKind kind) {
    if (kind == PosKind::Trunk) return {-1, 1, -1, 1, 1, -1};
    return {-1, 1, -1, 1, -1, 1};
}

template <class T>
std::array<int, 6> mutation_signs(const Seed<T>& s) {
    const Labels& L = s.labels();
    const int idx[6][2] = {{L.K, L.S}, {L.K, L.T}, {L.S, L.K}, {L.S, L.T}, {L.T, L.K}, {L.T, L.S}};
    std::array<int, 6> out{};
    for (int q = 0; q < 6; ++q) {
        int M = idx[q][0], Mp = idx[q][1];
        out[q] = s.eps[M] * sign_exact(s.B(Mp, M));
    }
    return out;
}

/// Depth-first walk over all reduced words extending `root` up to total length `depth`.
/// The visitor returns false to skip the subtree below a seed.
template <class T>
void walk_tree(const Seed<T>& root, int depth, const std::function<bool(const Seed<T>&)>& visit,
               int depth_cap = 1 << 20) {
    if (!visit(root)) return;
    if (static_cast<int>(root.word.size()) >= depth) return;
    for (int k = 0; k < 3; ++k) {
        if (!root.word.empty() && root.word.back() == k) continue;
        walk_tree(detail::extend(root, k, depth_cap), depth, visit, depth_cap);
    }
}

}  // namespace ccfan
