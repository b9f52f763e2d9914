#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fan.hpp"

namespace ccfan {

struct Witness {
    Word word;
    std::string detail;
    double value = 0;
};

/// Outcome of one verifier. `ok` is false iff a hard violation was found.
struct Report {
    std::string check;
    bool ok = true;
    long checked = 0;
    long violations = 0;
    long undecided = 0;
    std::vector<Witness> witnesses;
    std::map<std::string, double> residuals;
    std::map<std::string, long> counts;
    std::vector<std::string> notes;

    static constexpr std::size_t kept = 20;
    static constexpr std::size_t buffered = 2000;

    explicit Report(std::string name = {}) : check(std::move(name)) {}

    void violation(const Word& w, std::string detail, double value = 0, bool hard = true) {
        ++violations;
        if (hard) ok = false;
        if (witnesses.size() < buffered) witnesses.push_back({w, std::move(detail), value});
    }
    void note_undecided(const std::string& what) {
        ++undecided;
        ++counts["undecided_" + what];
    }
    void track_max(const std::string& key, double v) {
        auto it = residuals.find(key);
        if (it == residuals.end() || v > it->second || std::isnan(v)) residuals[key] = v;
    }
    void track_min(const std::string& key, double v) {
        auto it = residuals.find(key);
        if (it == residuals.end() || v < it->second) residuals[key] = v;
    }
    /// orders witnesses by (length, lexicographic word) and keeps the first `kept`
    void finalize() {
        std::stable_sort(witnesses.begin(), witnesses.end(), [](const Witness& a, const Witness& b) {
            if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
            return a.word < b.word;
        });
        if (witnesses.size() > kept) witnesses.resize(kept);
    }
};

inline const std::vector<std::string>& all_check_names() {
    static const std::vector<std::string> names = {"global", "local", "separate", "nonperiodic",
                                                   "signs", "monotone", "simplified", "fanstructure"};
    return names;
}

namespace detail {

template <class T> double as_double(const T& x) { return static_cast<double>(x); }

/// log10 of a positive quantity that may be outside double range
template <class T> double log10_pos(const T& x) {
    if (!(x > T(0))) return -1e300;
    return static_cast<double>(log10_(x));
}

inline std::string fmt_vec(double a, double b, double c) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "(%.6g, %.6g, %.6g)", a, b, c);
    return buf;
}

template <class T> std::string fmt_vec(const Vec3<T>& v) {
    return fmt_vec(as_double(v[0]), as_double(v[1]), as_double(v[2]));
}

template <class T>
Seed<T> root_seed(const ExchangeMatrix<T>& B, int i, const Config& cfg) {
    return mutate_seed(initial_seed(B, cfg.tol), i, cfg.depth_cap);
}

}  // namespace detail

// ---------------------------------------------------------------- seed invariants

/// duality, determinant parity, c-column sign coherence, tropical sign closed form,
/// label recurrences and the mutation sign table, over all seeds to `depth`
template <class T>
Report check_invariants(const ExchangeMatrix<T>& B, int depth, const Config& cfg = {}) {
    Report r("invariants");
    const Tol& tol = cfg.tol;
    Seed<T> s0 = initial_seed(B, tol);
    T max_scale(1);
    // the symmetrizer is the same at every seed
    const Vec3<T> isd{T(1) / sqrt_(B.d[0]), T(1) / sqrt_(B.d[1]), T(1) / sqrt_(B.d[2])};
    std::function<void(const Seed<T>&, const Seed<T>*)> rec = [&](const Seed<T>& s, const Seed<T>* parent) {
        ++r.checked;
        const Vec3<T>& d = s.B.d;
        T dual(0);
        std::array<Vec3<T>, 3> gs, cs;
        for (int j = 0; j < 3; ++j) {
            gs[j] = s.G.col(j) * isd[j];
            cs[j] = s.C.col(j) * isd[j];
        }
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                T v = abs_(T(dotD(gs[a], cs[b], d) - T(a == b ? 1 : 0)));
                dual = max_(dual, v);
            }
        r.track_max("duality_abs", detail::as_double(dual));
        if (dual > T(tol.eq)) r.violation(s.word, "duality residual", detail::as_double(dual));

        T parity = T((s.word.size() % 2) ? -1 : 1);
        T scale = max_(T(1), max_(s.C.max_abs(), s.G.max_abs()));
        T s3 = scale * scale * scale;
        T dc = abs_(T(det(s.C) - parity)), dg = abs_(T(det(s.G) - parity));
        r.track_max("det_C_abs", detail::as_double(dc));
        r.track_max("det_G_abs", detail::as_double(dg));
        r.track_max("det_rel_scale3", detail::as_double(T(max_(dc, dg) / s3)));
        if (scale > max_scale) max_scale = scale;
        if (dc > T(1e-6) * s3 || dg > T(1e-6) * s3) r.violation(s.word, "determinant parity", detail::as_double(max_(dc, dg)));

        for (int j = 0; j < 3; ++j) {
            Vec3<T> c = s.C.col(j);
            T sc = max_abs(c);
            bool pos = false, neg = false;
            for (int k = 0; k < 3; ++k) {
                int sg = sign_tol(c[k], tol.sign, sc);
                pos |= sg > 0;
                neg |= sg < 0;
            }
            if (pos && neg) r.violation(s.word, "c-column " + std::to_string(j + 1) + " not sign-coherent");
            if (!pos && !neg) r.violation(s.word, "zero c-column " + std::to_string(j + 1));
            int measured = pos ? 1 : -1;
            if (!(pos && neg) && (pos || neg) && measured != s.eps[j])
                r.violation(s.word, "tropical sign of column " + std::to_string(j + 1) + " disagrees with its c-vector");
        }

        if (!s.word.empty()) {
            const Labels& L = s.labels();
            Position pos = s.position();
            if (eps_closed_form(L, pos, s.moves) != s.eps) r.violation(s.word, "tropical signs differ from closed form");
            if (mutation_signs(s) != mutation_sign_table(pos.kind)) r.violation(s.word, "mutation sign table mismatch");
            if (parent && parent->kst) {
                const Labels& P = *parent->kst;
                Labels expect;
                char m = s.moves.back();
                if (m == 'S')
                    expect = {P.S, P.K, P.T};
                else if (parent->position().kind == PosKind::Trunk)
                    expect = {P.T, P.S, P.K};
                else
                    expect = {P.T, P.K, P.S};
                if (!(expect == L)) r.violation(s.word, "label recurrence mismatch");
            }
        }
        if (static_cast<int>(s.word.size()) >= depth) return;
        for (int k = 0; k < 3; ++k) {
            if (!s.word.empty() && s.word.back() == k) continue;
            rec(detail::extend(s, k, cfg.depth_cap), &s);
        }
    };
    rec(s0, nullptr);
    r.residuals["log10_max_entry"] = detail::log10_pos(max_scale);
    r.finalize();
    return r;
}

// ---------------------------------------------------------------- global bound

template <class T>
Report check_global_bound(const ExchangeMatrix<T>& B, int i, int depth, const Config& cfg = {}) {
    Report r("global");
    const Tol& tol = cfg.tol;
    QuadraticBound<T> Q = global_bound(B, i, tol);
    r.notes.push_back("direction " + std::to_string(i + 1) + ", surface " + surface_name(Q.eigen.kind));
    r.residuals["lambda"] = detail::as_double(Q.eigen.lambda);
    walk_tree<T>(detail::root_seed(B, i, cfg), depth, [&](const Seed<T>& s) {
        for (int l = 0; l < 3; ++l) {
            ++r.checked;
            Vec3<T> g = gt(s, l);
            T res = abs_(T(Q.quadform(g) - 2));
            T sc = Q.scale(g);
            r.track_max("surface_abs", detail::as_double(res));
            r.track_max("surface_rel", detail::as_double(T(res / sc)));
            if (res > T(tol.eq) * sc) r.violation(s.word, "g~_" + std::to_string(l + 1) + " off the surface H", detail::as_double(res));
            Vec3<T> y = Q.half(g);
            T ny = norm(y);
            T pr = Q.v_pairing(g);
            r.track_min("pairing_min_rel", detail::as_double(T(pr / ny)));
            int sg = sign_tol(pr, tol.sign, ny);
            if (sg < 0)
                r.violation(s.word, "g~_" + std::to_string(l + 1) + " on the negative sheet", detail::as_double(T(pr / ny)));
            else if (sg == 0)
                r.note_undecided("pairing");
        }
        return true;
    }, cfg.depth_cap);
    r.finalize();
    return r;
}

// ---------------------------------------------------------------- local bounds

template <class T>
Report check_local_bounds(const ExchangeMatrix<T>& B, int i, int depth, const Config& cfg = {}, int samples = 64,
                          unsigned sample_seed = 0) {
    Report r("local");
    const Tol& tol = cfg.tol;
    const long double eps = tol.sign;
    std::vector<LocalBound<T>> anc;

    auto tri_count = [&](Tri t, const Word& w, const std::string& what) {
        if (t == Tri::No) r.violation(w, what);
        if (t == Tri::Undecided) r.note_undecided(what.substr(0, what.find(' ')));
    };

    std::function<void(const Seed<T>&)> rec = [&](const Seed<T>& s) {
        bool branch = s.position().kind == PosKind::Branch;
        if (branch) {
            LocalBound<T> lb = local_bound(s, tol);
            const Vec3<T>& d = lb.d;
            T ng = normD(lb.gbar, d);
            for (auto [key, n] : {std::pair<const char*, Vec3<T>>{"gbar_dot_nS", lb.nS}, {"gbar_dot_nT", lb.nT},
                                  {"gbar_dot_cbar", lb.cbar}}) {
                T v = abs_(dotD(lb.gbar, n, d)) / (ng * normD(n, d));
                r.track_max(key, detail::as_double(v));
                if (v > T(tol.eq)) r.violation(s.word, std::string(key) + " nonzero", detail::as_double(v));
            }
            ++r.checked;
            tri_count(lb.interior_contains(lb.gK, eps), s.word, "interior g~_K not in the open bound");

            if (!anc.empty() && anc.back().w.size() + 1 == s.word.size()) {
                const LocalBound<T>& pb = anc.back();
                const bool viaS = s.moves.back() == 'S';
                // nesting on generators and interior samples
                for (const auto& g : {lb.gS, lb.gT, lb.gbar}) {
                    ++r.checked;
                    if (!pb.closure_contains(g, eps)) r.violation(s.word, "generator outside the parent bound closure");
                }
                auto pts = interior_samples(lb.gS, lb.gT, lb.gbar, samples, sample_seed);
                for (const auto& x : pts) {
                    ++r.checked;
                    tri_count(pb.contains(x, eps), s.word, "nesting sample outside the parent bound");
                }
                // separation by the parent plane: wS on the negative side, wT on the positive side
                const int want = viaS ? -1 : 1;
                int strict = 0;
                for (const auto& g : {lb.gS, lb.gT, lb.gbar}) {
                    int sd = side(g, pb.cbar, d, eps) * want;
                    if (sd < 0) r.violation(s.word, "generator on the wrong side of the parent cbar plane");
                    strict += sd > 0;
                }
                if (strict == 0) r.note_undecided("separation");
                for (const auto& x : pts) {
                    ++r.checked;
                    int sd = side(x, pb.cbar, d, eps) * want;
                    if (sd < 0) r.violation(s.word, "sample on the wrong side of the parent cbar plane");
                    if (sd == 0) r.note_undecided("separation");
                }
                // pairing of the inherited T (or S) generator with the parent cbar
                if (viaS) {
                    T v = dotD(lb.gT, pb.cbar, d) + pb.aTK;
                    T rel = abs_(v) / max_(T(1), pb.aTK);
                    r.track_max("gT_dot_cbar_plus_alphaTK", detail::as_double(rel));
                    if (rel > T(tol.eq)) r.violation(s.word, "<g~_T^{wS}, cbar^w> != -alpha_TK^w", detail::as_double(rel));
                }
                Cone<T> face{{pb.gbar, viaS ? pb.gT : pb.gS}};
                ++r.checked;
                if (!cone_contains(face, lb.gbar, eps)) r.violation(s.word, "gbar of the child outside the parent face");
            }
            anc.push_back(lb);
        }
        for (const auto& b : anc)
            for (int l = 0; l < 3; ++l) {
                ++r.checked;
                tri_count(b.contains(gt(s, l), eps), s.word, "descendant g-vector outside an ancestor bound");
            }
        if (static_cast<int>(s.word.size()) < depth)
            for (int k = 0; k < 3; ++k)
                if (s.word.back() != k) rec(detail::extend(s, k, cfg.depth_cap));
        if (branch) anc.pop_back();
    };
    rec(detail::root_seed(B, i, cfg));
    r.counts["samples_per_set"] = samples;
    r.finalize();
    return r;
}

// ---------------------------------------------------------------- separateness

template <class T>
struct SepSet {
    char kind;  // 'T': trunk interior, 'V': open bound of a maximal branch
    int i;
    int n;
    std::array<Vec3<T>, 3> gens;
    std::string name() const {
        if (kind == 'T') return "T_" + std::to_string(i + 1);
        return "V[" + std::to_string(i + 1) + "]S^" + std::to_string(n) + "T";
    }
};

template <class T>
Report check_separateness(const ExchangeMatrix<T>& B, int depth, const Config& cfg = {}) {
    Report r("separate");
    const Tol& tol = cfg.tol;
    const long double eps = tol.sign;
    const Vec3<T>& d = B.d;
    require_cluster_cyclic(B, tol);
    std::vector<SepSet<T>> sets;
    std::array<Labels, 3> L0;
    for (int i = 0; i < 3; ++i) {
        L0[i] = initial_labels(B, i);
        TrunkSupport<T> ts = trunk_support(B, i, tol);
        sets.push_back({'T', i, -1, ts.gens});
    }
    const int nmax = depth - 2;
    for (int i = 0; i < 3; ++i)
        for (int n = 0; n <= nmax; ++n) {
            LocalBound<T> lb = local_bound(branch_root(B, i, n, cfg), tol);
            sets.push_back({'V', i, n, {lb.gS, lb.gT, lb.gbar}});
        }

    // weakly on side `want`, at least one generator strictly
    auto on_side = [&](const SepSet<T>& s, const Vec3<T>& nrm, int want, const std::string& what) {
        int strict = 0;
        bool bad = false;
        for (const auto& g : s.gens) {
            int sd = side(g, nrm, d, eps) * want;
            if (sd < 0) bad = true;
            strict += sd > 0;
        }
        if (bad) r.violation({}, s.name() + ": " + what);
        else if (strict == 0) r.note_undecided("certificate");
    };
    auto certify = [&](const SepSet<T>& a, int sa, const SepSet<T>& b, int sb, const Vec3<T>& nrm, const std::string& tag) {
        ++r.checked;
        ++r.counts["certificates_" + tag];
        long before = r.violations;
        on_side(a, nrm, sa, "wrong side of the " + tag + " certificate against " + b.name());
        on_side(b, nrm, sb, "wrong side of the " + tag + " certificate against " + a.name());
        if (r.violations == before) ++r.counts["pairs_certified"];
    };
    auto et = [&](int k) { return e_tilde(d, k); };

    for (std::size_t x = 0; x < sets.size(); ++x)
        for (std::size_t y = x + 1; y < sets.size(); ++y) {
            const SepSet<T>& A = sets[x];
            const SepSet<T>& U = sets[y];
            if (A.kind == 'T' && U.kind == 'T') {
                certify(A, -1, U, 1, et(A.i), "coordinate");
            } else if (A.kind == 'T' || U.kind == 'T') {
                const SepSet<T>& V = A.kind == 'V' ? A : U;
                const SepSet<T>& Tr = A.kind == 'T' ? A : U;
                const Labels& L = L0[V.i];
                if (Tr.i == V.i || Tr.i == L.S)
                    certify(V, -1, Tr, 1, et(L.T), "e_t0");
                else
                    certify(V, -1, Tr, 1, et(L.T) + et(L.K), "e_t0+e_k0");
            } else if (A.i == U.i) {
                const SepSet<T>& lo = A.n < U.n ? A : U;
                const SepSet<T>& hi = A.n < U.n ? U : A;
                certify(lo, -1, hi, 1, frak_c(B, A.i, hi.n, -1, tol), "c-(n)");
                certify(hi, -1, lo, 1, frak_c(B, A.i, lo.n, +1, tol), "c+(n)");
            } else {
                // orient so that `second` starts at t0 of `first`
                const SepSet<T>* first = &A;
                const SepSet<T>* second = &U;
                if (L0[A.i].T != U.i) std::swap(first, second);
                const Labels& L = L0[first->i];
                T a = alpha(pval(B, L.K, L.T), tol);
                certify(*first, -1, *second, 1, et(L.K) + et(L.T) * a, "e_k0+alpha e_t0");
            }
        }

    // the plane form of each open maximal-branch bound, and the rough bound by the limit of c+(n)
    for (const auto& s : sets) {
        if (s.kind != 'V') continue;
        const Labels& L = L0[s.i];
        ++r.checked;
        on_side(s, frak_c(B, s.i, s.n, +1, tol), 1, "outside P>(c+(n))");
        on_side(s, frak_c(B, s.i, s.n, -1, tol), 1, "outside P>(c-(n))");
        on_side(s, et(L.T), -1, "outside P<(e_t0)");
        on_side(s, frak_c_limit(B, s.i, +1, tol), 1, "outside P>(c+ limit)");
        on_side(s, et(L.S) + et(L.K) * alpha(pval(B, L.S, L.K), tol), 1, "outside P>(e_s0 + alpha e_k0)");
    }
    r.counts["sets"] = static_cast<long>(sets.size());
    r.counts["branch_index_max"] = nmax;
    r.finalize();
    return r;
}

// ---------------------------------------------------------------- non-periodicity

/// word prefix that carries g_j: strip trailing letters different from j
inline Word g_key(const Word& w, int j) {
    std::size_t n = w.size();
    while (n > 0 && w[n - 1] != j) --n;
    return Word(w.begin(), w.begin() + static_cast<long>(n));
}

template <class T>
Report check_nonperiodicity(const ExchangeMatrix<T>& B, int depth, const Config& cfg = {}) {
    Report r("nonperiodic");
    const Tol& tol = cfg.tol;
    struct Item {
        Word key;
        int j;
        Vec3<T> u;
        std::array<double, 3> ud;
    };
    std::vector<Item> items;
    std::map<std::pair<Word, int>, std::size_t> seen;
    long trivial = 0;
    walk_tree<T>(initial_seed(B, tol), depth, [&](const Seed<T>& s) {
        for (int j = 0; j < 3; ++j) {
            Word key = g_key(s.word, j);
            auto [it, fresh] = seen.emplace(std::make_pair(key, j), items.size());
            if (!fresh) {
                ++trivial;
                continue;
            }
            Vec3<T> u = normalized(gt(s, j));
            items.push_back({key, j, u, {detail::as_double(u[0]), detail::as_double(u[1]), detail::as_double(u[2])}});
        }
        return true;
    }, cfg.depth_cap);

    auto angle_d = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
        double cx = a[1] * b[2] - a[2] * b[1], cy = a[2] * b[0] - a[0] * b[2], cz = a[0] * b[1] - a[1] * b[0];
        return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
    };
    double min_angle = 10;
    double min_log10 = 10;
    long refined = 0;
    // near pairs compare |p x q|^2, the angle itself is taken once for the closest pair
    const T sign2 = T(tol.sign) * T(tol.sign);
    T best_cr2(-1), best_dot(0);
    for (std::size_t x = 0; x < items.size(); ++x)
        for (std::size_t y = x + 1; y < items.size(); ++y) {
            ++r.checked;
            double a = angle_d(items[x].ud, items[y].ud);
            if (a > 1e-6) {
                min_angle = std::min(min_angle, a);
                min_log10 = std::min(min_log10, std::log10(a));
                continue;
            }
            ++refined;
            const Vec3<T>& p = items[x].u;
            const Vec3<T>& q = items[y].u;
            Vec3<T> c = cross(p, q);
            T cr2 = dot(c, c), dt = dot(p, q);
            if (best_cr2 < T(0) || cr2 < best_cr2) {
                best_cr2 = cr2;
                best_dot = dt;
            }
            if (!(cr2 > sign2) && dt > T(0)) {
                Word w = items[y].key;
                r.violation(w, "g_" + std::to_string(items[x].j + 1) + " at [" + word_string(items[x].key, ",") + "] and g_" +
                                   std::to_string(items[y].j + 1) + " at [" + word_string(items[y].key, ",") + "] share a ray",
                            detail::as_double(sqrt_(cr2)));
            }
        }
    if (!(best_cr2 < T(0))) {
        T at = atan2_(sqrt_(best_cr2), best_dot);
        min_angle = std::min(min_angle, detail::as_double(at));
        min_log10 = std::min(min_log10, detail::log10_pos(at));
    }
    r.counts["distinct_g_vectors"] = static_cast<long>(items.size());
    r.counts["trivial_equalities"] = trivial;
    r.counts["pairs_refined"] = refined;
    r.residuals["min_angle"] = min_angle;
    r.residuals["min_angle_log10"] = min_log10;
    r.finalize();
    return r;
}

// ---------------------------------------------------------------- sign table

/// expected (tau_k0, tau_s0, tau_t0) for the S/T coordinate of w >= [i]
inline std::array<int, 3> sign_table_column(const std::string& moves, int* column = nullptr) {
    bool has_t = moves.find('T') != std::string::npos;
    int col;
    if (!has_t) col = 1;
    else if (moves[0] == 'S') col = 2;
    else if (moves.find('T', 1) == std::string::npos) col = 3;
    else col = 4;
    if (column) *column = col;
    switch (col) {
    case 1: return {-1, 1, 1};
    case 2: return {-1, 1, -1};
    case 3: return {-1, 1, -1};
    default: return {1, 1, -1};
    }
}

template <class T>
Report check_sign_table(const ExchangeMatrix<T>& B, int i, int depth, const Config& cfg = {}) {
    Report r("signs");
    const Tol& tol = cfg.tol;
    const Labels L0 = initial_labels(B, i);
    const int rows[3] = {L0.K, L0.S, L0.T};
    walk_tree<T>(detail::root_seed(B, i, cfg), depth, [&](const Seed<T>& s) {
        ++r.checked;
        int col = 0;
        std::array<int, 3> want = sign_table_column(s.moves, &col);
        ++r.counts["column_" + std::to_string(col)];
        for (int q = 0; q < 3; ++q) {
            int row = rows[q];
            T sc = max_abs(s.G.row(row));
            bool pos = false, neg = false;
            for (int c = 0; c < 3; ++c) {
                int sg = sign_tol(s.G(row, c), tol.sign, sc);
                pos |= sg > 0;
                neg |= sg < 0;
            }
            if (pos && neg) {
                r.violation(s.word, "row " + std::to_string(row + 1) + " of G not sign-coherent");
                continue;
            }
            int tau = pos ? 1 : (neg ? -1 : 0);
            if (tau != want[q])
                r.violation(s.word, "row " + std::to_string(row + 1) + " sign " + std::to_string(tau) + ", table column " +
                                        std::to_string(col) + " expects " + std::to_string(want[q]));
        }
        // column form: x_s0 >= 0 and x_t0 <= 0, except the g-vector e_t0 itself
        for (int j = 0; j < 3; ++j) {
            Vec3<T> g = s.G.col(j);
            T sc = max_abs(g);
            bool is_et0 = sign_tol(T(g[L0.T] - 1), tol.sign) == 0 && sign_tol(g[L0.K], tol.sign) == 0 &&
                          sign_tol(g[L0.S], tol.sign) == 0;
            if (is_et0) {
                ++r.counts["whitelisted_e_t0"];
                continue;
            }
            if (sign_tol(g[L0.S], tol.sign, sc) < 0) r.violation(s.word, "g_" + std::to_string(j + 1) + " has x_s0 < 0");
            if (sign_tol(g[L0.T], tol.sign, sc) > 0) r.violation(s.word, "g_" + std::to_string(j + 1) + " has x_t0 > 0");
        }
        return true;
    }, cfg.depth_cap);
    r.finalize();
    return r;
}

// ---------------------------------------------------------------- monotonicity

template <class T>
Report check_monotonicity(const ExchangeMatrix<T>& B, int i, int depth, const Config& cfg = {}) {
    Report r("monotone");
    const Tol& tol = cfg.tol;
    const bool assumption = mutation_not_smaller(B, i, tol);
    r.counts["assumption_holds"] = assumption ? 1 : 0;
    r.notes.push_back(std::string("mu_") + std::to_string(i + 1) + "(B) >= B " + (assumption ? "holds" : "fails") +
                      (assumption ? "" : "; violations are reported as data"));

    std::function<void(const Seed<T>&)> rec = [&](const Seed<T>& s) {
        if (static_cast<int>(s.word.size()) >= depth) return;
        for (int k = 0; k < 3; ++k) {
            if (s.word.back() == k) continue;
            Seed<T> c = detail::extend(s, k, cfg.depth_cap);
            for (int j = 0; j < 3; ++j)
                for (int row = 0; row < 3; ++row) {
                    ++r.checked;
                    T a = abs_(s.G(row, j)), b = abs_(c.G(row, j));
                    if (a > b + T(tol.sign) * rel_scale(a, b)) {
                        char buf[200];
                        std::snprintf(buf, sizeof buf, "entry (%d,%d) of G decreases: %.10g -> %.10g", row + 1, j + 1,
                                      detail::as_double(s.G(row, j)), detail::as_double(c.G(row, j)));
                        r.violation(c.word, buf, detail::as_double(T(b - a)), assumption);
                    }
                }
            rec(c);
        }
    };
    rec(detail::root_seed(B, i, cfg));

    // sufficient inequalities along the two trunk-adjacent families
    long pass = 0, fail = 0;
    const TrunkData<T> t0 = trunk_data(B, i, 0, tol);
    const T p = t0.pKS;
    Seed<T> rootT = act(detail::root_seed(B, i, cfg), "T");
    const Labels& LT = rootT.labels();
    const T pprime = pval(rootT.B, LT.S, LT.K);
    for (int n = 0; n <= depth; ++n) {
        TrunkData<T> tn = trunk_data(B, i, n + 1, tol);
        T lhs1 = tn.pST * chebyshev_u(n, p, tol), rhs1 = chebyshev_u(n + 1, p, tol);
        bool ok1 = lhs1 >= rhs1 - T(tol.sign) * rel_scale(lhs1, rhs1);
        Seed<T> sn = s_power_fast(rootT, n, tol);
        const Labels& Ln = sn.labels();
        T pKT = pval(sn.B, Ln.K, Ln.T);
        T lhs2 = pKT * chebyshev_u(n + 1, pprime, tol) - p, rhs2 = chebyshev_u(n + 1, pprime, tol);
        bool ok2 = lhs2 >= rhs2 - T(tol.sign) * rel_scale(lhs2, rhs2);
        (ok1 ? pass : fail) += 1;
        (ok2 ? pass : fail) += 1;
    }
    r.counts["sufficient_pass"] = pass;
    r.counts["sufficient_fail"] = fail;
    r.counts["sufficient_conditions_hold"] = fail == 0 ? 1 : 0;
    r.finalize();
    return r;
}

// ---------------------------------------------------------------- simplified bound

template <class T>
Report check_simplified_bound(const ExchangeMatrix<T>& B, int depth, const Config& cfg = {}) {
    Report r("simplified");
    const Tol& tol = cfg.tol;
    const long double eps = tol.sign;
    QuadraticBound<T> Q0 = initial_bound(B, tol);
    std::array<bool, 3> dir{};
    bool minimum = true;
    for (int i = 0; i < 3; ++i) {
        dir[i] = mutation_not_smaller(B, i, tol);
        minimum = minimum && dir[i];
    }
    r.counts["minimum"] = minimum ? 1 : 0;
    if (!minimum) {
        std::string used;
        for (int i = 0; i < 3; ++i)
            if (dir[i]) used += std::to_string(i + 1);
        r.notes.push_back("B is not minimum; checking T^{>=[i]} for i in {" + used + "} only");
    }
    std::array<QuadraticBound<T>, 3> Qi;
    for (int i = 0; i < 3; ++i) Qi[i] = global_bound(B, i, tol);

    auto visit = [&](const Seed<T>& s) {
        for (int l = 0; l < 3; ++l) {
            ++r.checked;
            Vec3<T> g = gt(s, l);
            Tri t = Q0.in_qplus(g, eps);
            if (t == Tri::No) r.violation(s.word, "g~_" + std::to_string(l + 1) + " outside Q+_initial");
            if (t == Tri::Undecided) r.note_undecided("initial");
            if (!s.word.empty()) {
                Tri ti = Qi[s.word.front()].in_qplus(g, eps);
                if (ti == Tri::No) r.violation(s.word, "g~_" + std::to_string(l + 1) + " outside Q+_i");
                if (ti == Tri::Undecided) r.note_undecided("per_direction");
            }
        }
        return true;
    };
    if (minimum) {
        walk_tree<T>(initial_seed(B, tol), depth, visit, cfg.depth_cap);
    } else {
        for (int i = 0; i < 3; ++i)
            if (dir[i]) walk_tree<T>(detail::root_seed(B, i, cfg), depth, visit, cfg.depth_cap);
    }
    r.finalize();
    return r;
}

// ---------------------------------------------------------------- fan structure

namespace detail {

/// clips a polygon (rays on an affine slice) by <x, n>_D >= 0
template <class T>
std::vector<Vec3<T>> clip(const std::vector<Vec3<T>>& poly, const Vec3<T>& n, const Vec3<T>& d, long double eps) {
    std::vector<Vec3<T>> out;
    const std::size_t m = poly.size();
    if (m == 0) return out;
    T nn = normD(n, d);
    auto val = [&](const Vec3<T>& x) { return dotD(x, n, d) / (nn * normD(x, d)); };
    for (std::size_t k = 0; k < m; ++k) {
        const Vec3<T>& a = poly[k];
        const Vec3<T>& b = poly[(k + 1) % m];
        T va = val(a), vb = val(b);
        bool ina = va >= -T(eps), inb = vb >= -T(eps);
        if (ina) out.push_back(a);
        if (ina != inb && abs_(va) > T(eps) && abs_(vb) > T(eps)) {
            T fa = dotD(a, n, d), fb = dotD(b, n, d);
            out.push_back(a + (b - a) * (fa / (fa - fb)));
        }
    }
    return out;
}

template <class T>
bool same_ray(const Vec3<T>& a, const Vec3<T>& b, long double eps) {
    Vec3<T> ua = normalized(a), ub = normalized(b);
    return norm(cross(ua, ub)) <= T(eps) && dot(ua, ub) > T(0);
}

}  // namespace detail

template <class T>
Report check_fan_structure(const ExchangeMatrix<T>& B, int depth, const Config& cfg = {}) {
    Report r("fanstructure");
    const Tol& tol = cfg.tol;
    const long double eps = tol.sign;
    if (depth > 7) {
        r.notes.push_back("depth capped at 7 for the pairwise cone test");
        depth = 7;
    }
    struct ConeRec {
        Word w;
        std::array<Vec3<T>, 3> g;
        std::array<Vec3<T>, 3> c;
    };
    std::vector<ConeRec> cones;
    walk_tree<T>(initial_seed(B, tol), depth, [&](const Seed<T>& s) {
        ConeRec cr{s.word, {}, {}};
        for (int j = 0; j < 3; ++j) {
            cr.g[j] = gt(s, j);
            cr.c[j] = ct(s, j);
        }
        cones.push_back(cr);
        return true;
    }, cfg.depth_cap);
    const Vec3<T>& d = B.d;
    long adjacent = 0;
    for (std::size_t x = 0; x < cones.size(); ++x)
        for (std::size_t y = x + 1; y < cones.size(); ++y) {
            ++r.checked;
            const ConeRec& A = cones[x];
            const ConeRec& U = cones[y];
            // slice of A on <x, sum c~>_D = 1 has the g~ as vertices
            std::vector<Vec3<T>> poly(A.g.begin(), A.g.end());
            for (int k = 0; k < 3 && !poly.empty(); ++k) poly = detail::clip(poly, U.c[k], d, eps);
            std::vector<Vec3<T>> shared;
            for (const auto& a : A.g)
                for (const auto& b : U.g)
                    if (detail::same_ray(a, b, eps)) shared.push_back(a);
            if (shared.size() == 2) ++adjacent;
            bool ok = true;
            for (const auto& v : poly) {
                bool hit = false;
                for (const auto& sh : shared) hit = hit || detail::same_ray(v, sh, eps);
                if (!hit) ok = false;
            }
            if (!ok)
                r.violation(U.w, "cone at [" + word_string(A.w, ",") + "] meets this cone outside a common face");
        }
    r.counts["cones"] = static_cast<long>(cones.size());
    r.counts["pairs_sharing_a_facet"] = adjacent;
    r.finalize();
    return r;
}

}  // namespace ccfan
