#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fan.hpp"

namespace ccfan {

/// coordinates on the tangent plane at (1,1,1)/sqrt(3), frame u = (1,-1,0)/sqrt(2), w = (1,1,-2)/sqrt(6)
struct ProjectedPoint {
    double u = 0, w = 0;
};

inline constexpr double kClipT = 50.0;

/// stereographic projection from the antipode N = -(1,1,1)/sqrt(3) onto the tangent plane at -N
inline ProjectedPoint stereo_project(const Vec3<double>& x, double eps = 1e-9, double* t_out = nullptr) {
    double nx = norm(x);
    if (!(nx > 0)) throw Error(ErrorKind::Domain, "cannot project the zero vector");
    const double r3 = std::sqrt(3.0);
    Vec3<double> p = x * (1.0 / nx);
    double pn = (p[0] + p[1] + p[2]) / r3;
    if (pn < -1 + eps) throw Error(ErrorKind::AtAntipode, "ray is at the antipode of the projection");
    double t = 2.0 / (1.0 + pn);
    if (t_out) *t_out = t;
    Vec3<double> N{-1 / r3, -1 / r3, -1 / r3};
    Vec3<double> q = N + (p - N) * t;
    const double r2 = std::sqrt(2.0), r6 = std::sqrt(6.0);
    return {(q[0] - q[1]) / r2, (q[0] + q[1] - 2 * q[2]) / r6};
}

/// the projection, or nothing when the ray falls in the clipped region near the antipode
inline std::optional<ProjectedPoint> project_clipped(const Vec3<double>& x) {
    double t = 0;
    try {
        ProjectedPoint p = stereo_project(x, 1e-9, &t);
        if (t > kClipT) return std::nullopt;
        return p;
    } catch (const Error&) {
        return std::nullopt;
    }
}

template <class T> Vec3<double> unit_double(const Vec3<T>& x) {
    Vec3<T> u = normalized(x);
    return {static_cast<double>(u[0]), static_cast<double>(u[1]), static_cast<double>(u[2])};
}

// ---------------------------------------------------------------- scene

struct Polygon {
    std::string layer;
    std::vector<ProjectedPoint> pts;
};

struct Polyline {
    std::string layer;
    std::vector<ProjectedPoint> pts;
};

struct RenderScene {
    std::vector<Polygon> polygons;
    std::vector<Polyline> lines;
    double half_width = 8.0;
    std::map<std::string, long> counts;
};

inline const std::vector<std::string>& all_layer_names() {
    static const std::vector<std::string> names = {"cones", "orthants", "global", "local", "planes"};
    return names;
}

inline constexpr int kCircleSamples = 128;

/// samples a curve, starting a new polyline whenever a point is clipped
template <class F>
void add_curve(RenderScene& sc, const std::string& layer, int count, bool closed, F point_at) {
    std::vector<ProjectedPoint> cur;
    auto flush = [&] {
        if (cur.size() >= 2) sc.lines.push_back({layer, cur});
        cur.clear();
    };
    int n = closed ? count + 1 : count;
    for (int k = 0; k < n; ++k) {
        std::optional<Vec3<double>> x = point_at(k % count);
        std::optional<ProjectedPoint> p = x ? project_clipped(*x) : std::nullopt;
        if (p)
            cur.push_back(*p);
        else
            flush();
    }
    flush();
}

/// orthonormal pair spanning the plane orthogonal to n
inline std::pair<Vec3<double>, Vec3<double>> plane_basis(const Vec3<double>& n) {
    Vec3<double> nn = normalized(n);
    int m = 0;
    for (int k = 1; k < 3; ++k)
        if (std::abs(nn[k]) < std::abs(nn[m])) m = k;
    Vec3<double> a = normalized(cross(nn, Vec3<double>::unit(m)));
    return {a, cross(nn, a)};
}

/// great circle of the plane with Euclidean normal n, optionally restricted by `keep`
template <class Keep>
void add_plane(RenderScene& sc, const std::string& layer, const Vec3<double>& n, Keep keep) {
    auto [a, b] = plane_basis(n);
    add_curve(sc, layer, kCircleSamples, true, [&](int k) -> std::optional<Vec3<double>> {
        double th = 2 * M_PI * k / kCircleSamples;
        Vec3<double> x = a * std::cos(th) + b * std::sin(th);
        if (!keep(x)) return std::nullopt;
        return x;
    });
}

template <class T>
void add_triangle(RenderScene& sc, const std::string& layer, const Vec3<T>& a, const Vec3<T>& b, const Vec3<T>& c) {
    Polygon pg{layer, {}};
    for (const Vec3<T>* v : {&a, &b, &c}) {
        auto p = project_clipped(unit_double(*v));
        if (!p) {
            ++sc.counts[layer + "_clipped"];
            return;
        }
        pg.pts.push_back(*p);
    }
    sc.polygons.push_back(pg);
    ++sc.counts[layer];
}

/// rays of the boundary of Q_i^+, swept around its axis v; the D-scaling is undone at the end
template <class T>
void add_global_bound(RenderScene& sc, const QuadraticBound<T>& Q) {
    Vec3<double> v = unit_double(Q.eigen.v);
    Mat3<double> A;
    for (int k = 0; k < 9; ++k) A.a[k] = static_cast<double>(Q.At.a[k]);
    double lambda = static_cast<double>(Q.eigen.lambda);
    Vec3<double> dh{std::sqrt(static_cast<double>(Q.d[0])), std::sqrt(static_cast<double>(Q.d[1])),
                    std::sqrt(static_cast<double>(Q.d[2]))};
    auto [a, b] = plane_basis(v);
    add_curve(sc, "global", kCircleSamples, true, [&](int k) -> std::optional<Vec3<double>> {
        double th = 2 * M_PI * k / kCircleSamples;
        Vec3<double> u = a * std::cos(th) + b * std::sin(th);
        double q = dot(u, A * u);
        if (q > 1e-12) return std::nullopt;
        double s = std::sqrt(std::max(0.0, -q / lambda));
        Vec3<double> y = v * s + u;
        return Vec3<double>{y[0] / dh[0], y[1] / dh[1], y[2] / dh[2]};
    });
}

/// Builds the scene. Vectors are computed in T and converted after normalization,
/// so deep seeds can be drawn when T carries enough range.
template <class T>
RenderScene build_scene(const ExchangeMatrix<T>& B, int depth, const std::set<std::string>& layers,
                        const Config& cfg = {}) {
    RenderScene sc;
    const Tol& tol = cfg.tol;
    const Vec3<T>& d = B.d;
    if (layers.count("orthants"))
        for (int k = 0; k < 3; ++k) add_plane(sc, "orthants", Vec3<double>::unit(k), [](const Vec3<double>&) { return true; });
    if (layers.count("cones"))
        walk_tree<T>(initial_seed(B, tol), depth, [&](const Seed<T>& s) {
            add_triangle(sc, "cones", gt(s, 0), gt(s, 1), gt(s, 2));
            return true;
        }, cfg.depth_cap);
    if (layers.count("global"))
        for (int i = 0; i < 3; ++i) add_global_bound(sc, global_bound(B, i, tol));
    if (layers.count("local"))
        for (int i = 0; i < 3; ++i)
            for (int n = 0; n + 2 <= depth; ++n) {
                LocalBound<T> lb = local_bound(branch_root(B, i, n, cfg), tol);
                add_triangle(sc, "local", lb.gS, lb.gT, lb.gbar);
            }
    if (layers.count("planes"))
        for (int i = 0; i < 3; ++i)
            walk_tree<T>(mutate_seed(initial_seed(B, tol), i, cfg.depth_cap), depth - 1, [&](const Seed<T>& s) {
                if (s.position().kind != PosKind::Branch) return true;
                LocalBound<T> lb = local_bound(s, tol);
                // the plane meets V^w in the cone over gbar and a point of the facet C(gS, gT)
                T a = dotD(lb.gT, lb.cbar, d), b = dotD(lb.gS, lb.cbar, d);
                Vec3<T> y = lb.gS * a - lb.gT * b;
                if (a * b > T(0) || max_abs(y) == T(0)) return true;
                if (a < T(0)) y = T(-1) * y;
                Vec3<double> g0 = unit_double(lb.gbar), y0 = unit_double(y);
                add_curve(sc, "planes", kCircleSamples, false, [&](int k) -> std::optional<Vec3<double>> {
                    double u = static_cast<double>(k) / (kCircleSamples - 1);
                    return g0 * (1 - u) + y0 * u;
                });
                ++sc.counts["planes"];
                return true;
            }, cfg.depth_cap);
    return sc;
}

inline std::string to_svg(const RenderScene& sc) {
    std::string out;
    char buf[128];
    const double h = sc.half_width;
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"800\" "
                  "viewBox=\"%.5f %.5f %.5f %.5f\">\n",
                  -h, -h, 2 * h, 2 * h);
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += buf;
    out += "<style>\n"
           ".cones{fill:#dbe7f5;fill-opacity:0.5;stroke:#1f3b73;stroke-width:0.01}\n"
           ".orthants{fill:none;stroke:#999999;stroke-width:0.02;stroke-dasharray:0.1 0.06}\n"
           ".global{fill:none;stroke:#c0392b;stroke-width:0.03}\n"
           ".local{fill:#f5b041;fill-opacity:0.25;stroke:#b9770e;stroke-width:0.02}\n"
           ".planes{fill:none;stroke:#27ae60;stroke-width:0.015}\n"
           "</style>\n";
    out += "<rect x=\"-8\" y=\"-8\" width=\"16\" height=\"16\" fill=\"white\"/>\n";
    out += "<g transform=\"scale(1,-1)\">\n";
    auto pts = [&](const std::vector<ProjectedPoint>& v) {
        std::string s;
        for (std::size_t k = 0; k < v.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%s%.5f,%.5f", k ? " " : "", v[k].u, v[k].w);
            s += buf;
        }
        return s;
    };
    for (const char* layer : {"cones", "local", "orthants", "global", "planes"}) {
        bool any = false;
        for (const auto& p : sc.polygons)
            if (p.layer == layer) {
                if (!any) out += "<g class=\"" + std::string(layer) + "\">\n";
                any = true;
                out += "<polygon points=\"" + pts(p.pts) + "\"/>\n";
            }
        for (const auto& l : sc.lines)
            if (l.layer == layer) {
                if (!any) out += "<g class=\"" + std::string(layer) + "\">\n";
                any = true;
                out += "<polyline points=\"" + pts(l.pts) + "\"/>\n";
            }
        if (any) out += "</g>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

}  // namespace ccfan
