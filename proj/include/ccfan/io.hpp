#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "checks.hpp"

namespace ccfan {

/// Matrix file contents kept as decimal strings, so each scalar type parses them at full precision.
struct MatrixInput {
    std::array<std::string, 9> b;
    std::optional<std::array<std::string, 3>> d;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline void check_number(const std::string& tok) {
    std::size_t used = 0;
    try {
        (void)std::stod(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size()) throw Error(ErrorKind::Input, "not a number: '" + tok + "'");
}

inline std::string json_number(const nlohmann::json& v) {
    if (!v.is_number()) throw Error(ErrorKind::Input, "expected a number, got " + v.dump());
    return v.dump();
}

}  // namespace detail

/// plain text: three rows of three numbers, optional `d: d1 d2 d3`; `#` starts a comment
inline MatrixInput parse_matrix_text(const std::string& text) {
    MatrixInput in;
    std::istringstream is(text);
    std::string line;
    int rows = 0;
    while (std::getline(is, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = detail::trim(line);
        if (line.empty()) continue;
        bool is_d = line.rfind("d:", 0) == 0;
        if (is_d) line = line.substr(2);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) {
            detail::check_number(t);
            tok.push_back(t);
        }
        if (tok.size() != 3) throw Error(ErrorKind::Input, "expected 3 numbers per line, got: " + line);
        if (is_d) {
            if (in.d) throw Error(ErrorKind::Input, "duplicate d line");
            in.d = std::array<std::string, 3>{tok[0], tok[1], tok[2]};
        } else {
            if (rows == 3) throw Error(ErrorKind::Input, "more than three matrix rows");
            for (int c = 0; c < 3; ++c) in.b[static_cast<std::size_t>(3 * rows + c)] = tok[static_cast<std::size_t>(c)];
            ++rows;
        }
    }
    if (rows != 3) throw Error(ErrorKind::Input, "expected three matrix rows, got " + std::to_string(rows));
    return in;
}

/// {"b": [9 numbers] or [[3],[3],[3]], "d": [3 numbers]}
inline MatrixInput parse_matrix_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Input, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("b")) throw Error(ErrorKind::Input, "JSON matrix needs key \"b\"");
    std::vector<std::string> flat;
    for (const auto& v : j["b"]) {
        if (v.is_array())
            for (const auto& x : v) flat.push_back(detail::json_number(x));
        else
            flat.push_back(detail::json_number(v));
    }
    if (flat.size() != 9) throw Error(ErrorKind::Input, "\"b\" must hold 9 numbers");
    MatrixInput in;
    for (std::size_t k = 0; k < 9; ++k) in.b[k] = flat[k];
    if (j.contains("d") && !j["d"].is_null()) {
        const auto& d = j["d"];
        if (!d.is_array() || d.size() != 3) throw Error(ErrorKind::Input, "\"d\" must hold 3 numbers");
        in.d = std::array<std::string, 3>{detail::json_number(d[0]), detail::json_number(d[1]), detail::json_number(d[2])};
    }
    return in;
}

inline MatrixInput parse_matrix(const std::string& text) {
    std::string t = detail::trim(text);
    if (!t.empty() && t.front() == '{') return parse_matrix_json(t);
    return parse_matrix_text(t);
}

inline MatrixInput read_matrix_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::Input, "cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_matrix(ss.str());
}

template <class T> T parse_scalar(const std::string& s) {
    if constexpr (std::is_floating_point_v<T>)
        return static_cast<T>(std::stold(s));
    else
        return T(s);
}

template <class T>
ExchangeMatrix<T> to_exchange_matrix(const MatrixInput& in, const Tol& tol = {}) {
    Mat3<T> m;
    for (std::size_t k = 0; k < 9; ++k) m.a[k] = parse_scalar<T>(in.b[k]);
    std::optional<Vec3<T>> d;
    if (in.d) d = Vec3<T>{parse_scalar<T>((*in.d)[0]), parse_scalar<T>((*in.d)[1]), parse_scalar<T>((*in.d)[2])};
    return validate(m, d, tol);
}

// ---------------------------------------------------------------- output

/// a scalar as a JSON number, or as a decimal string when it exceeds double range
template <class T> nlohmann::json scalar_json(const T& x) {
    double v = static_cast<double>(x);
    if (std::isfinite(v) && (v == 0 || std::abs(v) > 1e-300)) return v;
    if constexpr (std::is_floating_point_v<T>) {
        return v;
    } else {
        return x.str(17, std::ios_base::scientific);
    }
}

template <class T> nlohmann::json vec_json(const Vec3<T>& v) {
    return nlohmann::json::array({scalar_json(v[0]), scalar_json(v[1]), scalar_json(v[2])});
}

template <class T> nlohmann::json mat_json(const Mat3<T>& m) {
    return nlohmann::json::array({vec_json(m.row(0)), vec_json(m.row(1)), vec_json(m.row(2))});
}

inline nlohmann::json word_json(const Word& w) {
    nlohmann::json a = nlohmann::json::array();
    for (int k : w) a.push_back(k + 1);
    return a;
}

template <class T> nlohmann::json seed_json(const Seed<T>& s) {
    nlohmann::json j;
    j["word"] = word_json(s.word);
    j["st"] = s.st();
    Position pos = s.position();
    j["position"] = {{"kind", pos_name(pos.kind)}, {"i", pos.i < 0 ? nlohmann::json(nullptr) : nlohmann::json(pos.i + 1)}, {"n", pos.n}, {"suffix", pos.suffix}};
    j["B"] = mat_json(s.B.b);
    j["C"] = mat_json(s.C);
    j["G"] = mat_json(s.G);
    j["eps"] = s.eps;
    if (s.kst) j["kst"] = {s.kst->K + 1, s.kst->S + 1, s.kst->T + 1};
    else j["kst"] = nullptr;
    return j;
}

inline nlohmann::json report_json(const Report& r) {
    nlohmann::json j;
    j["check"] = r.check;
    j["ok"] = r.ok;
    j["checked"] = r.checked;
    j["violations"] = r.violations;
    j["undecided"] = r.undecided;
    nlohmann::json ws = nlohmann::json::array();
    for (const auto& w : r.witnesses) ws.push_back({{"word", word_json(w.word)}, {"detail", w.detail}, {"value", w.value}});
    j["witnesses"] = ws;
    j["residuals"] = nlohmann::json::object();
    for (const auto& [k, v] : r.residuals) j["residuals"][k] = v;
    j["counts"] = r.counts;
    j["notes"] = r.notes;
    return j;
}

inline std::string format_report(const Report& r) {
    std::ostringstream os;
    os << r.check << ": " << (r.ok ? "OK" : "VIOLATION") << "  checked=" << r.checked << " violations=" << r.violations
       << " undecided=" << r.undecided << "\n";
    char buf[64];
    for (const auto& [k, v] : r.residuals) {
        std::snprintf(buf, sizeof buf, "%.6g", v);
        os << "  " << k << " = " << buf << "\n";
    }
    for (const auto& [k, v] : r.counts) os << "  " << k << " = " << v << "\n";
    for (const auto& n : r.notes) os << "  note: " << n << "\n";
    for (const auto& w : r.witnesses) os << "  witness [" << word_string(w.word, ",") << "]: " << w.detail << "\n";
    return os.str();
}

template <class T> std::string format_scalar(const T& x) {
    char buf[64];
    double v = static_cast<double>(x);
    if (v == std::round(v) && std::abs(v) < 1e15) {
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    if constexpr (!std::is_floating_point_v<T>) {
        if (!std::isfinite(v) || (v != 0 && std::abs(v) < 1e-300)) return x.str(10, std::ios_base::scientific);
    }
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

template <class T> std::string format_matrix(const Mat3<T>& m) {
    std::ostringstream os;
    char buf[96];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            std::snprintf(buf, sizeof buf, "%14s", format_scalar(m(i, j)).c_str());
            os << (j ? " " : "") << buf;
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace ccfan
