#include <catch_amalgamated.hpp>

#include "oracles.hpp"

using namespace ccfan;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ExchangeMatrix<double> M(std::initializer_list<double> v, std::optional<Vec3<double>> d = std::nullopt) {
    return validate(Mat3<double>::from_rows(v), d);
}

const auto markov = [] { return M({0, -2, 2, 2, 0, -2, -2, 2, 0}); };
const auto b228 = [] { return M({0, -228, 1795, 228, 0, -409252, -1795, 409252, 0}); };
const auto min228 = [] { return M({0, 4, -3, -4, 0, 4, 3, -4, 0}); };

bool same(const Vec3<double>& a, const Vec3<double>& b) { return a[0] == b[0] && a[1] == b[1] && a[2] == b[2]; }

void require_equal(const Mat3<double>& a, const Mat3<double>& b, double eps = 0) {
    for (int k = 0; k < 9; ++k) REQUIRE_THAT(a.a[k], WithinAbs(b.a[k], eps * std::max(1.0, std::abs(b.a[k]))));
}

}  // namespace

TEST_CASE("validate accepts skew-symmetric and skew-symmetrizable input") {
    auto B = markov();
    CHECK(same(B.d, Vec3<double>{1, 1, 1}));
    auto Z = M({0, 0, 0, 0, 0, 0, 0, 0, 0});
    CHECK(same(Z.d, Vec3<double>{1, 1, 1}));
    CHECK(same(b228().d, Vec3<double>{1, 1, 1}));

    auto D = M({0, -8, 7, 2, 0, -2, -7, 8, 0});
    CHECK(same(D.d, Vec3<double>{1, 4, 1}));
    auto D2 = M({0, -8, 7, 2, 0, -2, -7, 8, 0}, Vec3<double>{2, 8, 2});
    CHECK(same(D2.d, Vec3<double>{1, 4, 1}));
}

TEST_CASE("validate rejects broken sign patterns and inconsistent symmetrizers") {
    auto kind = [](auto f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Input;
    };
    CHECK(kind([] { M({0, -1, 4, 4, 0, -1, -1, 4, 0}); }) == ErrorKind::NotSkewSymmetrizable);
    CHECK(kind([] { M({0, 1, 0, 1, 0, 0, 0, 0, 0}); }) == ErrorKind::NotSkewSymmetrizable);
    CHECK(kind([] { M({0, 1, 0, 0, 0, 0, 0, 0, 0}); }) == ErrorKind::NotSkewSymmetrizable);
    CHECK(kind([] { M({0, -2, 2, 2, 0, -2, -2, 2, 0}, Vec3<double>{1, 2, 1}); }) == ErrorKind::NoSymmetrizer);
    CHECK(kind([] { M({0, -2, 2, 2, 0, -2, -2, 2, 0}, Vec3<double>{1, -1, 1}); }) == ErrorKind::NoSymmetrizer);
    CHECK(kind([] { M({1, -2, 2, 2, 0, -2, -2, 2, 0}); }) == ErrorKind::NotSkewSymmetrizable);
}

TEST_CASE("mutation examples") {
    auto B = markov();
    for (int k = 0; k < 3; ++k) require_equal(mutate(B, k).b, -B.b);
    require_equal(mutate(b228(), 0).b, Mat3<double>::from_rows({0, 228, -1795, -228, 0, 8, 1795, -8, 0}));
}

TEST_CASE("mutation is an involution and agrees with the sign-free rule") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        auto B = oracle::random_cluster_cyclic(rng);
        for (int k = 0; k < 3; ++k) {
            require_equal(mutate(mutate(B, k), k).b, B.b, 1e-12);
            auto ref = oracle::mutate_b(oracle::to_m3(B.b), k);
            auto got = mutate(B, k).b;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) CHECK_THAT(got(i, j), WithinAbs(ref[i][j], 1e-12 * std::max(1.0, std::abs(ref[i][j]))));
        }
    }
}

TEST_CASE("skew-symmetrization") {
    require_equal(skew_symmetrize(markov()), markov().b);
    auto D = M({0, -8, 7, 2, 0, -2, -7, 8, 0});
    Mat3<double> S = skew_symmetrize(D);
    CHECK_THAT(S(0, 1), WithinAbs(-4, 1e-12));
    CHECK_THAT(S(1, 0), WithinAbs(4, 1e-12));
    CHECK_THAT(S(1, 2), WithinAbs(-4, 1e-12));
    CHECK_THAT(S(0, 2), WithinAbs(7, 1e-12));

    // commutes with mutation along random words
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        auto B = oracle::random_cluster_cyclic(rng);
        ExchangeMatrix<double> Sk{skew_symmetrize(B), {1, 1, 1}};
        int last = -1;
        for (int step = 0; step < 10; ++step) {
            int k = static_cast<int>(rng() % 3);
            if (k == last) k = (k + 1) % 3;
            last = k;
            B = mutate(B, k);
            Sk = mutate(Sk, k);
            Mat3<double> a = skew_symmetrize(B);
            for (int q = 0; q < 9; ++q) CHECK_THAT(a.a[q], WithinAbs(Sk.b.a[q], 1e-7 * std::max(1.0, std::abs(a.a[q]))));
        }
    }
}

TEST_CASE("Markov constant") {
    CHECK_THAT(markov_constant(b228()), WithinAbs(-7, 1e-9));
    CHECK_THAT(markov_constant(M({0, -3, 18, 3, 0, -7, -18, 7, 0})), WithinAbs(4, 1e-9));
    CHECK_THAT(markov_constant(markov()), WithinAbs(4, 1e-12));
    CHECK_THROWS_AS(markov_constant(M({0, 0, 1, 0, 0, 1, -1, -1, 0})), Error);

    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        auto B = oracle::random_cluster_cyclic(rng);
        double c0 = markov_constant(B);
        for (int k : {0, 1, 2, 0, 2, 1, 0, 1}) {
            B = mutate(B, k);
            double p3 = pval(B, 0, 1) * pval(B, 1, 2) * pval(B, 2, 0);
            CHECK_THAT(markov_constant(B), WithinAbs(c0, 1e-12 * std::max(1.0, p3)));
        }
    }
}

TEST_CASE("cluster-cyclicity") {
    CHECK(is_cluster_cyclic(markov()).ok);
    CHECK(is_cluster_cyclic(b228()).ok);
    Verdict v = is_cluster_cyclic(M({0, -1, 1, 1, 0, -1, -1, 1, 0}));
    CHECK_FALSE(v.ok);
    CHECK(v.reason.find("p12 < 2") != std::string::npos);
    CHECK(is_cluster_cyclic(M({0, 0, 0, 0, 0, 0, 0, 0, 0})).reason == "NotCyclic");
    CHECK(is_cluster_cyclic(M({0, 3, 3, -3, 0, 3, -3, -3, 0})).reason == "NotCyclic");
    CHECK(is_cluster_cyclic(M({0, -2, 3, 2, 0, -2, -3, 2, 0})).reason.find("C(B) > 4") != std::string::npos);

    // preserved along all words up to length 8
    std::mt19937_64 rng(9);
    for (int t = 0; t < 10; ++t) {
        auto B = oracle::random_cluster_cyclic(rng);
        walk_tree<double>(initial_seed(B), 8, [&](const Seed<double>& s) {
            REQUIRE(is_cluster_cyclic(s.B).ok);
            REQUIRE(cyclic_sign(s.B) == s.sigma());
            return true;
        });
    }
}

TEST_CASE("pseudo Cartan companion") {
    Mat3<double> A = pseudo_cartan(markov());
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(A(i, j) == 2);
    CHECK_THAT(det(pseudo_cartan(b228())), WithinAbs(22.0, 1e-3));
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        auto B = oracle::random_cluster_cyclic(rng);
        Mat3<double> At = pseudo_cartan_skew(B);
        CHECK_THAT(det(At), WithinAbs(2 * (4 - markov_constant(B)), 1e-8 * std::max(1.0, std::abs(det(At)))));
        CHECK(det(At) >= -1e-9);
    }
}

TEST_CASE("eigen analysis of the Markov companion") {
    EigenData<double> e = eigen_analysis(pseudo_cartan_skew(markov()));
    CHECK_THAT(e.lambda, WithinAbs(6, 1e-12));
    CHECK_THAT(e.nu1, WithinAbs(0, 1e-9));
    CHECK_THAT(e.nu2, WithinAbs(0, 1e-9));
    for (int k = 0; k < 3; ++k) CHECK_THAT(e.v[k], WithinAbs(1 / std::sqrt(3.0), 1e-12));
    CHECK(e.kind == SurfaceKind::ParallelPlanes);
}

TEST_CASE("eigen analysis agrees with a dense eigen-solver") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 100; ++t) {
        auto B = oracle::random_cluster_cyclic(rng);
        Mat3<double> At = pseudo_cartan_skew(B);
        EigenData<double> e = eigen_analysis(At);
        oracle::EigenRef r = oracle::eigen(At);
        double sp = At(0, 1) * At(0, 1) + At(1, 2) * At(1, 2) + At(0, 2) * At(0, 2);
        CHECK(e.lambda > 2 + std::sqrt(sp));
        CHECK_THAT(e.lambda, WithinRel(r.lambda, 1e-10));
        CHECK_THAT(e.nu1, WithinAbs(r.nu1, 1e-7));
        CHECK_THAT(e.nu2, WithinAbs(r.nu2, 1e-7));
        CHECK(e.nu1 <= 1e-9);
        CHECK(e.nu1 >= e.nu2);
        for (int k = 0; k < 3; ++k) {
            CHECK(e.v[k] > 0);
            CHECK_THAT(e.v[k], WithinAbs(r.v[k], 1e-8));
        }
        Vec3<double> Av = At * e.v;
        for (int k = 0; k < 3; ++k) CHECK_THAT(Av[k], WithinAbs(e.lambda * e.v[k], 1e-9 * e.lambda));
        CHECK(e.kind == (markov_constant(B) < 4 - 1e-7 ? SurfaceKind::TwoSheets : e.kind));
    }
}

TEST_CASE("surface classification") {
    CHECK(eigen_analysis(pseudo_cartan_skew(M({0, -3, 18, 3, 0, -7, -18, 7, 0}))).kind == SurfaceKind::Cylinder);
    CHECK(eigen_analysis(pseudo_cartan_skew(b228())).kind == SurfaceKind::TwoSheets);
    CHECK_THROWS_AS(eigen_analysis(pseudo_cartan_skew(M({0, -2, 3, 2, 0, -2, -3, 2, 0}))), Error);
}

TEST_CASE("alpha") {
    CHECK(alpha(2.0) == 1.0);
    CHECK_THAT(alpha(3.0), WithinAbs((3 + std::sqrt(5.0)) / 2, 1e-15));
    for (double p : {2.0, 2.5, 3.0, 7.0, 100.0, 1e6}) {
        double a = alpha(p);
        CHECK_THAT(a * a - p * a + 1, WithinAbs(0, 1e-12 * a * a));
        CHECK_THAT(a * alpha_inv(p), WithinAbs(1, 1e-14));
        CHECK(a >= 1);
    }
    CHECK(alpha(2.0 - 1e-12) == 1.0);
    CHECK_THROWS_AS(alpha(1.9), Error);
}

TEST_CASE("Chebyshev polynomials") {
    for (int n = 0; n <= 10; ++n) CHECK(chebyshev_u(n, 2.0) == n + 1);
    CHECK(chebyshev_u(-2, 3.0) == -1);
    CHECK(chebyshev_u(-1, 3.0) == 0);
    CHECK(chebyshev_u(0, 5.0) == 1);
    CHECK_THAT(chebyshev_u(1, 5.0), WithinAbs(5, 1e-14));
    CHECK_THAT(chebyshev_u(3, 3.0), WithinAbs(21, 1e-12));
    CHECK_THROWS_AS(chebyshev_u(-3, 3.0), Error);
    CHECK_THROWS_AS(chebyshev_u(2, 1.5), Error);
    for (double p = 2.0; p <= 12.0; p += 0.37)
        for (int n = -2; n <= 40; ++n) {
            long double ref = oracle::chebyshev_ld(n, p);
            CHECK_THAT(chebyshev_u(n, p), WithinAbs(static_cast<double>(ref), 1e-10 * std::max(1.0L, std::abs(ref))));
        }
}

TEST_CASE("entrywise order and decreasing sequences") {
    auto B = b228();
    CHECK(abs_leq(B, ExchangeMatrix<double>{-B.b, B.d}) == Order::BOTH);
    CHECK(abs_leq(B, mutate(B, 0)) == Order::GEQ);
    CHECK(abs_leq(min228(), mutate(min228(), 1)) == Order::LEQ);

    Descent<double> ds = decreasing_sequence(B, 50);
    CHECK(ds.finite);
    CHECK(ds.word == Word{0, 1, 2, 1, 0});
    require_equal(ds.minimum.b, min228().b);

    Descent<double> dm = decreasing_sequence(markov(), 50);
    CHECK(dm.finite);
    CHECK(dm.word.empty());
    require_equal(dm.minimum.b, markov().b);

    Descent<double> dc = decreasing_sequence(M({0, -14.5, 4.75, 14.5, 0, -3.5, -4.75, 3.5, 0}), 10);
    CHECK_FALSE(dc.finite);
    CHECK(dc.word == Word{2, 1, 0, 1, 0, 2, 0, 2, 1, 2});
    CHECK(is_reduced(dc.word));
}

TEST_CASE("triangle inequalities hold along mutations") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 20; ++t) {
        auto B = oracle::random_cluster_cyclic(rng);
        walk_tree<double>(initial_seed(B), 6, [&](const Seed<double>& s) {
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    int k = 3 - i - j;
                    if (i == j || k < 0 || k > 2 || k == i || k == j) continue;
                    double pij = pval(s.B, i, j), pik = pval(s.B, i, k), pkj = pval(s.B, k, j);
                    CHECK(pij >= 2 - 1e-9);
                    CHECK(pij < pik * pkj * (1 + 1e-12));
                    CHECK(alpha(pik) * pkj >= pij * (1 - 1e-12));
                }
            return true;
        });
    }
}

TEST_CASE("matrices grow along trunks and branches under the minimum assumption") {
    auto B = min228();
    for (int i = 0; i < 3; ++i) {
        REQUIRE(mutation_not_smaller(B, i));
        walk_tree<double>(mutate_seed(initial_seed(B), i), 7, [&](const Seed<double>& s) {
            for (int k = 0; k < 3; ++k) {
                if (k == s.word.back()) continue;
                Order o = abs_leq(s.B, mutate(s.B, k));
                CHECK((o == Order::LEQ || o == Order::BOTH));
            }
            return true;
        });
    }
}
