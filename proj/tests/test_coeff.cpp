#include "doctest.h"
#include "support.hpp"

#include "ainfty/coeff.hpp"

#include <numeric>

using namespace ainfty;
using testing_support::Gen;

namespace {

// Dense mod-p rank by plain elimination on long integers.
int naive_rank_mod(std::vector<std::vector<long>> a, long p) {
    int rows = static_cast<int>(a.size()), cols = rows ? static_cast<int>(a[0].size()) : 0, r = 0;
    auto pw = [p](long b, long e) {
        long out = 1;
        b %= p;
        while (e) {
            if (e & 1) out = out * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return out;
    };
    for (auto& row : a)
        for (auto& x : row) x = ((x % p) + p) % p;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (a[i][c]) piv = i;
        if (piv < 0) continue;
        std::swap(a[piv], a[r]);
        long inv = pw(a[r][c], p - 2);
        for (int i = 0; i < rows; ++i) {
            if (i == r || !a[i][c]) continue;
            long f = a[i][c] * inv % p;
            for (int j = 0; j < cols; ++j) a[i][j] = ((a[i][j] - f * a[r][j]) % p + p) % p;
        }
        ++r;
    }
    return r;
}

// gcd of all k x k minors, by brute force over index subsets.
long determinantal_divisor(const std::vector<std::vector<long>>& a, int k) {
    int rows = static_cast<int>(a.size()), cols = static_cast<int>(a[0].size());
    long g = 0;
    std::vector<int> ri(k), ci(k);
    std::function<long(std::vector<std::vector<long>>)> det = [&](std::vector<std::vector<long>> m) -> long {
        int n = static_cast<int>(m.size());
        if (n == 1) return m[0][0];
        long s = 0;
        for (int j = 0; j < n; ++j) {
            std::vector<std::vector<long>> minor;
            for (int i = 1; i < n; ++i) {
                std::vector<long> row;
                for (int c = 0; c < n; ++c)
                    if (c != j) row.push_back(m[i][c]);
                minor.push_back(row);
            }
            s += (j % 2 ? -1 : 1) * m[0][j] * det(minor);
        }
        return s;
    };
    std::function<void(int, int, std::vector<int>&, int, std::vector<std::vector<int>>&)> choose =
        [&](int start, int n, std::vector<int>& cur, int need, std::vector<std::vector<int>>& out) {
            if (static_cast<int>(cur.size()) == need) {
                out.push_back(cur);
                return;
            }
            for (int i = start; i < n; ++i) {
                cur.push_back(i);
                choose(i + 1, n, cur, need, out);
                cur.pop_back();
            }
        };
    std::vector<std::vector<int>> rs, cs;
    std::vector<int> cur;
    choose(0, rows, cur, k, rs);
    choose(0, cols, cur, k, cs);
    for (const auto& r : rs)
        for (const auto& c : cs) {
            std::vector<std::vector<long>> m(k, std::vector<long>(k));
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) m[i][j] = a[r[i]][c[j]];
            g = std::gcd(g, std::labs(det(m)));
        }
    return g;
}

std::vector<std::vector<long>> to_long(const SparseMatrix& m) {
    std::vector<std::vector<long>> out(m.rows(), std::vector<long>(m.cols()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out[i][j] = m.get(i, j).integer().get_si();
    return out;
}

}  // namespace

TEST_CASE("prime field arithmetic") {
    Ring f5 = Ring::Fp(5);
    CHECK((Elem(f5, 3) + Elem(f5, 4)).str() == "2");
    CHECK(Elem(f5, 2).inv().str() == "3");
    CHECK(Elem(f5, -1).str() == "4");
    CHECK_THROWS_AS(Elem(f5, 0).inv(), Error);
    CHECK_THROWS_AS(Ring::Fp(6), Error);
}

TEST_CASE("integers are not a field") {
    Ring z = Ring::Z();
    try {
        (void)Elem(z, 2).inv();
        FAIL("expected NotInvertible");
    } catch (const Error& e) {
        CHECK(e.code() == "NotInvertible");
    }
    CHECK(Elem(z, -1).inv().str() == "-1");
    CHECK_THROWS_AS(Elem(z, 1) + Elem(Ring::Q(), 1), Error);
}

TEST_CASE("rationals parse and print canonically") {
    Ring q = Ring::Q();
    CHECK(Elem::parse(q, "6/4").str() == "3/2");
    CHECK(Elem::parse(q, "4/2").str() == "2");
    CHECK((Elem::parse(q, "1/3") * Elem(q, 3)).is_one());
}

TEST_CASE("rank matches a naive elimination over F7") {
    Gen g;
    Ring f7 = Ring::Fp(7);
    for (int t = 0; t < 50; ++t) {
        int r = static_cast<int>(g.range(1, 9)), c = static_cast<int>(g.range(1, 9));
        SparseMatrix m = g.matrix(f7, r, c, 0.4);
        CHECK(rank(m) == naive_rank_mod(to_long(m), 7));
        RankKernel rk = rank_kernel(m);
        CHECK(rk.rank + static_cast<int>(rk.kernel.size()) == c);
        for (const auto& v : rk.kernel)
            for (const auto& x : m.apply(v)) CHECK(x.is_zero());
    }
}

TEST_CASE("large sparse rank agrees with dense path") {
    Gen g;
    Ring f5 = Ring::Fp(5);
    SparseMatrix m = g.matrix(f5, 80, 70, 0.05);
    CHECK(rank(m) == naive_rank_mod(to_long(m), 5));
}

TEST_CASE("solve_linear over a field") {
    Gen g;
    Ring f7 = Ring::Fp(7);
    for (int t = 0; t < 30; ++t) {
        SparseMatrix m = g.matrix(f7, 5, 4, 0.6);
        Vector x(4);
        for (auto& e : x) e = g.elem(f7);
        Vector b = m.apply(x);
        auto sol = solve_linear(m, b);
        REQUIRE(sol.has_value());
        CHECK(m.apply(*sol) == b);
    }
    SparseMatrix zero(f7, 1, 1);
    CHECK_FALSE(solve_linear(zero, {Elem(f7, 1)}).has_value());
    CHECK_THROWS_AS(solve_linear(SparseMatrix(Ring::Z(), 1, 1), {Elem(Ring::Z(), 1)}), Error);
}

TEST_CASE("smith normal form of diag(2,3)") {
    Ring z = Ring::Z();
    SparseMatrix m = SparseMatrix::from_dense(z, {{2, 0}, {0, 3}});
    SmithForm s = smith_normal_form(m);
    REQUIRE(s.diagonal.size() == 2);
    CHECK(s.diagonal[0] == 1);
    CHECK(s.diagonal[1] == 6);
    CHECK(s.u * m * s.v == s.d);
    CHECK(abs(determinant(s.u)) == 1);
    CHECK(abs(determinant(s.v)) == 1);
}

TEST_CASE("smith invariants agree with determinantal divisors") {
    Gen g;
    Ring z = Ring::Z();
    for (int t = 0; t < 40; ++t) {
        int r = static_cast<int>(g.range(1, 4)), c = static_cast<int>(g.range(1, 4));
        SparseMatrix m = g.matrix(z, r, c, 0.7, -6, 6);
        SmithForm s = smith_normal_form(m);
        CHECK(s.u * m * s.v == s.d);
        CHECK(abs(determinant(s.u)) == 1);
        CHECK(abs(determinant(s.v)) == 1);
        auto a = to_long(m);
        long prev = 1;
        for (std::size_t k = 1; k <= s.diagonal.size(); ++k) {
            long dk = determinantal_divisor(a, static_cast<int>(k));
            CHECK(s.diagonal[k - 1] == dk / prev);
            prev = dk;
        }
        if (static_cast<int>(s.diagonal.size()) < std::min(r, c))
            CHECK(determinantal_divisor(a, static_cast<int>(s.diagonal.size()) + 1) == 0);
    }
}

TEST_CASE("integer solving respects divisibility") {
    Ring z = Ring::Z();
    SparseMatrix m = SparseMatrix::from_dense(z, {{2}});
    CHECK_FALSE(solve_integer(m, {Elem(z, 1)}).has_value());
    auto s = solve_integer(m, {Elem(z, 4)});
    REQUIRE(s.has_value());
    CHECK((*s)[0].str() == "2");
    Gen g;
    for (int t = 0; t < 30; ++t) {
        SparseMatrix a = g.matrix(z, 3, 4, 0.6, -4, 4);
        Vector x(4);
        for (auto& e : x) e = g.elem(z, -5, 5);
        Vector b = a.apply(x);
        auto sol = solve_integer(a, b);
        REQUIRE(sol.has_value());
        CHECK(a.apply(*sol) == b);
    }
}

TEST_CASE("integer kernel is saturated") {
    Ring z = Ring::Z();
    SparseMatrix m = SparseMatrix::from_dense(z, {{2, 4}});
    RankKernel rk = rank_kernel(m);
    CHECK(rk.rank == 1);
    REQUIRE(rk.kernel.size() == 1);
    mpz_class a = rk.kernel[0][0].integer(), b = rk.kernel[0][1].integer();
    CHECK(abs(a) == 2);
    CHECK(abs(b) == 1);
}
