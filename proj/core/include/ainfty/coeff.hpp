#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ainfty {

// Error carrying a stable machine-readable code.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

enum class RingKind { Fp, Q, Z };

struct Ring {
    RingKind kind = RingKind::Q;
    long p = 0;

    static Ring Fp(long p);
    static Ring Q() { return {RingKind::Q, 0}; }
    static Ring Z() { return {RingKind::Z, 0}; }

    bool is_field() const { return kind != RingKind::Z; }
    std::string name() const;
    bool operator==(const Ring& o) const { return kind == o.kind && p == o.p; }
    bool operator!=(const Ring& o) const { return !(*this == o); }
};

bool is_prime(long p);

// Exact ring element in canonical form.
class Elem {
public:
    Elem() = default;
    Elem(const Ring& r, long v);
    Elem(const Ring& r, const mpq_class& v);

    static Elem zero(const Ring& r) { return Elem(r, 0L); }
    static Elem one(const Ring& r) { return Elem(r, 1L); }
    static Elem parse(const Ring& r, const std::string& s);

    const Ring& ring() const { return ring_; }
    bool is_zero() const;
    bool is_one() const;
    bool is_unit() const;

    Elem operator+(const Elem& o) const;
    Elem operator-(const Elem& o) const;
    Elem operator*(const Elem& o) const;
    Elem operator-() const;
    Elem& operator+=(const Elem& o);
    Elem& operator-=(const Elem& o);
    Elem& operator*=(const Elem& o);
    Elem inv() const;
    Elem operator/(const Elem& o) const { return *this * o.inv(); }
    Elem signed_by(int sign) const { return sign < 0 ? -*this : *this; }

    bool operator==(const Elem& o) const;
    bool operator!=(const Elem& o) const { return !(*this == o); }

    std::string str() const;
    mpq_class value() const;
    // Integer value, valid for Fp and Z.
    mpz_class integer() const;

private:
    void check(const Elem& o) const;
    void canon();

    Ring ring_;
    long r_ = 0;
    mpq_class q_;
};

// Sparse linear combination over an ordered key set; zero coefficients are never stored.
template <class K>
class Lin {
public:
    using Map = std::map<K, Elem>;

    void add(const K& k, const Elem& c) {
        if (c.is_zero()) return;
        auto it = m_.find(k);
        if (it == m_.end()) {
            m_.emplace(k, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) m_.erase(it);
    }
    void add(const Lin& o, const Elem& scale) {
        for (const auto& [k, c] : o.m_) add(k, c * scale);
    }
    void add(const Lin& o) {
        for (const auto& [k, c] : o.m_) add(k, c);
    }
    Lin scaled(const Elem& s) const {
        Lin out;
        if (s.is_zero()) return out;
        for (const auto& [k, c] : m_) out.m_.emplace(k, c * s);
        return out;
    }
    Lin negated() const {
        Lin out;
        for (const auto& [k, c] : m_) out.m_.emplace(k, -c);
        return out;
    }
    Elem coeff(const K& k, const Ring& r) const {
        auto it = m_.find(k);
        return it == m_.end() ? Elem::zero(r) : it->second;
    }
    bool empty() const { return m_.empty(); }
    std::size_t size() const { return m_.size(); }
    const Map& terms() const { return m_; }
    auto begin() const { return m_.begin(); }
    auto end() const { return m_.end(); }
    bool operator==(const Lin& o) const { return m_ == o.m_; }
    bool operator!=(const Lin& o) const { return !(m_ == o.m_); }

private:
    Map m_;
};

using Vector = std::vector<Elem>;

class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(const Ring& r, int rows, int cols);

    static SparseMatrix identity(const Ring& r, int n);
    static SparseMatrix from_dense(const Ring& r, const std::vector<std::vector<long>>& rows);

    const Ring& ring() const { return ring_; }
    int rows() const { return rows_; }
    int cols() const { return static_cast<int>(cols_.size()); }

    Elem get(int i, int j) const;
    void set(int i, int j, const Elem& v);
    void add(int i, int j, const Elem& v);
    const std::map<int, Elem>& col(int j) const { return cols_[j]; }
    std::size_t nnz() const;
    // All entries keyed by (row, col).
    std::map<std::pair<int, int>, Elem> entries() const;

    SparseMatrix operator*(const SparseMatrix& o) const;
    SparseMatrix operator+(const SparseMatrix& o) const;
    SparseMatrix operator-(const SparseMatrix& o) const;
    SparseMatrix scaled(const Elem& s) const;
    Vector apply(const Vector& v) const;
    SparseMatrix transpose() const;
    bool is_zero() const;
    bool operator==(const SparseMatrix& o) const;
    bool operator!=(const SparseMatrix& o) const { return !(*this == o); }

    // Rows [r0, r1) and columns [c0, c1).
    SparseMatrix block(int r0, int r1, int c0, int c1) const;
    void set_block(int r0, int c0, const SparseMatrix& b);
    std::vector<std::vector<Elem>> dense() const;

private:
    Ring ring_;
    int rows_ = 0;
    std::vector<std::map<int, Elem>> cols_;
};

struct RankKernel {
    int rank = 0;
    std::vector<Vector> kernel;
};

// Rank and kernel basis; over Z the kernel is a basis of the integer kernel.
RankKernel rank_kernel(const SparseMatrix& m);
int rank(const SparseMatrix& m);

// Field coefficients only; throws UnsupportedRing over Z.
std::optional<Vector> solve_linear(const SparseMatrix& m, const Vector& b);

// Integer solution of m x = b via the Smith form, when one exists.
std::optional<Vector> solve_integer(const SparseMatrix& m, const Vector& b);

// solve_linear over fields, solve_integer over Z.
std::optional<Vector> solve_exact(const SparseMatrix& m, const Vector& b);

struct SmithForm {
    SparseMatrix u, d, v;  // u * m * v = d
    std::vector<mpz_class> diagonal;  // nonzero invariant factors, divisibility chain
};

SmithForm smith_normal_form(const SparseMatrix& m);

// Determinant of a square integer matrix.
mpz_class determinant(const SparseMatrix& m);

}  // namespace ainfty
