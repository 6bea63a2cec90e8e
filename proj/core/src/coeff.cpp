#include "ainfty/coeff.hpp"

#include <algorithm>
#include <regex>

namespace ainfty {

bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

Ring Ring::Fp(long p) {
    if (!is_prime(p)) throw Error("SchemaError", "characteristic " + std::to_string(p) + " is not prime");
    return {RingKind::Fp, p};
}

std::string Ring::name() const {
    switch (kind) {
        case RingKind::Fp: return "F" + std::to_string(p);
        case RingKind::Q: return "Q";
        case RingKind::Z: return "Z";
    }
    return "?";
}

namespace {

long mod(long a, long p) {
    long r = a % p;
    return r < 0 ? r + p : r;
}

long mod_mpz(const mpz_class& z, long p) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), static_cast<unsigned long>(p));
    return r.get_si();
}

long inv_mod(long a, long p) {
    long t = 0, nt = 1, r = p, nr = a;
    while (nr != 0) {
        long q = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - q * nt);
        std::tie(r, nr) = std::make_pair(nr, r - q * nr);
    }
    return mod(t, p);
}

}  // namespace

Elem::Elem(const Ring& r, long v) : ring_(r) {
    if (r.kind == RingKind::Fp)
        r_ = mod(v, r.p);
    else
        q_ = v;
}

Elem::Elem(const Ring& r, const mpq_class& v) : ring_(r) {
    if (r.kind == RingKind::Fp) {
        mpq_class c(v);
        c.canonicalize();
        long num = mod_mpz(c.get_num(), r.p);
        long den = mod_mpz(c.get_den(), r.p);
        if (den == 0) throw Error("NotInvertible", "denominator vanishes in " + r.name());
        r_ = (num * inv_mod(den, r.p)) % r.p;
    } else {
        q_ = v;
        q_.canonicalize();
        if (r.kind == RingKind::Z && q_.get_den() != 1)
            throw Error("NotInvertible", "non-integral value " + q_.get_str() + " in Z");
    }
}

Elem Elem::parse(const Ring& r, const std::string& s) {
    static const std::regex form(R"(-?[0-9]+(/[0-9]+)?)");
    mpq_class v;
    if (!std::regex_match(s, form) || v.set_str(s, 10) != 0) throw Error("SchemaError", "bad coefficient '" + s + "'");
    if (v.get_den() == 0) throw Error("SchemaError", "zero denominator in '" + s + "'");
    return Elem(r, v);
}

void Elem::check(const Elem& o) const {
    if (ring_ != o.ring_) throw Error("RingMismatch", ring_.name() + " vs " + o.ring_.name());
}

bool Elem::is_zero() const { return ring_.kind == RingKind::Fp ? r_ == 0 : q_ == 0; }
bool Elem::is_one() const { return ring_.kind == RingKind::Fp ? r_ == 1 : q_ == 1; }

bool Elem::is_unit() const {
    if (is_zero()) return false;
    if (ring_.kind == RingKind::Z) return q_ == 1 || q_ == -1;
    return true;
}

Elem Elem::operator+(const Elem& o) const {
    Elem out(*this);
    out += o;
    return out;
}
Elem Elem::operator-(const Elem& o) const {
    Elem out(*this);
    out -= o;
    return out;
}
Elem Elem::operator*(const Elem& o) const {
    Elem out(*this);
    out *= o;
    return out;
}

Elem Elem::operator-() const {
    Elem out(*this);
    if (ring_.kind == RingKind::Fp)
        out.r_ = r_ == 0 ? 0 : ring_.p - r_;
    else
        out.q_ = -q_;
    return out;
}

Elem& Elem::operator+=(const Elem& o) {
    check(o);
    if (ring_.kind == RingKind::Fp) {
        r_ += o.r_;
        if (r_ >= ring_.p) r_ -= ring_.p;
    } else {
        q_ += o.q_;
    }
    return *this;
}

Elem& Elem::operator-=(const Elem& o) {
    check(o);
    if (ring_.kind == RingKind::Fp) {
        r_ -= o.r_;
        if (r_ < 0) r_ += ring_.p;
    } else {
        q_ -= o.q_;
    }
    return *this;
}

Elem& Elem::operator*=(const Elem& o) {
    check(o);
    if (ring_.kind == RingKind::Fp)
        r_ = static_cast<long>((static_cast<__int128>(r_) * o.r_) % ring_.p);
    else
        q_ *= o.q_;
    return *this;
}

Elem Elem::inv() const {
    if (!is_unit()) throw Error("NotInvertible", str() + " has no inverse in " + ring_.name());
    Elem out(*this);
    if (ring_.kind == RingKind::Fp)
        out.r_ = inv_mod(r_, ring_.p);
    else
        out.q_ = 1 / q_;
    return out;
}

bool Elem::operator==(const Elem& o) const {
    if (ring_ != o.ring_) return false;
    return ring_.kind == RingKind::Fp ? r_ == o.r_ : q_ == o.q_;
}

std::string Elem::str() const {
    if (ring_.kind == RingKind::Fp) return std::to_string(r_);
    return q_.get_str();
}

mpq_class Elem::value() const {
    if (ring_.kind == RingKind::Fp) return mpq_class(r_);
    return q_;
}

mpz_class Elem::integer() const {
    if (ring_.kind == RingKind::Fp) return mpz_class(r_);
    if (q_.get_den() != 1) throw Error("NotInvertible", "non-integral value " + q_.get_str());
    return q_.get_num();
}

// ---------------------------------------------------------------- matrices

SparseMatrix::SparseMatrix(const Ring& r, int rows, int cols) : ring_(r), rows_(rows), cols_(cols) {}

SparseMatrix SparseMatrix::identity(const Ring& r, int n) {
    SparseMatrix m(r, n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, Elem::one(r));
    return m;
}

SparseMatrix SparseMatrix::from_dense(const Ring& r, const std::vector<std::vector<long>>& rows) {
    int nr = static_cast<int>(rows.size());
    int nc = nr ? static_cast<int>(rows[0].size()) : 0;
    SparseMatrix m(r, nr, nc);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) m.set(i, j, Elem(r, rows[i][j]));
    return m;
}

Elem SparseMatrix::get(int i, int j) const {
    auto it = cols_[j].find(i);
    return it == cols_[j].end() ? Elem::zero(ring_) : it->second;
}

void SparseMatrix::set(int i, int j, const Elem& v) {
    if (v.is_zero())
        cols_[j].erase(i);
    else
        cols_[j][i] = v;
}

void SparseMatrix::add(int i, int j, const Elem& v) {
    if (v.is_zero()) return;
    auto& c = cols_[j];
    auto it = c.find(i);
    if (it == c.end()) {
        c.emplace(i, v);
        return;
    }
    it->second += v;
    if (it->second.is_zero()) c.erase(it);
}

std::size_t SparseMatrix::nnz() const {
    std::size_t n = 0;
    for (const auto& c : cols_) n += c.size();
    return n;
}

std::map<std::pair<int, int>, Elem> SparseMatrix::entries() const {
    std::map<std::pair<int, int>, Elem> out;
    for (int j = 0; j < cols(); ++j)
        for (const auto& [i, v] : cols_[j]) out.emplace(std::make_pair(i, j), v);
    return out;
}

SparseMatrix SparseMatrix::operator*(const SparseMatrix& o) const {
    if (cols() != o.rows()) throw Error("DimensionMismatch", "matrix product");
    if (ring_ != o.ring_) throw Error("RingMismatch", ring_.name() + " vs " + o.ring_.name());
    SparseMatrix out(ring_, rows_, o.cols());
    for (int j = 0; j < o.cols(); ++j) {
        auto& dst = out.cols_[j];
        for (const auto& [k, b] : o.cols_[j]) {
            for (const auto& [i, a] : cols_[k]) {
                auto it = dst.find(i);
                if (it == dst.end())
                    dst.emplace(i, a * b);
                else
                    it->second += a * b;
            }
        }
        for (auto it = dst.begin(); it != dst.end();) it = it->second.is_zero() ? dst.erase(it) : std::next(it);
    }
    return out;
}

SparseMatrix SparseMatrix::operator+(const SparseMatrix& o) const {
    if (rows_ != o.rows_ || cols() != o.cols()) throw Error("DimensionMismatch", "matrix sum");
    SparseMatrix out(*this);
    for (int j = 0; j < cols(); ++j)
        for (const auto& [i, v] : o.cols_[j]) out.add(i, j, v);
    return out;
}

SparseMatrix SparseMatrix::operator-(const SparseMatrix& o) const { return *this + o.scaled(-Elem::one(ring_)); }

SparseMatrix SparseMatrix::scaled(const Elem& s) const {
    SparseMatrix out(ring_, rows_, cols());
    for (int j = 0; j < cols(); ++j)
        for (const auto& [i, v] : cols_[j]) out.set(i, j, v * s);
    return out;
}

Vector SparseMatrix::apply(const Vector& v) const {
    if (static_cast<int>(v.size()) != cols()) throw Error("DimensionMismatch", "matrix-vector product");
    Vector out(rows_, Elem::zero(ring_));
    for (int j = 0; j < cols(); ++j) {
        if (v[j].is_zero()) continue;
        for (const auto& [i, a] : cols_[j]) out[i] += a * v[j];
    }
    return out;
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix out(ring_, cols(), rows_);
    for (int j = 0; j < cols(); ++j)
        for (const auto& [i, v] : cols_[j]) out.set(j, i, v);
    return out;
}

bool SparseMatrix::is_zero() const {
    for (const auto& c : cols_)
        if (!c.empty()) return false;
    return true;
}

bool SparseMatrix::operator==(const SparseMatrix& o) const {
    return ring_ == o.ring_ && rows_ == o.rows_ && cols_ == o.cols_;
}

SparseMatrix SparseMatrix::block(int r0, int r1, int c0, int c1) const {
    SparseMatrix out(ring_, r1 - r0, c1 - c0);
    for (int j = c0; j < c1; ++j)
        for (auto it = cols_[j].lower_bound(r0); it != cols_[j].end() && it->first < r1; ++it)
            out.set(it->first - r0, j - c0, it->second);
    return out;
}

void SparseMatrix::set_block(int r0, int c0, const SparseMatrix& b) {
    for (int j = 0; j < b.cols(); ++j)
        for (const auto& [i, v] : b.cols_[j]) set(r0 + i, c0 + j, v);
}

std::vector<std::vector<Elem>> SparseMatrix::dense() const {
    std::vector<std::vector<Elem>> out(rows_, std::vector<Elem>(cols(), Elem::zero(ring_)));
    for (int j = 0; j < cols(); ++j)
        for (const auto& [i, v] : cols_[j]) out[i][j] = v;
    return out;
}

// ---------------------------------------------------------------- elimination over fields

namespace {

constexpr int kDenseLimit = 64;

struct Echelon {
    std::vector<std::map<int, Elem>> rows;  // reduced rows, leading coefficient 1
    std::vector<int> pivots;                // pivot column of each row
};

Echelon echelon_sparse(const Ring& ring, std::vector<std::map<int, Elem>> rows) {
    Echelon e;
    std::map<int, int> pivot_row;  // column -> index in e.rows
    for (auto& row : rows) {
        // Reduce against existing pivots in increasing column order.
        for (;;) {
            bool changed = false;
            for (auto it = row.begin(); it != row.end(); ++it) {
                auto pr = pivot_row.find(it->first);
                if (pr == pivot_row.end()) continue;
                Elem f = it->second;
                for (const auto& [c, v] : e.rows[pr->second]) {
                    auto& slot = row[c];
                    if (slot.ring() != ring) slot = Elem::zero(ring);
                    slot -= f * v;
                }
                for (auto jt = row.begin(); jt != row.end();) jt = jt->second.is_zero() ? row.erase(jt) : std::next(jt);
                changed = true;
                break;
            }
            if (!changed) break;
        }
        if (row.empty()) continue;
        int pc = row.begin()->first;
        Elem inv = row.begin()->second.inv();
        for (auto& [c, v] : row) v *= inv;
        // Back-substitute into earlier rows to keep the form reduced.
        for (auto& other : e.rows) {
            auto it = other.find(pc);
            if (it == other.end()) continue;
            Elem f = it->second;
            for (const auto& [c, v] : row) {
                auto& slot = other[c];
                if (slot.ring() != ring) slot = Elem::zero(ring);
                slot -= f * v;
            }
            for (auto jt = other.begin(); jt != other.end();)
                jt = jt->second.is_zero() ? other.erase(jt) : std::next(jt);
        }
        pivot_row[pc] = static_cast<int>(e.rows.size());
        e.rows.push_back(std::move(row));
        e.pivots.push_back(pc);
    }
    return e;
}

Echelon echelon_dense(const Ring& ring, std::vector<std::vector<Elem>> a, int ncols) {
    Echelon e;
    int nrows = static_cast<int>(a.size());
    int r = 0;
    for (int c = 0; c < ncols && r < nrows; ++c) {
        int piv = -1;
        for (int i = r; i < nrows; ++i)
            if (!a[i][c].is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(a[r], a[piv]);
        Elem inv = a[r][c].inv();
        for (int j = c; j < ncols; ++j) a[r][j] *= inv;
        for (int i = 0; i < nrows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            Elem f = a[i][c];
            for (int j = c; j < ncols; ++j)
                if (!a[r][j].is_zero()) a[i][j] -= f * a[r][j];
        }
        e.pivots.push_back(c);
        ++r;
    }
    for (int i = 0; i < r; ++i) {
        std::map<int, Elem> row;
        for (int j = 0; j < ncols; ++j)
            if (!a[i][j].is_zero()) row.emplace(j, a[i][j]);
        e.rows.push_back(std::move(row));
    }
    (void)ring;
    return e;
}

Echelon echelon(const SparseMatrix& m) {
    if (m.rows() < kDenseLimit && m.cols() < kDenseLimit) return echelon_dense(m.ring(), m.dense(), m.cols());
    std::vector<std::map<int, Elem>> rows(m.rows());
    for (int j = 0; j < m.cols(); ++j)
        for (const auto& [i, v] : m.col(j)) rows[i].emplace(j, v);
    return echelon_sparse(m.ring(), std::move(rows));
}

}  // namespace

RankKernel rank_kernel(const SparseMatrix& m) {
    const Ring& ring = m.ring();
    RankKernel out;
    if (!ring.is_field()) {
        SmithForm s = smith_normal_form(m);
        out.rank = static_cast<int>(s.diagonal.size());
        for (int j = out.rank; j < m.cols(); ++j) {
            Vector v(m.cols(), Elem::zero(ring));
            for (const auto& [i, x] : s.v.col(j)) v[i] = x;
            out.kernel.push_back(std::move(v));
        }
        return out;
    }
    Echelon e = echelon(m);
    out.rank = static_cast<int>(e.rows.size());
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : e.pivots) is_pivot[c] = true;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        Vector v(m.cols(), Elem::zero(ring));
        v[f] = Elem::one(ring);
        for (std::size_t r = 0; r < e.rows.size(); ++r) {
            auto it = e.rows[r].find(f);
            if (it != e.rows[r].end()) v[e.pivots[r]] = -it->second;
        }
        out.kernel.push_back(std::move(v));
    }
    return out;
}

int rank(const SparseMatrix& m) {
    if (!m.ring().is_field()) return static_cast<int>(smith_normal_form(m).diagonal.size());
    return static_cast<int>(echelon(m).rows.size());
}

std::optional<Vector> solve_linear(const SparseMatrix& m, const Vector& b) {
    const Ring& ring = m.ring();
    if (!ring.is_field())
        throw Error("UnsupportedRing", "solve_linear needs field coefficients; supply a witness over Z");
    if (static_cast<int>(b.size()) != m.rows()) throw Error("DimensionMismatch", "right-hand side length");
    SparseMatrix aug(ring, m.rows(), m.cols() + 1);
    aug.set_block(0, 0, m);
    for (int i = 0; i < m.rows(); ++i) aug.set(i, m.cols(), b[i]);
    Echelon e = echelon(aug);
    Vector x(m.cols(), Elem::zero(ring));
    for (std::size_t r = 0; r < e.rows.size(); ++r) {
        if (e.pivots[r] == m.cols()) return std::nullopt;
        auto it = e.rows[r].find(m.cols());
        if (it != e.rows[r].end()) x[e.pivots[r]] = it->second;
    }
    return x;
}

// ---------------------------------------------------------------- Smith normal form

namespace {

using ZMat = std::vector<std::vector<mpz_class>>;

ZMat to_z(const SparseMatrix& m) {
    ZMat a(m.rows(), std::vector<mpz_class>(m.cols()));
    for (int j = 0; j < m.cols(); ++j)
        for (const auto& [i, v] : m.col(j)) a[i][j] = v.integer();
    return a;
}

SparseMatrix from_z(const Ring& r, const ZMat& a, int rows, int cols) {
    SparseMatrix m(r, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (a[i][j] != 0) m.set(i, j, Elem(r, mpq_class(a[i][j])));
    return m;
}

ZMat eye(int n) {
    ZMat a(n, std::vector<mpz_class>(n));
    for (int i = 0; i < n; ++i) a[i][i] = 1;
    return a;
}

}  // namespace

SmithForm smith_normal_form(const SparseMatrix& m) {
    const int R = m.rows(), C = m.cols();
    ZMat a = to_z(m), u = eye(R), v = eye(C);

    auto row_op = [&](int dst, int src, const mpz_class& q) {  // row dst -= q row src
        for (int j = 0; j < C; ++j) a[dst][j] -= q * a[src][j];
        for (int j = 0; j < R; ++j) u[dst][j] -= q * u[src][j];
    };
    auto col_op = [&](int dst, int src, const mpz_class& q) {  // col dst -= q col src
        for (int i = 0; i < R; ++i) a[i][dst] -= q * a[i][src];
        for (int i = 0; i < C; ++i) v[i][dst] -= q * v[i][src];
    };
    auto swap_rows = [&](int x, int y) {
        std::swap(a[x], a[y]);
        std::swap(u[x], u[y]);
    };
    auto swap_cols = [&](int x, int y) {
        for (int i = 0; i < R; ++i) std::swap(a[i][x], a[i][y]);
        for (int i = 0; i < C; ++i) std::swap(v[i][x], v[i][y]);
    };

    std::vector<mpz_class> diag;
    for (int t = 0; t < std::min(R, C); ++t) {
        int pi = -1, pj = -1;
        for (int i = t; i < R; ++i)
            for (int j = t; j < C; ++j)
                if (a[i][j] != 0 && (pi < 0 || abs(a[i][j]) < abs(a[pi][pj]))) pi = i, pj = j;
        if (pi < 0) break;
        swap_rows(t, pi);
        swap_cols(t, pj);
        for (;;) {
            bool done = true;
            for (int i = t + 1; i < R; ++i) {
                if (a[i][t] == 0) continue;
                mpz_class q;
                mpz_tdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                row_op(i, t, q);
                if (a[i][t] != 0) {
                    swap_rows(i, t);
                    done = false;
                }
            }
            for (int j = t + 1; j < C; ++j) {
                if (a[t][j] == 0) continue;
                mpz_class q;
                mpz_tdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                col_op(j, t, q);
                if (a[t][j] != 0) {
                    swap_cols(j, t);
                    done = false;
                }
            }
            if (!done) continue;
            int bad = -1;
            for (int i = t + 1; i < R && bad < 0; ++i)
                for (int j = t + 1; j < C; ++j)
                    if (a[i][j] != 0 && !mpz_divisible_p(a[i][j].get_mpz_t(), a[t][t].get_mpz_t())) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            row_op(t, bad, mpz_class(-1));
        }
        if (a[t][t] < 0) {
            for (int j = 0; j < C; ++j) a[t][j] = -a[t][j];
            for (int j = 0; j < R; ++j) u[t][j] = -u[t][j];
        }
        diag.push_back(a[t][t]);
    }
    Ring z = m.ring().kind == RingKind::Z ? m.ring() : Ring::Z();
    return {from_z(z, u, R, R), from_z(z, a, R, C), from_z(z, v, C, C), diag};
}

mpz_class determinant(const SparseMatrix& m) {
    if (m.rows() != m.cols()) throw Error("DimensionMismatch", "determinant of a non-square matrix");
    const int n = m.rows();
    if (n == 0) return 1;
    ZMat a = to_z(m);
    mpz_class prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int s = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) {
                    s = i;
                    break;
                }
            if (s < 0) return 0;
            std::swap(a[k], a[s]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                mpz_class t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

std::optional<Vector> solve_integer(const SparseMatrix& m, const Vector& b) {
    SmithForm s = smith_normal_form(m);
    const Ring& ring = m.ring();
    Vector ub = s.u.apply(b);
    Vector y(m.cols(), Elem::zero(ring));
    for (int i = 0; i < m.rows(); ++i) {
        mpz_class c = ub[i].integer();
        if (i < static_cast<int>(s.diagonal.size())) {
            if (!mpz_divisible_p(c.get_mpz_t(), s.diagonal[i].get_mpz_t())) return std::nullopt;
            y[i] = Elem(ring, mpq_class(mpz_class(c / s.diagonal[i])));
        } else if (c != 0) {
            return std::nullopt;
        }
    }
    return s.v.apply(y);
}

std::optional<Vector> solve_exact(const SparseMatrix& m, const Vector& b) {
    return m.ring().is_field() ? solve_linear(m, b) : solve_integer(m, b);
}

}  // namespace ainfty
