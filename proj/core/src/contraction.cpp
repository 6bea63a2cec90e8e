#include "ainfty/contraction.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>

namespace ainfty {

namespace {

Elem sign_elem(const Ring& r, long e) { return Elem::one(r).signed_by(parity_sign(e)); }

std::string first_entry(const SparseMatrix& m) {
    auto e = m.entries();
    if (e.empty()) return {};
    const auto& [ij, v] = *e.begin();
    return "entry (" + std::to_string(ij.first) + ", " + std::to_string(ij.second) + ") is " + v.str();
}

std::vector<int> iota_vec(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

int letter_bound(const Cobar& cobar, int max_letters) {
    int b = max_letters;
    for (int v = 0; v < cobar.variables(); ++v) b = std::min(b, cobar.var(v).bound());
    return b;
}

long shifted_degree(const Quiver& q, const Word& w) {
    long s = 0;
    for (int l : w) s += q.letter(l).deg - 1;
    return s;
}

}  // namespace

// ---------------------------------------------------------------- complexes

void ChainComplex::validate() const {
    const int n = size();
    if (d.rows() != n || d.cols() != n) throw Error("DimensionMismatch", "differential does not match the basis");
    if (!names.empty() && static_cast<int>(names.size()) != n)
        throw Error("SchemaError", "names and degrees differ in length");
    if (d.ring() != ring) throw Error("RingMismatch", "differential over another ring");
    for (const auto& [ij, v] : d.entries())
        if (degrees[ij.first] != degrees[ij.second] + 1)
            throw Error("DegreeMismatch", "differential entry (" + std::to_string(ij.first) + ", " +
                                              std::to_string(ij.second) + ") does not raise degree by one");
    if (!(d * d).is_zero()) throw Error("NotAComplex", "d∘d != 0");
}

SparseMatrix submatrix(const SparseMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    std::map<int, int> row_pos;
    for (std::size_t i = 0; i < rows.size(); ++i) row_pos[rows[i]] = static_cast<int>(i);
    SparseMatrix out(m.ring(), static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (const auto& [i, v] : m.col(cols[j])) {
            auto it = row_pos.find(i);
            if (it != row_pos.end()) out.set(it->second, static_cast<int>(j), v);
        }
    return out;
}

SparseMatrix inverse(const SparseMatrix& m) {
    if (m.rows() != m.cols()) throw Error("DimensionMismatch", "inverse of a non-square matrix");
    const int n = m.rows();
    const Ring& r = m.ring();
    SparseMatrix out(r, n, n);
    for (int j = 0; j < n; ++j) {
        Vector e(n, Elem::zero(r));
        e[j] = Elem::one(r);
        auto x = solve_exact(m, e);
        if (!x) throw Error("NotInvertible", "matrix is not invertible over " + r.name());
        for (int i = 0; i < n; ++i)
            if (!(*x)[i].is_zero()) out.set(i, j, (*x)[i]);
    }
    return out;
}

bool is_acyclic(const ChainComplex& c) {
    std::map<int, std::vector<int>> by_degree;
    for (int i = 0; i < c.size(); ++i) by_degree[c.degrees[i]].push_back(i);
    for (const auto& [k, idx] : by_degree) {
        auto up = by_degree.find(k + 1);
        auto down = by_degree.find(k - 1);
        int r_out = up == by_degree.end() ? 0 : rank(submatrix(c.d, up->second, idx));
        int r_in = 0;
        if (down != by_degree.end()) {
            SparseMatrix in = submatrix(c.d, idx, down->second);
            r_in = rank(in);
            if (!c.ring.is_field() && r_in > 0)
                for (const mpz_class& f : smith_normal_form(in).diagonal)
                    if (abs(f) != 1) return false;
        }
        if (r_out + r_in != static_cast<int>(idx.size())) return false;
    }
    return true;
}

bool is_quasi_isomorphism(const ChainComplex& r, const ChainComplex& x, const SparseMatrix& i) {
    const int nr = r.size(), nx = x.size();
    if (i.rows() != nx || i.cols() != nr) throw Error("DimensionMismatch", "chain map shape");
    ChainComplex cone;
    cone.ring = x.ring;
    for (int k = 0; k < nr; ++k) cone.degrees.push_back(r.degrees[k] - 1);
    cone.degrees.insert(cone.degrees.end(), x.degrees.begin(), x.degrees.end());
    cone.d = SparseMatrix(x.ring, nr + nx, nr + nx);
    cone.d.set_block(0, 0, r.d.scaled(-Elem::one(x.ring)));
    cone.d.set_block(nr, 0, i);
    cone.d.set_block(nr, nr, x.d);
    return is_acyclic(cone);
}

// ---------------------------------------------------------------- filtrations

namespace {

// A basis of the column span of m.
SparseMatrix span_basis(const SparseMatrix& m) {
    const Ring& r = m.ring();
    const auto rows = iota_vec(m.rows());
    if (r.is_field()) {
        std::vector<int> keep;
        for (int j = 0; j < m.cols(); ++j) {
            keep.push_back(j);
            if (rank(submatrix(m, rows, keep)) != static_cast<int>(keep.size())) keep.pop_back();
        }
        return submatrix(m, rows, keep);
    }
    SmithForm s = smith_normal_form(m);
    SparseMatrix uinv = inverse(s.u);
    const int k = static_cast<int>(s.diagonal.size());
    SparseMatrix out(r, m.rows(), k);
    for (int j = 0; j < k; ++j)
        for (const auto& [i, v] : uinv.col(j)) out.set(i, j, v * Elem(r, mpq_class(s.diagonal[j])));
    return out;
}

// Columns completing prev (a basis of a submodule of span(next)) to a basis of span(next).
SparseMatrix complement(const SparseMatrix& prev, const SparseMatrix& next, int level) {
    const Ring& r = next.ring();
    const int k = prev.cols(), n = next.cols();
    const std::string lo = "F_" + std::to_string(level - 1), hi = "F_" + std::to_string(level);
    SparseMatrix x(r, n, k);
    for (int j = 0; j < k; ++j) {
        Vector col(prev.rows(), Elem::zero(r));
        for (const auto& [i, v] : prev.col(j)) col[i] = v;
        auto sol = solve_exact(next, col);
        if (!sol) throw Error("SchemaError", lo + " is not contained in " + hi);
        for (int i = 0; i < n; ++i)
            if (!(*sol)[i].is_zero()) x.set(i, j, (*sol)[i]);
    }
    if (r.is_field()) {
        SparseMatrix acc = prev;
        for (int j = 0; j < n; ++j) {
            SparseMatrix trial(r, next.rows(), acc.cols() + 1);
            trial.set_block(0, 0, acc);
            trial.set_block(0, acc.cols(), next.block(0, next.rows(), j, j + 1));
            if (rank(trial) == trial.cols()) acc = trial;
        }
        return acc.block(0, acc.rows(), k, acc.cols());
    }
    if (k == 0) return next;
    SmithForm s = smith_normal_form(x);
    if (static_cast<int>(s.diagonal.size()) != k) throw Error("SchemaError", lo + " has dependent generators");
    for (const mpz_class& f : s.diagonal)
        if (abs(f) != 1)
            throw Error("SplittingMissing",
                        lo + " is not a graded direct summand of " + hi + " (invariant factor " + f.get_str() + ")");
    SparseMatrix full = next * inverse(s.u);
    return full.block(0, full.rows(), k, n);
}

void fill_offsets(AdaptedFiltration& a, int top) {
    a.offsets.assign(top + 1, 0);
    for (int l = 1; l <= top; ++l)
        a.offsets[l] = static_cast<int>(std::upper_bound(a.level.begin(), a.level.end(), l) - a.level.begin());
}

AdaptedFiltration coordinate_adapt(const FilteredComplex& fc) {
    const ChainComplex& c = fc.complex;
    const int n = c.size();
    if (static_cast<int>(fc.level.size()) != n) throw Error("SchemaError", "one level per basis vector expected");
    for (int l : fc.level)
        if (l < 1) throw Error("SchemaError", "levels start at 1");
    std::vector<int> order = iota_vec(n);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return fc.level[x] < fc.level[y]; });
    AdaptedFiltration a;
    a.basis = SparseMatrix(c.ring, n, n);
    for (int j = 0; j < n; ++j) a.basis.set(order[j], j, Elem::one(c.ring));
    a.basis_inverse = a.basis.transpose();
    for (int j = 0; j < n; ++j) {
        a.level.push_back(fc.level[order[j]]);
        a.complex.degrees.push_back(c.degrees[order[j]]);
        if (!c.names.empty()) a.complex.names.push_back(c.names[order[j]]);
    }
    fill_offsets(a, n == 0 ? 1 : a.level.back());
    a.complex.ring = c.ring;
    a.complex.d = submatrix(c.d, order, order);
    return a;
}

AdaptedFiltration span_adapt(const FilteredComplex& fc) {
    const ChainComplex& c = fc.complex;
    const Ring& r = c.ring;
    const int n = c.size(), top = static_cast<int>(fc.spans.size());
    std::map<int, std::vector<int>> by_degree;
    for (int i = 0; i < n; ++i) by_degree[c.degrees[i]].push_back(i);
    struct Vec {
        int level, degree;
        Vector v;
    };
    std::vector<Vec> vectors;
    for (const auto& [deg, idx] : by_degree) {
        const int k = static_cast<int>(idx.size());
        SparseMatrix prev(r, k, 0);
        for (int lvl = 1; lvl <= top; ++lvl) {
            const SparseMatrix& g = fc.spans[lvl - 1];
            if (g.rows() != n)
                throw Error("DimensionMismatch", "generators of F_" + std::to_string(lvl) + " have the wrong length");
            std::vector<int> cols;
            for (int j = 0; j < g.cols(); ++j) {
                bool here = false, elsewhere = false;
                for (const auto& [i, v] : g.col(j)) (c.degrees[i] == deg ? here : elsewhere) = true;
                if (here && elsewhere) throw Error("SchemaError", "filtration generators must be homogeneous");
                if (here) cols.push_back(j);
            }
            SparseMatrix basis = cols.empty() ? SparseMatrix(r, k, 0) : span_basis(submatrix(g, idx, cols));
            SparseMatrix extra = complement(prev, basis, lvl);
            for (int j = 0; j < extra.cols(); ++j) {
                Vector v(n, Elem::zero(r));
                for (const auto& [i, x] : extra.col(j)) v[idx[i]] = x;
                vectors.push_back({lvl, deg, v});
            }
            SparseMatrix next(r, k, prev.cols() + extra.cols());
            next.set_block(0, 0, prev);
            next.set_block(0, prev.cols(), extra);
            prev = next;
        }
        if (prev.cols() != k) throw Error("SchemaError", "the last filtration level is not the whole complex");
    }
    std::stable_sort(vectors.begin(), vectors.end(), [](const Vec& x, const Vec& y) { return x.level < y.level; });
    AdaptedFiltration a;
    a.basis = SparseMatrix(r, n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i)
            if (!vectors[j].v[i].is_zero()) a.basis.set(i, j, vectors[j].v[i]);
        a.level.push_back(vectors[j].level);
        a.complex.degrees.push_back(vectors[j].degree);
    }
    try {
        a.basis_inverse = inverse(a.basis);
    } catch (const Error&) {
        throw Error("SchemaError", "the last filtration level is a proper sublattice of the complex");
    }
    fill_offsets(a, std::max(top, 1));
    a.complex.ring = r;
    a.complex.d = a.basis_inverse * c.d * a.basis;
    return a;
}

// Degree -1 solution of d h + h d = id, if any.
std::optional<SparseMatrix> solve_null_homotopy(const SparseMatrix& d, const std::vector<int>& deg) {
    const Ring& r = d.ring();
    const int n = d.rows();
    if (n == 0) return SparseMatrix(r, 0, 0);
    std::vector<std::pair<int, int>> unknowns;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (deg[i] == deg[j] - 1) unknowns.emplace_back(i, j);
    if (unknowns.empty()) return std::nullopt;
    // row i*n + j of the system is entry (i, j) of d h + h d
    SparseMatrix sys(r, n * n, static_cast<int>(unknowns.size()));
    const SparseMatrix dt = d.transpose();
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
        const auto [k, j] = unknowns[u];
        for (const auto& [i, v] : d.col(k)) sys.add(i * n + j, static_cast<int>(u), v);
        for (const auto& [jj, v] : dt.col(j)) sys.add(k * n + jj, static_cast<int>(u), v);
    }
    Vector rhs(n * n, Elem::zero(r));
    for (int i = 0; i < n; ++i) rhs[i * n + i] = Elem::one(r);
    auto sol = solve_exact(sys, rhs);
    if (!sol) return std::nullopt;
    SparseMatrix h(r, n, n);
    for (std::size_t u = 0; u < unknowns.size(); ++u)
        if (!(*sol)[u].is_zero()) h.set(unknowns[u].first, unknowns[u].second, (*sol)[u]);
    return h;
}

}  // namespace

AdaptedFiltration adapt_filtration(const FilteredComplex& fc) {
    fc.complex.validate();
    AdaptedFiltration a = fc.spans.empty() ? coordinate_adapt(fc) : span_adapt(fc);
    for (int j = 0; j < a.complex.size(); ++j)
        for (const auto& [i, v] : a.complex.d.col(j))
            if (a.level[i] > a.level[j])
                throw Error("SchemaError", "F_" + std::to_string(a.level[j]) + " is not a subcomplex");
    return a;
}

// ---------------------------------------------------------------- certificates

CertificateCheck verify_certificate(const ContractionCertificate& cert) {
    CertificateCheck out;
    auto fail = [&](const std::string& id, const std::string& detail) {
        out.ok = false;
        out.identity = id;
        out.detail = detail;
        return out;
    };
    const ChainComplex& R = cert.source;
    const ChainComplex& X = cert.target;
    const int nr = R.size(), nx = X.size();
    auto shaped = [](const SparseMatrix& m, int rows, int cols) { return m.rows() == rows && m.cols() == cols; };
    if (!shaped(R.d, nr, nr) || !shaped(X.d, nx, nx) || !shaped(cert.i, nx, nr) || !shaped(cert.p, nr, nx) ||
        !shaped(cert.h, nx, nx))
        return fail("shape", "map dimensions do not match the complexes");
    const Ring& ring = X.ring;
    for (const SparseMatrix* m : {&R.d, &X.d, &cert.i, &cert.p, &cert.h})
        if (m->ring() != ring || R.ring != ring) return fail("shape", "maps over different rings");
    if (!cert.filtration.empty() &&
        (cert.filtration.front() != nr || cert.filtration.back() != nx ||
         !std::is_sorted(cert.filtration.begin(), cert.filtration.end())))
        return fail("shape", "filtration dimensions do not match the complexes");

    if (!(R.d * R.d).is_zero()) return fail("d∘d = 0", "on the source");
    if (!(X.d * X.d).is_zero()) return fail("d∘d = 0", "on the target");

    std::string where;
    auto graded = [&](const SparseMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols, int shift) {
        for (const auto& [ij, v] : m.entries())
            if (rows[ij.first] != cols[ij.second] + shift) {
                where = "entry (" + std::to_string(ij.first) + ", " + std::to_string(ij.second) + ")";
                return false;
            }
        return true;
    };
    if (!graded(R.d, R.degrees, R.degrees, 1)) return fail("degree", "source differential " + where);
    if (!graded(X.d, X.degrees, X.degrees, 1)) return fail("degree", "target differential " + where);
    if (!graded(cert.i, X.degrees, R.degrees, 0)) return fail("degree", "i " + where);
    if (!graded(cert.p, R.degrees, X.degrees, 0)) return fail("degree", "p " + where);
    if (!graded(cert.h, X.degrees, X.degrees, -1)) return fail("degree", "h " + where);

    SparseMatrix di = X.d * cert.i - cert.i * R.d;
    if (!di.is_zero()) return fail("d∘i = i∘d", first_entry(di));
    SparseMatrix pd = cert.p * X.d - R.d * cert.p;
    if (!pd.is_zero()) return fail("p∘d = d∘p", first_entry(pd));
    SparseMatrix pi = cert.p * cert.i - SparseMatrix::identity(ring, nr);
    if (!pi.is_zero()) return fail("p∘i = id", first_entry(pi));
    SparseMatrix htp = SparseMatrix::identity(ring, nx) - cert.i * cert.p - X.d * cert.h - cert.h * X.d;
    if (!htp.is_zero()) return fail("id = i∘p + d∘h + h∘d", first_entry(htp));
    if (!cert.filtration.empty()) {
        SparseMatrix hi = cert.h * cert.i;
        if (!hi.is_zero()) return fail("h∘i = 0", first_entry(hi));
    }
    return out;
}

FilteredContraction filtered_contraction(const FilteredComplex& fc, const std::map<int, SparseMatrix>& gr_homotopies) {
    FilteredContraction out;
    out.adapted = adapt_filtration(fc);
    const AdaptedFiltration& a = out.adapted;
    const Ring& r = a.complex.ring;
    const SparseMatrix& D = a.complex.d;
    const int top = a.top(), dim = a.complex.size(), k1 = a.offsets[1];

    SparseMatrix p(r, k1, dim), h(r, dim, dim);
    p.set_block(0, 0, SparseMatrix::identity(r, k1));
    out.p_stages.push_back(p.block(0, k1, 0, k1));
    out.h_stages.push_back(h.block(0, k1, 0, k1));
    for (int n = 2; n <= top; ++n) {
        const int lo = a.offsets[n - 1], hi = a.offsets[n], len = hi - lo;
        const SparseMatrix e = D.block(0, lo, lo, hi);
        const SparseMatrix dn = D.block(lo, hi, lo, hi);
        const std::vector<int> deg(a.complex.degrees.begin() + lo, a.complex.degrees.begin() + hi);
        const std::string name = std::to_string(n);
        SparseMatrix hn;
        if (auto it = gr_homotopies.find(n); it != gr_homotopies.end()) {
            hn = it->second;
            if (hn.rows() != len || hn.cols() != len || hn.ring() != r)
                throw Error("BadGrHomotopy", "h_" + name + " has the wrong shape");
            for (const auto& [ij, v] : hn.entries())
                if (deg[ij.first] != deg[ij.second] - 1)
                    throw Error("BadGrHomotopy", "h_" + name + " does not have degree -1");
        } else {
            auto solved = solve_null_homotopy(dn, deg);
            if (!solved) throw Error("BadGrHomotopy", "gr_" + name + " is not null-homotopic");
            hn = *solved;
        }
        SparseMatrix residual = dn * hn + hn * dn - SparseMatrix::identity(r, len);
        if (!residual.is_zero())
            throw Error("BadGrHomotopy", "id != d_n∘h_n + h_n∘d_n on gr_" + name + ", " + first_entry(residual));
        const SparseMatrix minus_eh = (e * hn).scaled(-Elem::one(r));
        p.set_block(0, lo, p.block(0, k1, 0, lo) * minus_eh);
        h.set_block(0, lo, h.block(0, lo, 0, lo) * minus_eh);
        h.set_block(lo, lo, hn);
        out.p_stages.push_back(p.block(0, k1, 0, hi));
        out.h_stages.push_back(h.block(0, hi, 0, hi));
    }

    ContractionCertificate& cert = out.certificate;
    cert.target = fc.complex;
    cert.source.ring = r;
    cert.source.degrees.assign(a.complex.degrees.begin(), a.complex.degrees.begin() + k1);
    if (!a.complex.names.empty()) cert.source.names.assign(a.complex.names.begin(), a.complex.names.begin() + k1);
    cert.source.d = D.block(0, k1, 0, k1);
    cert.i = a.basis.block(0, dim, 0, k1);
    cert.p = p * a.basis_inverse;
    cert.h = a.basis * h * a.basis_inverse;
    cert.filtration.assign(a.offsets.begin() + 1, a.offsets.end());
    CertificateCheck check = verify_certificate(cert);
    if (!check.ok) throw Error("InternalError", "assembled certificate fails " + check.identity + ": " + check.detail);
    return out;
}

// ---------------------------------------------------------------- cobar complexes

CobarComplex make_cobar_complex(const Cobar& cobar, std::vector<CobarWord> basis, bool graded_only) {
    CobarComplex out;
    out.basis = std::move(basis);
    ChainComplex& c = out.complex;
    c.ring = cobar.ring();
    std::vector<CobarChain> images;
    for (std::size_t i = 0; i < out.basis.size(); ++i) {
        const CobarWord& w = out.basis[i];
        out.index[w] = static_cast<int>(i);
        c.degrees.push_back(cobar.degree(w));
        c.names.push_back(cobar.name(w));
        images.push_back(cobar.differential(w, graded_only));
    }
    c.d = chain_matrix(c.ring, out.basis, images);
    return out;
}

CobarComplex cobar_complex(const Cobar& cobar, const std::vector<int>& src, const std::vector<int>& tgt,
                           int max_letters, bool graded_only) {
    return make_cobar_complex(cobar, cobar.basis_up_to(src, tgt, letter_bound(cobar, max_letters)), graded_only);
}

CobarChain contraction_r(const Cobar& cobar, const CobarWord& c) {
    const int l = static_cast<int>(c.factors.size());
    int t = -1;
    for (int k = l - 1; k >= 0 && t < 0; --k)
        if (!c.factors[k].parts[0].empty()) t = k;
    if (t < 0) throw Error("OutOfScopeBidegree", "r needs a letter of the first variable in " + cobar.name(c));
    CobarChain out;
    const Factor& ft = c.factors[t];
    if (ft.parts[0].size() != 1 || (cobar.variables() == 2 && !ft.parts[1].empty())) return out;
    int s = 0;
    for (int k = t - 1; k >= 0 && s == 0; --k)
        if (!c.factors[k].parts[0].empty()) s = k;
    const int f = ft.parts[0][0];
    const long deg_f = cobar.var(0).quiver.letter(f).deg;
    long left = 0;
    for (int i = t + 1; i < l; ++i) left += cobar.factor_degree(c.factors[i]);
    for (int k = s; k < t; ++k) {
        long between = 0;
        for (int i = k + 1; i < t; ++i) between += cobar.factor_degree(c.factors[i]);
        CobarWord w = c;
        w.factors[k].parts[0].push_back(f);
        w.factors.erase(w.factors.begin() + t);
        out.add(w, sign_elem(cobar.ring(), left + (deg_f + 1) * between + deg_f));
    }
    return out;
}

CobarChain swap_variables(const Cobar& from, const Cobar& to, const CobarWord& c) {
    if (from.variables() != 2 || to.variables() != 2) throw Error("SchemaError", "the swap needs two variables");
    CobarWord w{{c.source[1], c.source[0]}, {}};
    long e = 0;
    for (const Factor& f : c.factors) {
        w.factors.push_back(Factor{{f.parts[1], f.parts[0]}});
        e += shifted_degree(from.var(0).quiver, f.parts[0]) * shifted_degree(from.var(1).quiver, f.parts[1]);
    }
    CobarChain out;
    out.add(w, sign_elem(from.ring(), e));
    return out;
}

namespace {

struct Pro11Term {
    int f, g;
    long sign;
};

// The nonzero term of pro11 on a V_{1,1} word, if any.
std::optional<Pro11Term> pro11_term(const Cobar& cobar, const CobarWord& c) {
    if (cobar.variables() != 2) throw Error("SchemaError", "pro11 needs two variables");
    const auto n = cobar.letters(c);
    if (n[0] != 1 || n[1] != 1) throw Error("OutOfScopeBidegree", "pro11 is defined on V_{1,1}");
    if (c.factors.size() != 2) return std::nullopt;
    const Factor& left = c.factors[1];
    const Factor& right = c.factors[0];
    if (!left.parts[0].empty()) return Pro11Term{left.parts[0][0], right.parts[1][0], 0};
    const int f = right.parts[0][0], g = left.parts[1][0];
    return Pro11Term{f, g, static_cast<long>(cobar.var(0).quiver.letter(f).deg) * cobar.var(1).quiver.letter(g).deg};
}

}  // namespace

CobarChain inc11(const Cobar& cobar, int f, int g) {
    if (cobar.variables() != 2) throw Error("SchemaError", "inc11 needs two variables");
    const Letter& lf = cobar.var(0).quiver.letter(f);
    const Letter& lg = cobar.var(1).quiver.letter(g);
    CobarWord w{{lf.src, lg.src}, {Factor{{{f}, {}}}, Factor{{{}, {g}}}}};
    CobarChain out;
    out.add(w, sign_elem(cobar.ring(), static_cast<long>(lf.deg) * lg.deg));
    return out;
}

CobarChain xi(const Cobar& cobar, const CobarWord& c) {
    CobarChain out;
    const auto n = cobar.letters(c);
    if (cobar.variables() == 1) {
        if (n[0] == 1) out.add(c, Elem::one(cobar.ring()));
        return out;
    }
    if (n[0] + n[1] == 1) {
        out.add(c, Elem::one(cobar.ring()));
    } else if (n[0] == 1 && n[1] == 1) {
        if (auto t = pro11_term(cobar, c)) out.add(inc11(cobar, t->f, t->g), sign_elem(cobar.ring(), t->sign));
    }
    return out;
}

PieceHomotopy::PieceHomotopy(const Cobar& cobar) : cobar_(cobar) {
    if (cobar.variables() == 2)
        swapped_ = std::make_unique<Cobar>(std::vector<StructurePtr>{cobar.var_ptr(1), cobar.var_ptr(0)});
}

CobarChain PieceHomotopy::operator()(const CobarWord& c) const {
    if (!swapped_) return contraction_r(cobar_, c);
    const auto n = cobar_.letters(c);
    if (n[0] > 1 || (n[0] == 1 && n[1] <= 1)) return contraction_r(cobar_, c);
    CobarChain out;
    for (const auto& [w, cw] : swap_variables(cobar_, *swapped_, c))
        for (const auto& [u, cu] : contraction_r(*swapped_, w)) out.add(swap_variables(*swapped_, cobar_, u), cw * cu);
    return out;
}

// ---------------------------------------------------------------- the reduced tensor product

RedTensor::RedTensor(const Cobar& cobar) : cobar_(cobar) {
    if (cobar.variables() != 2) throw Error("SchemaError", "the reduced tensor product needs two variables");
    ma_ = cobar.var(0).unshifted();
    mb_ = cobar.var(1).unshifted();
}

std::vector<RedLetter> RedTensor::basis(const std::vector<int>& src, const std::vector<int>& tgt) const {
    const auto& ha = cobar_.var(0).quiver.hom(src[0], tgt[0]);
    const auto& hb = cobar_.var(1).quiver.hom(src[1], tgt[1]);
    std::vector<RedLetter> out;
    if (src[1] == tgt[1])
        for (int a : ha) out.push_back({a, -1});
    if (src[0] == tgt[0])
        for (int b : hb) out.push_back({-1, b});
    for (int a : ha)
        for (int b : hb) out.push_back({a, b});
    return out;
}

int RedTensor::degree(const RedLetter& x) const {
    int d = 0;
    if (x.a >= 0) d += cobar_.var(0).quiver.letter(x.a).deg;
    if (x.b >= 0) d += cobar_.var(1).quiver.letter(x.b).deg;
    return d;
}

RedChain RedTensor::differential(const RedLetter& x) const {
    RedChain out;
    if (x.a >= 0)
        if (auto it = ma_.find({x.a}); it != ma_.end())
            for (const auto& [a, c] : it->second) out.add(RedLetter{a, x.b}, c);
    if (x.b >= 0)
        if (auto it = mb_.find({x.b}); it != mb_.end()) {
            const int s = parity_sign(x.a >= 0 ? cobar_.var(0).quiver.letter(x.a).deg : 0);
            for (const auto& [b, c] : it->second) out.add(RedLetter{x.a, b}, c.signed_by(s));
        }
    return out;
}

RedChain RedTensor::compose(const RedChain& x, const RedChain& y) const {
    const Ring& r = cobar_.ring();
    // left ∘ right in one variable, -1 standing for the adjoined unit
    auto product = [&](const OpTable& m, int left, int right) {
        Lin<int> out;
        if (left < 0) {
            out.add(right, Elem::one(r));
        } else if (right < 0) {
            out.add(left, Elem::one(r));
        } else if (auto it = m.find({right, left}); it != m.end()) {
            out = it->second;
        }
        return out;
    };
    RedChain out;
    for (const auto& [u, cu] : x)
        for (const auto& [v, cv] : y) {
            const long db = u.b >= 0 ? cobar_.var(1).quiver.letter(u.b).deg : 0;
            const long da = v.a >= 0 ? cobar_.var(0).quiver.letter(v.a).deg : 0;
            const Elem c = (cu * cv).signed_by(parity_sign(db * da));
            const Lin<int> pa = product(ma_, u.a, v.a);
            const Lin<int> pb = product(mb_, u.b, v.b);
            for (const auto& [a, ca] : pa)
                for (const auto& [b, cb] : pb) out.add(RedLetter{a, b}, c * ca * cb);
        }
    return out;
}

ChainComplex RedTensor::complex(const std::vector<RedLetter>& basis) const {
    ChainComplex c;
    c.ring = cobar_.ring();
    std::map<RedLetter, int> index;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        index[basis[i]] = static_cast<int>(i);
        c.degrees.push_back(degree(basis[i]));
        std::string name = basis[i].a >= 0 ? cobar_.var(0).quiver.letter(basis[i].a).name : "1";
        name += "⊗";
        name += basis[i].b >= 0 ? cobar_.var(1).quiver.letter(basis[i].b).name : "1";
        c.names.push_back(name);
    }
    const int n = static_cast<int>(basis.size());
    c.d = SparseMatrix(c.ring, n, n);
    for (int j = 0; j < n; ++j)
        for (const auto& [y, v] : differential(basis[j])) {
            auto it = index.find(y);
            if (it == index.end()) throw Error("InternalError", "differential leaves the reduced tensor basis");
            c.d.add(it->second, j, v);
        }
    return c;
}

RedChain RedTensor::functor_N(const CobarWord& c) const {
    auto on_factor = [&](const Factor& f) {
        RedChain x;
        const Word& a = f.parts[0];
        const Word& b = f.parts[1];
        if (a.size() == 1 && b.empty()) x.add(RedLetter{a[0], -1}, Elem::one(cobar_.ring()));
        if (a.empty() && b.size() == 1) x.add(RedLetter{-1, b[0]}, Elem::one(cobar_.ring()));
        return x;
    };
    RedChain acc = on_factor(c.factors.back());
    for (int k = static_cast<int>(c.factors.size()) - 2; k >= 0 && !acc.empty(); --k)
        acc = compose(acc, on_factor(c.factors[k]));
    return acc;
}

RedChain RedTensor::pro11(const CobarWord& c) const {
    RedChain out;
    if (auto t = pro11_term(cobar_, c)) out.add(RedLetter{t->f, t->g}, sign_elem(cobar_.ring(), t->sign));
    return out;
}

CobarChain ab_map(const Cobar& cobar, const RedLetter& x, const std::vector<int>& src) {
    if (x.a >= 0 && x.b >= 0) return inc11(cobar, x.a, x.b);
    CobarChain out;
    if (x.a >= 0)
        out.add(CobarWord{src, {Factor{{{x.a}, {}}}}}, Elem::one(cobar.ring()));
    else if (x.b >= 0)
        out.add(CobarWord{src, {Factor{{{}, {x.b}}}}}, Elem::one(cobar.ring()));
    else
        throw Error("SchemaError", "1 ⊗ 1 is not in the reduced tensor product");
    return out;
}

namespace {

std::vector<std::vector<int>> object_pairs(const Cobar& cobar) {
    std::vector<std::vector<int>> out;
    for (int a = 0; a < cobar.var(0).quiver.num_objects(); ++a)
        for (int b = 0; b < cobar.var(1).quiver.num_objects(); ++b) out.push_back({a, b});
    return out;
}

// The single-letter piece V_{1,0} or V_{0,1} as a reduced tensor letter.
RedLetter single_letter(const CobarWord& c) {
    const Factor& f = c.factors[0];
    return RedLetter{f.parts[0].empty() ? -1 : f.parts[0][0], f.parts[1].empty() ? -1 : f.parts[1][0]};
}

}  // namespace

NCheck functor_N_check(const Cobar& cobar, int max_letters) {
    RedTensor red(cobar);
    if (!cobar.var(0).is_dg() || !cobar.var(1).is_dg()) throw Error("SchemaError", "functor N needs dg categories");
    NCheck out;
    for (const auto& src : object_pairs(cobar))
        for (const auto& tgt : object_pairs(cobar))
            for (const CobarWord& c : cobar.basis_up_to(src, tgt, max_letters)) {
                ++out.words_checked;
                const auto n = cobar.letters(c);
                const RedChain n_c = red.functor_N(c);
                if (n[0] <= 1 && n[1] <= 1) {
                    RedChain expected;
                    if (n[0] == 1 && n[1] == 1)
                        expected = red.pro11(c);
                    else
                        expected.add(single_letter(c), Elem::one(cobar.ring()));
                    if (n_c != expected) {
                        out.ok = false;
                        out.failure = "restriction differs on " + cobar.name(c);
                        return out;
                    }
                }
                RedChain lhs, rhs;
                for (const auto& [w, cw] : cobar.differential(c)) lhs.add(red.functor_N(w), cw);
                for (const auto& [x, cx] : n_c) rhs.add(red.differential(x), cx);
                if (lhs != rhs) {
                    out.ok = false;
                    out.failure = "N∘d != d∘N on " + cobar.name(c);
                    return out;
                }
            }
    return out;
}

namespace {

using WordMap = std::function<CobarChain(const CobarWord&)>;

int ab_level(const std::vector<int>& n) {
    if (n[1] == 0) return n[0];
    if (n[0] == 0) return n[1];
    return n[0] + n[1] - 1;
}

std::map<CobarWord, int> index_of(const std::vector<CobarWord>& words) {
    std::map<CobarWord, int> out;
    for (std::size_t i = 0; i < words.size(); ++i) out[words[i]] = static_cast<int>(i);
    return out;
}

// Gr homotopies per level from a word map, in the adapted order of a coordinate filtration. Terms
// leaving the level are dropped, which is the passage to gr_n.
std::map<int, SparseMatrix> gr_homotopies_from(const Ring& r, const std::vector<CobarWord>& basis,
                                               const std::vector<int>& level, const WordMap& h) {
    std::map<int, std::vector<CobarWord>> by_level;
    for (std::size_t i = 0; i < basis.size(); ++i) by_level[level[i]].push_back(basis[i]);
    std::map<int, SparseMatrix> out;
    for (const auto& [n, words] : by_level) {
        if (n < 2) continue;
        const auto index = index_of(words);
        const int len = static_cast<int>(words.size());
        SparseMatrix m(r, len, len);
        for (int j = 0; j < len; ++j)
            for (const auto& [w, c] : h(words[j]))
                if (auto it = index.find(w); it != index.end()) m.add(it->second, j, c);
        out[n] = m;
    }
    return out;
}

void check_or_throw(const ContractionCertificate& cert) {
    CertificateCheck check = verify_certificate(cert);
    if (!check.ok) throw Error("InternalError", "certificate fails " + check.identity + ": " + check.detail);
}

std::vector<CobarWord> first_level(const std::vector<CobarWord>& basis, const std::vector<int>& level) {
    std::vector<CobarWord> out;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (level[i] == 1) out.push_back(basis[i]);
    return out;
}

}  // namespace

ContractionCertificate ab_certificate(const Cobar& cobar, const std::vector<int>& src, const std::vector<int>& tgt,
                                      int max_letters) {
    RedTensor red(cobar);
    const Ring& r = cobar.ring();
    CobarComplex x = cobar_complex(cobar, src, tgt, max_letters);
    FilteredComplex fc{x.complex, {}, {}};
    for (const CobarWord& c : x.basis) fc.level.push_back(ab_level(cobar.letters(c)));
    PieceHomotopy piece(cobar);
    const WordMap piece_map = [&](const CobarWord& c) { return piece(c); };
    FilteredContraction fcon = filtered_contraction(fc, gr_homotopies_from(r, x.basis, fc.level, piece_map));

    const std::vector<CobarWord> f1 = first_level(x.basis, fc.level);
    const auto f1_index = index_of(f1);
    const int k1 = static_cast<int>(f1.size());
    const std::vector<RedLetter> rb = red.basis(src, tgt);
    std::map<RedLetter, int> rb_index;
    for (std::size_t i = 0; i < rb.size(); ++i) rb_index[rb[i]] = static_cast<int>(i);

    SparseMatrix inc(r, k1, static_cast<int>(rb.size()));
    for (std::size_t j = 0; j < rb.size(); ++j)
        for (const auto& [w, c] : ab_map(cobar, rb[j], src)) inc.add(f1_index.at(w), static_cast<int>(j), c);
    SparseMatrix pro(r, static_cast<int>(rb.size()), k1);
    SparseMatrix r11(r, k1, k1);
    for (int j = 0; j < k1; ++j) {
        const auto n = cobar.letters(f1[j]);
        if (n[0] == 1 && n[1] == 1) {
            for (const auto& [y, c] : red.pro11(f1[j])) pro.add(rb_index.at(y), j, c);
            for (const auto& [w, c] : piece(f1[j])) r11.add(f1_index.at(w), j, c);
        } else {
            pro.add(rb_index.at(single_letter(f1[j])), j, Elem::one(r));
        }
    }

    const ContractionCertificate& base = fcon.certificate;
    ContractionCertificate cert;
    cert.source = red.complex(rb);
    cert.target = x.complex;
    cert.i = base.i * inc;
    cert.p = pro * base.p;
    cert.h = base.h + base.i * r11 * base.p;
    cert.window = {{"max_letters", letter_bound(cobar, max_letters)},
                   {"src_a", src[0]},
                   {"src_b", src[1]},
                   {"tgt_a", tgt[0]},
                   {"tgt_b", tgt[1]}};
    check_or_throw(cert);
    return cert;
}

// ---------------------------------------------------------------- η certificates

namespace {

// A(src, tgt) with its unshifted m1; letters receives the basis order.
ChainComplex hom_complex(const Structure& a, int src, int tgt, std::vector<int>* letters) {
    *letters = a.quiver.hom(src, tgt);
    const std::vector<int>& hom = *letters;
    std::map<int, int> index;
    ChainComplex c;
    c.ring = a.ring;
    for (std::size_t i = 0; i < hom.size(); ++i) {
        index[hom[i]] = static_cast<int>(i);
        c.degrees.push_back(a.quiver.letter(hom[i]).deg);
        c.names.push_back(a.quiver.letter(hom[i]).name);
    }
    const int n = static_cast<int>(hom.size());
    c.d = SparseMatrix(a.ring, n, n);
    const OpTable m = a.unshifted();
    for (int j = 0; j < n; ++j)
        if (auto it = m.find({hom[j]}); it != m.end())
            for (const auto& [l, v] : it->second) c.d.add(index.at(l), j, v);
    return c;
}

// A contraction onto F_1 recast as one onto R through an isomorphism e : R -> F_1.
ContractionCertificate through_iso(const ContractionCertificate& base, ChainComplex r, const SparseMatrix& e) {
    ContractionCertificate cert;
    cert.source = std::move(r);
    cert.target = base.target;
    cert.i = base.i * e;
    cert.p = inverse(e) * base.p;
    cert.h = base.h;
    cert.filtration = base.filtration;
    return cert;
}

}  // namespace

ContractionCertificate eta_certificate(const StructurePtr& a, int src, int tgt, int max_letters) {
    Cobar cobar({a});
    const Ring& r = a->ring;
    CobarComplex x = cobar_complex(cobar, {src}, {tgt}, max_letters);
    FilteredComplex fc{x.complex, {}, {}};
    for (const CobarWord& c : x.basis) fc.level.push_back(cobar.total_letters(c));
    const WordMap r_map = [&](const CobarWord& c) { return contraction_r(cobar, c); };
    FilteredContraction fcon = filtered_contraction(fc, gr_homotopies_from(r, x.basis, fc.level, r_map));

    std::vector<int> letters;
    ChainComplex hom = hom_complex(*a, src, tgt, &letters);
    const auto f1_index = index_of(first_level(x.basis, fc.level));
    SparseMatrix e(r, static_cast<int>(f1_index.size()), static_cast<int>(letters.size()));
    for (std::size_t j = 0; j < letters.size(); ++j)
        e.add(f1_index.at(cobar.single({letters[j]})), static_cast<int>(j), Elem::one(r));

    ContractionCertificate cert = through_iso(fcon.certificate, std::move(hom), e);
    cert.window = {{"max_letters", letter_bound(cobar, max_letters)}, {"src", src}, {"tgt", tgt}};
    check_or_throw(cert);
    return cert;
}

ContractionCertificate quotient_certificate(const StrictQuotient& q, int src, int tgt) {
    const Cobar& cobar = q.cobar();
    const Ring& r = cobar.ring();
    const std::vector<CobarWord>& basis = q.normal_forms(src, tgt);
    FilteredComplex fc;
    ChainComplex& c = fc.complex;
    c.ring = r;
    std::vector<CobarChain> images;
    for (const CobarWord& w : basis) {
        c.degrees.push_back(cobar.degree(w));
        c.names.push_back(cobar.name(w));
        images.push_back(q.differential(w));
        fc.level.push_back(cobar.total_letters(w));
    }
    c.d = chain_matrix(r, basis, images);
    const WordMap r_map = [&](const CobarWord& w) { return q.reduce(contraction_r(cobar, w)); };
    FilteredContraction fcon = filtered_contraction(fc, gr_homotopies_from(r, basis, fc.level, r_map));

    std::vector<int> letters;
    ChainComplex hom = hom_complex(cobar.var(0), src, tgt, &letters);
    const auto f1_index = index_of(first_level(basis, fc.level));
    SparseMatrix e(r, static_cast<int>(f1_index.size()), static_cast<int>(letters.size()));
    for (std::size_t j = 0; j < letters.size(); ++j)
        for (const auto& [w, cw] : q.reduce(cobar.single({letters[j]}))) e.add(f1_index.at(w), static_cast<int>(j), cw);

    ContractionCertificate cert = through_iso(fcon.certificate, std::move(hom), e);
    cert.window = {{"max_letters", q.max_letters()}, {"src", src}, {"tgt", tgt}};
    check_or_throw(cert);
    return cert;
}

}  // namespace ainfty
