#include "ainfty/ainfty.hpp"

#include <algorithm>
#include <set>

namespace ainfty {

namespace {

const Lin<int>* find_op(const OpTable& t, const Word& w) {
    auto it = t.find(w);
    return it == t.end() ? nullptr : &it->second;
}

// m2(x ⊗ y) with x on the left, for combinations of letters.
Lin<int> m2(const OpTable& m, const Lin<int>& x, const Lin<int>& y) {
    Lin<int> out;
    for (const auto& [lx, cx] : x)
        for (const auto& [ly, cy] : y)
            if (const Lin<int>* r = find_op(m, {ly, lx})) out.add(*r, cx * cy);
    return out;
}

Lin<int> m1(const OpTable& m, const Lin<int>& x) {
    Lin<int> out;
    for (const auto& [l, c] : x)
        if (const Lin<int>* r = find_op(m, {l})) out.add(*r, c);
    return out;
}

Lin<int> single(const Ring& r, int l) {
    Lin<int> x;
    x.add(l, Elem::one(r));
    return x;
}

// Letters of one hom module grouped by degree.
struct HomComplex {
    std::vector<int> letters;
    std::map<int, std::vector<int>> by_degree;

    HomComplex(const Quiver& q, int a, int b) : letters(q.hom(a, b)) {
        for (int l : letters) by_degree[q.letter(l).deg].push_back(l);
    }
    const std::vector<int>& degree(int d) const {
        static const std::vector<int> empty;
        auto it = by_degree.find(d);
        return it == by_degree.end() ? empty : it->second;
    }
};

// Matrix of m1 from degree d to degree d + 1 of a hom complex.
SparseMatrix differential(const Ring& r, const OpTable& m, const HomComplex& h, int d) {
    const auto &src = h.degree(d), &tgt = h.degree(d + 1);
    SparseMatrix out(r, static_cast<int>(tgt.size()), static_cast<int>(src.size()));
    for (std::size_t j = 0; j < src.size(); ++j)
        if (const Lin<int>* img = find_op(m, {src[j]}))
            for (const auto& [y, c] : *img) {
                auto it = std::find(tgt.begin(), tgt.end(), y);
                if (it != tgt.end()) out.set(static_cast<int>(it - tgt.begin()), static_cast<int>(j), c);
            }
    return out;
}

Lin<int> to_lin(const std::vector<int>& basis, const Vector& v) {
    Lin<int> out;
    for (std::size_t i = 0; i < basis.size(); ++i) out.add(basis[i], v[i]);
    return out;
}

Vector to_vec(const Ring& r, const std::vector<int>& basis, const Lin<int>& x) {
    Vector v(basis.size(), Elem::zero(r));
    for (std::size_t i = 0; i < basis.size(); ++i) v[i] = x.coeff(basis[i], r);
    return v;
}

// Cycles of a hom complex, all degrees, as a list of combinations.
std::vector<Lin<int>> cycles(const Ring& r, const OpTable& m, const HomComplex& h) {
    std::vector<Lin<int>> out;
    for (const auto& [d, ls] : h.by_degree) {
        SparseMatrix dm = differential(r, m, h, d);
        if (dm.rows() == 0) {
            for (int l : ls) out.push_back(single(r, l));
            continue;
        }
        for (const auto& v : rank_kernel(dm).kernel) out.push_back(to_lin(ls, v));
    }
    return out;
}

// Index of unknowns in a linear system assembled from named blocks.
struct Unknowns {
    std::map<std::pair<int, int>, int> index;  // (block, letter) -> column
    int add(int block, int letter) {
        auto [it, fresh] = index.emplace(std::make_pair(block, letter), static_cast<int>(index.size()));
        return it->second;
    }
    int size() const { return static_cast<int>(index.size()); }
};

struct Rows {
    std::vector<std::map<int, Elem>> lhs;
    Vector rhs;
    std::map<std::pair<int, int>, int> index;  // (equation block, output letter) -> row

    int row(int block, int letter, const Ring& r) {
        auto [it, fresh] = index.emplace(std::make_pair(block, letter), static_cast<int>(lhs.size()));
        if (fresh) {
            lhs.emplace_back();
            rhs.push_back(Elem::zero(r));
        }
        return it->second;
    }
    void add(int row, int col, const Elem& c) {
        auto [it, fresh] = lhs[row].emplace(col, c);
        if (!fresh) it->second += c;
    }
    std::optional<Vector> solve(const Ring& r, int cols) const {
        SparseMatrix m(r, static_cast<int>(lhs.size()), cols);
        for (std::size_t i = 0; i < lhs.size(); ++i)
            for (const auto& [j, c] : lhs[i])
                if (!c.is_zero()) m.set(static_cast<int>(i), j, c);
        if (cols == 0) {
            for (const auto& c : rhs)
                if (!c.is_zero()) return std::nullopt;
            return Vector{};
        }
        return solve_exact(m, rhs);
    }
};

}  // namespace

// ---------------------------------------------------------------- cohomology

GradedCategory cohomology(const Structure& a, int d_min, int d_max) {
    if (!a.ring.is_field()) throw Error("UnsupportedRing", "cohomology needs field coefficients");
    const Ring r = a.ring;
    const Quiver& q = a.quiver;
    const OpTable m = a.unshifted();
    const int no = q.num_objects();
    GradedCategory h;
    h.ring = r;
    h.objects = q.objects();

    struct Piece {
        std::vector<int> letters;          // chain basis in degree d
        SparseMatrix solver;               // [reps | boundaries]
        int reps = 0;
        std::vector<int> classes;          // class indices in the hom module
    };
    std::map<std::tuple<int, int, int>, Piece> pieces;  // (A, A', d)
    std::map<std::pair<int, int>, std::vector<int>> class_degree;

    for (int x = 0; x < no; ++x)
        for (int y = 0; y < no; ++y) {
            HomComplex hc(q, x, y);
            GradedModule mod;
            std::vector<Lin<int>> reps;
            for (int d = d_min; d <= d_max; ++d) {
                Piece pc;
                pc.letters = hc.degree(d);
                const int dim = static_cast<int>(pc.letters.size());
                std::vector<Vector> bounds;
                SparseMatrix prev = differential(r, m, hc, d - 1);
                for (int j = 0; j < prev.cols(); ++j) {
                    Vector v(dim, Elem::zero(r));
                    for (const auto& [i, c] : prev.col(j)) v[i] = c;
                    bounds.push_back(v);
                }
                std::vector<Vector> kernel;
                SparseMatrix dm = differential(r, m, hc, d);
                if (dm.rows() == 0) {
                    for (int i = 0; i < dim; ++i) {
                        Vector v(dim, Elem::zero(r));
                        v[i] = Elem::one(r);
                        kernel.push_back(v);
                    }
                } else {
                    kernel = rank_kernel(dm).kernel;
                }
                auto build = [&](const std::vector<Vector>& cols) {
                    SparseMatrix s(r, dim, static_cast<int>(cols.size()));
                    for (std::size_t j = 0; j < cols.size(); ++j)
                        for (int i = 0; i < dim; ++i)
                            if (!cols[j][i].is_zero()) s.set(i, static_cast<int>(j), cols[j][i]);
                    return s;
                };
                std::vector<Vector> chosen;
                int base = rank(build(bounds));
                for (const auto& k : kernel) {
                    std::vector<Vector> trial = chosen;
                    trial.push_back(k);
                    trial.insert(trial.end(), bounds.begin(), bounds.end());
                    if (rank(build(trial)) > base + static_cast<int>(chosen.size())) chosen.push_back(k);
                }
                std::vector<Vector> all = chosen;
                all.insert(all.end(), bounds.begin(), bounds.end());
                pc.solver = build(all);
                pc.reps = static_cast<int>(chosen.size());
                for (const auto& v : chosen) {
                    Lin<int> rep = to_lin(pc.letters, v);
                    std::string name;
                    if (rep.size() == 1 && rep.begin()->second.is_one())
                        name = "[" + q.letter(rep.begin()->first).name + "]";
                    else
                        name = "[z" + std::to_string(d) + "." + std::to_string(mod.size()) + "]";
                    pc.classes.push_back(mod.size());
                    mod.basis.push_back({name, d});
                    reps.push_back(rep);
                }
                pieces.emplace(std::make_tuple(x, y, d), std::move(pc));
            }
            h.hom[{x, y}] = mod;
            h.representatives[{x, y}] = reps;
        }

    // Coordinates of a cycle in the class basis; nullopt outside the window.
    auto classify = [&](int x, int y, int d, const Lin<int>& z) -> std::optional<Lin<int>> {
        auto it = pieces.find({x, y, d});
        if (it == pieces.end()) return std::nullopt;
        const Piece& pc = it->second;
        Lin<int> out;
        if (z.empty()) return out;
        if (pc.solver.cols() == 0) throw Error("InternalError", "nonzero cycle in a zero complex");
        auto sol = solve_linear(pc.solver, to_vec(r, pc.letters, z));
        if (!sol) throw Error("InternalError", "composite of cycles is not a cycle");
        for (int i = 0; i < pc.reps; ++i) out.add(pc.classes[i], (*sol)[i]);
        return out;
    };

    for (int x = 0; x < no; ++x)
        for (int y = 0; y < no; ++y)
            for (int z = 0; z < no; ++z) {
                const auto &left = h.representatives[{y, z}], &right = h.representatives[{x, y}];
                for (std::size_t i = 0; i < left.size(); ++i)
                    for (std::size_t j = 0; j < right.size(); ++j) {
                        int d = h.hom[{y, z}].degree(static_cast<int>(i)) + h.hom[{x, y}].degree(static_cast<int>(j));
                        auto c = classify(x, z, d, m2(m, left[i], right[j]));
                        if (c) h.composition[{x, y, z, static_cast<int>(i), static_cast<int>(j)}] = *c;
                    }
            }

    auto compose = [&](int x, int y, int z, const Lin<int>& u, const Lin<int>& v) -> std::optional<Lin<int>> {
        Lin<int> out;
        for (const auto& [i, cu] : u)
            for (const auto& [j, cv] : v) {
                auto it = h.composition.find({x, y, z, i, j});
                if (it == h.composition.end()) return std::nullopt;
                out.add(it->second, cu * cv);
            }
        return out;
    };
    auto cls = [&](int i) { return single(r, i); };
    for (int w = 0; w < no && h.associative; ++w)
        for (int x = 0; x < no && h.associative; ++x)
            for (int y = 0; y < no && h.associative; ++y)
                for (int z = 0; z < no && h.associative; ++z) {
                    int nk = h.hom[{y, z}].size(), ni = h.hom[{x, y}].size(), nj = h.hom[{w, x}].size();
                    for (int k = 0; k < nk; ++k)
                        for (int i = 0; i < ni; ++i)
                            for (int j = 0; j < nj; ++j) {
                                auto ki = compose(x, y, z, cls(k), cls(i));
                                auto ij = compose(w, x, y, cls(i), cls(j));
                                if (!ki || !ij) continue;
                                auto l = compose(w, x, z, *ki, cls(j));
                                auto rr = compose(w, y, z, cls(k), *ij);
                                if (l && rr && *l != *rr) h.associative = false;
                            }
                }

    if (d_min <= 0 && 0 <= d_max)
        for (int x = 0; x < no; ++x) {
            std::vector<int> units;
            for (int i = 0; i < h.hom[{x, x}].size(); ++i)
                if (h.hom[{x, x}].degree(i) == 0) units.push_back(i);
            Rows rows;
            int block = 0;
            bool undetermined = false;
            for (int y = 0; y < no; ++y) {
                for (int side = 0; side < 2; ++side, ++block) {
                    const GradedModule& mod = side == 0 ? h.hom[{x, y}] : h.hom[{y, x}];
                    for (int f = 0; f < mod.size(); ++f) {
                        for (std::size_t u = 0; u < units.size(); ++u) {
                            auto c = side == 0 ? compose(x, x, y, cls(f), cls(units[u]))
                                               : compose(y, x, x, cls(units[u]), cls(f));
                            if (!c) {
                                undetermined = true;
                                continue;
                            }
                            for (const auto& [g, e] : *c)
                                rows.add(rows.row(block * 100000 + f, g, r), static_cast<int>(u), e);
                        }
                        int rw = rows.row(block * 100000 + f, f, r);
                        rows.rhs[rw] += Elem::one(r);
                    }
                }
            }
            if (undetermined) continue;
            auto sol = rows.solve(r, static_cast<int>(units.size()));
            if (!sol) continue;
            Lin<int> id;
            for (std::size_t u = 0; u < units.size(); ++u) id.add(units[u], (*sol)[u]);
            h.identities[x] = id;
        }
    return h;
}

// ---------------------------------------------------------------- units

std::map<int, Lin<int>> declared_units(const Structure& a) {
    std::map<int, Lin<int>> out;
    for (const auto& [o, l] : a.units) out[o] = single(a.ring, l);
    return out;
}

bool check_strict_units(const Structure& a, const std::map<int, Lin<int>>& units, std::string* why) {
    const Quiver& q = a.quiver;
    const OpTable m = a.unshifted();
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    for (int o = 0; o < q.num_objects(); ++o) {
        auto it = units.find(o);
        if (it == units.end()) return fail("no unit for object " + q.object_name(o));
        for (const auto& [l, c] : it->second)
            if (q.letter(l).src != o || q.letter(l).tgt != o || q.letter(l).deg != 0)
                return fail("unit of " + q.object_name(o) + " is not a degree-0 endomorphism");
        for (int y = 0; y < q.num_objects(); ++y) {
            for (int f : q.hom(o, y))
                if (m2(m, single(a.ring, f), it->second) != single(a.ring, f))
                    return fail("m2(" + q.letter(f).name + " ⊗ unit) differs from " + q.letter(f).name);
            for (int g : q.hom(y, o))
                if (m2(m, it->second, single(a.ring, g)) != single(a.ring, g))
                    return fail("m2(unit ⊗ " + q.letter(g).name + ") differs from " + q.letter(g).name);
        }
    }
    std::set<std::pair<Word, int>> seen;
    for (const auto& [w, lin] : m) {
        if (w.size() == 2) continue;
        for (std::size_t pos = 0; pos < w.size(); ++pos) {
            const Letter& l = q.letter(w[pos]);
            if (l.src != l.tgt) continue;
            const Lin<int>& e = units.at(l.src);
            if (e.coeff(w[pos], a.ring).is_zero()) continue;
            Word key = w;
            key[pos] = -1;
            if (!seen.insert({key, static_cast<int>(pos)}).second) continue;
            Lin<int> total;
            for (const auto& [u, c] : e) {
                Word v = w;
                v[pos] = u;
                if (const Lin<int>* r = find_op(m, v)) total.add(*r, c);
            }
            if (!total.empty())
                return fail("operation of arity " + std::to_string(w.size()) + " does not vanish on a unit");
        }
    }
    return true;
}

std::optional<std::map<int, Lin<int>>> find_strict_units(const Structure& a) {
    const Quiver& q = a.quiver;
    const OpTable m = a.unshifted();
    const Ring r = a.ring;
    std::map<int, Lin<int>> out;
    for (int o = 0; o < q.num_objects(); ++o) {
        std::vector<int> cand;
        for (int l : q.hom(o, o))
            if (q.letter(l).deg == 0) cand.push_back(l);
        Rows rows;
        for (int y = 0; y < q.num_objects(); ++y) {
            for (int f : q.hom(o, y)) {
                for (std::size_t u = 0; u < cand.size(); ++u)
                    if (const Lin<int>* res = find_op(m, {cand[u], f}))
                        for (const auto& [g, c] : *res) rows.add(rows.row(f, g, r), static_cast<int>(u), c);
                rows.rhs[rows.row(f, f, r)] += Elem::one(r);
            }
            for (int g : q.hom(y, o)) {
                for (std::size_t u = 0; u < cand.size(); ++u)
                    if (const Lin<int>* res = find_op(m, {g, cand[u]}))
                        for (const auto& [h, c] : *res) rows.add(rows.row(-1 - g, h, r), static_cast<int>(u), c);
                rows.rhs[rows.row(-1 - g, g, r)] += Elem::one(r);
            }
        }
        auto sol = rows.solve(r, static_cast<int>(cand.size()));
        if (!sol) return std::nullopt;
        out[o] = to_lin(cand, *sol);
    }
    if (!check_strict_units(a, out)) return std::nullopt;
    return out;
}

UnitReport unit_checks(const Structure& a) {
    const Quiver& q = a.quiver;
    const OpTable m = a.unshifted();
    const Ring r = a.ring;
    UnitReport rep;

    if (static_cast<int>(a.units.size()) == q.num_objects()) {
        std::string why;
        rep.strict = check_strict_units(a, declared_units(a), &why);
        if (rep.strict) rep.strict_units = declared_units(a);
        else rep.detail = why;
    } else if (auto found = find_strict_units(a)) {
        rep.strict = true;
        rep.strict_units = *found;
    }

    // Cohomological units: e closed of degree 0 with m2(x ⊗ e) - x and m2(e ⊗ x) - x exact for all cycles x.
    rep.cohomological = true;
    for (int o = 0; o < q.num_objects() && rep.cohomological; ++o) {
        Unknowns unk;
        std::vector<int> cand;
        for (int l : q.hom(o, o))
            if (q.letter(l).deg == 0) {
                cand.push_back(l);
                unk.add(0, l);
            }
        Rows rows;
        for (int l : q.hom(o, o))
            if (q.letter(l).deg == 1) rows.row(0, l, r);
        for (int l : cand)
            if (const Lin<int>* d = find_op(m, {l}))
                for (const auto& [y, c] : *d) rows.add(rows.row(0, y, r), unk.index.at({0, l}), c);
        int block = 1;
        for (int y = 0; y < q.num_objects(); ++y)
            for (int side = 0; side < 2; ++side) {
                int s = side == 0 ? o : y, t = side == 0 ? y : o;
                HomComplex hc(q, s, t);
                for (const Lin<int>& x : cycles(r, m, hc)) {
                    const int eq = block++;
                    int dx = q.letter(x.begin()->first).deg;
                    for (int l : cand) {
                        Lin<int> act = side == 0 ? m2(m, x, single(r, l)) : m2(m, single(r, l), x);
                        for (const auto& [g, c] : act) rows.add(rows.row(eq, g, r), unk.index.at({0, l}), c);
                    }
                    for (int yl : hc.degree(dx - 1)) {
                        int col = unk.add(eq, yl);
                        if (const Lin<int>* d = find_op(m, {yl}))
                            for (const auto& [g, c] : *d) rows.add(rows.row(eq, g, r), col, -c);
                    }
                    for (const auto& [g, c] : x) rows.rhs[rows.row(eq, g, r)] += c;
                }
            }
        auto sol = rows.solve(r, unk.size());
        if (!sol) {
            rep.cohomological = false;
            if (rep.detail.empty()) rep.detail = "no cohomological unit for object " + q.object_name(o);
            break;
        }
        Lin<int> e;
        for (int l : cand) e.add(l, (*sol)[unk.index.at({0, l})]);
        rep.cohomological_units[o] = e;
    }
    if (!rep.cohomological) {
        rep.cohomological_units.clear();
        return rep;
    }

    // Unitality: m2(- ⊗ e) and m2(e ⊗ -) homotopic to the identity on every hom complex.
    rep.unital = true;
    for (int o = 0; o < q.num_objects() && rep.unital; ++o) {
        const Lin<int>& e = rep.cohomological_units[o];
        for (int y = 0; y < q.num_objects() && rep.unital; ++y)
            for (int side = 0; side < 2 && rep.unital; ++side) {
                int s = side == 0 ? o : y, t = side == 0 ? y : o;
                HomComplex hc(q, s, t);
                if (hc.letters.empty()) continue;
                Unknowns unk;
                for (int x : hc.letters)
                    for (int yl : hc.degree(q.letter(x).deg - 1)) unk.add(x, yl);
                Rows rows;
                for (int x : hc.letters) {
                    for (int yl : hc.degree(q.letter(x).deg - 1))
                        if (const Lin<int>* d = find_op(m, {yl}))
                            for (const auto& [g, c] : *d) rows.add(rows.row(x, g, r), unk.index.at({x, yl}), c);
                    if (const Lin<int>* d = find_op(m, {x}))
                        for (const auto& [x2, c] : *d)
                            for (int g : hc.degree(q.letter(x2).deg - 1))
                                rows.add(rows.row(x, g, r), unk.index.at({x2, g}), c);
                    Lin<int> act = side == 0 ? m2(m, single(r, x), e) : m2(m, e, single(r, x));
                    act.add(x, Elem(r, -1));
                    for (const auto& [g, c] : act) rows.rhs[rows.row(x, g, r)] += c;
                }
                auto sol = rows.solve(r, unk.size());
                if (!sol) {
                    rep.unital = false;
                    rep.detail = "unit action on " + q.object_name(s) + "|" + q.object_name(t) +
                                 " is not homotopic to the identity";
                    break;
                }
                auto& hm = rep.homotopies[{s, t, side}];
                for (const auto& [key, col] : unk.index)
                    if (!(*sol)[col].is_zero()) hm.emplace(std::make_pair(key.second, key.first), (*sol)[col]);
            }
    }
    return rep;
}

// ---------------------------------------------------------------- constructions

Structure augment(const Structure& a) {
    Structure out;
    out.ring = a.ring;
    out.max_arity = a.max_arity;
    out.dg = a.dg;
    for (const auto& o : a.quiver.objects()) out.quiver.add_object(o);
    for (const auto& l : a.quiver.letters()) out.quiver.add_letter(l.name, l.src, l.tgt, l.deg);
    OpTable m = a.unshifted();
    for (int o = 0; o < out.quiver.num_objects(); ++o) {
        std::string name = "1_" + out.quiver.object_name(o);
        while (out.quiver.find_letter(o, o, name) >= 0) name += "'";
        out.units[o] = out.quiver.add_letter(name, o, o, 0);
    }
    const Elem one = Elem::one(a.ring);
    for (const auto& [o, u] : out.units) {
        for (int y = 0; y < out.quiver.num_objects(); ++y) {
            for (int f : out.quiver.hom(o, y)) m[{u, f}].add(f, one);
            for (int g : out.quiver.hom(y, o))
                if (g != u) m[{g, u}].add(g, one);
        }
    }
    out.set_unshifted(m);
    return out;
}

Structure tensor_dg(const Structure& a, const Structure& b) {
    if (a.ring != b.ring) throw Error("RingMismatch", "tensor of structures over different rings");
    if (!a.is_dg() || !b.is_dg()) throw Error("NotDg", "tensor product needs m_i = 0 for i > 2");
    const Quiver &qa = a.quiver, &qb = b.quiver;
    Structure out;
    out.ring = a.ring;
    out.dg = true;
    out.max_arity = 2;
    const int nb = qb.num_objects();
    for (int x = 0; x < qa.num_objects(); ++x)
        for (int y = 0; y < nb; ++y) out.quiver.add_object("(" + qa.object_name(x) + "," + qb.object_name(y) + ")");
    std::map<std::pair<int, int>, int> pair_letter;
    for (int f = 0; f < qa.num_letters(); ++f)
        for (int g = 0; g < qb.num_letters(); ++g) {
            const Letter &lf = qa.letter(f), &lg = qb.letter(g);
            pair_letter[{f, g}] = out.quiver.add_letter(lf.name + "*" + lg.name, lf.src * nb + lg.src,
                                                        lf.tgt * nb + lg.tgt, lf.deg + lg.deg);
        }
    const OpTable ma = a.unshifted(), mb = b.unshifted();
    OpTable m;
    const Ring r = a.ring;
    for (const auto& [fg, l] : pair_letter) {
        auto [f, g] = fg;
        if (const Lin<int>* df = find_op(ma, {f}))
            for (const auto& [f2, c] : *df) m[{l}].add(pair_letter.at({f2, g}), c);
        if (const Lin<int>* dg_ = find_op(mb, {g}))
            for (const auto& [g2, c] : *dg_)
                m[{l}].add(pair_letter.at({f, g2}), c.signed_by(parity_sign(qa.letter(f).deg)));
    }
    for (const auto& [w, lin] : ma) {
        if (w.size() != 2) continue;
        for (const auto& [wb, linb] : mb) {
            if (wb.size() != 2) continue;
            // (f ⊗ g)(f' ⊗ g') = (-1)^{|g||f'|} ff' ⊗ gg'; words list the right factor first.
            int f = w[1], f2 = w[0], g = wb[1], g2 = wb[0];
            Word in{pair_letter.at({f2, g2}), pair_letter.at({f, g})};
            int s = koszul_sign(qb.letter(g).deg, qa.letter(f2).deg);
            for (const auto& [x, c] : lin)
                for (const auto& [y, d] : linb) m[in].add(pair_letter.at({x, y}), (c * d).signed_by(s));
        }
    }
    for (auto it = m.begin(); it != m.end();) it = it->second.empty() ? m.erase(it) : std::next(it);
    out.set_unshifted(m);
    if (static_cast<int>(a.units.size()) == qa.num_objects() && static_cast<int>(b.units.size()) == nb)
        for (int x = 0; x < qa.num_objects(); ++x)
            for (int y = 0; y < nb; ++y) out.units[x * nb + y] = pair_letter.at({a.units.at(x), b.units.at(y)});
    (void)r;
    return out;
}

}  // namespace ainfty
