#include "ainfty/strictify.hpp"

#include <algorithm>

namespace ainfty {

namespace {

constexpr int kUnbounded = Structure::kUnbounded;

std::map<int, Lin<int>> units_of(const Structure& a, const char* which) {
    std::map<int, Lin<int>> units = declared_units(a);
    if (static_cast<int>(units.size()) == a.quiver.num_objects() && check_strict_units(a, units)) return units;
    if (auto found = find_strict_units(a)) return *found;
    throw Error("NotUnital", std::string("the ") + which + " has no strict units");
}

Word insert_at(const Word& w, int j, int y) {
    Word out = w;
    out.insert(out.begin() + j, y);
    return out;
}

// Object sitting at slot j of w, between w[j-1] and w[j].
int object_at(const Quiver& q, const Word& w, int j) {
    return j < static_cast<int>(w.size()) ? q.letter(w[j]).src : q.letter(w[j - 1]).tgt;
}

// t(w with the unit e inserted at slot j), extended linearly over the letters of e.
Lin<int> with_unit(const OpTable& t, const Word& w, int j, const Lin<int>& e) {
    Lin<int> out;
    for (const auto& [u, c] : e)
        if (auto it = t.find(insert_at(w, j, u)); it != t.end()) out.add(it->second, c);
    return out;
}

Lin<int> at_unit(const OpTable& t, const Lin<int>& e) {
    Lin<int> out;
    for (const auto& [u, c] : e)
        if (auto it = t.find(Word{u}); it != t.end()) out.add(it->second, c);
    return out;
}

std::string word_name(const Quiver& q, const Word& w) {
    std::string s;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (!s.empty()) s += "⊗";
        s += q.letter(*it).name;
    }
    return s;
}

Report failure(int arity, Word w, Lin<int> residual, std::string detail) {
    Report rep;
    rep.ok = false;
    rep.arity = arity;
    rep.word = std::move(w);
    rep.residual = std::move(residual);
    rep.checked_through = arity - 1;
    rep.detail = std::move(detail);
    return rep;
}

// Words of length i >= 2 with the unit in a slot < slots, checked against t.
Report scan_unit_words(const Quiver& q, const OpTable& t, const std::map<int, Lin<int>>& units, int i, int slots) {
    for (const Word& w : q.words(i - 1))
        for (int j = 0; j < std::min(slots, i); ++j) {
            const Lin<int>& e = units.at(object_at(q, w, j));
            Lin<int> r = with_unit(t, w, j, e);
            if (!r.empty())
                return failure(i, insert_at(w, j, e.begin()->first), r,
                               "unit in slot " + std::to_string(j + 1) + " of " + std::to_string(i));
        }
    return {};
}

int target_room(const Structure& b) { return b.bound() == kUnbounded ? kUnbounded : b.bound() - 1; }

void add_shifted(Prenat& into, const Prenat& x, const Elem& scale) {
    for (const auto& [w, c] : x.comps) into.comps[w].add(c, scale);
    for (const auto& [o, c] : x.zero) into.zero[o].add(c, scale);
    std::erase_if(into.comps, [](const auto& kv) { return kv.second.empty(); });
    std::erase_if(into.zero, [](const auto& kv) { return kv.second.empty(); });
}

void truncate(OpTable& t, int arity) {
    std::erase_if(t, [&](const auto& kv) { return static_cast<int>(kv.first.size()) > arity; });
}

Lin<int> boundary(const OpTable& bu, const Lin<int>& x) {
    Lin<int> out;
    for (const auto& [l, c] : x)
        if (auto it = bu.find(Word{l}); it != bu.end()) out.add(it->second, c);
    return out;
}

// h with m1(h) = rhs in B(x, x), degree -1.
Lin<int> solve_h(const Structure& b, const OpTable& bu, int x, const Lin<int>& rhs) {
    if (rhs.empty()) return {};
    std::vector<int> cols, rows;
    for (int l : b.quiver.hom(x, x)) {
        if (b.quiver.letter(l).deg == -1) cols.push_back(l);
        if (b.quiver.letter(l).deg == 0) rows.push_back(l);
    }
    SparseMatrix m(b.ring, static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        Lin<int> unit;
        unit.add(cols[j], Elem::one(b.ring));
        Lin<int> d = boundary(bu, unit);
        for (std::size_t i = 0; i < rows.size(); ++i)
            m.set(static_cast<int>(i), static_cast<int>(j), d.coeff(rows[i], b.ring));
    }
    Vector v;
    for (int l : rows) v.push_back(rhs.coeff(l, b.ring));
    auto sol = solve_exact(m, v);
    if (!sol) throw Error("NotUnital", "F^1(id) - id is not a boundary at " + b.quiver.object_name(x));
    Lin<int> h;
    for (std::size_t j = 0; j < cols.size(); ++j) h.add(cols[j], (*sol)[j]);
    return h;
}

// Stage (n, m): θ^{n-1} and θ^n from t with the unit inserted at slot m, times (-1)^{m + shift}.
std::pair<OpTable, std::map<int, Lin<int>>> unit_insertion(const Quiver& q, const Ring& ring, const OpTable& t,
                                                             const std::map<int, Lin<int>>& units, int n, int m,
                                                             int shift) {
    const Elem sign(ring, (m + shift) % 2 == 0 ? 1L : -1L);
    OpTable out;
    std::map<int, Lin<int>> zero;
    if (n == 1)
        for (const auto& [o, e] : units)
            if (Lin<int> v = at_unit(t, e); !v.empty()) zero.emplace(o, v.scaled(sign));
    for (int len = std::max(n - 1, 1); len <= n; ++len)
        for (const Word& w : q.words(len))
            if (Lin<int> v = with_unit(t, w, m - 1, units.at(object_at(q, w, m - 1))); !v.empty())
                out.emplace(w, v.scaled(sign));
    return {out, zero};
}

bool below_empty(const std::pair<OpTable, std::map<int, Lin<int>>>& stage, int n) {
    if (n == 1) return stage.second.empty();
    return std::none_of(stage.first.begin(), stage.first.end(),
                        [&](const auto& kv) { return static_cast<int>(kv.first.size()) == n - 1; });
}

}  // namespace

Report check_strictly_unital(const Functor& f, int up_to) {
    const Quiver& q = f.source->quiver;
    auto ua = units_of(*f.source, "source");
    auto ub = units_of(*f.target, "target");
    OpTable fu = f.unshifted();
    Report rep;
    for (const auto& [o, e] : ua) {
        Lin<int> r = at_unit(fu, e);
        r.add(ub.at(f.obj_map[o]), Elem(f.source->ring, -1));
        if (!r.empty()) {
            rep = failure(1, Word{e.begin()->first}, r, "F^1(id) != id at " + q.object_name(o));
            rep.object = o;
            return rep;
        }
    }
    rep.checked_through = 1;
    const int through = std::min(up_to, f.bound());
    for (int i = 2; i <= through; ++i) {
        Report r = scan_unit_words(q, fu, ua, i, i);
        if (!r.ok) return r;
        rep.checked_through = i;
    }
    return rep;
}

Report check_strictly_unital(const Prenat& t, int up_to) {
    const Quiver& q = t.source()->quiver;
    auto ua = units_of(*t.source(), "source");
    OpTable tu = t.unshifted();
    Report rep;
    for (const auto& [o, e] : ua) {
        Lin<int> r = at_unit(tu, e);
        if (!r.empty()) {
            rep = failure(1, Word{e.begin()->first}, r, "θ^1(id) != 0 at " + q.object_name(o));
            rep.object = o;
            return rep;
        }
    }
    rep.checked_through = 1;
    for (int i = 2; i <= std::min(up_to, t.max_arity); ++i) {
        Report r = scan_unit_words(q, tu, ua, i, i);
        if (!r.ok) return r;
        rep.checked_through = i;
    }
    return rep;
}

Prenat compose_homotopies(const Prenat& first, const Prenat& second) {
    if (first.degree != 0 || second.degree != 0 || !first.zero.empty() || !second.zero.empty())
        throw Error("InvalidHomotopy", "homotopies have degree 0 and no arity-0 component");
    if (first.to->obj_map != second.from->obj_map || first.to->comps != second.from->comps)
        throw Error("SchemaError", "homotopies are not composable");
    const Quiver& q = first.source()->quiver;
    const Ring ring = first.source()->ring;
    const Structure& b = *first.target();
    const OpTable& fh = first.from->comps;
    const OpTable& gh = first.to->comps;
    const OpTable& hh = second.to->comps;
    std::size_t width = 0;
    for (const auto& [w, c] : b.ops) width = std::max(width, w.size());

    Prenat out = zero_prenat(first.from, second.to, 0, std::min(first.max_arity, second.max_arity));
    add_shifted(out, first, Elem::one(ring));
    add_shifted(out, second, Elem::one(ring));
    truncate(out.comps, out.max_arity);

    // Blocks of a functor covering w[from, from + len), every composition.
    auto cover = [&](const OpTable& t, const Word& w, int from, int len, auto&& k) {
        for (const auto& sizes : compositions(len)) {
            std::vector<Lin<int>> parts;
            int pos = from;
            bool zero = false;
            for (int s : sizes) {
                auto it = t.find(Word(w.begin() + pos, w.begin() + pos + s));
                if (it == t.end()) {
                    zero = true;
                    break;
                }
                parts.push_back(it->second);
                pos += s;
            }
            if (!zero) k(parts);
        }
    };
    auto shifted = [&](const Word& w, int from) {
        long s = 0;
        for (std::size_t k = from; k < w.size(); ++k) s += q.letter(w[k]).deg + 1;
        return s;
    };

    // Second-order term b(Ĥ.., θ2, Ĝ.., θ1, F̂..), each θ passing the letters to its left.
    for (int n = 2; n <= out.max_arity; ++n)
        for (const Word& w : q.words(n)) {
            Lin<int> acc;
            for (int a = 0; a <= n - 2; ++a)
                cover(fh, w, 0, a, [&](const std::vector<Lin<int>>& fp) {
                    if (fp.size() + 2 > width) return;
                    for (int k1 = 1; a + k1 <= n - 1; ++k1) {
                        auto t1 = first.comps.find(Word(w.begin() + a, w.begin() + a + k1));
                        if (t1 == first.comps.end()) continue;
                        for (int g = 0; a + k1 + g <= n - 1; ++g)
                            cover(gh, w, a + k1, g, [&](const std::vector<Lin<int>>& gp) {
                                if (fp.size() + gp.size() + 2 > width) return;
                                const int s2 = a + k1 + g;
                                for (int k2 = 1; s2 + k2 <= n; ++k2) {
                                    auto t2 = second.comps.find(Word(w.begin() + s2, w.begin() + s2 + k2));
                                    if (t2 == second.comps.end()) continue;
                                    cover(hh, w, s2 + k2, n - s2 - k2, [&](const std::vector<Lin<int>>& hp) {
                                        if (fp.size() + gp.size() + hp.size() + 2 > width) return;
                                        std::vector<Lin<int>> parts = fp;
                                        parts.push_back(t1->second);
                                        parts.insert(parts.end(), gp.begin(), gp.end());
                                        parts.push_back(t2->second);
                                        parts.insert(parts.end(), hp.begin(), hp.end());
                                        const long e = shifted(w, a + k1) + shifted(w, s2 + k2);
                                        acc.add(apply_table(b.ops, tensor_product(ring, parts)),
                                                Elem(ring, parity_sign(e)));
                                    });
                                }
                            });
                    }
                });
            if (!acc.empty()) out.comps[w].add(acc);
        }
    std::erase_if(out.comps, [](const auto& kv) { return kv.second.empty(); });
    return out;
}

StrictificationResult strictify_functor(const Functor& f, const std::optional<SplitUnitWitness>& witness,
                                        const std::map<int, Lin<int>>& h, int arity) {
    if (!witness) throw Error("SplitUnitsRequired", "strictification needs a split-unit witness for the source");
    f.validate();
    const Structure& a = *f.source;
    const Structure& b = *f.target;
    const Quiver& q = a.quiver;
    const Ring ring = a.ring;
    auto ua = units_of(a, "source");
    auto ub = units_of(b, "target");
    check_witness(a, ua, *witness);
    const int work = arity + 1;
    const int known = std::min({f.bound(), a.bound(), target_room(b)});
    if (arity < 1 || known < work)
        throw Error("SchemaError", "strictification through arity " + std::to_string(arity) + " needs arity " +
                                       std::to_string(work) + ", known through " + std::to_string(known));

    StrictificationResult res;
    std::shared_ptr<const Functor> cur = std::make_shared<Functor>(f);
    auto step = [&](int n, int m, const OpTable& comps) {
        Prenat theta = zero_prenat(cur, cur, 0, work);
        theta.set_unshifted(comps, {});
        auto [g, cert] = perturb_by_homotopy(*cur, theta);
        res.chain.push_back({n, m, cert.theta});
        cur = cert.theta.to;
    };

    // arity one: θ¹(f) = p(f) h_A
    const OpTable bu = b.unshifted();
    OpTable fu = f.unshifted();
    OpTable first;
    for (int o = 0; o < q.num_objects(); ++o) {
        const int x = f.obj_map[o];
        Lin<int> rhs = ub.at(x);
        rhs.add(at_unit(fu, ua.at(o)), Elem(ring, -1));
        Lin<int> ho;
        if (auto it = h.find(o); it != h.end()) {
            ho = it->second;
            for (const auto& [l, c] : ho) {
                const Letter& L = b.quiver.letter(l);
                if (L.src != x || L.tgt != x || L.deg != -1)
                    throw Error("SchemaError", "h_" + q.object_name(o) + " must lie in degree -1 of B(F A, F A)");
            }
            if (boundary(bu, ho) != rhs)
                throw Error("NotUnital", "supplied h_" + q.object_name(o) + " fails F^1(id) = id - m1(h)");
        } else {
            ho = solve_h(b, bu, x, rhs);
        }
        for (const auto& [l, c] : witness->retraction.at(o))
            if (!ho.empty()) first[{l}].add(ho, c);
    }
    std::erase_if(first, [](const auto& kv) { return kv.second.empty(); });
    if (!first.empty()) step(1, 1, first);

    for (int n = 2; n <= arity; ++n)
        for (int m = 1; m <= n; ++m) {
            auto stage = unit_insertion(q, ring, cur->unshifted(), ua, n, m, 1);
            if (below_empty(stage, n)) continue;
            step(n, m, stage.first);
            Report r = scan_unit_words(q, cur->unshifted(), ua, n, m);
            if (!r.ok) throw Error("InternalError", "stage (" + std::to_string(n) + ", " + std::to_string(m) +
                                                        ") leaves " + r.detail);
        }

    if (res.chain.empty()) {
        res.functor = f;
        res.total = zero_prenat(std::make_shared<Functor>(f), std::make_shared<Functor>(f), 0, work);
        return res;
    }
    res.functor = *cur;
    res.total = res.chain.front().theta;
    for (std::size_t k = 1; k < res.chain.size(); ++k) res.total = compose_homotopies(res.total, res.chain[k].theta);
    Report hr = check_homotopy(f, res.functor, res.total);
    if (!hr.ok) throw Error("InternalError", "composite homotopy fails at arity " + std::to_string(hr.arity));
    Report ur = check_strictly_unital(res.functor, arity);
    if (!ur.ok) throw Error("InternalError", "strictified functor: " + ur.detail);
    return res;
}

NatStrictification strictify_nat(const Prenat& theta, int arity) {
    theta.validate();
    const Quiver& q = theta.source()->quiver;
    const Ring ring = theta.source()->ring;
    const int work = arity + 1;
    if (arity < 1 || m1_bound(theta) < work)
        throw Error("SchemaError", "strictification through arity " + std::to_string(arity) +
                                       " needs naturality through " + std::to_string(work));
    Report nat = check_natural(theta, work);
    if (!nat.ok) throw Error("NotNatural", "naturality fails at arity " + std::to_string(nat.arity));
    for (const Functor* f : {theta.from.get(), theta.to.get()}) {
        Report r = check_strictly_unital(*f, work);
        if (!r.ok) throw Error("NotUnital", "functor is not strictly unital: " + r.detail);
    }
    auto ua = units_of(*theta.source(), "source");

    NatStrictification out;
    Prenat cur = theta;
    out.tilde = zero_prenat(theta.from, theta.to, theta.degree - 1, work);
    for (int n = 1; n <= arity; ++n)
        for (int m = 1; m <= n; ++m) {
            auto stage = unit_insertion(q, ring, cur.unshifted(), ua, n, m, 0);
            if (below_empty(stage, n)) continue;
            Prenat bar = zero_prenat(theta.from, theta.to, theta.degree - 1, work);
            bar.set_unshifted(stage.first, stage.second);
            add_shifted(cur, m1_prenat(bar), Elem(ring, -1));
            add_shifted(out.tilde, bar, Elem::one(ring));
            if (n == 1) {
                Report r = check_strictly_unital(cur, 1);
                if (!r.ok) throw Error("InternalError", "stage (1, 1) leaves " + r.detail);
            } else if (Report r = scan_unit_words(q, cur.unshifted(), ua, n, m); !r.ok) {
                throw Error("InternalError", "stage (" + std::to_string(n) + ", " + std::to_string(m) + ") leaves " +
                                                 r.detail);
            }
        }
    cur.max_arity = work;
    truncate(cur.comps, work);
    out.strict = cur;
    return out;
}

Prenat homotopy_to_weak_equiv(const Functor& f, const Functor& g, const Prenat& theta) {
    Report rep = check_homotopy(f, g, theta);
    if (!rep.ok) {
        std::string where = rep.detail.empty() ? "arity " + std::to_string(rep.arity) + " on " +
                                                     word_name(f.source->quiver, rep.word)
                                               : rep.detail;
        throw Error("NotAHomotopy", where);
    }
    auto ub = units_of(*f.target, "target");
    Prenat out = theta;
    out.from = std::make_shared<Functor>(f);
    out.to = std::make_shared<Functor>(g);
    std::map<int, Lin<int>> zero;
    for (int o = 0; o < f.source->quiver.num_objects(); ++o) zero.emplace(o, ub.at(f.obj_map[o]));
    OpTable comps = theta.unshifted();
    for (auto& [w, c] : comps) c = c.negated();
    out.set_unshifted(comps, zero);
    return out;
}

}  // namespace ainfty
