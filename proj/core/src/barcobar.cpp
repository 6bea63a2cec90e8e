#include "ainfty/barcobar.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace ainfty {

namespace {

long shifted(const Quiver& q, const Word& w, std::size_t from, std::size_t to) {
    long s = 0;
    for (std::size_t k = from; k < to; ++k) s += q.letter(w[k]).deg - 1;
    return s;
}

long shifted(const Quiver& q, const Word& w) { return shifted(q, w, 0, w.size()); }

Word slice(const Word& w, std::size_t from, std::size_t len) {
    return Word(w.begin() + static_cast<long>(from), w.begin() + static_cast<long>(from + len));
}

Word splice(const Word& w, std::size_t from, std::size_t len, int y) {
    Word out(w.begin(), w.begin() + static_cast<long>(from));
    out.push_back(y);
    out.insert(out.end(), w.begin() + static_cast<long>(from + len), w.end());
    return out;
}

std::map<int, Lin<int>> strict_units_of(const Structure& a) {
    std::map<int, Lin<int>> units = declared_units(a);
    if (static_cast<int>(units.size()) == a.quiver.num_objects() && check_strict_units(a, units)) return units;
    if (auto found = find_strict_units(a)) return *found;
    throw Error("NotUnital", "no strict units");
}

}  // namespace

// ---------------------------------------------------------------- bar

Lin<Word> bar_differential(const Structure& a, const Word& w) {
    const Quiver& q = a.quiver;
    const std::size_t n = w.size();
    Lin<Word> out;
    for (std::size_t k = 1; k <= n; ++k)
        for (std::size_t i = 0; i + k <= n; ++i) {
            const Lin<int>* op = a.op(slice(w, i, k));
            if (!op) continue;
            int s = parity_sign(shifted(q, w, i + k, n));
            for (const auto& [y, c] : *op) out.add(splice(w, i, k, y), c.signed_by(s));
        }
    return out;
}

Lin<Word> bar_differential(const Structure& a, const Lin<Word>& x) {
    Lin<Word> out;
    for (const auto& [w, c] : x) out.add(bar_differential(a, w), c);
    return out;
}

BarReport check_bar(const Structure& a, int max_len) {
    BarReport rep;
    const int top = std::min(max_len, a.bound());
    for (int n = 1; n <= top; ++n) {
        for (const Word& w : a.quiver.words(n)) {
            Lin<Word> dd = bar_differential(a, bar_differential(a, w));
            if (!dd.empty()) {
                rep.ok = false;
                rep.length = n;
                rep.word = w;
                rep.value = dd;
                return rep;
            }
        }
        rep.checked_through = n;
    }
    return rep;
}

BarTruncation bar(const StructurePtr& a, int max_len) {
    BarTruncation t{a, max_len, check_bar(*a, max_len)};
    if (!t.report.ok) {
        std::string w;
        for (auto it = t.report.word.rbegin(); it != t.report.word.rend(); ++it)
            w += (w.empty() ? "s" : " ⊗ s") + a->quiver.letter(*it).name;
        throw Error("NotAInfty", "d^2 != 0 on " + w);
    }
    return t;
}

// ---------------------------------------------------------------- cobar

Cobar::Cobar(std::vector<StructurePtr> vars) : vars_(std::move(vars)) {
    if (vars_.empty() || vars_.size() > 2) throw Error("SchemaError", "cobar words take one or two variables");
    ring_ = vars_[0]->ring;
    for (const auto& v : vars_)
        if (v->ring != ring_) throw Error("RingMismatch", "variables over different rings");
}

int Cobar::factor_degree(const Factor& f) const {
    long d = 1;
    for (int v = 0; v < variables(); ++v) d += shifted(var(v).quiver, f.parts[v]);
    return static_cast<int>(d);
}

int Cobar::degree(const CobarWord& c) const {
    int d = 0;
    for (const Factor& f : c.factors) d += factor_degree(f);
    return d;
}

int Cobar::size(const Factor& f) const {
    int n = 0;
    for (const Word& p : f.parts) n += static_cast<int>(p.size());
    return n;
}

std::vector<int> Cobar::letters(const CobarWord& c) const {
    std::vector<int> out(variables(), 0);
    for (const Factor& f : c.factors)
        for (int v = 0; v < variables(); ++v) out[v] += static_cast<int>(f.parts[v].size());
    return out;
}

int Cobar::total_letters(const CobarWord& c) const {
    int n = 0;
    for (const Factor& f : c.factors) n += size(f);
    return n;
}

std::vector<int> Cobar::factor_target(const Factor& f, const std::vector<int>& src) const {
    std::vector<int> out = src;
    for (int v = 0; v < variables(); ++v)
        if (!f.parts[v].empty()) out[v] = var(v).quiver.tgt(f.parts[v]);
    return out;
}

std::vector<int> Cobar::target(const CobarWord& c) const {
    std::vector<int> obj = c.source;
    for (const Factor& f : c.factors) obj = factor_target(f, obj);
    return obj;
}

bool Cobar::valid(const CobarWord& c) const {
    if (static_cast<int>(c.source.size()) != variables() || c.factors.empty()) return false;
    std::vector<int> obj = c.source;
    for (const Factor& f : c.factors) {
        if (static_cast<int>(f.parts.size()) != variables() || size(f) == 0) return false;
        for (int v = 0; v < variables(); ++v) {
            const Word& w = f.parts[v];
            if (w.empty()) continue;
            const Quiver& q = var(v).quiver;
            if (!q.composable(w) || q.src(w) != obj[v]) return false;
        }
        obj = factor_target(f, obj);
    }
    return true;
}

CobarChain Cobar::factor_differential(const Factor& f, const std::vector<int>& src, bool graded_only) const {
    CobarChain out;
    const Elem minus_one = Elem(ring_, -1);
    // μ(s^{-1} x) = -s^{-1} d(x), d the differential of the tensor product of bar constructions.
    long outside = 0;
    for (int v = 0; v < variables(); ++v) {
        const Structure& a = var(v);
        const Word& w = f.parts[v];
        const std::size_t n = w.size();
        for (std::size_t k = 1; k <= (graded_only ? std::min<std::size_t>(1, n) : n); ++k)
            for (std::size_t i = 0; i + k <= n; ++i) {
                const Lin<int>* op = a.op(slice(w, i, k));
                if (!op) continue;
                int s = parity_sign(outside + shifted(a.quiver, w, i + k, n));
                for (const auto& [y, c] : *op) {
                    Factor g = f;
                    g.parts[v] = splice(w, i, k, y);
                    out.add(CobarWord{src, {g}}, (c * minus_one).signed_by(s));
                }
            }
        outside += shifted(a.quiver, w);
    }
    // Δ: all splits into a nonempty left and right factor.
    const int nv = variables();
    std::vector<int> cut(nv, 0);
    std::function<void(int)> rec = [&](int v) {
        if (v < nv) {
            for (int i = 0; i <= static_cast<int>(f.parts[v].size()); ++i) {
                cut[v] = i;
                rec(v + 1);
            }
            return;
        }
        Factor right, left;
        bool right_empty = true, left_empty = true;
        for (int u = 0; u < nv; ++u) {
            const Word& w = f.parts[u];
            right.parts.push_back(slice(w, 0, cut[u]));
            left.parts.push_back(slice(w, cut[u], w.size() - cut[u]));
            right_empty = right_empty && cut[u] == 0;
            left_empty = left_empty && cut[u] == static_cast<int>(w.size());
        }
        if (right_empty || left_empty) return;
        long e = factor_degree(left);
        for (int u = 0; u < nv; ++u)
            for (int u2 = u + 1; u2 < nv; ++u2)
                e += shifted(var(u).quiver, right.parts[u]) * shifted(var(u2).quiver, left.parts[u2]);
        out.add(CobarWord{src, {right, left}}, Elem::one(ring_).signed_by(parity_sign(e)));
    };
    rec(0);
    return out;
}

CobarChain Cobar::differential(const CobarWord& c, bool graded_only) const {
    CobarChain out;
    const int l = static_cast<int>(c.factors.size());
    std::vector<std::vector<int>> objs{c.source};
    for (const Factor& f : c.factors) objs.push_back(factor_target(f, objs.back()));
    long left = 0;
    for (int k = l - 1; k >= 0; --k) {
        CobarChain dk = factor_differential(c.factors[k], objs[k], graded_only);
        for (const auto& [piece, coef] : dk) {
            CobarWord w{c.source, {}};
            w.factors.insert(w.factors.end(), c.factors.begin(), c.factors.begin() + k);
            w.factors.insert(w.factors.end(), piece.factors.begin(), piece.factors.end());
            w.factors.insert(w.factors.end(), c.factors.begin() + k + 1, c.factors.end());
            out.add(w, coef.signed_by(parity_sign(left)));
        }
        left += factor_degree(c.factors[k]);
    }
    return out;
}

CobarChain Cobar::differential(const CobarChain& x, bool graded_only) const {
    CobarChain out;
    for (const auto& [w, c] : x) out.add(differential(w, graded_only), c);
    return out;
}

CobarWord Cobar::compose(const CobarWord& x, const CobarWord& y) const {
    if (target(y) != x.source) throw Error("DimensionMismatch", "composition of non-composable cobar words");
    CobarWord out = y;
    out.factors.insert(out.factors.end(), x.factors.begin(), x.factors.end());
    return out;
}

CobarChain Cobar::compose(const CobarChain& x, const CobarChain& y) const {
    CobarChain out;
    for (const auto& [a, ca] : x)
        for (const auto& [b, cb] : y)
            if (target(b) == a.source) out.add(compose(a, b), ca * cb);
    return out;
}

std::vector<CobarWord> Cobar::basis(const std::vector<int>& src, const std::vector<int>& tgt,
                                    const std::vector<int>& counts) const {
    const int nv = variables();
    std::vector<std::vector<Word>> words(nv);
    for (int v = 0; v < nv; ++v) {
        if (counts[v] == 0) {
            if (src[v] == tgt[v]) words[v].push_back({});
        } else {
            words[v] = var(v).quiver.words(counts[v], src[v], tgt[v]);
        }
        if (words[v].empty()) return {};
    }
    // Factor size sequences, rightmost factor first.
    std::vector<std::vector<std::vector<int>>> shapes;
    std::vector<std::vector<int>> current;
    std::function<void(std::vector<int>)> split = [&](std::vector<int> left) {
        if (std::all_of(left.begin(), left.end(), [](int x) { return x == 0; })) {
            shapes.push_back(current);
            return;
        }
        std::vector<int> take(nv, 0);
        std::function<void(int)> choose = [&](int v) {
            if (v == nv) {
                if (std::all_of(take.begin(), take.end(), [](int x) { return x == 0; })) return;
                current.push_back(take);
                std::vector<int> rest = left;
                for (int u = 0; u < nv; ++u) rest[u] -= take[u];
                split(rest);
                current.pop_back();
                return;
            }
            for (int t = 0; t <= left[v]; ++t) {
                take[v] = t;
                choose(v + 1);
            }
        };
        choose(0);
    };
    split(counts);

    std::vector<CobarWord> out;
    std::vector<int> pick(nv, 0);
    std::function<void(int)> each = [&](int v) {
        if (v < nv) {
            for (std::size_t i = 0; i < words[v].size(); ++i) {
                pick[v] = static_cast<int>(i);
                each(v + 1);
            }
            return;
        }
        for (const auto& shape : shapes) {
            CobarWord c{src, {}};
            std::vector<int> pos(nv, 0);
            for (const auto& sizes : shape) {
                Factor f;
                for (int u = 0; u < nv; ++u) {
                    f.parts.push_back(slice(words[u][pick[u]], pos[u], sizes[u]));
                    pos[u] += sizes[u];
                }
                c.factors.push_back(std::move(f));
            }
            out.push_back(std::move(c));
        }
    };
    each(0);
    return out;
}

std::vector<CobarWord> Cobar::basis_up_to(const std::vector<int>& src, const std::vector<int>& tgt,
                                          int max_letters) const {
    std::vector<CobarWord> out;
    const int nv = variables();
    for (int n = 1; n <= max_letters; ++n) {
        std::vector<int> counts(nv, 0);
        std::function<void(int, int)> rec = [&](int v, int left) {
            if (v == nv - 1) {
                counts[v] = left;
                auto b = basis(src, tgt, counts);
                out.insert(out.end(), b.begin(), b.end());
                return;
            }
            for (int t = left; t >= 0; --t) {
                counts[v] = t;
                rec(v + 1, left - t);
            }
        };
        rec(0, n);
    }
    return out;
}

std::string Cobar::name(const CobarWord& c) const {
    std::string s;
    for (auto it = c.factors.rbegin(); it != c.factors.rend(); ++it) {
        s += "[";
        for (int v = 0; v < variables(); ++v) {
            if (v > 0) s += ";";
            const Word& w = it->parts[v];
            for (auto l = w.rbegin(); l != w.rend(); ++l) {
                if (l != w.rbegin()) s += "|";
                const Quiver& q = var(v).quiver;
                const Letter& L = q.letter(*l);
                s += L.name;
                if (q.num_objects() > 1) s += "(" + q.object_name(L.src) + "," + q.object_name(L.tgt) + ")";
            }
        }
        s += "]";
    }
    return s;
}

CobarWord Cobar::single(const Word& w) const {
    if (variables() != 1) throw Error("SchemaError", "single-factor words need one variable");
    return CobarWord{{var(0).quiver.src(w)}, {Factor{{w}}}};
}

namespace {

std::vector<std::vector<int>> object_tuples(const Cobar& cobar) {
    std::vector<std::vector<int>> out{{}};
    for (int v = 0; v < cobar.variables(); ++v) {
        std::vector<std::vector<int>> next;
        for (const auto& t : out)
            for (int o = 0; o < cobar.var(v).quiver.num_objects(); ++o) {
                auto u = t;
                u.push_back(o);
                next.push_back(u);
            }
        out = next;
    }
    return out;
}

int letter_bound(const Cobar& cobar, int max_letters) {
    int b = max_letters;
    for (int v = 0; v < cobar.variables(); ++v) b = std::min(b, cobar.var(v).bound());
    return b;
}

}  // namespace

CobarCategory cobar_category(const Cobar& cobar, int max_letters) {
    const int top = letter_bound(cobar, max_letters);
    CobarCategory cat;
    Structure& s = cat.structure;
    s.ring = cobar.ring();
    s.dg = true;
    auto tuples = object_tuples(cobar);
    std::map<std::vector<int>, int> obj;
    for (const auto& t : tuples) {
        std::string name;
        for (std::size_t v = 0; v < t.size(); ++v)
            name += (v ? "," : "") + cobar.var(static_cast<int>(v)).quiver.object_name(t[v]);
        obj[t] = s.quiver.add_object(t.size() == 1 ? name : "(" + name + ")");
    }
    for (const auto& a : tuples)
        for (const auto& b : tuples)
            for (const CobarWord& c : cobar.basis_up_to(a, b, top)) {
                int l = s.quiver.add_letter(cobar.name(c), obj[a], obj[b], cobar.degree(c));
                cat.words[l] = c;
                cat.letters[c] = l;
            }
    OpTable m;
    for (const auto& [l, c] : cat.words) {
        Lin<int> d;
        for (const auto& [w, coef] : cobar.differential(c)) d.add(cat.letters.at(w), coef);
        if (!d.empty()) m[{l}] = d;
    }
    const int n = s.quiver.num_letters();
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const CobarWord& cx = cat.words[x];
            const CobarWord& cy = cat.words[y];
            if (s.quiver.letter(x).tgt != s.quiver.letter(y).src) continue;
            if (cobar.total_letters(cx) + cobar.total_letters(cy) > top) continue;
            m[{x, y}].add(cat.letters.at(cobar.compose(cy, cx)), Elem::one(s.ring));
        }
    s.set_unshifted(m);
    return cat;
}

std::optional<std::pair<CobarWord, CobarChain>> check_cobar_d2(const Cobar& cobar, int max_letters) {
    const int top = letter_bound(cobar, max_letters);
    auto tuples = object_tuples(cobar);
    for (const auto& a : tuples)
        for (const auto& b : tuples)
            for (const CobarWord& c : cobar.basis_up_to(a, b, top)) {
                CobarChain dd = cobar.differential(cobar.differential(c));
                if (!dd.empty()) return std::make_pair(c, dd);
            }
    return std::nullopt;
}

EtaResult eta(const StructurePtr& a, int max_len) {
    Cobar cobar({a});
    const int top = letter_bound(cobar, max_len);
    auto cat = std::make_shared<CobarCategory>(cobar_category(cobar, top));
    EtaResult res;
    res.target = cat;
    Functor& f = res.functor;
    f.source = a;
    f.target = StructurePtr(cat, &cat->structure);
    for (int o = 0; o < a->quiver.num_objects(); ++o) f.obj_map.push_back(o);
    f.max_arity = top;
    for (int n = 1; n <= top; ++n)
        for (const Word& w : a->quiver.words(n)) f.comps[w].add(cat->letters.at(cobar.single(w)), Elem::one(a->ring));
    res.report = check_functor(f, top);
    return res;
}

// ---------------------------------------------------------------- split units

void check_witness(const Structure& a, const std::map<int, Lin<int>>& units, const SplitUnitWitness& w) {
    const Quiver& q = a.quiver;
    for (int o = 0; o < q.num_objects(); ++o) {
        auto it = w.retraction.find(o);
        if (it == w.retraction.end())
            throw Error("SplitUnitsRequired", "no retraction for object " + q.object_name(o));
        for (const auto& [l, c] : it->second) {
            const Letter& L = q.letter(l);
            if (L.src != o || L.tgt != o) throw Error("SchemaError", "retraction entry outside the endomorphisms");
            if (L.deg != 0) throw Error("SplitUnitsRequired", "retraction nonzero outside degree 0");
        }
        auto u = units.find(o);
        if (u == units.end()) throw Error("NotUnital", "no strict unit at " + q.object_name(o));
        Elem pu = Elem::zero(a.ring);
        for (const auto& [l, c] : u->second) pu += c * it->second.coeff(l, a.ring);
        if (!pu.is_one())
            throw Error("SplitUnitsRequired", "retraction does not send id_" + q.object_name(o) + " to 1");
    }
}

AdaptedBasis adapt_basis(const Structure& a, const SplitUnitWitness& w) {
    const Quiver& q = a.quiver;
    const Ring r = a.ring;
    auto units = strict_units_of(a);
    check_witness(a, units, w);
    AdaptedBasis out;
    for (int l = 0; l < q.num_letters(); ++l) {
        out.to_adapted[l].add(l, Elem::one(r));
        out.to_old[l].add(l, Elem::one(r));
    }
    for (int o = 0; o < q.num_objects(); ++o) {
        const Lin<int>& e = units.at(o);
        const Lin<int>& p = w.retraction.at(o);
        int u = -1;
        for (const auto& [l, c] : e)
            if (c.is_unit()) {
                u = l;
                break;
            }
        if (u < 0) throw Error("SplitUnitsRequired", "unit at " + q.object_name(o) + " is not part of a basis");
        const Elem au_inv = e.coeff(u, r).inv();
        out.unit_letter[o] = u;
        out.to_old[u] = e;
        for (int f : q.hom(o, o)) {
            if (f == u) continue;
            Elem pf = p.coeff(f, r);
            Lin<int> old;
            old.add(f, Elem::one(r));
            old.add(e, -pf);
            out.to_old[f] = old;
            Lin<int> ad;
            ad.add(f, Elem::one(r));
            ad.add(u, pf);
            out.to_adapted[f] = ad;
        }
        Lin<int> uu;
        uu.add(u, p.coeff(u, r));
        for (int f : q.hom(o, o))
            if (f != u) uu.add(f, -(au_inv * e.coeff(f, r)));
        out.to_adapted[u] = uu;
    }
    Structure& s = out.structure;
    s = a;
    s.ops.clear();
    s.units.clear();
    for (const auto& [o, u] : out.unit_letter) s.units[o] = u;
    std::set<int> arities;
    for (const auto& [wd, lin] : a.ops) arities.insert(static_cast<int>(wd.size()));
    for (int n : arities)
        for (const Word& wd : q.words(n)) {
            std::vector<Lin<int>> parts;
            for (int l : wd) parts.push_back(out.to_old.at(l));
            Lin<int> old = apply_table(a.ops, tensor_product(r, parts));
            Lin<int> res;
            for (const auto& [l, c] : old) res.add(out.to_adapted.at(l), c);
            if (!res.empty()) s.ops[wd] = res;
        }
    return out;
}

StrictQuotient::StrictQuotient(const StructurePtr& a, const SplitUnitWitness& w, int max_letters)
    : base_(a),
      adapted_(adapt_basis(*a, w)),
      cobar_({std::make_shared<Structure>(adapted_.structure)}),
      max_letters_(std::min(max_letters, a->bound())) {}

bool StrictQuotient::is_unit(int letter) const {
    const Letter& L = adapted_.structure.quiver.letter(letter);
    auto it = adapted_.unit_letter.find(L.src);
    return L.src == L.tgt && it != adapted_.unit_letter.end() && it->second == letter;
}

CobarChain StrictQuotient::reduce(const CobarWord& c) const {
    CobarChain out;
    CobarWord kept{c.source, {}};
    for (const Factor& f : c.factors) {
        const Word& w = f.parts[0];
        bool has_unit = std::any_of(w.begin(), w.end(), [&](int l) { return is_unit(l); });
        if (!has_unit) {
            kept.factors.push_back(f);
        } else if (w.size() > 1) {
            return out;
        }
    }
    if (kept.factors.empty()) kept.factors.push_back(Factor{{{adapted_.unit_letter.at(c.source[0])}}});
    out.add(kept, Elem::one(cobar_.ring()));
    return out;
}

CobarChain StrictQuotient::reduce(const CobarChain& x) const {
    CobarChain out;
    for (const auto& [w, c] : x) out.add(reduce(w), c);
    return out;
}

bool StrictQuotient::is_normal(const CobarWord& c) const {
    CobarChain r = reduce(c);
    return r.size() == 1 && r.begin()->first == c;
}

const std::vector<CobarWord>& StrictQuotient::full_basis(int src, int tgt) const {
    auto it = full_.find({src, tgt});
    if (it == full_.end())
        it = full_.emplace(std::make_pair(src, tgt), cobar_.basis_up_to({src}, {tgt}, max_letters_)).first;
    return it->second;
}

const std::vector<CobarWord>& StrictQuotient::normal_forms(int src, int tgt) const {
    auto it = normal_.find({src, tgt});
    if (it == normal_.end()) {
        std::vector<CobarWord> nf;
        for (const CobarWord& c : full_basis(src, tgt))
            if (is_normal(c)) nf.push_back(c);
        it = normal_.emplace(std::make_pair(src, tgt), nf).first;
    }
    return it->second;
}

std::vector<CobarChain> StrictQuotient::generators_insertion(int src, int tgt) const {
    std::vector<CobarChain> out;
    const Elem one = Elem::one(cobar_.ring());
    for (const CobarWord& c : cobar_.basis_up_to({src}, {tgt}, max_letters_ - 1)) {
        std::vector<int> objs{src};
        for (const Factor& f : c.factors) objs.push_back(cobar_.factor_target(f, {objs.back()})[0]);
        for (std::size_t i = 0; i <= c.factors.size(); ++i) {
            CobarWord ins = c;
            ins.factors.insert(ins.factors.begin() + static_cast<long>(i),
                               Factor{{{adapted_.unit_letter.at(objs[i])}}});
            CobarChain g;
            g.add(c, one);
            g.add(ins, -one);
            out.push_back(g);
        }
    }
    return out;
}

std::vector<CobarChain> StrictQuotient::generators_unit_factor(int src, int tgt) const {
    std::vector<CobarChain> out;
    for (const CobarWord& c : full_basis(src, tgt)) {
        bool hit = false;
        for (const Factor& f : c.factors) {
            const Word& w = f.parts[0];
            if (w.size() > 1 && std::any_of(w.begin(), w.end(), [&](int l) { return is_unit(l); })) hit = true;
        }
        if (hit) {
            CobarChain g;
            g.add(c, Elem::one(cobar_.ring()));
            out.push_back(g);
        }
    }
    return out;
}

CobarChain StrictQuotient::differential(const CobarWord& nf) const { return reduce(cobar_.differential(nf)); }

CobarChain StrictQuotient::to_adapted(const CobarWord& c) const {
    CobarChain out;
    out.add(CobarWord{c.source, {}}, Elem::one(cobar_.ring()));
    for (const Factor& f : c.factors) {
        std::vector<Lin<int>> parts;
        for (int l : f.parts[0]) parts.push_back(adapted_.to_adapted.at(l));
        Lin<Word> expanded = tensor_product(cobar_.ring(), parts);
        CobarChain next;
        for (const auto& [w, cw] : out)
            for (const auto& [u, cu] : expanded) {
                CobarWord x = w;
                x.factors.push_back(Factor{{u}});
                next.add(x, cw * cu);
            }
        out = next;
    }
    return out;
}

CobarChain split_map_u(const Cobar& cobar, const SplitUnitWitness& w, const CobarWord& c) {
    if (cobar.variables() != 1) throw Error("SchemaError", "split map is defined for one variable");
    const Structure& a = cobar.var(0);
    const Quiver& q = a.quiver;
    const Ring r = a.ring;
    std::vector<int> deletable;
    for (std::size_t i = 0; i < c.factors.size(); ++i) {
        const Word& f = c.factors[i].parts[0];
        if (f.size() == 1 && q.letter(f[0]).src == q.letter(f[0]).tgt) deletable.push_back(static_cast<int>(i));
    }
    CobarChain out;
    if (deletable.empty()) return out;
    std::map<int, Lin<int>> units;
    const int k = static_cast<int>(deletable.size());
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        Elem coef = Elem::one(r).signed_by(parity_sign(__builtin_popcount(mask) - 1));
        std::vector<bool> drop(c.factors.size(), false);
        for (int b = 0; b < k; ++b)
            if (mask & (1u << b)) {
                int i = deletable[b];
                drop[i] = true;
                int l = c.factors[i].parts[0][0];
                auto it = w.retraction.find(q.letter(l).src);
                if (it == w.retraction.end())
                    throw Error("SplitUnitsRequired", "no retraction for " + q.object_name(q.letter(l).src));
                coef *= it->second.coeff(l, r);
            }
        if (coef.is_zero()) continue;
        CobarWord rest{c.source, {}};
        for (std::size_t i = 0; i < c.factors.size(); ++i)
            if (!drop[i]) rest.factors.push_back(c.factors[i]);
        if (!rest.factors.empty()) {
            out.add(rest, coef);
            continue;
        }
        if (units.empty()) units = strict_units_of(a);
        for (const auto& [l, cl] : units.at(c.source[0])) out.add(CobarWord{c.source, {Factor{{{l}}}}}, coef * cl);
    }
    return out;
}

SparseMatrix chain_matrix(const Ring& r, const std::vector<CobarWord>& basis, const std::vector<CobarChain>& chains) {
    std::map<CobarWord, int> index;
    for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<int>(i);
    SparseMatrix m(r, static_cast<int>(basis.size()), static_cast<int>(chains.size()));
    for (std::size_t j = 0; j < chains.size(); ++j)
        for (const auto& [w, c] : chains[j]) {
            auto it = index.find(w);
            if (it == index.end()) throw Error("InternalError", "chain leaves the basis window");
            m.add(it->second, static_cast<int>(j), c);
        }
    return m;
}

QuotientRanks quotient_ranks(const StrictQuotient& q, int src, int tgt) {
    QuotientRanks out;
    const auto& full = q.full_basis(src, tgt);
    out.full = static_cast<int>(full.size());
    out.normal = static_cast<int>(q.normal_forms(src, tgt).size());
    std::vector<CobarChain> gens = q.generators_insertion(src, tgt);
    auto more = q.generators_unit_factor(src, tgt);
    gens.insert(gens.end(), more.begin(), more.end());
    out.generators = gens.empty() ? 0 : rank_kernel(chain_matrix(q.cobar().ring(), full, gens)).rank;
    return out;
}

}  // namespace ainfty
