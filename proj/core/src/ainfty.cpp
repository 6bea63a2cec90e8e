#include "ainfty/ainfty.hpp"

#include <algorithm>
#include <functional>
#include <mutex>

namespace ainfty {

// ---------------------------------------------------------------- quiver

int Quiver::add_object(const std::string& name) {
    if (find_object(name) >= 0) throw Error("SchemaError", "duplicate object '" + name + "'");
    objects_.push_back(name);
    return num_objects() - 1;
}

int Quiver::add_letter(const std::string& name, int src, int tgt, int deg) {
    if (src < 0 || src >= num_objects() || tgt < 0 || tgt >= num_objects())
        throw Error("SchemaError", "letter '" + name + "' has an unknown endpoint");
    if (find_letter(src, tgt, name) >= 0)
        throw Error("SchemaError", "duplicate basis name '" + name + "' in " + objects_[src] + "|" + objects_[tgt]);
    letters_.push_back({name, src, tgt, deg});
    int id = num_letters() - 1;
    hom_[{src, tgt}].push_back(id);
    return id;
}

int Quiver::find_object(const std::string& name) const {
    for (int i = 0; i < num_objects(); ++i)
        if (objects_[i] == name) return i;
    return -1;
}

int Quiver::object(const std::string& name) const {
    int o = find_object(name);
    if (o < 0) throw Error("SchemaError", "unknown object '" + name + "'");
    return o;
}

int Quiver::find_letter(int src, int tgt, const std::string& name) const {
    for (int l : hom(src, tgt))
        if (letters_[l].name == name) return l;
    return -1;
}

int Quiver::letter(int src, int tgt, const std::string& name) const {
    int l = find_letter(src, tgt, name);
    if (l < 0)
        throw Error("SchemaError",
                    "unknown basis element '" + name + "' in " + objects_.at(src) + "|" + objects_.at(tgt));
    return l;
}

const std::vector<int>& Quiver::hom(int src, int tgt) const {
    static const std::vector<int> empty;
    auto it = hom_.find({src, tgt});
    return it == hom_.end() ? empty : it->second;
}

GradedModule Quiver::hom_module(int src, int tgt) const {
    GradedModule m;
    for (int l : hom(src, tgt)) m.basis.push_back({letters_[l].name, letters_[l].deg});
    return m;
}

bool Quiver::composable(const Word& w) const {
    if (w.empty()) return false;
    for (int l : w)
        if (l < 0 || l >= num_letters()) return false;
    for (std::size_t k = 1; k < w.size(); ++k)
        if (letters_[w[k - 1]].tgt != letters_[w[k]].src) return false;
    return true;
}

int Quiver::degree(const Word& w) const {
    int d = 0;
    for (int l : w) d += letters_[l].deg;
    return d;
}

std::vector<int> Quiver::degrees(const Word& w) const {
    std::vector<int> out;
    out.reserve(w.size());
    for (int l : w) out.push_back(letters_[l].deg);
    return out;
}

std::vector<Word> Quiver::words(int n, int src, int tgt) const {
    std::vector<Word> out;
    if (n <= 0) return out;
    Word cur;
    std::function<void()> rec = [&] {
        if (static_cast<int>(cur.size()) == n) {
            if (tgt < 0 || letters_[cur.back()].tgt == tgt) out.push_back(cur);
            return;
        }
        for (int l = 0; l < num_letters(); ++l) {
            if (cur.empty() ? (src >= 0 && letters_[l].src != src) : letters_[l].src != letters_[cur.back()].tgt)
                continue;
            cur.push_back(l);
            rec();
            cur.pop_back();
        }
    };
    rec();
    return out;
}

std::vector<Word> Quiver::words(int n) const { return words(n, -1, -1); }

bool Quiver::operator==(const Quiver& o) const {
    if (objects_ != o.objects_ || letters_.size() != o.letters_.size()) return false;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        const Letter &a = letters_[i], &b = o.letters_[i];
        if (a.name != b.name || a.src != b.src || a.tgt != b.tgt || a.deg != b.deg) return false;
    }
    return true;
}

// ---------------------------------------------------------------- tables

OpTable shift_table(const Quiver& src, const OpTable& t, int base_degree, ShiftDirection) {
    OpTable out;
    for (const auto& [w, lin] : t) {
        long n = base_degree - static_cast<long>(w.size());
        out.emplace(w, parity_sign(shift_exponent(n, src.degrees(w))) > 0 ? lin : lin.negated());
    }
    return out;
}

Lin<Word> tensor_product(const Ring& r, const std::vector<Lin<int>>& parts) {
    std::map<Word, Elem> cur{{Word{}, Elem::one(r)}};
    for (const auto& part : parts) {
        std::map<Word, Elem> next;
        for (const auto& [w, c] : cur)
            for (const auto& [y, d] : part) {
                Word v = w;
                v.push_back(y);
                next.emplace(std::move(v), c * d);
            }
        cur.swap(next);
        if (cur.empty()) break;
    }
    Lin<Word> out;
    for (const auto& [w, c] : cur) out.add(w, c);
    return out;
}

Lin<int> apply_table(const OpTable& t, const Lin<Word>& x) {
    Lin<int> out;
    for (const auto& [w, c] : x) {
        auto it = t.find(w);
        if (it != t.end()) out.add(it->second, c);
    }
    return out;
}

const std::vector<std::vector<int>>& compositions(int n) {
    static std::mutex lock;
    static std::map<int, std::vector<std::vector<int>>> cache;
    std::lock_guard<std::mutex> guard(lock);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int left) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (int s = 1; s <= left; ++s) {
            cur.push_back(s);
            rec(left - s);
            cur.pop_back();
        }
    };
    rec(n);
    return cache.emplace(n, std::move(out)).first->second;
}

namespace {

const Lin<int>* find_op(const OpTable& t, const Word& w) {
    auto it = t.find(w);
    return it == t.end() ? nullptr : &it->second;
}

Word slice(const Word& w, int from, int len) { return Word(w.begin() + from, w.begin() + from + len); }

Word splice(const Word& w, int from, int len, int y) {
    Word out(w.begin(), w.begin() + from);
    out.push_back(y);
    out.insert(out.end(), w.begin() + from + len, w.end());
    return out;
}

long deg_sum(const Quiver& q, const Word& w, int from, int to) {
    long s = 0;
    for (int k = from; k < to; ++k) s += q.letter(w[k]).deg;
    return s;
}

// Longest input word with a nonzero operation; decompositions into more blocks contribute nothing.
std::size_t widest(const OpTable& t) {
    std::size_t k = 0;
    for (const auto& [w, c] : t) k = std::max(k, w.size());
    return k;
}

long shifted_sum(const Quiver& q, const Word& w, int from, int to) {
    long s = 0;
    for (int k = from; k < to; ++k) s += q.letter(w[k]).deg + 1;
    return s;
}

void check_ring(const Ring& r, const Lin<int>& lin, const char* what) {
    for (const auto& [k, c] : lin)
        if (c.ring() != r) throw Error("RingMismatch", std::string(what) + " has coefficients over " + c.ring().name());
}

Ring ring_of(const Prenat& t) { return t.source()->ring; }

}  // namespace

// ---------------------------------------------------------------- data types

const Lin<int>* Structure::op(const Word& w) const { return find_op(ops, w); }

OpTable Structure::unshifted() const { return shift_table(quiver, ops, 2, ShiftDirection::ToUnshifted); }

void Structure::set_unshifted(const OpTable& m) { ops = shift_table(quiver, m, 2, ShiftDirection::ToShifted); }

void Structure::set_unshifted_entry(const Word& in, int out, const Elem& c) {
    long n = 2 - static_cast<long>(in.size());
    ops[in].add(out, c.signed_by(parity_sign(shift_exponent(n, quiver.degrees(in)))));
    if (ops[in].empty()) ops.erase(in);
}

void Structure::validate() const {
    if (max_arity < 1) throw Error("SchemaError", "max_arity must be at least 1");
    for (const auto& [w, lin] : ops) {
        if (!quiver.composable(w)) throw Error("SchemaError", "operation input is not a composable word");
        if (static_cast<int>(w.size()) > max_arity) throw Error("SchemaError", "operation above max_arity");
        if (dg && w.size() > 2)
            throw Error("NotDg", "dg structure with an operation of arity " + std::to_string(w.size()));
        check_ring(ring, lin, "operation");
        int s = quiver.src(w), t = quiver.tgt(w);
        int want = quiver.degree(w) + 2 - static_cast<int>(w.size());
        for (const auto& [y, c] : lin) {
            const Letter& l = quiver.letter(y);
            if (l.src != s || l.tgt != t)
                throw Error("SchemaError", "operation output '" + l.name + "' in the wrong hom");
            if (l.deg != want)
                throw Error("DegreeMismatch", "operation of arity " + std::to_string(w.size()) + " into '" + l.name +
                                                  "' has the wrong degree");
        }
    }
    for (const auto& [o, l] : units) {
        const Letter& u = quiver.letter(l);
        if (u.src != o || u.tgt != o || u.deg != 0)
            throw Error("SchemaError", "declared unit is not a degree-0 endomorphism");
    }
}

bool Structure::is_dg() const {
    for (const auto& [w, lin] : ops)
        if (w.size() > 2) return false;
    return true;
}

OpTable Functor::unshifted() const { return shift_table(source->quiver, comps, 1, ShiftDirection::ToUnshifted); }

void Functor::set_unshifted(const OpTable& m) { comps = shift_table(source->quiver, m, 1, ShiftDirection::ToShifted); }

void Functor::validate() const {
    if (!source || !target) throw Error("SchemaError", "functor without source or target");
    if (source->ring != target->ring) throw Error("RingMismatch", "functor between structures over different rings");
    if (static_cast<int>(obj_map.size()) != source->quiver.num_objects())
        throw Error("SchemaError", "object map does not cover the source objects");
    for (int o : obj_map)
        if (o < 0 || o >= target->quiver.num_objects()) throw Error("SchemaError", "object map into unknown object");
    const Quiver &qa = source->quiver, &qb = target->quiver;
    for (const auto& [w, lin] : comps) {
        if (!qa.composable(w)) throw Error("SchemaError", "functor input is not a composable word");
        if (static_cast<int>(w.size()) > max_arity) throw Error("SchemaError", "functor component above max_arity");
        if (strict && w.size() > 1) throw Error("SchemaError", "strict functor with a higher component");
        check_ring(source->ring, lin, "functor component");
        int s = obj_map[qa.src(w)], t = obj_map[qa.tgt(w)];
        int want = qa.degree(w) + 1 - static_cast<int>(w.size());
        for (const auto& [y, c] : lin) {
            const Letter& l = qb.letter(y);
            if (l.src != s || l.tgt != t)
                throw Error("SchemaError", "functor output '" + l.name + "' in the wrong hom");
            if (l.deg != want)
                throw Error("DegreeMismatch",
                            "functor component of arity " + std::to_string(w.size()) + " has the wrong degree");
        }
    }
}

OpTable Prenat::unshifted() const { return shift_table(source()->quiver, comps, degree, ShiftDirection::ToUnshifted); }

std::map<int, Lin<int>> Prenat::unshifted_zero() const {
    std::map<int, Lin<int>> out;
    int s = parity_sign(shift_exponent(degree, {}));
    for (const auto& [o, lin] : zero) out.emplace(o, s > 0 ? lin : lin.negated());
    return out;
}

void Prenat::set_unshifted(const OpTable& m, const std::map<int, Lin<int>>& zero_components) {
    comps = shift_table(source()->quiver, m, degree, ShiftDirection::ToShifted);
    zero.clear();
    int s = parity_sign(shift_exponent(degree, {}));
    for (const auto& [o, lin] : zero_components)
        if (!lin.empty()) zero.emplace(o, s > 0 ? lin : lin.negated());
}

void Prenat::validate() const {
    if (!from || !to) throw Error("SchemaError", "prenatural transformation without functors");
    if (from->source != to->source && !(from->source->quiver == to->source->quiver))
        throw Error("SchemaError", "functors with different sources");
    if (from->target != to->target && !(from->target->quiver == to->target->quiver))
        throw Error("SchemaError", "functors with different targets");
    const Quiver &qa = source()->quiver, &qb = target()->quiver;
    for (const auto& [o, lin] : zero) {
        check_ring(source()->ring, lin, "arity-0 component");
        for (const auto& [y, c] : lin) {
            const Letter& l = qb.letter(y);
            if (l.src != from->obj_map[o] || l.tgt != to->obj_map[o])
                throw Error("SchemaError", "arity-0 component in the wrong hom");
            if (l.deg != degree) throw Error("DegreeMismatch", "arity-0 component of the wrong degree");
        }
    }
    for (const auto& [w, lin] : comps) {
        if (!qa.composable(w)) throw Error("SchemaError", "prenatural input is not a composable word");
        if (static_cast<int>(w.size()) > max_arity) throw Error("SchemaError", "component above max_arity");
        check_ring(source()->ring, lin, "prenatural component");
        int s = from->obj_map[qa.src(w)], t = to->obj_map[qa.tgt(w)];
        int want = qa.degree(w) + degree - static_cast<int>(w.size());
        for (const auto& [y, c] : lin) {
            const Letter& l = qb.letter(y);
            if (l.src != s || l.tgt != t)
                throw Error("SchemaError", "component output '" + l.name + "' in the wrong hom");
            if (l.deg != want) throw Error("DegreeMismatch", "prenatural component of the wrong degree");
        }
    }
}

bool Prenat::is_zero() const {
    for (const auto& [o, lin] : zero)
        if (!lin.empty()) return false;
    for (const auto& [w, lin] : comps)
        if (!lin.empty()) return false;
    return true;
}

Prenat zero_prenat(const std::shared_ptr<const Functor>& from, const std::shared_ptr<const Functor>& to, int degree,
                   int max_arity) {
    Prenat t;
    t.from = from;
    t.to = to;
    t.degree = degree;
    t.max_arity = max_arity;
    return t;
}

// ---------------------------------------------------------------- associativity relations

Lin<int> stasheff_residual(const Structure& a, const OpTable& m, const Word& w) {
    const Quiver& q = a.quiver;
    const int n = static_cast<int>(w.size());
    Lin<int> r;
    for (int k = 1; k <= n; ++k)
        for (int i = 0; i + k <= n; ++i) {
            const Lin<int>* inner = find_op(m, slice(w, i, k));
            if (!inner) continue;
            long e = i + static_cast<long>(k) * (n - i - k) + (2L - k) * deg_sum(q, w, i + k, n);
            for (const auto& [y, c] : *inner)
                if (const Lin<int>* outer = find_op(m, splice(w, i, k, y))) r.add(*outer, c.signed_by(parity_sign(e)));
        }
    return r;
}

Lin<int> stasheff_residual_shifted(const Structure& a, const Word& w) {
    const Quiver& q = a.quiver;
    const int n = static_cast<int>(w.size());
    Lin<int> r;
    for (int k = 1; k <= n; ++k)
        for (int i = 0; i + k <= n; ++i) {
            const Lin<int>* inner = a.op(slice(w, i, k));
            if (!inner) continue;
            int s = parity_sign(shifted_sum(q, w, i + k, n));
            for (const auto& [y, c] : *inner)
                if (const Lin<int>* outer = a.op(splice(w, i, k, y))) r.add(*outer, c.signed_by(s));
        }
    return r;
}

namespace {

template <class Residual>
Report scan_words(const Quiver& q, int through, Residual&& residual) {
    Report rep;
    for (int n = 1; n <= through; ++n) {
        for (const Word& w : q.words(n)) {
            Lin<int> r = residual(w);
            if (!r.empty()) {
                rep.ok = false;
                rep.arity = n;
                rep.word = w;
                rep.residual = r;
                rep.checked_through = n - 1;
                return rep;
            }
        }
        rep.checked_through = n;
    }
    return rep;
}

}  // namespace

Report check_stasheff(const Structure& a, int up_to) {
    OpTable m = a.unshifted();
    return scan_words(a.quiver, std::min(up_to, a.bound()), [&](const Word& w) { return stasheff_residual(a, m, w); });
}

Report check_stasheff_shifted(const Structure& a, int up_to) {
    return scan_words(a.quiver, std::min(up_to, a.bound()),
                      [&](const Word& w) { return stasheff_residual_shifted(a, w); });
}

// ---------------------------------------------------------------- functor relations

namespace {

int functor_bound(const Functor& f, int up_to) {
    return std::min({up_to, f.bound(), f.source->bound(), f.target->bound()});
}

Lin<int> functor_residual(const Functor& f, const OpTable& fm, const OpTable& am, const OpTable& bm, const Word& w) {
    const Quiver& q = f.source->quiver;
    const Ring& ring = f.source->ring;
    const int n = static_cast<int>(w.size());
    Lin<int> r;
    for (int k = 1; k <= n; ++k)
        for (int i = 0; i + k <= n; ++i) {
            const Lin<int>* inner = find_op(am, slice(w, i, k));
            if (!inner) continue;
            long e = i + static_cast<long>(k) * (n - i - k) + (2L - k) * deg_sum(q, w, i + k, n);
            for (const auto& [y, c] : *inner)
                if (const Lin<int>* outer = find_op(fm, splice(w, i, k, y))) r.add(*outer, c.signed_by(parity_sign(e)));
        }
    for (const auto& sizes : compositions(n)) {
        std::vector<Lin<int>> parts;
        long e = 0;
        int pos = 0;
        bool zero = false;
        for (std::size_t t = 0; t < sizes.size() && !zero; ++t) {
            const Lin<int>* comp = find_op(fm, slice(w, pos, sizes[t]));
            if (!comp) zero = true;
            else parts.push_back(*comp);
            pos += sizes[t];
            e += (1L - sizes[t]) * deg_sum(q, w, pos, n);
            for (std::size_t u = t + 1; u < sizes.size(); ++u) e += (1L - sizes[t]) * sizes[u];
        }
        if (zero) continue;
        r.add(apply_table(bm, tensor_product(ring, parts)), Elem(ring, -parity_sign(e)));
    }
    return r;
}

Lin<int> functor_residual_shifted(const Functor& f, const Word& w) {
    const Quiver& q = f.source->quiver;
    const Ring& ring = f.source->ring;
    const int n = static_cast<int>(w.size());
    Lin<int> r;
    for (int k = 1; k <= n; ++k)
        for (int i = 0; i + k <= n; ++i) {
            const Lin<int>* inner = f.source->op(slice(w, i, k));
            if (!inner) continue;
            int s = parity_sign(shifted_sum(q, w, i + k, n));
            for (const auto& [y, c] : *inner)
                if (const Lin<int>* outer = find_op(f.comps, splice(w, i, k, y))) r.add(*outer, c.signed_by(s));
        }
    for (const auto& sizes : compositions(n)) {
        std::vector<Lin<int>> parts;
        int pos = 0;
        bool zero = false;
        for (int s : sizes) {
            const Lin<int>* comp = find_op(f.comps, slice(w, pos, s));
            if (!comp) {
                zero = true;
                break;
            }
            parts.push_back(*comp);
            pos += s;
        }
        if (zero) continue;
        r.add(apply_table(f.target->ops, tensor_product(ring, parts)), Elem(ring, -1));
    }
    return r;
}

}  // namespace

Report check_functor(const Functor& f, int up_to) {
    f.validate();
    OpTable fm = f.unshifted(), am = f.source->unshifted(), bm = f.target->unshifted();
    return scan_words(f.source->quiver, functor_bound(f, up_to),
                      [&](const Word& w) { return functor_residual(f, fm, am, bm, w); });
}

Report check_functor_shifted(const Functor& f, int up_to) {
    f.validate();
    return scan_words(f.source->quiver, functor_bound(f, up_to),
                      [&](const Word& w) { return functor_residual_shifted(f, w); });
}

// ---------------------------------------------------------------- m1 on prenatural transformations

namespace {

struct NatContext {
    const Prenat& t;
    const Quiver& q;
    Ring ring;
    int p;
    OpTable theta, fm, gm, am, bm;
    std::map<int, Lin<int>> theta0;
    std::size_t width;

    explicit NatContext(const Prenat& th)
        : t(th),
          q(th.source()->quiver),
          ring(ring_of(th)),
          p(th.degree),
          theta(th.unshifted()),
          fm(th.from->unshifted()),
          gm(th.to->unshifted()),
          am(th.source()->unshifted()),
          bm(th.target()->unshifted()),
          theta0(th.unshifted_zero()),
          width(widest(th.target()->ops)) {}

    const Lin<int>* theta_at(const Word& w, int object) const {
        if (w.empty()) {
            auto it = theta0.find(object);
            return it == theta0.end() ? nullptr : &it->second;
        }
        return find_op(theta, w);
    }

    // Left-hand side of the naturality relation on w (object used when w is empty).
    Lin<int> component(const Word& w, int object) const {
        const int n = static_cast<int>(w.size());
        Lin<int> out;
        for (int k = 1; k <= n; ++k)
            for (int i = 0; i + k <= n; ++i) {
                const Lin<int>* inner = find_op(am, slice(w, i, k));
                if (!inner) continue;
                long e = i + static_cast<long>(k) * (n - i - k) + (2L - k) * deg_sum(q, w, i + k, n);
                for (const auto& [y, c] : *inner)
                    if (const Lin<int>* outer = find_op(theta, splice(w, i, k, y)))
                        out.add(*outer, c.signed_by(parity_sign(e)));
            }
        for (int a = 0; a <= n; ++a)
            for (const auto& fs : compositions(a))
                for (int k = 0; a + k <= n; ++k)
                    for (const auto& gs : compositions(n - a - k)) {
                        if (fs.size() + 1 + gs.size() > width) continue;
                        const long r = static_cast<long>(fs.size()), s = static_cast<long>(gs.size());
                        long e = p + r * (p - 1);
                        std::vector<Lin<int>> parts;
                        bool zero = false;
                        int pos = 0, used = 0;
                        for (long t = 0; t < r && !zero; ++t) {
                            e += (1L - fs[t]) * (n - used);
                            used += fs[t];
                            const Lin<int>* c = find_op(fm, slice(w, pos, fs[t]));
                            if (!c) zero = true;
                            else parts.push_back(*c);
                            pos += fs[t];
                            e += (1L - fs[t]) * deg_sum(q, w, pos, n);
                        }
                        if (zero) continue;
                        int obj = n == 0 ? object : (pos == 0 ? q.letter(w[0]).src : q.letter(w[pos - 1]).tgt);
                        const Lin<int>* th = theta_at(slice(w, pos, k), obj);
                        if (!th) continue;
                        parts.push_back(*th);
                        pos += k;
                        e += static_cast<long>(p - k) * deg_sum(q, w, pos, n);
                        long jsum = 0;
                        for (int j : gs) jsum += j;
                        e += static_cast<long>(p - k) * jsum;
                        for (long t = 0; t < s && !zero; ++t) {
                            for (long u = t + 1; u < s; ++u) e += (1L - gs[t]) * gs[u];
                            const Lin<int>* c = find_op(gm, slice(w, pos, gs[t]));
                            if (!c) zero = true;
                            else parts.push_back(*c);
                            pos += gs[t];
                            e += (1L - gs[t]) * deg_sum(q, w, pos, n);
                        }
                        if (zero) continue;
                        out.add(apply_table(bm, tensor_product(ring, parts)), Elem(ring, parity_sign(e)));
                    }
        return out;
    }
};

}  // namespace

int m1_bound(const Prenat& t) {
    int b = std::min({t.max_arity, t.from->bound(), t.to->bound(), t.source()->bound()});
    int tb = t.target()->bound();
    return std::min(b, tb == Structure::kUnbounded ? tb : tb - 1);
}

Prenat m1_prenat(const Prenat& t) {
    t.validate();
    NatContext ctx(t);
    Prenat out = zero_prenat(t.from, t.to, t.degree + 1, m1_bound(t));
    OpTable comps;
    std::map<int, Lin<int>> zero;
    for (int o = 0; o < ctx.q.num_objects(); ++o) {
        Lin<int> c = ctx.component({}, o);
        if (!c.empty()) zero.emplace(o, c);
    }
    for (int n = 1; n <= out.max_arity; ++n)
        for (const Word& w : ctx.q.words(n)) {
            Lin<int> c = ctx.component(w, -1);
            if (!c.empty()) comps.emplace(w, c);
        }
    out.set_unshifted(comps, zero);
    return out;
}

Prenat m1_prenat_bar(const Prenat& t) {
    t.validate();
    const Quiver& q = t.source()->quiver;
    const Ring ring = ring_of(t);
    const int p = t.degree;
    Prenat out = zero_prenat(t.from, t.to, p + 1, m1_bound(t));
    const std::size_t width = widest(t.target()->ops);
    auto theta_at = [&](const Word& w, int object) -> const Lin<int>* {
        if (w.empty()) {
            auto it = t.zero.find(object);
            return it == t.zero.end() ? nullptr : &it->second;
        }
        return find_op(t.comps, w);
    };
    auto component = [&](const Word& w, int object) {
        const int n = static_cast<int>(w.size());
        Lin<int> res;
        for (int k = 1; k <= n; ++k)
            for (int i = 0; i + k <= n; ++i) {
                const Lin<int>* inner = t.source()->op(slice(w, i, k));
                if (!inner) continue;
                long e = shifted_sum(q, w, i + k, n);
                for (const auto& [y, c] : *inner)
                    if (const Lin<int>* outer = find_op(t.comps, splice(w, i, k, y)))
                        res.add(*outer, c.signed_by(parity_sign(e)));
            }
        for (int a = 0; a <= n; ++a)
            for (const auto& fs : compositions(a))
                for (int k = 0; a + k <= n; ++k)
                    for (const auto& gs : compositions(n - a - k)) {
                        if (fs.size() + 1 + gs.size() > width) continue;
                        std::vector<Lin<int>> parts;
                        bool zero = false;
                        int pos = 0;
                        for (int s : fs) {
                            const Lin<int>* c = find_op(t.from->comps, slice(w, pos, s));
                            if (!c) {
                                zero = true;
                                break;
                            }
                            parts.push_back(*c);
                            pos += s;
                        }
                        if (zero) continue;
                        int obj = n == 0 ? object : (pos == 0 ? q.letter(w[0]).src : q.letter(w[pos - 1]).tgt);
                        const Lin<int>* th = theta_at(slice(w, pos, k), obj);
                        if (!th) continue;
                        parts.push_back(*th);
                        pos += k;
                        long e = p + static_cast<long>(p - 1) * shifted_sum(q, w, pos, n);
                        for (int s : gs) {
                            const Lin<int>* c = find_op(t.to->comps, slice(w, pos, s));
                            if (!c) {
                                zero = true;
                                break;
                            }
                            parts.push_back(*c);
                            pos += s;
                        }
                        if (zero) continue;
                        res.add(apply_table(t.target()->ops, tensor_product(ring, parts)), Elem(ring, parity_sign(e)));
                    }
        return res;
    };
    for (int o = 0; o < q.num_objects(); ++o) {
        Lin<int> c = component({}, o);
        if (!c.empty()) out.zero.emplace(o, c);
    }
    for (int n = 1; n <= out.max_arity; ++n)
        for (const Word& w : q.words(n)) {
            Lin<int> c = component(w, -1);
            if (!c.empty()) out.comps.emplace(w, c);
        }
    return out;
}

Report check_natural(const Prenat& t, int up_to) {
    t.validate();
    NatContext ctx(t);
    Report rep;
    for (int o = 0; o < ctx.q.num_objects(); ++o) {
        Lin<int> c = ctx.component({}, o);
        if (!c.empty()) {
            rep.ok = false;
            rep.arity = 0;
            rep.object = o;
            rep.residual = c;
            return rep;
        }
    }
    const int through = std::min(up_to, m1_bound(t));
    Report rest = scan_words(ctx.q, through, [&](const Word& w) { return ctx.component(w, -1); });
    return rest;
}

// ---------------------------------------------------------------- functor operations

Functor identity_functor(const StructurePtr& a, int max_arity) {
    Functor f;
    f.source = a;
    f.target = a;
    f.max_arity = max_arity;
    f.strict = true;
    for (int o = 0; o < a->quiver.num_objects(); ++o) f.obj_map.push_back(o);
    for (int l = 0; l < a->quiver.num_letters(); ++l) f.comps[{l}].add(l, Elem::one(a->ring));
    return f;
}

Functor compose_functors(const Functor& g, const Functor& f) {
    if (f.target != g.source && !(f.target->quiver == g.source->quiver))
        throw Error("SchemaError", "functors are not composable");
    Functor out;
    out.source = f.source;
    out.target = g.target;
    out.strict = f.strict && g.strict;
    out.max_arity = std::min(f.bound(), g.bound());
    if (out.strict) out.max_arity = std::max(std::min(f.max_arity, g.max_arity), 1);
    for (int o : f.obj_map) out.obj_map.push_back(g.obj_map[o]);
    const Quiver& q = f.source->quiver;
    const Ring ring = f.source->ring;
    const int top = out.strict ? 1 : out.max_arity;
    for (int n = 1; n <= top; ++n)
        for (const Word& w : q.words(n)) {
            Lin<int> res;
            for (const auto& sizes : compositions(n)) {
                std::vector<Lin<int>> parts;
                int pos = 0;
                bool zero = false;
                for (int s : sizes) {
                    const Lin<int>* c = find_op(f.comps, slice(w, pos, s));
                    if (!c) {
                        zero = true;
                        break;
                    }
                    parts.push_back(*c);
                    pos += s;
                }
                if (!zero) res.add(apply_table(g.comps, tensor_product(ring, parts)));
            }
            if (!res.empty()) out.comps.emplace(w, res);
        }
    return out;
}

Report check_homotopy(const Functor& f, const Functor& g, const Prenat& theta) {
    Report rep;
    if (theta.degree != 0 || !theta.zero.empty()) {
        rep.ok = false;
        rep.detail = "homotopy must have degree 0 and vanishing arity-0 component";
        return rep;
    }
    if (f.obj_map != g.obj_map) {
        rep.ok = false;
        rep.detail = "functors differ on objects";
        return rep;
    }
    Prenat t = theta;
    t.from = std::make_shared<Functor>(f);
    t.to = std::make_shared<Functor>(g);
    NatContext ctx(t);
    OpTable fu = f.unshifted(), gu = g.unshifted();
    const int through = std::min({m1_bound(t), f.bound(), g.bound(), t.target()->bound()});
    return scan_words(ctx.q, through, [&](const Word& w) {
        Lin<int> r = ctx.component(w, -1);
        if (const Lin<int>* x = find_op(fu, w)) r.add(*x);
        if (const Lin<int>* x = find_op(gu, w)) r.add(*x, Elem(ctx.ring, -1));
        return r;
    });
}

std::pair<Functor, HomotopyCertificate> perturb_by_homotopy(const Functor& f, const Prenat& theta) {
    if (theta.degree != 0) throw Error("InvalidHomotopy", "homotopy must have degree 0");
    for (const auto& [o, lin] : theta.zero)
        if (!lin.empty()) throw Error("InvalidHomotopy", "homotopy must vanish in arity 0");
    auto from = std::make_shared<Functor>(f);
    auto to = std::make_shared<Functor>(f);
    to->strict = false;
    to->comps.clear();
    const int top = std::min({theta.max_arity, f.bound(), f.source->bound(), f.target->bound()});
    to->max_arity = top;

    Prenat t = theta;
    t.from = from;
    t.to = to;
    NatContext ctx(t);
    const Quiver& q = f.source->quiver;
    OpTable fu = f.unshifted();
    ctx.gm.clear();
    for (int n = 1; n <= top; ++n) {
        OpTable layer;
        for (const Word& w : q.words(n)) {
            Lin<int> c = ctx.component(w, -1);
            if (const Lin<int>* x = find_op(fu, w)) c.add(*x);
            if (!c.empty()) layer.emplace(w, c);
        }
        for (auto& [w, c] : layer) ctx.gm.emplace(w, c);
    }
    to->set_unshifted(ctx.gm);

    HomotopyCertificate cert;
    cert.theta = theta;
    cert.theta.from = from;
    cert.theta.to = to;
    cert.equation_holds = check_homotopy(f, *to, cert.theta).ok;
    if (!cert.equation_holds) throw Error("InternalError", "homotopy equation fails after perturbation");
    cert.functor_report = check_functor(*to, top);
    return {*to, cert};
}

}  // namespace ainfty
