#include "ainfty/examples.hpp"

#include <functional>

namespace ainfty::examples {

namespace {

long pick(std::mt19937_64& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

Elem nonzero(std::mt19937_64& rng, const Ring& r) {
    for (;;) {
        Elem e(r, pick(rng, -3, 3));
        if (!e.is_zero()) return e;
    }
}

Structure single_object(const Ring& r, const std::vector<std::pair<std::string, int>>& basis) {
    Structure s;
    s.ring = r;
    s.quiver.add_object("A");
    for (const auto& [n, d] : basis) s.quiver.add_letter(n, 0, 0, d);
    return s;
}

}  // namespace

Structure ground(const Ring& r) {
    Structure s = single_object(r, {{"1", 0}});
    s.dg = true;
    s.units[0] = 0;
    s.set_unshifted_entry({0, 0}, 0, Elem::one(r));
    return s;
}

Structure dual_numbers(const Ring& r) {
    Structure s = single_object(r, {{"1", 0}, {"eps", 0}});
    s.dg = true;
    s.units[0] = 0;
    const Elem one = Elem::one(r);
    s.set_unshifted_entry({0, 0}, 0, one);
    s.set_unshifted_entry({1, 0}, 1, one);
    s.set_unshifted_entry({0, 1}, 1, one);
    return s;
}

Structure m3_example(const Ring& r) {
    Structure s = single_object(r, {{"x", 1}, {"y", 2}});
    s.max_arity = 7;
    s.set_unshifted_entry({0, 0, 0}, 1, Elem::one(r));
    return s;
}

Structure nonassociative_example(const Ring& r) {
    Structure s = single_object(r, {{"a", 0}, {"b", 0}, {"c", 0}});
    s.dg = true;
    s.set_unshifted_entry({0, 0}, 1, Elem::one(r));
    s.set_unshifted_entry({1, 0}, 2, Elem::one(r));
    return s;
}

Complex contractible(const Ring& r) {
    Complex c{{"e0", "e1"}, {0, 1}, SparseMatrix(r, 2, 2)};
    c.d.set(1, 0, Elem::one(r));
    return c;
}

Complex times_two(const Ring& r) {
    Complex c{{"a", "b"}, {0, 1}, SparseMatrix(r, 2, 2)};
    c.d.set(1, 0, Elem(r, 2));
    return c;
}

Complex random_complex(std::mt19937_64& rng, const Ring& r, int dim, int dmin, int dmax) {
    // Direct sum of cells x -> y or single cycles, then a unitriangular change of basis.
    std::vector<int> degs;
    std::vector<std::pair<int, int>> arrows;
    while (static_cast<int>(degs.size()) < dim) {
        int d = static_cast<int>(pick(rng, dmin, dmax));
        if (static_cast<int>(degs.size()) + 2 <= dim && d < dmax && pick(rng, 0, 1)) {
            arrows.push_back({static_cast<int>(degs.size()), static_cast<int>(degs.size()) + 1});
            degs.push_back(d);
            degs.push_back(d + 1);
        } else {
            degs.push_back(d);
        }
    }
    SparseMatrix d0(r, dim, dim), p = SparseMatrix::identity(r, dim);
    for (auto [x, y] : arrows) d0.set(y, x, nonzero(rng, r));
    for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j)
            if (degs[i] == degs[j] && pick(rng, 0, 1)) p.set(i, j, Elem(r, pick(rng, -2, 2)));
    SparseMatrix nil = p - SparseMatrix::identity(r, dim), pinv = SparseMatrix::identity(r, dim), term = pinv;
    for (int k = 1; k < dim; ++k) {
        term = (term * nil).scaled(Elem(r, -1));
        pinv = pinv + term;
    }
    Complex c;
    for (int i = 0; i < dim; ++i) c.names.push_back("x" + std::to_string(i));
    c.degrees = degs;
    c.d = p * d0 * pinv;
    return c;
}

Structure endomorphisms(const Ring& r, const std::vector<Complex>& objects, const std::vector<std::string>& names) {
    Structure s;
    s.ring = r;
    s.dg = true;
    const int no = static_cast<int>(objects.size());
    for (int i = 0; i < no; ++i) s.quiver.add_object(names.empty() ? "C" + std::to_string(i) : names[i]);
    // letter (i, a) -> (j, b) sends basis a of object i to basis b of object j
    std::map<std::tuple<int, int, int, int>, int> id;
    for (int i = 0; i < no; ++i)
        for (int j = 0; j < no; ++j)
            for (std::size_t a = 0; a < objects[i].names.size(); ++a)
                for (std::size_t b = 0; b < objects[j].names.size(); ++b)
                    id[{i, static_cast<int>(a), j, static_cast<int>(b)}] =
                        s.quiver.add_letter(objects[i].names[a] + ">" + objects[j].names[b], i, j,
                                            objects[j].degrees[b] - objects[i].degrees[a]);
    OpTable m;
    for (const auto& [key, l] : id) {
        auto [i, a, j, b] = key;
        const int deg = s.quiver.letter(l).deg;
        for (const auto& [c, v] : objects[j].d.col(b)) m[{l}].add(id.at({i, a, j, c}), v);
        for (int a2 = 0; a2 < static_cast<int>(objects[i].names.size()); ++a2) {
            Elem v = objects[i].d.get(a, a2);
            if (!v.is_zero()) m[{l}].add(id.at({i, a2, j, b}), v.signed_by(-parity_sign(deg)));
        }
        for (int k = 0; k < no; ++k)
            for (int c = 0; c < static_cast<int>(objects[k].names.size()); ++c) {
                int right = id.at({k, c, i, a});
                m[{right, l}].add(id.at({k, c, j, b}), Elem::one(r));
            }
    }
    for (auto it = m.begin(); it != m.end();) it = it->second.empty() ? m.erase(it) : std::next(it);
    s.set_unshifted(m);
    return s;
}

Structure random_dg(std::mt19937_64& rng, const Ring& r, int objects, int dim) {
    std::vector<Complex> cs;
    for (int i = 0; i < objects; ++i) cs.push_back(random_complex(rng, r, dim, -1, 1));
    return endomorphisms(r, cs);
}

Structure transport(const Structure& a, std::mt19937_64& rng, int max_arity, double density) {
    const Quiver& q = a.quiver;
    const Ring r = a.ring;
    std::bernoulli_distribution coin(density);
    OpTable f;
    for (int l = 0; l < q.num_letters(); ++l) f[{l}].add(l, Elem::one(r));
    for (int n = 2; n <= max_arity; ++n)
        for (const Word& w : q.words(n)) {
            int want = q.degree(w) + 1 - n;
            for (int y : q.hom(q.src(w), q.tgt(w)))
                if (q.letter(y).deg == want && coin(rng)) f[w].add(y, nonzero(rng, r));
        }
    auto cofunctor = [&](const OpTable& t, const Word& w) {
        Lin<Word> out;
        for (const auto& sizes : compositions(static_cast<int>(w.size()))) {
            std::vector<Lin<int>> parts;
            int pos = 0;
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
            if (!zero) out.add(tensor_product(r, parts));
        }
        return out;
    };
    // Inverse cofunctor: g_1 = id and (g ∘ f)_n = 0 for n >= 2.
    OpTable g;
    for (int l = 0; l < q.num_letters(); ++l) g[{l}].add(l, Elem::one(r));
    for (int n = 2; n <= max_arity; ++n)
        for (const Word& w : q.words(n)) {
            Lin<Word> fw = cofunctor(f, w);
            Lin<int> acc;
            for (const auto& [u, c] : fw)
                if (static_cast<int>(u.size()) < n)
                    if (auto it = g.find(u); it != g.end()) acc.add(it->second, -c);
            if (!acc.empty()) g[w] = acc;
        }
    Structure out;
    out.ring = r;
    out.quiver = q;
    out.max_arity = std::min(max_arity, a.bound());
    out.units = a.units;
    for (int n = 1; n <= out.max_arity; ++n)
        for (const Word& w : q.words(n)) {
            Lin<int> res;
            for (const auto& [u, c] : cofunctor(f, w)) {
                const int len = static_cast<int>(u.size());
                for (int k = 1; k <= len; ++k)
                    for (int i = 0; i + k <= len; ++i) {
                        const Lin<int>* inner = a.op(Word(u.begin() + i, u.begin() + i + k));
                        if (!inner) continue;
                        long e = 0;
                        for (int j = i + k; j < len; ++j) e += q.letter(u[j]).deg + 1;
                        for (const auto& [y, cy] : *inner) {
                            Word v(u.begin(), u.begin() + i);
                            v.push_back(y);
                            v.insert(v.end(), u.begin() + i + k, u.end());
                            if (auto it = g.find(v); it != g.end())
                                res.add(it->second, c * cy.signed_by(parity_sign(e)));
                        }
                    }
            }
            if (!res.empty()) out.ops[w] = res;
        }
    out.units.clear();
    return out;
}

bool break_structure(Structure& a, std::mt19937_64& rng, int arity) {
    const Quiver& q = a.quiver;
    std::vector<std::pair<Word, int>> slots;
    for (const Word& w : q.words(arity)) {
        int want = q.degree(w) + 2 - arity;
        for (int y : q.hom(q.src(w), q.tgt(w)))
            if (q.letter(y).deg == want) slots.push_back({w, y});
    }
    if (slots.empty()) return false;
    auto [w, y] = slots[pick(rng, 0, static_cast<long>(slots.size()) - 1)];
    a.ops[w].add(y, nonzero(rng, a.ring));
    if (a.ops[w].empty()) a.ops.erase(w);
    a.max_arity = std::max(a.max_arity, arity);
    if (arity > 2) a.dg = false;
    a.units.clear();
    return true;
}

}  // namespace ainfty::examples
