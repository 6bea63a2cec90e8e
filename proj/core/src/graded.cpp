#include "ainfty/graded.hpp"

#include <set>

namespace ainfty {

int koszul_sign(long deg_g, long deg_x) { return parity_sign(deg_g * deg_x); }

long shift_exponent(long n, const std::vector<int>& degrees) {
    long i = static_cast<long>(degrees.size());
    long e = n + i - 1;
    for (long k = 0; k < i; ++k) e += k * (degrees[k] + 1);
    return e;
}

int GradedModule::index(const std::string& n) const {
    for (int i = 0; i < size(); ++i)
        if (basis[i].first == n) return i;
    return -1;
}

GradedModule GradedModule::shifted(int by) const {
    GradedModule out = *this;
    for (auto& b : out.basis) b.second -= by;
    return out;
}

void GradedModule::validate() const {
    std::set<std::string> seen;
    for (const auto& b : basis)
        if (!seen.insert(b.first).second) throw Error("SchemaError", "duplicate basis name '" + b.first + "'");
}

namespace {

int word_degree(const std::vector<GradedModule>& mods, const Word& w) {
    if (w.size() != mods.size()) throw Error("DimensionMismatch", "word length does not match tensor arity");
    int d = 0;
    for (std::size_t k = 0; k < w.size(); ++k) d += mods[k].degree(w[k]);
    return d;
}

}  // namespace

int GradedMap::source_degree(const Word& w) const { return word_degree(sources, w); }
int GradedMap::target_degree(const Word& w) const { return word_degree(targets, w); }

void GradedMap::set(const Word& target, const Word& source, const Elem& c) {
    if (c.is_zero())
        entries.erase({target, source});
    else
        entries[{target, source}] = c;
}

Lin<Word> GradedMap::apply(const Word& source) const {
    Lin<Word> out;
    for (const auto& [key, c] : entries)
        if (key.second == source) out.add(key.first, c);
    return out;
}

void GradedMap::validate() const {
    for (const auto& [key, c] : entries) {
        int td = target_degree(key.first), sd = source_degree(key.second);
        if (td - sd != degree)
            throw Error("DegreeMismatch", "entry of degree " + std::to_string(td - sd) + " in a map of degree " +
                                              std::to_string(degree));
    }
}

bool GradedMap::operator==(const GradedMap& o) const {
    return ring == o.ring && degree == o.degree && entries == o.entries && sources.size() == o.sources.size() &&
           targets.size() == o.targets.size();
}

GradedMap identity_map(const Ring& r, const GradedModule& m) {
    GradedMap out{r, {m}, {m}, 0, {}};
    for (int i = 0; i < m.size(); ++i) out.set({i}, {i}, Elem::one(r));
    return out;
}

GradedMap tensor_maps(const GradedMap& f, const GradedMap& g) {
    g.validate();
    f.validate();
    GradedMap out;
    out.ring = f.ring;
    out.sources = g.sources;
    out.sources.insert(out.sources.end(), f.sources.begin(), f.sources.end());
    out.targets = g.targets;
    out.targets.insert(out.targets.end(), f.targets.begin(), f.targets.end());
    out.degree = f.degree + g.degree;
    for (const auto& [fk, a] : f.entries) {
        int dx = f.source_degree(fk.second);
        for (const auto& [gk, b] : g.entries) {
            Word src = gk.second, tgt = gk.first;
            src.insert(src.end(), fk.second.begin(), fk.second.end());
            tgt.insert(tgt.end(), fk.first.begin(), fk.first.end());
            Elem c = (a * b).signed_by(koszul_sign(g.degree, dx));
            auto it = out.entries.find({tgt, src});
            if (it == out.entries.end())
                out.entries.emplace(std::make_pair(tgt, src), c);
            else
                it->second += c;
        }
    }
    for (auto it = out.entries.begin(); it != out.entries.end();)
        it = it->second.is_zero() ? out.entries.erase(it) : std::next(it);
    return out;
}

GradedMap compose_maps(const GradedMap& g, const GradedMap& f) {
    if (g.sources.size() != f.targets.size()) throw Error("DimensionMismatch", "composition of incompatible maps");
    GradedMap out{f.ring, f.sources, g.targets, f.degree + g.degree, {}};
    for (const auto& [fk, a] : f.entries)
        for (const auto& [gk, b] : g.entries) {
            if (gk.second != fk.first) continue;
            auto it = out.entries.find({gk.first, fk.second});
            if (it == out.entries.end())
                out.entries.emplace(std::make_pair(gk.first, fk.second), a * b);
            else
                it->second += a * b;
        }
    for (auto it = out.entries.begin(); it != out.entries.end();)
        it = it->second.is_zero() ? out.entries.erase(it) : std::next(it);
    return out;
}

GradedMap shift_operation(const GradedMap& m, ShiftDirection dir) {
    if (m.targets.size() != 1) throw Error("DimensionMismatch", "shift needs a single target module");
    const int i = m.arity();
    const int by = dir == ShiftDirection::ToShifted ? 1 : -1;
    GradedMap out;
    out.ring = m.ring;
    for (const auto& s : m.sources) out.sources.push_back(s.shifted(by));
    out.targets = {m.targets[0].shifted(by)};
    // n is the degree of the unshifted map in both directions.
    const int n = dir == ShiftDirection::ToShifted ? m.degree : m.degree - i + 1;
    out.degree = dir == ShiftDirection::ToShifted ? m.degree + i - 1 : n;
    for (const auto& [key, c] : m.entries) {
        std::vector<int> degs(i);
        for (int k = 0; k < i; ++k)
            degs[k] = dir == ShiftDirection::ToShifted ? m.sources[k].degree(key.second[k])
                                                       : m.sources[k].degree(key.second[k]) + 1;
        out.entries.emplace(key, c.signed_by(parity_sign(shift_exponent(n, degs))));
    }
    return out;
}

}  // namespace ainfty
