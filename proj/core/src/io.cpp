#include "ainfty/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <set>
#include <tuple>

namespace ainfty::io {

using json = nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error("SchemaError", what); }

json read(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        schema(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) schema("document is not a JSON object");
    if (j.contains("schema") && j["schema"] != kSchema)
        schema("unsupported schema tag " + j["schema"].dump());
    return j;
}

std::string write(json j, const std::string& kind) {
    j["schema"] = kSchema;
    j["kind"] = kind;
    return j.dump(2) + "\n";
}

const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) schema(std::string("missing field '") + key + "'");
    return *it;
}

template <class T>
T get(const json& j, const char* key) {
    try {
        return field(j, key).get<T>();
    } catch (const json::exception& e) {
        schema(std::string("field '") + key + "': " + e.what());
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? get<T>(j, key) : fallback;
}

void expect_kind(const json& j, const std::string& kind) {
    if (j.contains("kind") && j["kind"] != kind) schema("expected a " + kind + ", got " + j["kind"].dump());
}

// ---------------------------------------------------------------- rings and coefficients

json ring_json(const Ring& r) {
    switch (r.kind) {
        case RingKind::Fp: return {{"ring", "Fp"}, {"p", r.p}};
        case RingKind::Q: return {{"ring", "Q"}};
        case RingKind::Z: return {{"ring", "Z"}};
    }
    return {};
}

Ring ring_from(const json& j) {
    auto name = get<std::string>(j, "ring");
    if (name == "Q") return Ring::Q();
    if (name == "Z") return Ring::Z();
    if (name == "Fp") return Ring::Fp(get<long>(j, "p"));
    schema("unknown ring '" + name + "'");
}

Elem coeff_from(const Ring& r, const json& j) {
    if (j.is_number_integer()) return Elem(r, j.get<long>());
    if (!j.is_string()) schema("coefficient must be a string or an integer");
    try {
        return Elem::parse(r, j.get<std::string>());
    } catch (const Error& e) {
        if (e.code() != "NotInvertible") throw;
        schema("coefficient '" + j.get<std::string>() + "' is not in " + r.name());
    }
}

json lin_json(const Quiver& q, const Lin<int>& x) {
    json out = json::object();
    for (const auto& [y, c] : x) out[q.letter(y).name] = c.str();
    return out;
}

Lin<int> lin_from(const Ring& r, const Quiver& q, int src, int tgt, const json& j) {
    if (!j.is_object()) schema("linear combination must be an object of name -> coefficient");
    Lin<int> x;
    for (const auto& [name, c] : j.items()) x.add(q.letter(src, tgt, name), coeff_from(r, c));
    return x;
}

// ---------------------------------------------------------------- structures

std::string hom_key(const Quiver& q, int s, int t) { return q.object_name(s) + "|" + q.object_name(t); }

json structure_json(const Structure& a) {
    const Quiver& q = a.quiver;
    json j;
    j["ring"] = ring_json(a.ring);
    j["objects"] = q.objects();
    json hom = json::object();
    for (int s = 0; s < q.num_objects(); ++s)
        for (int t = 0; t < q.num_objects(); ++t) {
            const auto& letters = q.hom(s, t);
            if (letters.empty()) continue;
            json list = json::array();
            for (int l : letters) list.push_back({q.letter(l).name, q.letter(l).deg});
            hom[hom_key(q, s, t)] = list;
        }
    j["hom"] = hom;
    j["max_arity"] = a.max_arity;
    j["dg"] = a.dg;
    json units = json::object();
    for (const auto& [o, l] : a.units) units[q.object_name(o)] = q.letter(l).name;
    j["units"] = units;
    return j;
}

Structure structure_from(const json& j) {
    expect_kind(j, "structure");
    Structure a;
    a.ring = ring_from(field(j, "ring"));
    for (const auto& o : get<std::vector<std::string>>(j, "objects")) {
        if (o.find('|') != std::string::npos) schema("object name '" + o + "' contains '|'");
        a.quiver.add_object(o);
    }
    const json& hom = field(j, "hom");
    if (!hom.is_object()) schema("'hom' must be an object");
    for (const auto& [key, list] : hom.items()) {
        auto bar = key.find('|');
        if (bar == std::string::npos) schema("hom key '" + key + "' is not of the form A|B");
        int s = a.quiver.object(key.substr(0, bar)), t = a.quiver.object(key.substr(bar + 1));
        if (!list.is_array()) schema("hom '" + key + "' must be a list of [name, degree]");
        for (const auto& e : list) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_number_integer())
                schema("hom '" + key + "' entry must be [name, degree]");
            a.quiver.add_letter(e[0].get<std::string>(), s, t, e[1].get<int>());
        }
    }
    a.max_arity = get<int>(j, "max_arity");
    a.dg = get_or<bool>(j, "dg", false);
    if (j.contains("units"))
        for (const auto& [o, name] : field(j, "units").items()) {
            int obj = a.quiver.object(o);
            if (!name.is_string()) schema("unit of '" + o + "' must be a letter name");
            a.units[obj] = a.quiver.letter(obj, obj, name.get<std::string>());
        }
    OpTable m;
    for (const auto& e : get_or<json>(j, "ops", json::array())) {
        int arity = get<int>(e, "arity");
        auto path = get<std::vector<std::string>>(e, "path");
        auto in = get<std::vector<std::string>>(e, "in");
        if (arity < 1 || static_cast<int>(in.size()) != arity || static_cast<int>(path.size()) != arity + 1)
            schema("operation with inconsistent arity, path and inputs");
        Word w(arity);
        for (int k = 0; k < arity; ++k) {
            int s = a.quiver.object(path[k]), t = a.quiver.object(path[k + 1]);
            w[k] = a.quiver.letter(s, t, in[arity - 1 - k]);
        }
        int out =
            a.quiver.letter(a.quiver.object(path.front()), a.quiver.object(path.back()), get<std::string>(e, "out"));
        m[w].add(out, coeff_from(a.ring, field(e, "coeff")));
    }
    a.set_unshifted(m);
    a.validate();
    return a;
}

// {arity, path, out, in, coeff} rows of an unshifted table, in canonical order. `out_q` names the
// outputs; objects of the output hom are implied by the path.
json table_json(const Quiver& q, const Quiver& out_q, const OpTable& t) {
    using Row = std::tuple<int, std::vector<std::string>, std::vector<std::string>, std::string>;
    std::vector<std::pair<Row, json>> rows;
    for (const auto& [w, lin] : t) {
        const int n = static_cast<int>(w.size());
        std::vector<std::string> path{q.object_name(q.src(w))}, in(n);
        for (int k = 0; k < n; ++k) {
            path.push_back(q.object_name(q.letter(w[k]).tgt));
            in[n - 1 - k] = q.letter(w[k]).name;
        }
        for (const auto& [y, c] : lin) {
            const std::string& out = out_q.letter(y).name;
            json e = {{"arity", n}, {"path", path}, {"in", in}, {"out", out}, {"coeff", c.str()}};
            rows.emplace_back(Row{n, path, in, out}, std::move(e));
        }
    }
    std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    json out = json::array();
    for (auto& r : rows) out.push_back(std::move(r.second));
    return out;
}

// Rows of a component table; `out_hom(src, tgt)` gives the output hom for a word between source objects.
template <class OutHom>
OpTable table_from(const Ring& r, const Quiver& q, const Quiver& out_q, const json& rows, OutHom out_hom) {
    OpTable m;
    if (!rows.is_array()) schema("component table must be a list");
    for (const auto& e : rows) {
        int arity = get<int>(e, "arity");
        auto path = get<std::vector<std::string>>(e, "path");
        auto in = get<std::vector<std::string>>(e, "in");
        if (arity < 1 || static_cast<int>(in.size()) != arity || static_cast<int>(path.size()) != arity + 1)
            schema("component with inconsistent arity, path and inputs");
        Word w(arity);
        for (int k = 0; k < arity; ++k)
            w[k] = q.letter(q.object(path[k]), q.object(path[k + 1]), in[arity - 1 - k]);
        auto [s, t] = out_hom(q.object(path.front()), q.object(path.back()));
        m[w].add(out_q.letter(s, t, get<std::string>(e, "out")), coeff_from(r, field(e, "coeff")));
    }
    return m;
}

// ---------------------------------------------------------------- functors and prenats

json obj_map_json(const Functor& f) {
    json j = json::object();
    for (int o = 0; o < static_cast<int>(f.obj_map.size()); ++o)
        j[f.source->quiver.object_name(o)] = f.target->quiver.object_name(f.obj_map[o]);
    return j;
}

json functor_body(const Functor& f) {
    return {{"obj_map", obj_map_json(f)},
            {"max_arity", f.max_arity},
            {"strict", f.strict},
            {"comps", table_json(f.source->quiver, f.target->quiver, f.unshifted())}};
}

Functor functor_from(const StructurePtr& src, const StructurePtr& tgt, const json& j) {
    Functor f;
    f.source = src;
    f.target = tgt;
    f.obj_map.assign(src->quiver.num_objects(), -1);
    const json& om = field(j, "obj_map");
    if (!om.is_object()) schema("'obj_map' must be an object");
    for (const auto& [a, b] : om.items()) {
        if (!b.is_string()) schema("obj_map value for '" + a + "' must be an object name");
        f.obj_map[src->quiver.object(a)] = tgt->quiver.object(b.get<std::string>());
    }
    for (int o = 0; o < src->quiver.num_objects(); ++o)
        if (f.obj_map[o] < 0) schema("obj_map misses object '" + src->quiver.object_name(o) + "'");
    f.max_arity = get<int>(j, "max_arity");
    f.strict = get_or<bool>(j, "strict", false);
    f.set_unshifted(table_from(src->ring, src->quiver, tgt->quiver, get_or<json>(j, "comps", json::array()),
                               [&](int s, int t) { return std::pair{f.obj_map[s], f.obj_map[t]}; }));
    f.validate();
    return f;
}

StructurePtr nested_structure(const json& j, const char* key) {
    return std::make_shared<const Structure>(structure_from(field(j, key)));
}

json write_nested(const Structure& a) {
    json j = structure_json(a);
    j["schema"] = kSchema;
    j["kind"] = "structure";
    return j;
}

// ---------------------------------------------------------------- matrices and complexes

json matrix_json(const SparseMatrix& m) {
    json entries = json::array();
    for (const auto& [ij, v] : m.entries()) entries.push_back({ij.first, ij.second, v.str()});
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

SparseMatrix matrix_from(const Ring& r, const json& j) {
    int rows = get<int>(j, "rows"), cols = get<int>(j, "cols");
    if (rows < 0 || cols < 0) schema("negative matrix shape");
    SparseMatrix m(r, rows, cols);
    for (const auto& e : get_or<json>(j, "entries", json::array())) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer())
            schema("matrix entry must be [row, col, coeff]");
        int i = e[0].get<int>(), k = e[1].get<int>();
        if (i < 0 || i >= rows || k < 0 || k >= cols) schema("matrix entry out of range");
        m.add(i, k, coeff_from(r, e[2]));
    }
    return m;
}

// Basis names as emitted: the stored names when present and distinct, otherwise e0, e1, ...
std::vector<std::string> basis_names(const ChainComplex& c) {
    if (static_cast<int>(c.names.size()) == c.size() &&
        std::set<std::string>(c.names.begin(), c.names.end()).size() == c.names.size())
        return c.names;
    std::vector<std::string> out;
    for (int i = 0; i < c.size(); ++i) out.push_back("e" + std::to_string(i));
    return out;
}

// A map between complexes as {out, in:[name], coeff} rows, column by column.
json named_map_json(const SparseMatrix& m, const std::vector<std::string>& out_names,
                    const std::vector<std::string>& in_names) {
    json rows = json::array();
    for (int k = 0; k < m.cols(); ++k)
        for (const auto& [i, v] : m.col(k))
            rows.push_back({{"out", out_names[i]}, {"in", {in_names[k]}}, {"coeff", v.str()}});
    return rows;
}

int name_index(const std::vector<std::string>& names, const std::string& n) {
    auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) schema("unknown basis element '" + n + "'");
    return static_cast<int>(it - names.begin());
}

SparseMatrix named_map_from(const Ring& r, const json& rows, const std::vector<std::string>& out_names,
                            const std::vector<std::string>& in_names) {
    SparseMatrix m(r, static_cast<int>(out_names.size()), static_cast<int>(in_names.size()));
    if (!rows.is_array()) schema("map must be a list of {out, in, coeff}");
    for (const auto& e : rows) {
        auto in = get<std::vector<std::string>>(e, "in");
        if (in.size() != 1) schema("map between complexes takes one input");
        m.add(name_index(out_names, get<std::string>(e, "out")), name_index(in_names, in[0]),
              coeff_from(r, field(e, "coeff")));
    }
    return m;
}

json complex_json(const ChainComplex& c) {
    auto names = basis_names(c);
    json basis = json::array();
    for (int i = 0; i < c.size(); ++i) basis.push_back({names[i], c.degrees[i]});
    return {{"ring", ring_json(c.ring)}, {"basis", basis}, {"d", named_map_json(c.d, names, names)}};
}

ChainComplex complex_from(const json& j, bool check = true) {
    expect_kind(j, "complex");
    ChainComplex c;
    c.ring = ring_from(field(j, "ring"));
    const json& basis = field(j, "basis");
    if (!basis.is_array()) schema("'basis' must be a list of [name, degree]");
    for (const auto& e : basis) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_number_integer())
            schema("basis entry must be [name, degree]");
        c.names.push_back(e[0].get<std::string>());
        c.degrees.push_back(e[1].get<int>());
    }
    if (std::set<std::string>(c.names.begin(), c.names.end()).size() != c.names.size())
        schema("duplicate basis names");
    c.d = named_map_from(c.ring, get_or<json>(j, "d", json::array()), c.names, c.names);
    if (check) c.validate();
    return c;
}

json nested_complex(const ChainComplex& c) {
    json j = complex_json(c);
    j["schema"] = kSchema;
    j["kind"] = "complex";
    return j;
}

}  // namespace

// ---------------------------------------------------------------- public interface

std::string kind_of(const std::string& text) {
    json j = read(text);
    return j.contains("kind") && j["kind"].is_string() ? j["kind"].get<std::string>() : "";
}

std::string emit_ring(const Ring& r) { return write(ring_json(r), "ring"); }
Ring parse_ring(const std::string& text) { return ring_from(read(text)); }

std::string emit_module(const GradedModule& m) {
    json basis = json::array();
    for (const auto& [n, d] : m.basis) basis.push_back({n, d});
    return write({{"basis", basis}}, "module");
}

GradedModule parse_module(const std::string& text) {
    json j = read(text);
    expect_kind(j, "module");
    GradedModule m;
    try {
        m.basis = field(j, "basis").get<std::vector<std::pair<std::string, int>>>();
    } catch (const json::exception& e) {
        schema(std::string("module basis: ") + e.what());
    }
    m.validate();
    return m;
}

std::string emit_structure(const Structure& a) {
    json j = structure_json(a);
    j["ops"] = table_json(a.quiver, a.quiver, a.unshifted());
    return write(j, "structure");
}

Structure parse_structure(const std::string& text) { return structure_from(read(text)); }

namespace {

json full_structure(const Structure& a) {
    json j = write_nested(a);
    j["ops"] = table_json(a.quiver, a.quiver, a.unshifted());
    return j;
}

}  // namespace

std::string emit_functor(const Functor& f) {
    json j = functor_body(f);
    j["source"] = full_structure(*f.source);
    j["target"] = full_structure(*f.target);
    return write(j, "functor");
}

Functor parse_functor(const std::string& text) {
    json j = read(text);
    expect_kind(j, "functor");
    return functor_from(nested_structure(j, "source"), nested_structure(j, "target"), j);
}

std::string emit_prenat(const Prenat& t) {
    const Quiver &qa = t.source()->quiver, &qb = t.target()->quiver;
    json j;
    j["source"] = full_structure(*t.source());
    j["target"] = full_structure(*t.target());
    j["from"] = functor_body(*t.from);
    j["to"] = functor_body(*t.to);
    j["degree"] = t.degree;
    j["max_arity"] = t.max_arity;
    j["comps"] = table_json(qa, qb, t.unshifted());
    json zero = json::object();
    for (const auto& [o, lin] : t.unshifted_zero())
        if (!lin.empty()) zero[qa.object_name(o)] = lin_json(qb, lin);
    j["zero"] = zero;
    return write(j, "prenat");
}

Prenat parse_prenat(const std::string& text) {
    json j = read(text);
    expect_kind(j, "prenat");
    auto src = nested_structure(j, "source");
    auto tgt = nested_structure(j, "target");
    Prenat t;
    t.from = std::make_shared<const Functor>(functor_from(src, tgt, field(j, "from")));
    t.to = std::make_shared<const Functor>(functor_from(src, tgt, field(j, "to")));
    t.degree = get<int>(j, "degree");
    t.max_arity = get<int>(j, "max_arity");
    const auto &f = *t.from, &g = *t.to;
    OpTable m = table_from(src->ring, src->quiver, tgt->quiver, get_or<json>(j, "comps", json::array()),
                           [&](int s, int e) { return std::pair{f.obj_map[s], g.obj_map[e]}; });
    std::map<int, Lin<int>> zero;
    if (j.contains("zero"))
        for (const auto& [o, lin] : field(j, "zero").items()) {
            int obj = src->quiver.object(o);
            zero[obj] = lin_from(src->ring, tgt->quiver, f.obj_map[obj], g.obj_map[obj], lin);
        }
    t.set_unshifted(m, zero);
    t.validate();
    return t;
}

std::string emit_complex(const ChainComplex& c) { return write(complex_json(c), "complex"); }
ChainComplex parse_complex(const std::string& text) { return complex_from(read(text)); }

std::string emit_filtered(const FilteredComplex& fc) {
    json j;
    j["complex"] = nested_complex(fc.complex);
    if (!fc.level.empty()) j["level"] = fc.level;
    if (!fc.spans.empty()) {
        json spans = json::array();
        for (const auto& s : fc.spans) spans.push_back(matrix_json(s));
        j["spans"] = spans;
    }
    return write(j, "filtered");
}

FilteredComplex parse_filtered(const std::string& text) {
    json j = read(text);
    expect_kind(j, "filtered");
    FilteredComplex fc;
    fc.complex = complex_from(field(j, "complex"));
    fc.level = get_or<std::vector<int>>(j, "level", {});
    if (j.contains("spans"))
        for (const auto& s : field(j, "spans")) fc.spans.push_back(matrix_from(fc.complex.ring, s));
    if (fc.level.empty() == fc.spans.empty()) schema("a filtration needs exactly one of 'level' and 'spans'");
    return fc;
}

std::string emit_gr_homotopies(const Ring& r, const std::map<int, SparseMatrix>& h) {
    json levels = json::object();
    for (const auto& [n, m] : h) levels[std::to_string(n)] = matrix_json(m);
    return write({{"ring", ring_json(r)}, {"levels", levels}}, "gr-homotopies");
}

std::map<int, SparseMatrix> parse_gr_homotopies(const std::string& text) {
    json j = read(text);
    expect_kind(j, "gr-homotopies");
    Ring r = ring_from(field(j, "ring"));
    std::map<int, SparseMatrix> out;
    for (const auto& [key, m] : field(j, "levels").items()) {
        int n = 0;
        try {
            std::size_t used = 0;
            n = std::stoi(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            schema("level key '" + key + "' is not an integer");
        }
        out[n] = matrix_from(r, m);
    }
    return out;
}

std::string emit_certificate(const ContractionCertificate& c) {
    auto rn = basis_names(c.source), xn = basis_names(c.target);
    json j;
    j["ring"] = ring_json(c.source.ring);
    j["window"] = c.window;
    j["filtration"] = c.filtration;
    j["source"] = nested_complex(c.source);
    j["target"] = nested_complex(c.target);
    j["i"] = named_map_json(c.i, xn, rn);
    j["p"] = named_map_json(c.p, rn, xn);
    j["h"] = named_map_json(c.h, xn, xn);
    return write(j, c.kind);
}

ContractionCertificate parse_certificate(const std::string& text) {
    json j = read(text);
    expect_kind(j, "contraction");
    ContractionCertificate c;
    Ring r = ring_from(field(j, "ring"));
    // Identities are left to verify_certificate.
    c.source = complex_from(field(j, "source"), false);
    c.target = complex_from(field(j, "target"), false);
    if (c.source.ring != r || c.target.ring != r)
        throw Error("RingMismatch", "certificate complexes over another ring");
    c.i = named_map_from(r, field(j, "i"), c.target.names, c.source.names);
    c.p = named_map_from(r, field(j, "p"), c.source.names, c.target.names);
    c.h = named_map_from(r, field(j, "h"), c.target.names, c.target.names);
    c.filtration = get_or<std::vector<int>>(j, "filtration", {});
    c.window = get_or<std::map<std::string, long>>(j, "window", {});
    return c;
}

std::string emit_witness(const Structure& a, const SplitUnitWitness& w) {
    json p = json::object();
    for (const auto& [o, lin] : w.retraction) p[a.quiver.object_name(o)] = lin_json(a.quiver, lin);
    return write({{"retraction", p}}, "witness");
}

SplitUnitWitness parse_witness(const Structure& a, const std::string& text) {
    json j = read(text);
    expect_kind(j, "witness");
    SplitUnitWitness w;
    const json& p = field(j, "retraction");
    if (!p.is_object()) schema("'retraction' must be an object keyed by object name");
    for (const auto& [o, lin] : p.items()) {
        int obj = a.quiver.object(o);
        w.retraction[obj] = lin_from(a.ring, a.quiver, obj, obj, lin);
    }
    return w;
}

std::string emit_unit_homotopies(const Functor& f, const std::map<int, Lin<int>>& h) {
    json out = json::object();
    for (const auto& [o, lin] : h) out[f.source->quiver.object_name(o)] = lin_json(f.target->quiver, lin);
    return write({{"h", out}}, "unit-homotopies");
}

std::map<int, Lin<int>> parse_unit_homotopies(const Functor& f, const std::string& text) {
    json j = read(text);
    expect_kind(j, "unit-homotopies");
    std::map<int, Lin<int>> h;
    for (const auto& [o, lin] : field(j, "h").items()) {
        int obj = f.source->quiver.object(o);
        int fo = f.obj_map[obj];
        h[obj] = lin_from(f.source->ring, f.target->quiver, fo, fo, lin);
    }
    return h;
}

std::string content_hash(const std::string& bytes) {
    std::uint64_t x = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        x ^= ch;
        x *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

}  // namespace ainfty::io
