#include "commands.hpp"

#include "ainfty/io.hpp"
#include "ainfty/strictify.hpp"

#include <filesystem>
#include <optional>

namespace ainfty::cli {

namespace {

StructurePtr load_structure(RunReport& r, const std::string& path) {
    return std::make_shared<const Structure>(io::parse_structure(read_input(r, path)));
}

std::string word_text(const Quiver& q, const Word& w) {
    std::string s;
    for (auto it = w.rbegin(); it != w.rend(); ++it) s += (s.empty() ? "" : " ⊗ ") + q.letter(*it).name;
    return s.empty() ? "()" : s;
}

json word_json(const Quiver& q, const Word& w) {
    json path = json::array({q.object_name(q.src(w))}), in = json::array();
    for (int l : w) path.push_back(q.object_name(q.letter(l).tgt));
    for (auto it = w.rbegin(); it != w.rend(); ++it) in.push_back(q.letter(*it).name);
    return {{"path", path}, {"in", in}};
}

json lin_json(const Quiver& q, const Lin<int>& x) {
    json out = json::object();
    for (const auto& [y, c] : x) out[q.letter(y).name] = c.str();
    return out;
}

// Witness of a failed relation check; `out_q` names the residual letters.
json report_witness(const Quiver& q, const Quiver& out_q, const Report& rep) {
    json j = {{"arity", rep.arity}, {"residual", lin_json(out_q, rep.residual)}, {"detail", rep.detail}};
    if (!rep.word.empty()) j["word"] = word_json(q, rep.word);
    if (rep.object >= 0) j["object"] = q.object_name(rep.object);
    return j;
}

std::string failure_line(const Quiver& q, const Report& rep, const std::string& what) {
    std::string s = what + " fails at arity " + std::to_string(rep.arity);
    if (!rep.word.empty()) s += " on " + word_text(q, rep.word);
    if (rep.object >= 0) s += " at object " + q.object_name(rep.object);
    return s;
}

int object_or_first(const Quiver& q, const std::string& name) { return name.empty() ? 0 : q.object(name); }

std::string default_out(const Args& a, const std::string& fallback) { return a.out.empty() ? fallback : a.out; }

// Runs both relation checkers and insists on agreement.
template <class Literal, class Shifted>
Report agreeing(Literal literal, Shifted shifted, const std::string& what) {
    Report x = literal(), y = shifted();
    if (x.ok != y.ok || (!x.ok && x.arity != y.arity))
        throw Error("InternalError", "literal and shifted " + what + " checks disagree");
    return x;
}

void check_certificate(const ContractionCertificate& cert) {
    CertificateCheck c = verify_certificate(cert);
    if (!c.ok) throw Error("InternalError", "built certificate fails " + c.identity + ": " + c.detail);
}

}  // namespace

void run_validate(const Args& a, RunReport& r) {
    const std::string text = read_input(r, a.files.at(0));
    const std::string kind = io::kind_of(text);
    r.truncation["arity"] = a.arity;
    if (kind == "functor") {
        io::parse_functor(text);
    } else if (kind == "prenat") {
        io::parse_prenat(text);
    } else if (kind == "complex") {
        io::parse_complex(text);
    } else if (kind == "filtered") {
        io::parse_filtered(text);
    } else if (kind == "contraction") {
        io::parse_certificate(text);
    } else if (kind == "gr-homotopies") {
        io::parse_gr_homotopies(text);
    } else if (kind == "module") {
        io::parse_module(text);
    } else if (kind == "ring") {
        io::parse_ring(text);
    } else if (kind == "structure" || kind.empty()) {
        Structure s = io::parse_structure(text);
        Report rep = agreeing([&] { return check_stasheff(s, a.arity); },
                              [&] { return check_stasheff_shifted(s, a.arity); }, "relation");
        BarReport bar = check_bar(s, a.arity);
        if (bar.ok != rep.ok || (!rep.ok && bar.length != rep.arity))
            throw Error("InternalError", "bar d^2 and the relation checkers disagree");
        r.truncation["checked_through"] = rep.checked_through;
        r.say(s.ring.name() + ", " + std::to_string(s.quiver.num_objects()) + " object(s), " +
              std::to_string(s.quiver.num_letters()) + " basis letter(s), known through arity " +
              (s.dg ? std::string("∞ (dg)") : std::to_string(s.max_arity)));
        if (!rep.ok) {
            r.witnesses = report_witness(s.quiver, s.quiver, rep);
            r.fail(failure_line(s.quiver, rep, "A∞ relation"));
            return;
        }
        r.say("A∞ relations hold through arity " + std::to_string(rep.checked_through) +
              " (literal, shifted and bar d^2 agree)");
        return;
    } else {
        throw Error("SchemaError", "validate does not know documents of kind '" + kind + "'");
    }
    r.say("well-formed " + kind);
}

void run_functor_check(const Args& a, RunReport& r) {
    Functor f = io::parse_functor(read_input(r, a.files.at(0)));
    r.truncation["arity"] = a.arity;
    Report rep = agreeing([&] { return check_functor(f, a.arity); }, [&] { return check_functor_shifted(f, a.arity); },
                          "functor");
    r.truncation["checked_through"] = rep.checked_through;
    if (!rep.ok) {
        r.witnesses = report_witness(f.source->quiver, f.target->quiver, rep);
        r.fail(failure_line(f.source->quiver, rep, "functor relation"));
        return;
    }
    r.say("functor relations hold through arity " + std::to_string(rep.checked_through));
}

void run_nat_check(const Args& a, RunReport& r) {
    Prenat t = io::parse_prenat(read_input(r, a.files.at(0)));
    r.truncation["arity"] = a.arity;
    Report rep = check_natural(t, a.arity);
    r.truncation["checked_through"] = rep.checked_through;
    if (!rep.ok) {
        r.witnesses = report_witness(t.source()->quiver, t.target()->quiver, rep);
        r.fail(failure_line(t.source()->quiver, rep, "naturality"));
        return;
    }
    r.say("m1(θ) vanishes through arity " + std::to_string(rep.checked_through) + "; θ is natural of degree " +
          std::to_string(t.degree));
}

void run_bar(const Args& a, RunReport& r) {
    StructurePtr s = load_structure(r, a.files.at(0));
    const Quiver& q = s->quiver;
    const int len = std::min(a.max_len, s->bound());
    r.truncation["max_len"] = a.max_len;
    for (int n = 1; n <= len; ++n)
        r.say("length " + std::to_string(n) + ": " + std::to_string(q.words(n).size()) + " words");
    if (!a.emit.empty()) {
        json rows = json::array();
        for (int n = 1; n <= len; ++n)
            for (const Word& w : q.words(n))
                for (const auto& [out, c] : bar_differential(*s, w)) {
                    json row = word_json(q, w);
                    json o = word_json(q, out);
                    row["out"] = o["in"];
                    row["out_path"] = o["path"];
                    row["coeff"] = c.str();
                    rows.push_back(row);
                }
        json doc = {{"schema", io::kSchema}, {"kind", "bar-differential"}, {"max_len", len}, {"d", rows}};
        write_artifact(r, a.emit, doc.dump(2) + "\n");
    }
    if (!a.check_d2) return;
    BarReport rep = check_bar(*s, a.max_len);
    r.truncation["checked_through"] = rep.checked_through;
    if (!rep.ok) {
        json value = json::array();
        for (const auto& [w, c] : rep.value) value.push_back({{"word", word_json(q, w)}, {"coeff", c.str()}});
        r.witnesses = {{"length", rep.length}, {"word", word_json(q, rep.word)}, {"d2", value}};
        r.fail("d^2 != 0 on " + word_text(q, rep.word));
        return;
    }
    r.say("d^2 = 0 on every word of length <= " + std::to_string(rep.checked_through));
}

void run_cobar(const Args& a, RunReport& r) {
    StructurePtr s = load_structure(r, a.files.at(0));
    Cobar cobar({s});
    r.truncation["max_letters"] = a.max_len;
    const int no = s->quiver.num_objects();
    for (int x = 0; x < no; ++x)
        for (int y = 0; y < no; ++y) {
            auto basis = cobar.basis_up_to({x}, {y}, a.max_len);
            if (!basis.empty())
                r.say("U(" + s->quiver.object_name(x) + ", " + s->quiver.object_name(y) + "): " +
                      std::to_string(basis.size()) + " words");
        }
    if (!a.emit.empty()) {
        CobarCategory cat = cobar_category(cobar, a.max_len);
        write_artifact(r, a.emit, io::emit_structure(cat.structure));
    }
    if (auto bad = check_cobar_d2(cobar, a.max_len)) {
        r.witnesses = {{"word", cobar.name(bad->first)}};
        r.fail("d^2 != 0 on " + cobar.name(bad->first));
        return;
    }
    r.say("d^2 = 0 on every cobar word with <= " + std::to_string(a.max_len) + " letters");
}

void run_eta(const Args& a, RunReport& r) {
    StructurePtr s = load_structure(r, a.files.at(0));
    r.truncation["max_len"] = a.max_len;
    EtaResult e = eta(s, a.max_len);
    if (!e.report.ok) {
        r.witnesses = report_witness(s->quiver, e.target->structure.quiver, e.report);
        r.fail(failure_line(s->quiver, e.report, "η functor relation"));
        return;
    }
    r.say("η is an A∞ functor through arity " + std::to_string(e.report.checked_through));
    if (!a.certify) return;
    const int src = object_or_first(s->quiver, a.src), tgt = object_or_first(s->quiver, a.tgt);
    ContractionCertificate cert = eta_certificate(s, src, tgt, a.max_len);
    check_certificate(cert);
    write_artifact(r, default_out(a, "eta-certificate.json"), io::emit_certificate(cert));
    r.say("certificate for A(" + s->quiver.object_name(src) + ", " + s->quiver.object_name(tgt) + ") -> U(A): rank " +
          std::to_string(cert.source.size()) + " into rank " + std::to_string(cert.target.size()));
}

void run_quotient(const Args& a, RunReport& r) {
    StructurePtr s = load_structure(r, a.files.at(0));
    r.truncation["max_letters"] = a.max_len;
    if (a.retraction.empty()) throw Error("SplitUnitsRequired", "the strict-unit quotient needs --retraction");
    SplitUnitWitness w = io::parse_witness(*s, read_input(r, a.retraction));
    StrictQuotient q(s, w, a.max_len);
    const int src = object_or_first(s->quiver, a.src), tgt = object_or_first(s->quiver, a.tgt);
    QuotientRanks ranks = quotient_ranks(q, src, tgt);
    r.witnesses["ranks"] = {{"full", ranks.full}, {"normal_forms", ranks.normal}, {"generators", ranks.generators}};
    r.say("rank V = " + std::to_string(ranks.full) + ", normal forms = " + std::to_string(ranks.normal) +
          ", generator span = " + std::to_string(ranks.generators));
    if (ranks.full - ranks.normal != ranks.generators) {
        r.fail("rank identity fails");
        return;
    }
    if (!a.emit.empty()) {
        const auto& nf = q.normal_forms(src, tgt);
        json names = json::array(), rows = json::array();
        for (const auto& c : nf) {
            names.push_back(q.cobar().name(c));
            for (const auto& [y, v] : q.differential(c))
                rows.push_back({{"in", {q.cobar().name(c)}}, {"out", q.cobar().name(y)}, {"coeff", v.str()}});
        }
        json doc = {{"schema", io::kSchema}, {"kind", "quotient-table"}, {"normal_forms", names}, {"d", rows}};
        write_artifact(r, a.emit, doc.dump(2) + "\n");
    }
    if (!a.certify) return;
    ContractionCertificate cert = quotient_certificate(q, src, tgt);
    check_certificate(cert);
    write_artifact(r, default_out(a, "quotient-certificate.json"), io::emit_certificate(cert));
    r.say("certificate for A -> VdB(A): rank " + std::to_string(cert.source.size()) + " into rank " +
          std::to_string(cert.target.size()));
}

void run_contract(const Args& a, RunReport& r) {
    FilteredComplex fc = io::parse_filtered(read_input(r, a.in));
    std::map<int, SparseMatrix> gr;
    if (!a.gr_homotopies.empty()) gr = io::parse_gr_homotopies(read_input(r, a.gr_homotopies));
    FilteredContraction res = filtered_contraction(fc, gr);
    check_certificate(res.certificate);
    r.truncation["levels"] = res.adapted.top();
    write_artifact(r, default_out(a, "contraction-certificate.json"), io::emit_certificate(res.certificate));
    r.say("F_1 -> C is a homotopy equivalence over " + std::to_string(res.adapted.top()) + " level(s)");
}

void run_strictify(const Args& a, RunReport& r) {
    Functor f = io::parse_functor(read_input(r, a.functor));
    r.truncation["arity"] = a.arity;
    std::optional<SplitUnitWitness> w;
    if (!a.witness.empty()) w = io::parse_witness(*f.source, read_input(r, a.witness));
    std::map<int, Lin<int>> h;
    if (!a.unit_homotopies.empty()) h = io::parse_unit_homotopies(f, read_input(r, a.unit_homotopies));
    StrictificationResult res = strictify_functor(f, w, h, a.arity);
    Report strict = check_strictly_unital(res.functor, a.arity);
    Report rel = check_functor(res.functor, a.arity);
    if (!strict.ok || !rel.ok) throw Error("InternalError", "strictified functor fails its own checks");
    json stages = json::array();
    for (const auto& st : res.chain) stages.push_back({{"n", st.n}, {"m", st.m}});
    r.witnesses["stages"] = stages;
    r.say(std::to_string(res.chain.size()) + " correction stage(s); result strictly unital through arity " +
          std::to_string(a.arity));
    if (a.emit_chain.empty()) return;
    namespace fs = std::filesystem;
    const fs::path dir(a.emit_chain);
    for (std::size_t k = 0; k < res.chain.size(); ++k) {
        const auto& st = res.chain[k];
        char name[64];
        std::snprintf(name, sizeof name, "stage-%02zu-n%d-m%d.json", k + 1, st.n, st.m);
        write_artifact(r, (dir / name).string(), io::emit_prenat(st.theta));
    }
    write_artifact(r, (dir / "functor.json").string(), io::emit_functor(res.functor));
    write_artifact(r, (dir / "total.json").string(), io::emit_prenat(res.total));
}

void run_cohomology(const Args& a, RunReport& r) {
    StructurePtr s = load_structure(r, a.files.at(0));
    r.truncation["degrees"] = {a.d_min, a.d_max};
    GradedCategory h = cohomology(*s, a.d_min, a.d_max);
    json homs = json::object();
    for (const auto& [st, m] : h.hom) {
        if (m.size() == 0) continue;
        std::string key = h.objects[st.first] + "|" + h.objects[st.second];
        json basis = json::array();
        std::string line = "H(" + h.objects[st.first] + ", " + h.objects[st.second] + "):";
        for (int i = 0; i < m.size(); ++i) {
            basis.push_back({m.name(i), m.degree(i)});
            line += " " + m.name(i) + "[" + std::to_string(m.degree(i)) + "]";
        }
        homs[key] = basis;
        r.say(line);
    }
    r.witnesses["hom"] = homs;
    r.witnesses["associative"] = h.associative;
    r.say(std::string("H(A) composition is ") + (h.associative ? "associative" : "not associative"));
    if (!h.associative) r.fail("cohomology composition is not associative");
}

void run_units(const Args& a, RunReport& r) {
    StructurePtr s = load_structure(r, a.files.at(0));
    UnitReport u = unit_checks(*s);
    r.witnesses = {{"strict", u.strict}, {"cohomological", u.cohomological}, {"unital", u.unital}};
    json units = json::object();
    for (const auto& [o, lin] : u.strict ? u.strict_units : u.cohomological_units)
        units[s->quiver.object_name(o)] = lin_json(s->quiver, lin);
    r.witnesses["units"] = units;
    r.say(std::string("strict: ") + (u.strict ? "yes" : "no") + ", cohomological: " + (u.cohomological ? "yes" : "no") +
          ", unital: " + (u.unital ? "yes" : "no"));
    if (!u.detail.empty()) r.say(u.detail);
    const bool met = a.require == "none" || (a.require == "strict" && u.strict) ||
                     (a.require == "unital" && u.unital) || (a.require == "cohomological" && u.cohomological);
    if (!met) r.fail("required unit level '" + a.require + "' not met");
}

void run_tensor(const Args& a, RunReport& r) {
    StructurePtr x = load_structure(r, a.files.at(0));
    StructurePtr y = load_structure(r, a.files.at(1));
    Structure t = tensor_dg(*x, *y);
    write_artifact(r, a.out, io::emit_structure(t));
    r.say("tensor product: " + std::to_string(t.quiver.num_objects()) + " object(s), " +
          std::to_string(t.quiver.num_letters()) + " basis letter(s)");
}

void run_compose(const Args& a, RunReport& r) {
    Functor g = io::parse_functor(read_input(r, a.files.at(0)));
    Functor f = io::parse_functor(read_input(r, a.files.at(1)));
    if (io::emit_structure(*f.target) != io::emit_structure(*g.source))
        throw Error("SchemaError", "the target of the second functor is not the source of the first");
    g.source = f.target;
    Functor gf = compose_functors(g, f);
    r.truncation["arity"] = a.arity;
    Report rep = check_functor(gf, a.arity);
    write_artifact(r, a.out, io::emit_functor(gf));
    if (!rep.ok) {
        r.witnesses = report_witness(gf.source->quiver, gf.target->quiver, rep);
        r.fail(failure_line(gf.source->quiver, rep, "composite functor relation"));
        return;
    }
    r.say("G∘F is an A∞ functor through arity " + std::to_string(rep.checked_through));
}

}  // namespace ainfty::cli
