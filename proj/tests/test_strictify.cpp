#include "doctest.h"
#include "generators.hpp"
#include "support.hpp"

#include "ainfty/examples.hpp"
#include "ainfty/strictify.hpp"

using namespace ainfty;
namespace ex = ainfty::examples;
using testing_support::random_components;
using testing_support::unit_witness;
using testing_support::zero_functor;

namespace {

std::mt19937_64 rng_for(int salt) { return std::mt19937_64(testing_support::seed() + 6007ULL * salt); }

StructurePtr share(Structure s) { return std::make_shared<const Structure>(std::move(s)); }

std::map<int, Lin<int>> units(const Structure& a) {
    auto u = find_strict_units(a);
    REQUIRE(u.has_value());
    return *u;
}

// A unital functor that is not strictly unital: the identity of a moved by a random homotopy.
Functor unital_functor(std::mt19937_64& rng, const StructurePtr& a, int arity) {
    auto id = std::make_shared<Functor>(identity_functor(a, arity));
    Prenat th = zero_prenat(id, id, 0, arity);
    th.set_unshifted(random_components(rng, *a, *a, id->obj_map, id->obj_map, arity, 0), {});
    return perturb_by_homotopy(*id, th).first;
}

OpTable layer(const OpTable& t, int n) {
    OpTable out;
    for (const auto& [w, c] : t)
        if (static_cast<int>(w.size()) == n) out.emplace(w, c);
    return out;
}

void check_chain(const Functor& f, const StrictificationResult& res, int arity) {
    CHECK(check_strictly_unital(res.functor, arity).ok);
    CHECK(check_functor(res.functor, arity).ok);
    CHECK(check_homotopy(f, res.functor, res.total).ok);
    for (const auto& st : res.chain) {
        CAPTURE(st.n);
        CAPTURE(st.m);
        CHECK(check_homotopy(*st.theta.from, *st.theta.to, st.theta).ok);
        CHECK(check_functor(*st.theta.to, arity).ok);
        // θ vanishes below arity n - 1 and the functor is unchanged below arity n
        OpTable th = st.theta.unshifted();
        for (int i = 1; i < st.n - 1; ++i) CHECK(layer(th, i).empty());
        if (st.n > 1) {
            for (int i = 1; i < st.n; ++i) CHECK(layer(st.theta.from->comps, i) == layer(st.theta.to->comps, i));
            for (int i = st.n + 1; i <= arity + 1; ++i) CHECK(layer(th, i).empty());
        }
    }
}

}  // namespace

TEST_CASE("the zero functor into the endomorphisms of a contractible complex strictifies") {
    const Ring r = Ring::Q();
    auto k = share(ex::ground(r));
    auto b = share(ex::endomorphisms(r, {ex::contractible(r)}));
    Functor z = zero_functor(k, b);
    auto res = strictify_functor(z, unit_witness(*k), {}, 4);
    // F'^1(1) = 1_B
    Lin<int> one;
    one.add(k->quiver.hom(0, 0).front(), Elem::one(r));
    Lin<int> image = apply_table(res.functor.unshifted(), tensor_product(r, {one}));
    CHECK(image == units(*b).at(0));
    CHECK_FALSE(res.chain.empty());
    CHECK(res.chain.front().n == 1);
    check_chain(z, res, 4);
}

TEST_CASE("the zero functor with a supplied h over Z") {
    const Ring r = Ring::Z();
    auto k = share(ex::ground(r));
    auto b = share(ex::endomorphisms(r, {ex::contractible(r)}));
    const Quiver& qb = b->quiver;
    Lin<int> h;
    for (int l : qb.hom(0, 0))
        if (qb.letter(l).deg == -1) h.add(l, Elem::one(r));
    REQUIRE(h.size() == 1);
    Functor z = zero_functor(k, b);
    // m1(h) = ±id, so one of the signs is the right witness
    auto try_with = [&](const Lin<int>& x) {
        try {
            return std::optional(strictify_functor(z, unit_witness(*k), {{0, x}}, 3));
        } catch (const Error& e) {
            CHECK(e.code() == "NotUnital");
            return std::optional<StrictificationResult>();
        }
    };
    auto plus = try_with(h), minus = try_with(h.negated());
    CHECK(plus.has_value() != minus.has_value());
    check_chain(z, plus ? *plus : *minus, 3);
}

TEST_CASE("strictification needs split units") {
    const Ring r = Ring::Q();
    auto k = share(ex::ground(r));
    auto b = share(ex::endomorphisms(r, {ex::contractible(r)}));
    CHECK_THROWS_WITH_AS(strictify_functor(zero_functor(k, b), std::nullopt, {}, 4),
                         doctest::Contains("SplitUnitsRequired"), Error);
    SplitUnitWitness bad;
    bad.retraction[0].add(k->quiver.hom(0, 0).front(), Elem(r, 2L));
    CHECK_THROWS_WITH_AS(strictify_functor(zero_functor(k, b), bad, {}, 4), doctest::Contains("SplitUnitsRequired"),
                         Error);
}

TEST_CASE("a strictly unital functor is left alone") {
    auto d = share(ex::dual_numbers(Ring::Q()));
    Functor id = identity_functor(d, 5);
    auto res = strictify_functor(id, unit_witness(*d), {}, 4);
    CHECK(res.chain.empty());
    CHECK(res.functor.comps == id.comps);
    CHECK(res.total.is_zero());
}

TEST_CASE("a non-unital functor is rejected") {
    const Ring r = Ring::Q();
    auto k = share(ex::ground(r));
    auto b = share(ex::dual_numbers(r));
    // F^1(1) = 0 and id is not a boundary in the dual numbers
    CHECK_THROWS_WITH_AS(strictify_functor(zero_functor(k, b), unit_witness(*k), {}, 3), doctest::Contains("NotUnital"),
                         Error);
}

TEST_CASE("seeded unital functors strictify with a verified chain") {
    auto rng = rng_for(1);
    for (int t = 0; t < 8; ++t) {
        CAPTURE(t);
        const Ring r = t % 2 ? Ring::Q() : Ring::Fp(5);
        auto a = share(t % 4 == 3 ? ex::dual_numbers(r) : ex::random_dg(rng, r, t == 1 ? 2 : 1, 2));
        Functor f = unital_functor(rng, a, 5);
        REQUIRE(check_functor(f, 5).ok);
        auto res = strictify_functor(f, unit_witness(*a), {}, 4);
        check_chain(f, res, 4);
    }
}

TEST_CASE("composing homotopies") {
    auto rng = rng_for(2);
    const Ring r = Ring::Fp(5);
    auto a = share(ex::random_dg(rng, r, 2, 2));
    auto f = std::make_shared<Functor>(identity_functor(a, 4));
    Prenat t1 = zero_prenat(f, f, 0, 4);
    t1.set_unshifted(random_components(rng, *a, *a, f->obj_map, f->obj_map, 4, 0), {});
    auto [g, c1] = perturb_by_homotopy(*f, t1);
    auto gp = std::make_shared<Functor>(g);
    Prenat t2 = zero_prenat(gp, gp, 0, 4);
    t2.set_unshifted(random_components(rng, *a, *a, f->obj_map, f->obj_map, 4, 0), {});
    auto [h, c2] = perturb_by_homotopy(g, t2);
    Prenat total = compose_homotopies(c1.theta, c2.theta);
    CHECK(check_homotopy(*f, h, total).ok);
    Prenat naive = total;
    naive.comps = c1.theta.comps;
    for (const auto& [w, c] : c2.theta.comps) naive.comps[w].add(c);
    CHECK_FALSE(check_homotopy(*f, h, naive).ok);
}

// ---------------------------------------------------------------- natural transformations

namespace {

// m1(ψ) for a random ψ of degree p - 1, plus the identity when p = 0: natural, generally not
// strictly unital.
Prenat natural_sample(std::mt19937_64& rng, const std::shared_ptr<const Functor>& f, int arity, int p) {
    const Structure& a = *f->source;
    Prenat psi = zero_prenat(f, f, p - 1, arity + 1);
    std::map<int, Lin<int>> zero;
    const Quiver& q = a.quiver;
    for (int o = 0; o < q.num_objects(); ++o)
        for (int l : q.hom(o, o))
            if (q.letter(l).deg == p - 1 && rng() % 2) zero[o].add(l, Elem::one(a.ring));
    psi.set_unshifted(random_components(rng, a, a, f->obj_map, f->obj_map, arity + 1, p - 1), zero);
    Prenat out = m1_prenat(psi);
    if (p == 0) {
        Prenat ident = zero_prenat(f, f, 0, out.max_arity);
        ident.set_unshifted({}, units(a));
        for (const auto& [o, c] : ident.zero) out.zero[o].add(c);
    }
    return out;
}

}  // namespace

TEST_CASE("natural transformations become strictly unital") {
    auto rng = rng_for(3);
    for (int t = 0; t < 6; ++t) {
        CAPTURE(t);
        const Ring r = t % 2 ? Ring::Q() : Ring::Fp(5);
        auto a = share(ex::random_dg(rng, r, t == 1 ? 2 : 1, 2));
        auto f = std::make_shared<const Functor>(identity_functor(a, 6));
        Prenat th = natural_sample(rng, f, 4, t % 3 == 2 ? 1 : 0);
        REQUIRE(check_natural(th, 5).ok);
        auto res = strictify_nat(th, 4);
        CHECK(check_natural(res.strict, 4).ok);
        CHECK(check_strictly_unital(res.strict, 4).ok);
        CHECK(res.strict.degree == th.degree);
        // θ_strict = θ - m1(θ̃) on every word through 4
        Prenat m = m1_prenat(res.tilde);
        for (int n = 1; n <= 4; ++n)
            for (const Word& w : a->quiver.words(n)) {
                Lin<int> lhs;
                if (auto it = res.strict.comps.find(w); it != res.strict.comps.end()) lhs = it->second;
                Lin<int> rhs;
                if (auto it = th.comps.find(w); it != th.comps.end()) rhs.add(it->second);
                if (auto it = m.comps.find(w); it != m.comps.end()) rhs.add(it->second, Elem(r, -1));
                CHECK(lhs == rhs);
            }
        // degree-0 components differ by m1_B of θ̃^0
        const OpTable bu = a->unshifted();
        auto strict0 = res.strict.unshifted_zero(), orig0 = th.unshifted_zero(), tilde0 = res.tilde.unshifted_zero();
        for (int o = 0; o < a->quiver.num_objects(); ++o) {
            Lin<int> diff = orig0[o];
            diff.add(strict0[o], Elem(r, -1));
            Lin<int> d;
            for (const auto& [l, c] : tilde0[o]) d.add(bu.at({l}), c);
            CHECK((diff == d || diff == d.negated()));
        }
        // applying it again changes nothing
        auto again = strictify_nat(res.strict, 4);
        CHECK(again.tilde.is_zero());
    }
}

TEST_CASE("one unit-violating entry at arity one is cleared") {
    const Ring r = Ring::Q();
    auto b = share(ex::endomorphisms(r, {ex::contractible(r)}));
    const Quiver& q = b->quiver;
    auto f = std::make_shared<const Functor>(identity_functor(b, 6));
    int h = -1;
    for (int l : q.hom(0, 0))
        if (q.letter(l).deg == -1) h = l;
    REQUIRE(h >= 0);
    // θ = m1(ψ) with ψ^1(u) = h on one unit letter u: θ^1(u) = ±m1(h) != 0
    Prenat psi = zero_prenat(f, f, 0, 6);
    OpTable pc;
    pc[{units(*b).at(0).begin()->first}].add(h, Elem::one(r));
    psi.set_unshifted(pc, {});
    Prenat th = m1_prenat(psi);
    REQUIRE(check_natural(th, 5).ok);
    Report before = check_strictly_unital(th, 4);
    REQUIRE_FALSE(before.ok);
    CHECK(before.arity == 1);
    auto res = strictify_nat(th, 4);
    CHECK(check_strictly_unital(res.strict, 4).ok);
    CHECK(check_natural(res.strict, 4).ok);
}

TEST_CASE("a strictly unital natural transformation needs no correction") {
    auto d = share(ex::dual_numbers(Ring::Q()));
    auto f = std::make_shared<const Functor>(identity_functor(d, 6));
    Prenat ident = zero_prenat(f, f, 0, 6);
    ident.set_unshifted({}, units(*d));
    auto res = strictify_nat(ident, 4);
    CHECK(res.tilde.is_zero());
    CHECK(res.strict.zero == ident.zero);
}

TEST_CASE("strictify_nat rejects non-natural input") {
    const Ring r = Ring::Q();
    auto b = share(ex::endomorphisms(r, {ex::contractible(r)}));
    const Quiver& q = b->quiver;
    auto f = std::make_shared<const Functor>(identity_functor(b, 6));
    Prenat th = zero_prenat(f, f, 0, 5);
    OpTable comps;
    for (int l : q.hom(0, 0))
        if (q.letter(l).deg == -1) comps[{units(*b).at(0).begin()->first}].add(l, Elem::one(r));
    th.set_unshifted(comps, units(*b));
    REQUIRE_FALSE(check_natural(th, 5).ok);
    CHECK_THROWS_WITH_AS(strictify_nat(th, 4), doctest::Contains("NotNatural"), Error);
}

// ---------------------------------------------------------------- homotopies to weak equivalences

TEST_CASE("the zero homotopy gives the identity transformation") {
    auto d = share(ex::dual_numbers(Ring::Q()));
    Functor id = identity_functor(d, 5);
    auto fp = std::make_shared<Functor>(id);
    Prenat zero = zero_prenat(fp, fp, 0, 5);
    Prenat nat = homotopy_to_weak_equiv(id, id, zero);
    CHECK(check_natural(nat, 4).ok);
    CHECK(nat.unshifted_zero() == units(*d));
    CHECK(nat.comps.empty());
}

TEST_CASE("perturbed functors are weakly equivalent to the original") {
    auto rng = rng_for(5);
    for (int t = 0; t < 20; ++t) {
        CAPTURE(t);
        const Ring r = t % 3 == 0 ? Ring::Q() : Ring::Fp(5);
        auto a = share(ex::random_dg(rng, r, 1 + t % 2, 2));
        auto b = share(ex::random_dg(rng, r, 1 + t % 2, 2));
        Functor f;
        f.source = a;
        f.target = b;
        f.obj_map = t % 2 ? std::vector<int>{1, 0} : std::vector<int>{0};
        f.strict = true;
        auto fp = std::make_shared<Functor>(f);
        Prenat th = zero_prenat(fp, fp, 0, 4);
        th.set_unshifted(random_components(rng, *a, *b, f.obj_map, f.obj_map, 4, 0), {});
        auto [g, cert] = perturb_by_homotopy(f, th);
        CHECK(check_functor(g, 4).ok);
        Prenat nat = homotopy_to_weak_equiv(f, g, cert.theta);
        Report rep = check_natural(nat, 4);
        CHECK_MESSAGE(rep.ok, rep.arity);
        CHECK(rep.checked_through >= 3);
    }
}

TEST_CASE("a corrupted homotopy is rejected with its word") {
    auto rng = rng_for(6);
    const Ring r = Ring::Fp(5);
    auto a = share(ex::endomorphisms(r, {ex::contractible(r)}));
    const Quiver& q = a->quiver;
    const OpTable au = a->unshifted();
    Functor id = identity_functor(a, 4);
    auto fp = std::make_shared<Functor>(id);
    Prenat th = zero_prenat(fp, fp, 0, 4);
    th.set_unshifted(random_components(rng, *a, *a, id.obj_map, id.obj_map, 4, 0), {});
    auto [g, cert] = perturb_by_homotopy(id, th);
    // add y to θ^2(w) with m1(y) != 0
    OpTable u = cert.theta.unshifted();
    bool changed = false;
    for (const Word& w : q.words(2)) {
        for (int y : q.hom(q.src(w), q.tgt(w)))
            if (q.letter(y).deg == q.degree(w) - 2 && au.count({y})) {
                u[w].add(y, Elem::one(r));
                changed = true;
                break;
            }
        if (changed) break;
    }
    REQUIRE(changed);
    Prenat bad = cert.theta;
    bad.set_unshifted(u, {});
    Report rep = check_homotopy(id, g, bad);
    REQUIRE_FALSE(rep.ok);
    CHECK(rep.arity == 2);
    try {
        homotopy_to_weak_equiv(id, g, bad);
        FAIL("accepted a corrupted homotopy");
    } catch (const Error& e) {
        CHECK(e.code() == "NotAHomotopy");
        CHECK(std::string(e.what()).find("arity 2") != std::string::npos);
    }
}
