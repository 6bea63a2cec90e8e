#include "doctest.h"
#include "support.hpp"

#include "ainfty/graded.hpp"

using namespace ainfty;
using testing_support::Gen;

namespace {

GradedModule module_of(std::vector<int> degs) {
    GradedModule m;
    for (std::size_t i = 0; i < degs.size(); ++i) m.basis.push_back({"e" + std::to_string(i), degs[i]});
    return m;
}

GradedMap random_map(Gen& g, const Ring& r, const GradedModule& s, const GradedModule& t, int degree) {
    GradedMap f{r, {s}, {t}, degree, {}};
    for (int i = 0; i < s.size(); ++i)
        for (int j = 0; j < t.size(); ++j)
            if (t.degree(j) - s.degree(i) == degree && g.coin(0.7)) f.set({j}, {i}, g.elem(r));
    return f;
}

}  // namespace

TEST_CASE("koszul signs") {
    CHECK(koszul_sign(1, 1) == -1);
    CHECK(koszul_sign(1, 2) == 1);
    CHECK(koszul_sign(0, 3) == 1);
    CHECK(koszul_sign(-1, 3) == -1);
}

TEST_CASE("tensor of maps applies the sign of g passing x") {
    Ring q = Ring::Q();
    GradedModule odd = module_of({1});
    GradedMap f{q, {odd}, {odd}, 0, {}};
    f.set({0}, {0}, Elem::one(q));
    GradedMap g{q, {odd}, {module_of({2})}, 1, {}};
    g.set({0}, {0}, Elem::one(q));
    GradedMap fg = tensor_maps(f, g);
    // (f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y), word (y, x)
    CHECK(fg.entries.at({{0, 0}, {0, 0}}).str() == "-1");
}

TEST_CASE("interchange law holds for random maps over F5") {
    Gen g;
    Ring f5 = Ring::Fp(5);
    for (int t = 0; t < 40; ++t) {
        auto deg = [&] { return static_cast<int>(g.range(-1, 2)); };
        GradedModule a = module_of({deg(), deg()}), b = module_of({deg(), deg()}), c = module_of({deg(), deg()}),
                     d = module_of({deg(), deg()});
        int p = static_cast<int>(g.range(-1, 1)), q = static_cast<int>(g.range(-1, 1));
        int pp = static_cast<int>(g.range(-1, 1)), qq = static_cast<int>(g.range(-1, 1));
        GradedMap f = random_map(g, f5, a, b, p), f2 = random_map(g, f5, b, c, pp);
        GradedMap h = random_map(g, f5, c, d, q), h2 = random_map(g, f5, d, a, qq);
        GradedModule x = module_of({0, 1}), y = module_of({1, 0});
        (void)x;
        (void)y;
        // (f2 ⊗ h2)(f ⊗ h) = (-1)^{|h2||f|} (f2 f) ⊗ (h2 h)
        GradedMap lhs = compose_maps(tensor_maps(f2, h2), tensor_maps(f, h));
        GradedMap rhs = tensor_maps(compose_maps(f2, f), compose_maps(h2, h));
        if (koszul_sign(qq, p) < 0)
            for (auto& [k, v] : rhs.entries) v = -v;
        CHECK(lhs.entries == rhs.entries);
    }
}

TEST_CASE("binary shift on degree-zero inputs: global -1 cancels the crossing of s x") {
    Ring q = Ring::Q();
    GradedModule a = module_of({0});
    GradedMap m{q, {a, a}, {a}, 0, {}};
    m.set({0}, {0, 0}, Elem::one(q));
    GradedMap b = shift_operation(m, ShiftDirection::ToShifted);
    CHECK(b.degree == 1);
    CHECK(b.entries.at({{0}, {0, 0}}).str() == "1");
}

TEST_CASE("shift round trip is the identity") {
    Gen g;
    Ring f5 = Ring::Fp(5);
    for (int t = 0; t < 60; ++t) {
        int i = static_cast<int>(g.range(1, 4));
        GradedModule a = module_of({static_cast<int>(g.range(-2, 2)), static_cast<int>(g.range(-2, 2))});
        GradedMap m{f5, std::vector<GradedModule>(i, a), {a}, 2 - i, {}};
        for (int e = 0; e < 6; ++e) {
            Word w(i);
            for (auto& x : w) x = static_cast<int>(g.range(0, 1));
            int target = static_cast<int>(g.range(0, 1));
            if (a.degree(target) - m.source_degree(w) == m.degree) m.set({target}, w, g.elem(f5));
        }
        GradedMap b = shift_operation(m, ShiftDirection::ToShifted);
        b.validate();
        CHECK(b.degree == 1);
        GradedMap back = shift_operation(b, ShiftDirection::ToUnshifted);
        CHECK(back.degree == m.degree);
        CHECK(back.entries == m.entries);
    }
}

TEST_CASE("degree mismatch is rejected") {
    Ring q = Ring::Q();
    GradedModule a = module_of({0, 1});
    GradedMap m{q, {a}, {a}, 0, {}};
    m.set({1}, {0}, Elem::one(q));
    try {
        m.validate();
        FAIL("expected DegreeMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == "DegreeMismatch");
    }
}
