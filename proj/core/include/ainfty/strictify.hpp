#pragma once

#include "ainfty/barcobar.hpp"

#include <map>
#include <optional>
#include <vector>

namespace ainfty {

// Whether F^1(id_A) = id_{F(A)} and F^i vanishes on words containing a strict unit, 1 < i <= up_to.
Report check_strictly_unital(const Functor& f, int up_to);
// Whether θ^i vanishes on words containing a strict unit, 0 < i <= up_to.
Report check_strictly_unital(const Prenat& t, int up_to);

// first : F -> G and second : G -> H, both homotopies. The result is a homotopy F -> H.
Prenat compose_homotopies(const Prenat& first, const Prenat& second);

struct StrictificationStage {
    int n = 1;
    int m = 1;     // (1, 1) is the arity-one fix θ¹(f) = p(f) h_A
    Prenat theta;  // homotopy theta.from -> theta.to
};

struct StrictificationResult {
    Functor functor;                         // strictly unital through the requested arity, known one further
    std::vector<StrictificationStage> chain;
    Prenat total;                            // homotopy from the input functor to `functor`
};

// h maps source objects to h_A in B(F A, F A) of degree -1 with F^1(id_A) = id - m1(h_A); missing
// entries are solved for. The input must be known through arity + 1.
StrictificationResult strictify_functor(const Functor& f, const std::optional<SplitUnitWitness>& witness,
                                        const std::map<int, Lin<int>>& h, int arity);

struct NatStrictification {
    Prenat strict;  // θ - m1(tilde), strictly unital through the requested arity, known one further
    Prenat tilde;
};

NatStrictification strictify_nat(const Prenat& theta, int arity);

// θ̃^i = -θ^i for i > 0 and θ̃^0(A) = id_{F(A)}, natural F -> G; throws NotAHomotopy naming the first
// failing word.
Prenat homotopy_to_weak_equiv(const Functor& f, const Functor& g, const Prenat& theta);

}  // namespace ainfty
