#pragma once

#include "ainfty/ainfty.hpp"

#include <random>
#include <string>
#include <vector>

// Small structures used by tests, benchmarks and the command line tool.
namespace ainfty::examples {

// Free graded module with a degree +1 differential; column j of d is d(e_j).
struct Complex {
    std::vector<std::string> names;
    std::vector<int> degrees;
    SparseMatrix d;
};

Structure ground(const Ring& r);                    // one object, hom spanned by the unit
Structure dual_numbers(const Ring& r);              // 1, eps with eps^2 = 0, all degree 0
Structure m3_example(const Ring& r);                // x (1), y (2), only m3(x,x,x) = y
Structure nonassociative_example(const Ring& r);    // a, b, c (0) with m2(a,a) = b, m2(a,b) = c

Complex contractible(const Ring& r);                // e0 -> e1 by the identity, degrees 0, 1
Complex times_two(const Ring& r);                   // Z -2-> Z in degrees 0, 1
Complex random_complex(std::mt19937_64& rng, const Ring& r, int dim, int dmin, int dmax);

// dg category with the given complexes as objects: homs are graded maps, m1 = [d, -], m2 = composition.
Structure endomorphisms(const Ring& r, const std::vector<Complex>& objects, const std::vector<std::string>& names = {});
Structure random_dg(std::mt19937_64& rng, const Ring& r, int objects, int dim);

// Conjugate the bar differential of a by a random cofunctor with identity linear part; the result is
// an isomorphic structure with genuinely higher operations up to max_arity.
Structure transport(const Structure& a, std::mt19937_64& rng, int max_arity, double density = 0.4);

// Change one coefficient (or add one entry) of an operation of the given arity, preserving degrees.
// Returns false when no degree-compatible entry exists.
bool break_structure(Structure& a, std::mt19937_64& rng, int arity);

}  // namespace ainfty::examples
