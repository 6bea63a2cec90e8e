#pragma once

#include "ainfty/coeff.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ainfty {

// Tensor word of basis indices. Index 0 is the rightmost factor: w = w[n-1] ⊗ ... ⊗ w[0].
using Word = std::vector<int>;

inline int parity_sign(long e) { return (e % 2 == 0) ? 1 : -1; }

// (-1)^{deg_g * deg_x}
int koszul_sign(long deg_g, long deg_x);

// Exponent of the sign relating an unshifted operation of degree n on letters of the given
// (unshifted) degrees to its shifted form: n + i - 1 + sum_k (k-1) deg'(x_k).
long shift_exponent(long n, const std::vector<int>& degrees);

struct GradedModule {
    std::vector<std::pair<std::string, int>> basis;

    int size() const { return static_cast<int>(basis.size()); }
    int degree(int i) const { return basis[i].second; }
    const std::string& name(int i) const { return basis[i].first; }
    int index(const std::string& name) const;  // -1 when absent
    // Shift by one: deg(sx) = deg(x) - 1.
    GradedModule shifted(int by = 1) const;
    void validate() const;  // unique names
};

// Homogeneous multilinear map between tensor products of graded modules.
struct GradedMap {
    Ring ring;
    std::vector<GradedModule> sources;  // sources[0] is the rightmost factor
    std::vector<GradedModule> targets;  // usually a single module
    int degree = 0;
    std::map<std::pair<Word, Word>, Elem> entries;  // (target word, source word) -> coefficient

    int arity() const { return static_cast<int>(sources.size()); }
    int source_degree(const Word& w) const;
    int target_degree(const Word& w) const;
    void set(const Word& target, const Word& source, const Elem& c);
    Lin<Word> apply(const Word& source) const;
    // Throws DegreeMismatch on an entry violating the degree.
    void validate() const;
    bool operator==(const GradedMap& o) const;
};

GradedMap identity_map(const Ring& r, const GradedModule& m);

// f ⊗ g with the Koszul rule; the source word of the result is (y, x) for x ∈ src(f), y ∈ src(g).
GradedMap tensor_maps(const GradedMap& f, const GradedMap& g);

// g ∘ f for arity-compatible maps.
GradedMap compose_maps(const GradedMap& g, const GradedMap& f);

enum class ShiftDirection { ToShifted, ToUnshifted };

GradedMap shift_operation(const GradedMap& m, ShiftDirection dir);

}  // namespace ainfty
