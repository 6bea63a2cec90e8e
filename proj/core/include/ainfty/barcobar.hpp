#pragma once

#include "ainfty/ainfty.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ainfty {

// ---------------------------------------------------------------- bar construction

struct BarReport {
    bool ok = true;
    int length = 0;      // length of the first word with d^2 != 0
    Word word;
    Lin<Word> value;     // d^2 of that word
    int checked_through = 0;
};

// Coderivation on T(sA) assembled from the shifted operations.
Lin<Word> bar_differential(const Structure& a, const Word& w);
Lin<Word> bar_differential(const Structure& a, const Lin<Word>& x);

// d^2 on every composable word of length <= max_len (capped by the arity bound).
BarReport check_bar(const Structure& a, int max_len);

struct BarTruncation {
    StructurePtr base;
    int max_len = 0;
    BarReport report;
};

// Throws NotAInfty naming the witness word when d^2 != 0.
BarTruncation bar(const StructurePtr& a, int max_len);

// ---------------------------------------------------------------- cobar words

// One tensor factor s^{-1}(s f_m ... s f_1 s g_n ... s g_1); parts[v] holds the letters of
// variable v, index 0 rightmost. Letters of variable 0 sit to the left of those of variable 1.
struct Factor {
    std::vector<Word> parts;
    auto operator<=>(const Factor&) const = default;
};

// c^l ⊗ ... ⊗ c^1 with factors[0] = c^1; source holds the starting object of every variable.
struct CobarWord {
    std::vector<int> source;
    std::vector<Factor> factors;
    auto operator<=>(const CobarWord&) const = default;
};

using CobarChain = Lin<CobarWord>;

// Cobar construction of the reduced tensor product of the augmented bar constructions of one
// or two A∞ categories. With one variable this is U(A) = coB(Bi(A)).
class Cobar {
public:
    explicit Cobar(std::vector<StructurePtr> vars);

    int variables() const { return static_cast<int>(vars_.size()); }
    const Structure& var(int v) const { return *vars_[v]; }
    const StructurePtr& var_ptr(int v) const { return vars_[v]; }
    const Ring& ring() const { return ring_; }

    int factor_degree(const Factor& f) const;
    int degree(const CobarWord& c) const;
    int size(const Factor& f) const;
    // Letter count per variable.
    std::vector<int> letters(const CobarWord& c) const;
    int total_letters(const CobarWord& c) const;
    std::vector<int> factor_target(const Factor& f, const std::vector<int>& src) const;
    std::vector<int> target(const CobarWord& c) const;
    bool valid(const CobarWord& c) const;

    // μ + Δ on one factor starting at src; the result is a chain of one- or two-factor words.
    // With graded_only the components μ^k for k >= 2 are dropped.
    CobarChain factor_differential(const Factor& f, const std::vector<int>& src, bool graded_only = false) const;
    // Extension to words by the graded Leibniz rule.
    CobarChain differential(const CobarWord& c, bool graded_only = false) const;
    CobarChain differential(const CobarChain& x, bool graded_only = false) const;

    // Composition x ∘ y (x after y): concatenation of factors.
    CobarWord compose(const CobarWord& x, const CobarWord& y) const;
    CobarChain compose(const CobarChain& x, const CobarChain& y) const;

    // Words from src to tgt with exactly the given letter count per variable.
    std::vector<CobarWord> basis(const std::vector<int>& src, const std::vector<int>& tgt,
                                 const std::vector<int>& counts) const;
    // Words from src to tgt with 1 <= total letters <= max_letters, ordered by letter count.
    std::vector<CobarWord> basis_up_to(const std::vector<int>& src, const std::vector<int>& tgt,
                                       int max_letters) const;

    // Leftmost factor first; letters carry their objects when a variable has several.
    std::string name(const CobarWord& c) const;

    // Single-factor word on letters of variable 0.
    CobarWord single(const Word& w) const;

private:
    std::vector<StructurePtr> vars_;
    Ring ring_;
};

// U(A) truncated at max_letters as a dg category whose basis letters are cobar words.
struct CobarCategory {
    Structure structure;
    std::map<int, CobarWord> words;    // letter -> cobar word
    std::map<CobarWord, int> letters;  // cobar word -> letter
};
CobarCategory cobar_category(const Cobar& cobar, int max_letters);

// d^2 = 0 on every basis word up to max_letters; returns the first failure.
std::optional<std::pair<CobarWord, CobarChain>> check_cobar_d2(const Cobar& cobar, int max_letters);

// The unit functor A -> U(A)_{<= max_len}: η^n(f_n ⊗ ... ⊗ f_1) = s^{-1}(s f_n ⊗ ... ⊗ s f_1),
// with coefficient 1 in shifted form.
struct EtaResult {
    std::shared_ptr<const CobarCategory> target;
    Functor functor;
    Report report;  // check_functor through max_len
};
EtaResult eta(const StructurePtr& a, int max_len);

// ---------------------------------------------------------------- units

// Per-object retraction p_A : A(A, A) -> K with p_A(id_A) = 1, given on basis letters.
struct SplitUnitWitness {
    std::map<int, Lin<int>> retraction;  // object -> (letter -> value)
};

// Throws NotUnital or SplitUnitsRequired with the reason when the witness is unusable.
void check_witness(const Structure& a, const std::map<int, Lin<int>>& units, const SplitUnitWitness& w);

// A in a basis where each id_A is a letter and the other endomorphism letters span ker p_A.
struct AdaptedBasis {
    Structure structure;                 // same letter indices as the input
    std::map<int, int> unit_letter;      // object -> letter carrying id_A
    std::map<int, Lin<int>> to_adapted;  // old letter -> combination of adapted letters
    std::map<int, Lin<int>> to_old;      // adapted letter -> combination of old letters
};
AdaptedBasis adapt_basis(const Structure& a, const SplitUnitWitness& w);

// Strict-unit quotient VdB(A) = U(A) / I truncated at max_letters, computed in the adapted basis.
class StrictQuotient {
public:
    StrictQuotient(const StructurePtr& a, const SplitUnitWitness& w, int max_letters);

    const AdaptedBasis& adapted() const { return adapted_; }
    const Cobar& cobar() const { return cobar_; }  // over the adapted structure
    int max_letters() const { return max_letters_; }
    bool is_unit(int letter) const;

    // Reduced normal form of a word: the projection nqV.
    CobarChain reduce(const CobarWord& c) const;
    CobarChain reduce(const CobarChain& x) const;
    bool is_normal(const CobarWord& c) const;

    const std::vector<CobarWord>& full_basis(int src, int tgt) const;
    const std::vector<CobarWord>& normal_forms(int src, int tgt) const;
    // Ideal generators of the two forms, restricted to the window.
    std::vector<CobarChain> generators_insertion(int src, int tgt) const;
    std::vector<CobarChain> generators_unit_factor(int src, int tgt) const;

    // Induced differential on a normal form.
    CobarChain differential(const CobarWord& nf) const;

    // Cobar words over the original letters rewritten in the adapted basis.
    CobarChain to_adapted(const CobarWord& c) const;

private:
    StructurePtr base_;
    AdaptedBasis adapted_;
    Cobar cobar_;
    int max_letters_;
    mutable std::map<std::pair<int, int>, std::vector<CobarWord>> full_, normal_;
};

// u : V_n -> V_{<n} on one word over the original letters (split-unit deletion map).
CobarChain split_map_u(const Cobar& cobar, const SplitUnitWitness& w, const CobarWord& c);

// Rank identity: rank(V_{<=L}) - #normal forms versus the rank of the generator span.
struct QuotientRanks {
    int full = 0;
    int normal = 0;
    int generators = 0;
};
QuotientRanks quotient_ranks(const StrictQuotient& q, int src, int tgt);

// Coefficient matrix of chains against an ordered basis (columns are chains).
SparseMatrix chain_matrix(const Ring& r, const std::vector<CobarWord>& basis, const std::vector<CobarChain>& chains);

}  // namespace ainfty
