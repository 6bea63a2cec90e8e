#pragma once

#include "ainfty/barcobar.hpp"

#include <compare>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace ainfty {

// ---------------------------------------------------------------- complexes

// Free graded module with a degree +1 differential; column j of d is d(e_j).
struct ChainComplex {
    Ring ring = Ring::Q();
    std::vector<int> degrees;
    SparseMatrix d;
    std::vector<std::string> names;  // optional

    int size() const { return static_cast<int>(degrees.size()); }
    void validate() const;  // shape, degree +1, d∘d = 0
};

// Rows and columns picked by index lists.
SparseMatrix submatrix(const SparseMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols);
// Inverse of an invertible square matrix; throws NotInvertible.
SparseMatrix inverse(const SparseMatrix& m);

// Zero homology in every degree; over Z this includes torsion.
bool is_acyclic(const ChainComplex& c);
// Whether the chain map i : r -> x induces an isomorphism in homology (acyclic cone).
bool is_quasi_isomorphism(const ChainComplex& r, const ChainComplex& x, const SparseMatrix& i);

// Ascending exhaustive filtration with F_0 = 0. Either every basis vector carries a level >= 1
// (coordinate filtration), or spans[n-1] has columns generating F_n; the last level must be C.
struct FilteredComplex {
    ChainComplex complex;
    std::vector<int> level;
    std::vector<SparseMatrix> spans;
};

// A basis of C in which every F_n is spanned by an initial segment.
struct AdaptedFiltration {
    SparseMatrix basis;          // columns are the new basis vectors in old coordinates
    SparseMatrix basis_inverse;
    std::vector<int> level;      // of each new basis vector, ascending
    std::vector<int> offsets;    // offsets[n] = dim F_n, offsets[0] = 0
    ChainComplex complex;        // C rewritten in the new basis
    int top() const { return static_cast<int>(offsets.size()) - 1; }
};

// Throws SplittingMissing when some F_{n-1} is not a graded direct summand of F_n, SchemaError when
// a level is not a subcomplex or the filtration is not exhaustive.
AdaptedFiltration adapt_filtration(const FilteredComplex& fc);

// ---------------------------------------------------------------- certificates

// i : R -> X and p : X -> R with p∘i = id and id_X = i∘p + d∘h + h∘d.
struct ContractionCertificate {
    std::string kind = "contraction";
    ChainComplex source;  // R
    ChainComplex target;  // X
    SparseMatrix i, p, h;
    std::vector<int> filtration;         // dim F_n per level when R = F_1 X; empty otherwise
    std::map<std::string, long> window;  // truncation record
};

struct CertificateCheck {
    bool ok = true;
    std::string identity;  // the first violated identity
    std::string detail;
};

// Recomputes every identity from the certificate alone.
CertificateCheck verify_certificate(const ContractionCertificate& cert);

struct FilteredContraction {
    ContractionCertificate certificate;  // in the original basis, R = F_1
    AdaptedFiltration adapted;
    // p_n : F_n -> F_1 and h_{<=n} : F_n -> F_n in adapted coordinates, n = 1 .. top
    std::vector<SparseMatrix> p_stages, h_stages;
};

// gr_homotopies[n] acts on gr_n in the adapted basis order; coordinate filtrations keep the original
// order within each level. Missing levels are solved for. Throws BadGrHomotopy when a supplied h_n
// fails id = d_n h_n + h_n d_n or no h_n exists.
FilteredContraction filtered_contraction(const FilteredComplex& fc, const std::map<int, SparseMatrix>& gr_homotopies);

// ---------------------------------------------------------------- cobar complexes

// Hom complex of a truncated cobar category on an explicit word basis.
struct CobarComplex {
    std::vector<CobarWord> basis;
    std::map<CobarWord, int> index;
    ChainComplex complex;
};

CobarComplex cobar_complex(const Cobar& cobar, const std::vector<int>& src, const std::vector<int>& tgt,
                           int max_letters, bool graded_only = false);
CobarComplex make_cobar_complex(const Cobar& cobar, std::vector<CobarWord> basis, bool graded_only = false);

// Recursive null-homotopy r, merging the last variable-0 letter into the preceding factor.
// Throws OutOfScopeBidegree when the word has no variable-0 letters.
CobarChain contraction_r(const Cobar& cobar, const CobarWord& c);

// The letter-swap isomorphism from words over (A, B) to words over (B, A).
CobarChain swap_variables(const Cobar& from, const Cobar& to, const CobarWord& c);

// ξ: identity on V_{1,0} and V_{0,1}, inc11∘pro11 on V_{1,1}, zero elsewhere (one variable: identity on V_1).
CobarChain xi(const Cobar& cobar, const CobarWord& c);

// Null-homotopy of every bigraded piece: r when m > 1 or (m, n) = (1, 1) or one variable,
// σ r σ otherwise. Satisfies d r + r d = id - ξ for the graded differential.
class PieceHomotopy {
public:
    explicit PieceHomotopy(const Cobar& cobar);
    CobarChain operator()(const CobarWord& c) const;

private:
    const Cobar& cobar_;
    std::unique_ptr<Cobar> swapped_;
};

// ---------------------------------------------------------------- the reduced tensor product

// Basis element of red(aug A ⊗ aug B): a ⊗ b with -1 standing for the adjoined unit.
struct RedLetter {
    int a = -1;
    int b = -1;
    auto operator<=>(const RedLetter&) const = default;
};
using RedChain = Lin<RedLetter>;

// red(aug A ⊗ aug B) for the two variables of a cobar: hom pieces, differential, composition.
class RedTensor {
public:
    explicit RedTensor(const Cobar& cobar);

    std::vector<RedLetter> basis(const std::vector<int>& src, const std::vector<int>& tgt) const;
    int degree(const RedLetter& x) const;
    RedChain differential(const RedLetter& x) const;
    // x ∘ y with (a ⊗ b)(a' ⊗ b') = (-1)^{deg b deg a'} aa' ⊗ bb'.
    RedChain compose(const RedChain& x, const RedChain& y) const;
    ChainComplex complex(const std::vector<RedLetter>& basis) const;

    // The dg functor N : coB -> red(aug A ⊗ aug B) on one word.
    RedChain functor_N(const CobarWord& c) const;
    // [f][g] -> f ⊗ g, [g'][f'] -> (-1)^{deg f' deg g'} f' ⊗ g', single factors -> 0.
    RedChain pro11(const CobarWord& c) const;

private:
    const Cobar& cobar_;
    OpTable ma_, mb_;  // unshifted operations
};

// f ⊗ g -> (-1)^{deg f deg g} [g][f].
CobarChain inc11(const Cobar& cobar, int f, int g);
// Hom10, Hom01 and inc11 assembled into red(aug A ⊗ aug B)(src, tgt) -> coB(src, tgt).
CobarChain ab_map(const Cobar& cobar, const RedLetter& x, const std::vector<int>& src);

struct NCheck {
    bool ok = true;
    std::string failure;  // which comparison failed, with the word
    int words_checked = 0;
};
// N on ⊕_{m,n<=1} V_{m,n} against Hom10, Hom01, pro11, and N∘d = d∘N on words up to max_letters.
NCheck functor_N_check(const Cobar& cobar, int max_letters);

// Homotopy equivalence red(aug A ⊗ aug B) -> coB(C)_{<= max_letters} for one pair of object pairs.
ContractionCertificate ab_certificate(const Cobar& cobar, const std::vector<int>& src, const std::vector<int>& tgt,
                                      int max_letters);

// ---------------------------------------------------------------- η certificates

// A(src, tgt) -> U(A)(src, tgt)_{<= max_letters} through η¹.
ContractionCertificate eta_certificate(const StructurePtr& a, int src, int tgt, int max_letters);
// A(src, tgt) -> VdB(A)(src, tgt)_{<= max_letters} in the adapted basis.
ContractionCertificate quotient_certificate(const StrictQuotient& q, int src, int tgt);

}  // namespace ainfty
