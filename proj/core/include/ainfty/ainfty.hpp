#pragma once

#include "ainfty/coeff.hpp"
#include "ainfty/graded.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ainfty {

struct Letter {
    std::string name;
    int src = 0;
    int tgt = 0;
    int deg = 0;
};

// Objects plus finite free graded hom modules; a letter is a basis element of some A(src, tgt).
class Quiver {
public:
    int add_object(const std::string& name);
    int add_letter(const std::string& name, int src, int tgt, int deg);

    int num_objects() const { return static_cast<int>(objects_.size()); }
    int num_letters() const { return static_cast<int>(letters_.size()); }
    const std::string& object_name(int o) const { return objects_[o]; }
    const std::vector<std::string>& objects() const { return objects_; }
    const Letter& letter(int l) const { return letters_[l]; }
    const std::vector<Letter>& letters() const { return letters_; }

    int object(const std::string& name) const;  // throws SchemaError
    int find_object(const std::string& name) const;  // -1 when absent
    int letter(int src, int tgt, const std::string& name) const;  // throws SchemaError
    int find_letter(int src, int tgt, const std::string& name) const;
    const std::vector<int>& hom(int src, int tgt) const;
    GradedModule hom_module(int src, int tgt) const;

    bool composable(const Word& w) const;
    int src(const Word& w) const { return letters_[w.front()].src; }
    int tgt(const Word& w) const { return letters_[w.back()].tgt; }
    int degree(const Word& w) const;
    std::vector<int> degrees(const Word& w) const;

    // Composable words of length n, optionally between fixed objects; deterministic order.
    std::vector<Word> words(int n) const;
    std::vector<Word> words(int n, int src, int tgt) const;

    bool operator==(const Quiver& o) const;

private:
    std::vector<std::string> objects_;
    std::vector<Letter> letters_;
    std::map<std::pair<int, int>, std::vector<int>> hom_;
};

// Input word -> linear combination of output letters.
using OpTable = std::map<Word, Lin<int>>;

// Convert a component table between unshifted and shifted conventions. The unshifted map on
// arity-i words has degree base_degree - i.
OpTable shift_table(const Quiver& src, const OpTable& t, int base_degree, ShiftDirection dir);

// An A∞ category truncated at max_arity; operations stored in shifted form b_i (degree +1).
struct Structure {
    Ring ring = Ring::Q();
    Quiver quiver;
    int max_arity = 2;
    OpTable ops;
    std::map<int, int> units;  // declared strict units, object -> letter
    bool dg = false;           // operations above arity 2 vanish

    // Largest arity through which the operations are known.
    int bound() const { return dg ? kUnbounded : max_arity; }
    static constexpr int kUnbounded = 1 << 20;

    const Lin<int>* op(const Word& w) const;
    OpTable unshifted() const;
    void set_unshifted(const OpTable& m);
    void set_unshifted_entry(const Word& in, int out, const Elem& c);
    void validate() const;  // composability, degrees, arity bound
    bool is_dg() const;     // no operations of arity > 2
};

using StructurePtr = std::shared_ptr<const Structure>;

struct Functor {
    StructurePtr source, target;
    std::vector<int> obj_map;
    int max_arity = 1;
    bool strict = false;  // components above arity 1 vanish
    OpTable comps;        // shifted, degree 0

    int bound() const { return strict ? Structure::kUnbounded : max_arity; }

    OpTable unshifted() const;
    void set_unshifted(const OpTable& m);
    void validate() const;
};

struct Prenat {
    std::shared_ptr<const Functor> from, to;
    int degree = 0;
    int max_arity = 1;
    OpTable comps;                 // arity >= 1, shifted, degree p - 1
    std::map<int, Lin<int>> zero;  // arity 0 per object, shifted

    const StructurePtr& source() const { return from->source; }
    const StructurePtr& target() const { return from->target; }
    OpTable unshifted() const;
    std::map<int, Lin<int>> unshifted_zero() const;
    void set_unshifted(const OpTable& m, const std::map<int, Lin<int>>& zero_components);
    void validate() const;
    bool is_zero() const;
};

struct Report {
    bool ok = true;
    int arity = 0;   // first violating arity
    Word word;       // first violating word
    int object = -1; // for arity-0 violations
    Lin<int> residual;
    int checked_through = 0;
    std::string detail;
};

// Literal associativity relations on unshifted operations.
Report check_stasheff(const Structure& a, int up_to);
// Same relations as b ∘ d_A = 0 on the shifted side.
Report check_stasheff_shifted(const Structure& a, int up_to);
Lin<int> stasheff_residual(const Structure& a, const OpTable& m, const Word& w);
Lin<int> stasheff_residual_shifted(const Structure& a, const Word& w);

Report check_functor(const Functor& f, int up_to);
Report check_functor_shifted(const Functor& f, int up_to);

// Left-hand side of the naturality relation as a prenatural transformation of degree p + 1.
Prenat m1_prenat(const Prenat& t);
// The same computed on the bar side as (-1)^p d_B θ̃ + θ̃ d_A projected to sB.
Prenat m1_prenat_bar(const Prenat& t);
// Largest arity through which m1_prenat(θ) is determined.
int m1_bound(const Prenat& t);
Report check_natural(const Prenat& t, int up_to);

struct GradedCategory {
    Ring ring;
    std::vector<std::string> objects;
    std::map<std::pair<int, int>, GradedModule> hom;
    // (left, right) basis pairs -> combination in the composite hom, for composable classes
    std::map<std::tuple<int, int, int, int, int>, Lin<int>> composition;  // (A, B, C, i, j): i in H(B,C), j in H(A,B)
    std::map<int, Lin<int>> identities;
    std::map<std::pair<int, int>, std::vector<Lin<int>>> representatives;  // cycles per class
    bool associative = true;
};

GradedCategory cohomology(const Structure& a, int d_min, int d_max);

struct UnitReport {
    bool strict = false;
    std::map<int, Lin<int>> strict_units;
    bool cohomological = false;
    std::map<int, Lin<int>> cohomological_units;
    bool unital = false;
    // homotopies h with m2(- ⊗ e) - id = d h + h d, keyed by (object pair, side)
    std::map<std::tuple<int, int, int>, std::map<std::pair<int, int>, Elem>> homotopies;
    std::string detail;
};

// Strict units are searched if not declared; over Z the cohomological and unital searches use
// integer solving.
UnitReport unit_checks(const Structure& a);
bool check_strict_units(const Structure& a, const std::map<int, Lin<int>>& units, std::string* why = nullptr);
std::optional<std::map<int, Lin<int>>> find_strict_units(const Structure& a);
std::map<int, Lin<int>> declared_units(const Structure& a);

Structure augment(const Structure& a);
Structure tensor_dg(const Structure& a, const Structure& b);

Functor identity_functor(const StructurePtr& a, int max_arity);
Functor compose_functors(const Functor& g, const Functor& f);

struct HomotopyCertificate {
    Prenat theta;  // read as from -> to
    bool equation_holds = false;
    Report functor_report;
};

// Builds G with G^i = F^i + m1(θ)^i, where θ is read as F -> G.
std::pair<Functor, HomotopyCertificate> perturb_by_homotopy(const Functor& f, const Prenat& theta);

// Whether G = F + m1(θ) holds through the common arity bound; on failure fills the report.
Report check_homotopy(const Functor& f, const Functor& g, const Prenat& theta);

// Helpers shared with other modules.
Prenat zero_prenat(const std::shared_ptr<const Functor>& from, const std::shared_ptr<const Functor>& to, int degree,
                   int max_arity);
Lin<Word> tensor_product(const Ring& r, const std::vector<Lin<int>>& parts);
Lin<int> apply_table(const OpTable& t, const Lin<Word>& x);
// Ordered compositions of n into positive parts, rightmost part first; n = 0 gives one empty composition.
const std::vector<std::vector<int>>& compositions(int n);

}  // namespace ainfty
