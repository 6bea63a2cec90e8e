#pragma once

#include "ainfty/contraction.hpp"

#include <map>
#include <string>

// JSON documents tagged "schema":"ainfty/1". Emission is canonical: sorted keys, entries in
// table order, coefficients in lowest terms, so emit(parse(emit(x))) == emit(x).
namespace ainfty::io {

inline constexpr const char* kSchema = "ainfty/1";

// "structure", "functor", "prenat", "complex", "filtered", "contraction", "witness", ...
std::string kind_of(const std::string& text);

std::string emit_ring(const Ring& r);
Ring parse_ring(const std::string& text);

std::string emit_module(const GradedModule& m);
GradedModule parse_module(const std::string& text);

std::string emit_structure(const Structure& a);
Structure parse_structure(const std::string& text);

// Source and target structures are embedded.
std::string emit_functor(const Functor& f);
Functor parse_functor(const std::string& text);

std::string emit_prenat(const Prenat& t);
Prenat parse_prenat(const std::string& text);

std::string emit_complex(const ChainComplex& c);
ChainComplex parse_complex(const std::string& text);

std::string emit_filtered(const FilteredComplex& fc);
FilteredComplex parse_filtered(const std::string& text);

// Levels n -> h_n on gr_n; matrices as {"rows", "cols", "entries":[[row, col, coeff], ...]}.
std::string emit_gr_homotopies(const Ring& r, const std::map<int, SparseMatrix>& h);
std::map<int, SparseMatrix> parse_gr_homotopies(const std::string& text);

std::string emit_certificate(const ContractionCertificate& c);
ContractionCertificate parse_certificate(const std::string& text);

// Retraction p_A on the letters of A(A, A).
std::string emit_witness(const Structure& a, const SplitUnitWitness& w);
SplitUnitWitness parse_witness(const Structure& a, const std::string& text);

// h_A per object as a combination of letters of the target.
std::string emit_unit_homotopies(const Functor& f, const std::map<int, Lin<int>>& h);
std::map<int, Lin<int>> parse_unit_homotopies(const Functor& f, const std::string& text);

// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string content_hash(const std::string& bytes);

}  // namespace ainfty::io
