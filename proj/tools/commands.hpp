#pragma once

#include "report.hpp"

#include <string>
#include <vector>

namespace ainfty::cli {

struct Args {
    std::vector<std::string> files;
    int arity = 4;
    int max_len = 4;
    bool check_d2 = false;
    bool certify = false;
    std::string out;
    std::string emit;
    std::string retraction;
    std::string src, tgt;  // object names, default first object
    std::string in;
    std::string gr_homotopies;
    std::string functor;
    std::string witness;
    std::string unit_homotopies;
    std::string emit_chain;
    int d_min = -2, d_max = 2;
    std::string require = "cohomological";
};

void run_validate(const Args& a, RunReport& r);
void run_functor_check(const Args& a, RunReport& r);
void run_nat_check(const Args& a, RunReport& r);
void run_bar(const Args& a, RunReport& r);
void run_cobar(const Args& a, RunReport& r);
void run_eta(const Args& a, RunReport& r);
void run_quotient(const Args& a, RunReport& r);
void run_contract(const Args& a, RunReport& r);
void run_verify(const Args& a, RunReport& r);
void run_strictify(const Args& a, RunReport& r);
void run_cohomology(const Args& a, RunReport& r);
void run_units(const Args& a, RunReport& r);
void run_tensor(const Args& a, RunReport& r);
void run_compose(const Args& a, RunReport& r);

}  // namespace ainfty::cli
