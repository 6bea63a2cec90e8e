#include "commands.hpp"

#include "ainfty/coeff.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <set>

using namespace ainfty::cli;

namespace {

// Error codes that mean the input itself is unusable; every other module error is a mathematical verdict.
bool is_input_error(const std::string& code) {
    static const std::set<std::string> input{"SchemaError",       "RingMismatch",      "DegreeMismatch",
                                             "DimensionMismatch", "UnsupportedRing",   "OutOfScopeBidegree",
                                             "NotDg",             "IoError"};
    return input.count(code) > 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact A∞ categories: relation checks, bar/cobar, contractions, strictification"};
    app.require_subcommand(1);
    bool as_json = false;
    std::string report_path;
    app.add_flag("--json", as_json, "Print the run report as JSON instead of text");
    app.add_option("--report", report_path, "Also write the run report (with timing) to this file");

    Args args;
    std::map<CLI::App*, void (*)(const Args&, RunReport&)> run;
    auto command = [&](const char* name, const char* help, void (*fn)(const Args&, RunReport&)) {
        CLI::App* sub = app.add_subcommand(name, help);
        run[sub] = fn;
        return sub;
    };
    auto input = [&](CLI::App* sub, int n = 1) {
        sub->add_option("input", args.files, n == 1 ? "Input JSON document" : "Input JSON documents")
            ->required()
            ->expected(n)
            ->check(CLI::ExistingFile);
    };

    auto* validate = command("validate", "Check a document; for structures, the A∞ relations", run_validate);
    input(validate);
    validate->add_option("--arity", args.arity, "Check relations through this arity")->capture_default_str();

    auto* fcheck = command("functor-check", "Check the A∞ functor relations", run_functor_check);
    input(fcheck);
    fcheck->add_option("--arity", args.arity)->capture_default_str();

    auto* ncheck = command("nat-check", "Check that a prenatural transformation is natural", run_nat_check);
    input(ncheck);
    ncheck->add_option("--arity", args.arity)->capture_default_str();

    auto* bar = command("bar", "Bar construction on words up to a length", run_bar);
    input(bar);
    bar->add_option("--max-len", args.max_len)->capture_default_str();
    bar->add_flag("--check-d2", args.check_d2, "Check d^2 = 0");
    bar->add_option("--emit", args.emit, "Write the bar differential table");

    auto* cobar = command("cobar", "Cobar of the bar construction up to a letter count", run_cobar);
    input(cobar);
    cobar->add_option("--max-len", args.max_len)->capture_default_str();
    cobar->add_option("--emit", args.emit, "Write the truncated cobar category");

    auto* eta = command("eta", "The unit functor A -> coB(Bi(A)) and its certificate", run_eta);
    input(eta);
    eta->add_option("--max-len", args.max_len)->capture_default_str();
    eta->add_flag("--certify", args.certify, "Write a contraction certificate");
    eta->add_option("--out", args.out, "Certificate path (default eta-certificate.json)");
    eta->add_option("--src", args.src, "Source object (default the first)");
    eta->add_option("--tgt", args.tgt, "Target object (default the first)");

    auto* quotient = command("quotient", "Strict-unit quotient of coB(Bi(A))", run_quotient);
    input(quotient);
    quotient->add_option("--max-len", args.max_len)->capture_default_str();
    quotient->add_option("--retraction", args.retraction, "Split-unit witness")->check(CLI::ExistingFile);
    quotient->add_flag("--certify", args.certify, "Write a contraction certificate");
    quotient->add_option("--out", args.out, "Certificate path (default quotient-certificate.json)");
    quotient->add_option("--emit", args.emit, "Write normal forms and their differential");
    quotient->add_option("--src", args.src);
    quotient->add_option("--tgt", args.tgt);

    auto* contract = command("contract", "Contraction of a filtered complex onto its first level", run_contract);
    contract->add_option("--in", args.in, "Filtered complex")->required()->check(CLI::ExistingFile);
    contract->add_option("--gr-homotopies", args.gr_homotopies, "Null-homotopies of the graded pieces")
        ->check(CLI::ExistingFile);
    contract->add_option("--out", args.out, "Certificate path (default contraction-certificate.json)");

    auto* verify = command("verify", "Recheck a contraction certificate", run_verify);
    input(verify);

    auto* strictify =
        command("strictify", "Replace a unital functor by a homotopic strictly unital one", run_strictify);
    strictify->add_option("--functor", args.functor)->required()->check(CLI::ExistingFile);
    strictify->add_option("--witness", args.witness, "Split-unit witness on the source")->check(CLI::ExistingFile);
    strictify->add_option("--unit-homotopies", args.unit_homotopies, "h_A with F(id_A) = id - m1(h_A)")
        ->check(CLI::ExistingFile);
    strictify->add_option("--arity", args.arity)->capture_default_str();
    strictify->add_option("--emit-chain", args.emit_chain, "Directory for stage homotopies and the result");

    auto* cohom = command("cohomology", "Graded cohomology category", run_cohomology);
    input(cohom);
    cohom->add_option("--dmin", args.d_min)->capture_default_str();
    cohom->add_option("--dmax", args.d_max)->capture_default_str();

    auto* units = command("units", "Strict, cohomological and homotopy units", run_units);
    input(units);
    units->add_option("--require", args.require, "Unit level needed to pass")
        ->check(CLI::IsMember({"none", "cohomological", "unital", "strict"}))
        ->capture_default_str();

    auto* tensor = command("tensor", "Tensor product of two dg categories", run_tensor);
    input(tensor, 2);
    tensor->add_option("--out", args.out)->required();

    auto* compose = command("compose", "Composite G∘F of functors given as G F", run_compose);
    input(compose, 2);
    compose->add_option("--out", args.out)->required();
    compose->add_option("--arity", args.arity)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    RunReport report;
    report.command = sub->get_name();
    const auto start = std::chrono::steady_clock::now();
    try {
        run.at(sub)(args, report);
    } catch (const ainfty::Error& e) {
        report.verdict = is_input_error(e.code()) ? Verdict::Error : Verdict::Fail;
        report.error = {{"code", e.code()}, {"message", e.what()}};
    } catch (const std::exception& e) {
        report.verdict = Verdict::Error;
        report.error = {{"code", "InternalError"}, {"message", e.what()}};
    }
    report.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    if (!report_path.empty()) {
        try {
            write_artifact(report, report_path, report.to_json(true).dump(2) + "\n");
        } catch (const ainfty::Error& e) {
            std::cerr << e.what() << "\n";
            return 2;
        }
    }
    if (as_json) {
        std::cout << report.to_json(true).dump(2) << "\n";
    } else {
        for (const auto& line : report.lines) std::cout << line << "\n";
        for (const auto& art : report.artifacts) std::cout << "wrote " << art["path"].get<std::string>() << "\n";
        if (!report.error.is_null()) std::cout << "error: " << report.error["message"].get<std::string>() << "\n";
        std::cout << report.command << ": " << verdict_name(report.verdict) << "\n";
    }
    return exit_code(report.verdict);
}
