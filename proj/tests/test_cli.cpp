#include "doctest.h"

#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

std::string quoted(const std::string& s) { return "'" + s + "'"; }

Run tool(const std::string& args) {
    std::string cmd = quoted(AINFTY_TOOL) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name) { return quoted(std::string(AINFTY_DATA) + "/" + name); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Fresh scratch directory per test case.
fs::path scratch(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("ainfty-cli-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

json report_of(const Run& r) { return json::parse(r.out); }

}  // namespace

TEST_CASE("validate passes on the dual numbers and names the failing word otherwise") {
    Run ok = tool("validate " + data("dual_numbers.json") + " --arity 6");
    CHECK(ok.code == 0);
    CHECK(ok.out.find("validate: pass") != std::string::npos);

    Run bad = tool("--json validate " + data("nonassociative.json") + " --arity 4");
    CHECK(bad.code == 1);
    json rep = report_of(bad);
    CHECK(rep["verdict"] == "fail");
    CHECK(rep["witnesses"]["arity"] == 3);
    CHECK(rep["witnesses"]["word"]["in"] == json::array({"a", "a", "a"}));
}

TEST_CASE("eta certificate is accepted by verify, and a flipped coefficient is caught") {
    auto dir = scratch("eta");
    auto cert = dir / "cert.json";
    Run made = tool("eta " + data("dual_numbers.json") + " --max-len 4 --certify --out " + quoted(cert.string()));
    REQUIRE(made.code == 0);
    CHECK(tool("verify " + quoted(cert.string())).code == 0);

    for (const char* map : {"h", "p", "i"}) {
        json doc = json::parse(slurp(cert));
        REQUIRE_FALSE(doc[map].empty());
        auto& entry = doc[map][0];
        entry["coeff"] = entry["coeff"] == "1" ? "2" : "1";
        auto bad = dir / (std::string("tampered-") + map + ".json");
        std::ofstream(bad) << doc.dump(2);
        Run r = tool("--json verify " + quoted(bad.string()));
        CAPTURE(map);
        CHECK(r.code == 1);
        json rep = report_of(r);
        CHECK(rep["verdict"] == "fail");
        CHECK_FALSE(rep["witnesses"]["identity"].get<std::string>().empty());
    }
}

TEST_CASE("the split-unit quotient certificate over Z verifies") {
    auto dir = scratch("quotient");
    auto cert = dir / "q.json";
    Run r = tool("quotient " + data("dual_numbers_z.json") + " --max-len 4 --retraction " +
                 data("dual_numbers_z_retraction.json") + " --certify --out " + quoted(cert.string()));
    CHECK(r.code == 0);
    CHECK(tool("verify " + quoted(cert.string())).code == 0);

    Run missing = tool("--json quotient " + data("dual_numbers_z.json") + " --max-len 3");
    CHECK(missing.code == 1);
    CHECK(report_of(missing)["error"]["code"] == "SplitUnitsRequired");
}

TEST_CASE("contract writes a certificate and rejects the non-split filtration") {
    auto dir = scratch("contract");
    auto cert = dir / "c.json";
    Run r = tool("contract --in " + data("filtered.json") + " --gr-homotopies " + data("gr_homotopies.json") +
                 " --out " + quoted(cert.string()));
    CHECK(r.code == 0);
    CHECK(tool("verify " + quoted(cert.string())).code == 0);

    Run ns = tool("--json contract --in " + data("nonsplit_z.json") + " --out " + quoted((dir / "x.json").string()));
    CHECK(ns.code == 1);
    CHECK(report_of(ns)["error"]["code"] == "SplittingMissing");
    CHECK_FALSE(fs::exists(dir / "x.json"));
}

TEST_CASE("strictify emits a chain whose result passes the functor check") {
    auto dir = scratch("strictify");
    Run r = tool("strictify --functor " + data("zero_functor.json") + " --witness " + data("ground_retraction.json") +
                 " --arity 4 --emit-chain " + quoted(dir.string()));
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "functor.json"));
    CHECK(fs::exists(dir / "total.json"));
    CHECK(fs::exists(dir / "stage-01-n1-m1.json"));
    for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().extension() != ".tmp");
    CHECK(tool("functor-check " + quoted((dir / "functor.json").string()) + " --arity 4").code == 0);

    Run missing = tool("--json strictify --functor " + data("zero_functor.json") + " --arity 4");
    CHECK(missing.code == 1);
    CHECK(report_of(missing)["error"]["code"] == "SplitUnitsRequired");
}

TEST_CASE("reports are reproducible apart from timing") {
    auto dir = scratch("reports");
    auto one = dir / "1.json", two = dir / "2.json";
    const std::string args = " bar " + data("m3_f5.json") + " --check-d2 --max-len 5";
    REQUIRE(tool("--report " + quoted(one.string()) + args).code == 0);
    REQUIRE(tool("--report " + quoted(two.string()) + args).code == 0);
    json a = json::parse(slurp(one)), b = json::parse(slurp(two));
    CHECK(a.contains("timing_ms"));
    a.erase("timing_ms");
    b.erase("timing_ms");
    CHECK(a == b);
    CHECK(a["inputs"][0]["hash"].get<std::string>().size() == 16);
}

TEST_CASE("bad input exits with code 2") {
    auto dir = scratch("bad");
    auto junk = dir / "junk.json";
    std::ofstream(junk) << "{ not json";
    Run r = tool("--json validate " + quoted(junk.string()));
    CHECK(r.code == 2);
    CHECK(report_of(r)["error"]["code"] == "SchemaError");
    CHECK(tool("validate " + quoted((dir / "absent.json").string())).code == 2);
    CHECK(tool("no-such-command").code == 2);
    CHECK(tool("").code == 2);
    CHECK(tool("units " + data("dual_numbers.json") + " --require sometimes").code == 2);
}

TEST_CASE("the remaining commands run on the shipped examples") {
    auto dir = scratch("misc");
    CHECK(tool("cobar " + data("dual_numbers.json") + " --max-len 3").code == 0);
    CHECK(tool("cohomology " + data("dual_numbers.json")).code == 0);
    CHECK(tool("units " + data("dual_numbers.json") + " --require strict").code == 0);
    CHECK(tool("units " + data("nonassociative.json") + " --require unital").code == 1);
    auto t = dir / "t.json";
    CHECK(tool("tensor " + data("dual_numbers.json") + " " + data("dual_numbers.json") + " --out " + quoted(t.string()))
              .code == 0);
    CHECK(tool("validate " + quoted(t.string()) + " --arity 4").code == 0);
    auto c = dir / "c.json";
    CHECK(
        tool("compose " + data("end_identity.json") + " " + data("zero_functor.json") + " --out " + quoted(c.string()))
            .code == 0);
    CHECK(tool("functor-check " + quoted(c.string()) + " --arity 4").code == 0);
    CHECK(tool("compose " + data("zero_functor.json") + " " + data("zero_functor.json") + " --out " +
               quoted((dir / "x.json").string()))
              .code == 2);
    // a homotopy is not natural: m1(θ) = G - F
    auto sdir = dir / "chain";
    REQUIRE(tool("strictify --functor " + data("zero_functor.json") + " --witness " + data("ground_retraction.json") +
                 " --arity 3 --emit-chain " + quoted(sdir.string()))
                .code == 0);
    CHECK(tool("nat-check " + quoted((sdir / "total.json").string()) + " --arity 3").code == 1);
}
