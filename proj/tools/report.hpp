#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace ainfty::cli {

using json = nlohmann::json;

enum class Verdict { Pass, Fail, Error };

// Everything a run produces apart from artifacts; serialized under kind "run-report".
struct RunReport {
    std::string command;
    json inputs = json::array();      // [{path, hash}]
    json truncation = json::object();
    Verdict verdict = Verdict::Pass;
    json witnesses = json::object();
    json artifacts = json::array();
    json error = nullptr;             // {code, message}
    double millis = 0;
    std::vector<std::string> lines;   // human-readable summary

    void say(std::string line) { lines.push_back(std::move(line)); }
    void fail(std::string why) {
        verdict = Verdict::Fail;
        say(std::move(why));
    }
    json to_json(bool with_timing) const;
};

int exit_code(Verdict v);
const char* verdict_name(Verdict v);

// Reads a file and records its content hash among the inputs; throws IoError.
std::string read_input(RunReport& report, const std::string& path);

// Writes via a temporary file and rename; records the artifact.
void write_artifact(RunReport& report, const std::string& path, const std::string& content);

}  // namespace ainfty::cli
