#include "report.hpp"

#include "ainfty/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ainfty::cli {

json RunReport::to_json(bool with_timing) const {
    json j = {{"schema", io::kSchema},
              {"kind", "run-report"},
              {"command", command},
              {"inputs", inputs},
              {"truncation", truncation},
              {"verdict", verdict_name(verdict)},
              {"witnesses", witnesses},
              {"artifacts", artifacts},
              {"error", error}};
    if (with_timing) j["timing_ms"] = millis;
    return j;
}

int exit_code(Verdict v) {
    switch (v) {
        case Verdict::Pass: return 0;
        case Verdict::Fail: return 1;
        case Verdict::Error: return 2;
    }
    return 2;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Error: return "error";
    }
    return "error";
}

std::string read_input(RunReport& report, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IoError", "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    report.inputs.push_back({{"path", path}, {"hash", io::content_hash(text)}});
    return text;
}

void write_artifact(RunReport& report, const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    std::error_code ec;
    if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("IoError", "cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) throw Error("IoError", "short write to '" + tmp.string() + "'");
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error("IoError", "cannot move artifact into '" + path + "'");
    }
    report.artifacts.push_back({{"path", path}, {"hash", io::content_hash(content)}});
}

}  // namespace ainfty::cli
