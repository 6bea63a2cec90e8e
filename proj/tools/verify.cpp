// Certificate checking reads only the serialized maps and recomputes the identities.
#include "commands.hpp"

#include "ainfty/contraction.hpp"
#include "ainfty/io.hpp"

namespace ainfty::cli {

void run_verify(const Args& a, RunReport& r) {
    const std::string& path = a.files.at(0);
    ContractionCertificate cert = io::parse_certificate(read_input(r, path));
    r.truncation = cert.window;
    r.truncation["source_rank"] = cert.source.size();
    r.truncation["target_rank"] = cert.target.size();
    CertificateCheck check = verify_certificate(cert);
    if (check.ok) {
        r.say("certificate verifies: p∘i = id, id - i∘p = d h + h d, i and p are chain maps");
        return;
    }
    r.witnesses = {{"identity", check.identity}, {"detail", check.detail}};
    r.fail("violated identity: " + check.identity + (check.detail.empty() ? "" : " (" + check.detail + ")"));
}

}  // namespace ainfty::cli
