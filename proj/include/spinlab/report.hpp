#pragma once
#include <string>
#include <vector>

#include "json.hpp"
#include "spinlab/core/types.hpp"

namespace spinlab {

inline constexpr const char* kArtifactVersion = "1.0.0";

// %.17g: lossless round-trip for doubles; used for every CSV number
std::string fmt17(double v);
std::string csv_row(const std::vector<std::string>& cells);

// complex numbers serialize as two-element [re, im] arrays
nlohmann::json json_complex(const cplx& z);
nlohmann::json json_cmat(const cmat& m);
nlohmann::json json_rvec(const rvec& v);

struct check_item {
    std::string name;
    bool pass = false;
    double measured = 0;
    double tolerance = 0;
};
nlohmann::json json_checks(const std::vector<check_item>& checks);

// every JSON-emitting subcommand wraps its payload in this envelope;
// wall_time_ms stays 0 unless timing was requested, keeping output
// byte-identical across runs and worker counts
struct report_envelope {
    std::string version = kArtifactVersion;
    nlohmann::json config;
    double wall_time_ms = 0;
    std::vector<check_item> checks;
    nlohmann::json report;

    bool all_pass() const;
    nlohmann::json to_json() const;
};

} // namespace spinlab
