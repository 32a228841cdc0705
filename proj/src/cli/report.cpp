#include "spinlab/report.hpp"

#include <cstdio>

namespace spinlab {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_row(const std::vector<std::string>& cells) {
    std::string out;
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    out += '\n';
    return out;
}

nlohmann::json json_complex(const cplx& z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

nlohmann::json json_cmat(const cmat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json_complex(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

nlohmann::json json_rvec(const rvec& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

nlohmann::json json_checks(const std::vector<check_item>& checks) {
    nlohmann::json arr = nlohmann::json::array();
    for (const check_item& c : checks) {
        arr.push_back({{"name", c.name},
                       {"pass", c.pass},
                       {"measured", c.measured},
                       {"tolerance", c.tolerance}});
    }
    return arr;
}

bool report_envelope::all_pass() const {
    for (const check_item& c : checks)
        if (!c.pass) return false;
    return true;
}

nlohmann::json report_envelope::to_json() const {
    return {{"version", version},
            {"config", config},
            {"wall_time_ms", wall_time_ms},
            {"checks", json_checks(checks)},
            {"report", report}};
}

} // namespace spinlab
