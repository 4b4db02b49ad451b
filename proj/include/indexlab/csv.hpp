#pragma once

#include <charconv>
#include <string>
#include <vector>

#include "runrecord.hpp"

namespace indexlab {

namespace csv_detail {

// shortest decimal form that parses back to the same double
inline std::string num(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace csv_detail

// One row per loop sample; ragged rows are padded with empty cells so the
// header covers the widest sample.
inline std::string eigenvalue_csv(const std::vector<double>& params,
                                  const std::vector<std::vector<double>>& values) {
    if (params.empty() || params.size() != values.size())
        throw missing_data("eigenvalue table is empty or misaligned");
    std::size_t widest = 0;
    for (const auto& row : values) widest = std::max(widest, row.size());

    std::string out = "s";
    for (std::size_t k = 1; k <= widest; ++k) out += ",lambda_" + std::to_string(k);
    out += "\n";
    for (std::size_t r = 0; r < params.size(); ++r) {
        out += csv_detail::num(params[r]);
        for (std::size_t k = 0; k < widest; ++k) {
            out += ",";
            if (k < values[r].size()) out += csv_detail::num(values[r][k]);
        }
        out += "\n";
    }
    return out;
}

inline std::string flux_csv(const std::vector<FluxRow>& rows) {
    std::string out = "component,i,j,flux\n";
    for (const auto& row : rows) {
        out += std::to_string(row.component) + "," + std::to_string(row.i) + "," +
               std::to_string(row.j) + "," + csv_detail::num(row.flux) + "\n";
    }
    return out;
}

inline std::string eigenvalue_csv(const RunRecord& r) {
    return eigenvalue_csv(r.sample_params, r.eigenvalues);
}

inline std::string flux_csv(const RunRecord& r) { return flux_csv(r.fluxes); }

}  // namespace indexlab
