#pragma once

#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cayley.hpp"
#include "ktheory.hpp"
#include "scenario.hpp"
#include "spectral_flow.hpp"

namespace indexlab {

inline constexpr const char* tool_version = "indexlab 0.1.0";

struct FluxRow {
    int component = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    double flux = 0.0;
};

// Everything one verification run produced, keyed by a content hash of the
// canonical scenario.  Immutable once written; the eigenvalue table and the
// flux rows carry enough data to regenerate every report byte-identically.
struct RunRecord {
    std::string scenario_name;
    std::string hash;
    std::string tool;
    std::string created_utc;
    std::vector<long> ind_t_components;
    long ind_t = 0;
    long ind_a = 0;
    long cayley = 0;
    bool match = false;
    double window = 1.0;
    std::size_t grid_n_t = 0;
    std::size_t grid_n_theta = 0;
    double gap = 0.0;
    double defect_max = 0.0;
    std::size_t samples_used = 0;
    std::size_t refine_rounds = 0;
    bool edge_warning = false;
    std::vector<double> sample_params;
    std::vector<std::vector<double>> eigenvalues;
    std::vector<FluxRow> fluxes;
};

namespace record_detail {

inline std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int k = 15; k >= 0; --k) {
        out[static_cast<std::size_t>(k)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

inline std::string utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace record_detail

inline std::string scenario_hash(const Scenario& sc) {
    const std::string payload = canonical_scenario(sc).dump() + "|" + tool_version;
    return record_detail::hex64(record_detail::fnv1a(payload));
}

inline nlohmann::json record_to_json(const RunRecord& r) {
    nlohmann::json j;
    j["scenario_name"] = r.scenario_name;
    j["hash"] = r.hash;
    j["tool"] = r.tool;
    j["created_utc"] = r.created_utc;
    j["ind_t_components"] = r.ind_t_components;
    j["ind_t"] = r.ind_t;
    j["ind_a"] = r.ind_a;
    j["cayley"] = r.cayley;
    j["match"] = r.match;
    j["window"] = r.window;
    j["grid_n_t"] = r.grid_n_t;
    j["grid_n_theta"] = r.grid_n_theta;
    j["gap"] = r.gap;
    j["defect_max"] = r.defect_max;
    j["samples_used"] = r.samples_used;
    j["refine_rounds"] = r.refine_rounds;
    j["edge_warning"] = r.edge_warning;
    j["sample_params"] = r.sample_params;
    j["eigenvalues"] = r.eigenvalues;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& f : r.fluxes)
        rows.push_back({{"component", f.component}, {"i", f.i}, {"j", f.j}, {"flux", f.flux}});
    j["fluxes"] = std::move(rows);
    return j;
}

inline RunRecord record_from_json(const nlohmann::json& j) {
    RunRecord r;
    try {
        r.scenario_name = j.at("scenario_name").get<std::string>();
        r.hash = j.at("hash").get<std::string>();
        r.tool = j.at("tool").get<std::string>();
        r.created_utc = j.at("created_utc").get<std::string>();
        r.ind_t_components = j.at("ind_t_components").get<std::vector<long>>();
        r.ind_t = j.at("ind_t").get<long>();
        r.ind_a = j.at("ind_a").get<long>();
        r.cayley = j.at("cayley").get<long>();
        r.match = j.at("match").get<bool>();
        r.window = j.at("window").get<double>();
        r.grid_n_t = j.at("grid_n_t").get<std::size_t>();
        r.grid_n_theta = j.at("grid_n_theta").get<std::size_t>();
        r.gap = j.at("gap").get<double>();
        r.defect_max = j.at("defect_max").get<double>();
        r.samples_used = j.at("samples_used").get<std::size_t>();
        r.refine_rounds = j.at("refine_rounds").get<std::size_t>();
        r.edge_warning = j.at("edge_warning").get<bool>();
        r.sample_params = j.at("sample_params").get<std::vector<double>>();
        r.eigenvalues = j.at("eigenvalues").get<std::vector<std::vector<double>>>();
        for (const auto& row : j.at("fluxes")) {
            FluxRow f;
            f.component = row.at("component").get<int>();
            f.i = row.at("i").get<std::size_t>();
            f.j = row.at("j").get<std::size_t>();
            f.flux = row.at("flux").get<double>();
            r.fluxes.push_back(f);
        }
    } catch (const nlohmann::json::exception& e) {
        throw missing_data(std::string("run record is malformed: ") + e.what());
    }
    return r;
}

inline std::filesystem::path cache_dir() {
    if (const char* env = std::getenv("INDEXLAB_CACHE_DIR"); env && *env)
        return std::filesystem::path(env);
    return std::filesystem::path(".indexlab-cache");
}

// Single writer: the payload lands in a sibling temp file first and is
// renamed over the final path, so readers never see a partial record.
inline void save_record(const RunRecord& r, const std::filesystem::path& dir = cache_dir()) {
    std::filesystem::create_directories(dir);
    const auto target = dir / (r.hash + ".json");
    const auto temp = dir / (r.hash + ".json.tmp");
    {
        std::ofstream out(temp);
        out << record_to_json(r).dump(2) << "\n";
        if (!out) throw error("cannot write run record to " + temp.string());
    }
    std::filesystem::rename(temp, target);
}

inline std::optional<RunRecord> load_cached(const std::string& hash,
                                            const std::filesystem::path& dir = cache_dir()) {
    const auto path = dir / (hash + ".json");
    std::ifstream in(path);
    if (!in) return std::nullopt;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error&) {
        return std::nullopt;
    }
    return record_from_json(j);
}

// Runs both routes of the index computation on one scenario: boundary Chern
// numbers on the lattice and the two spectral-flow readings of the
// assembled operator family, plus the gap and hermiticity diagnostics the
// reports quote.
inline RunRecord run_verify(const Scenario& sc, const FlowOptions& opt = {}) {
    RunRecord r;
    r.scenario_name = sc.name;
    r.hash = scenario_hash(sc);
    r.tool = tool_version;
    r.created_utc = record_detail::utc_now();
    r.window = sc.window;
    r.grid_n_t = sc.grid.n_t;
    r.grid_n_theta = sc.grid.n_theta;

    LoopFamilySpec spec = family_from_scenario(sc);
    for (const auto& field : build_f_field(spec)) {
        const long c = chern_number(field);
        r.ind_t_components.push_back(c);
        r.ind_t += c;
        for (const auto& f : plaquette_fluxes(field).fluxes)
            r.fluxes.push_back({field.component_id, f.i, f.j, f.flux});
    }

    DiscreteFamily family = assemble(spec, sc.grid, sc.window);
    FlowResult sf = spectral_flow_result(family, opt);
    FlowResult cf = cayley_flow_result(family, opt);
    r.ind_a = sf.flow;
    r.cayley = cf.flow;
    r.match = r.ind_t == r.ind_a && r.cayley == r.ind_a;
    r.gap = sf.min_abs_eigenvalue;
    r.samples_used = sf.samples_used;
    r.refine_rounds = sf.refine_rounds;
    r.edge_warning = sf.edge_warning || cf.edge_warning;

    for (std::size_t k = 0; k <= opt.initial_samples; ++k) {
        const double s = static_cast<double>(k) / static_cast<double>(opt.initial_samples);
        std::vector<double> inside;
        for (double lam : family.spectrum(s))
            if (std::abs(lam) <= sc.window) inside.push_back(lam);
        r.sample_params.push_back(s);
        r.eigenvalues.push_back(std::move(inside));
    }

    for (int k = 0; k < 5; ++k) {
        const double s = static_cast<double>(k) / 5.0;
        r.defect_max = std::max(r.defect_max, family.sample(s).compressed.hermitian_defect());
    }
    return r;
}

// All Appendix-style exact identities up to the requested size, reported as
// JSON with the integer witnesses; sizes past the supported caps are listed
// as skipped rather than failing the run.
inline nlohmann::json run_ktheory(std::size_t n_max) {
    if (n_max < 2) throw index_out_of_range("identities start at two variables");
    nlohmann::json report;
    report["schema_version"] = 1;
    report["tool"] = tool_version;
    report["n_max"] = n_max;
    bool all_green = true;

    nlohmann::json dn = nlohmann::json::array();
    nlohmann::json nun = nlohmann::json::array();
    nlohmann::json pib = nlohmann::json::array();
    nlohmann::json skipped = nlohmann::json::array();
    constexpr std::size_t dn_cap = 5;
    constexpr std::size_t pib_cap = 4;

    for (std::size_t n = 2; n <= n_max; ++n) {
        if (n > dn_cap) {
            skipped.push_back({{"check", "dn"}, {"n", n}, {"reason", "TooLarge"}});
            skipped.push_back({{"check", "nun"}, {"n", n}, {"reason", "TooLarge"}});
        } else {
            DnWitness w = verify_dn(n);
            const std::string coeff =
                w.reduced.coordinates.empty() ? "0" : w.reduced.coordinates.begin()->second.str();
            dn.push_back({{"n", n},
                          {"ok", w.ok},
                          {"coefficient", coeff},
                          {"matches_determinant_route", w.ok}});
            const bool nun_ok = verify_nun(n);
            nun.push_back({{"n", n}, {"ok", nun_ok}});
            all_green = all_green && w.ok && nun_ok;
        }
        if (n > pib_cap) {
            skipped.push_back({{"check", "pi_star_b"}, {"n", n}, {"reason", "TooLarge"}});
        } else {
            PiStarBResult p = pi_star_b(n);
            pib.push_back({{"n", n},
                           {"ok", p.ok},
                           {"sign", p.sign},
                           {"magnitude", p.magnitude.str()}});
            all_green = all_green && p.ok;
        }
    }
    report["dn"] = std::move(dn);
    report["nun"] = std::move(nun);
    report["pi_star_b"] = std::move(pib);
    report["skipped"] = std::move(skipped);
    report["all_green"] = all_green;
    return report;
}

}  // namespace indexlab
