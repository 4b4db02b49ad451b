#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "assembly.hpp"
#include "topological.hpp"

namespace indexlab {

// A verification run fully described as data: which loop family to build,
// the operator grid, the boundary lattice, the trusted window, and the seed
// for randomized suites.  Parsed from JSON; the canonical form is what gets
// hashed for the run cache.
struct Scenario {
    std::string name;
    int schema_version = 1;
    nlohmann::json family;
    CylinderGrid grid = make_grid(8);
    std::size_t lattice_theta = 32;
    std::size_t lattice_s = 32;
    double window = 1.0;
    std::uint64_t seed = 0;
};

namespace scenario_detail {

inline std::pair<std::size_t, std::size_t> parse_extents(const std::string& text,
                                                         const char* what) {
    const auto x = text.find('x');
    if (x == std::string::npos || x == 0 || x + 1 == text.size())
        throw invalid_scenario(std::string(what) + " must look like NxM");
    std::size_t a = 0, b = 0;
    try {
        std::size_t used = 0;
        a = std::stoul(text.substr(0, x), &used);
        if (used != x) throw std::invalid_argument("trailing");
        b = std::stoul(text.substr(x + 1), &used);
        if (used != text.size() - x - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw invalid_scenario(std::string(what) + " must look like NxM");
    }
    if (a == 0 || b == 0) throw invalid_scenario(std::string(what) + " extents must be positive");
    return {a, b};
}

inline double number_field(const nlohmann::json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw invalid_scenario(std::string(key) + " must be a number");
    return j.at(key).get<double>();
}

inline int int_field(const nlohmann::json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer())
        throw invalid_scenario(std::string(key) + " must be an integer");
    return j.at(key).get<int>();
}

// Accepts an integer resolution (square grid, odd angular count chosen
// automatically) or a "NtxNtheta" string; even angular counts are bumped to
// the next odd value so the angular derivative stays invertible on the
// nonconstant modes.
inline CylinderGrid parse_grid(const nlohmann::json& j) {
    if (j.is_number_integer()) {
        const long g = j.get<long>();
        if (g < 7) throw invalid_scenario("grid resolution must be at least 7");
        return make_grid(static_cast<std::size_t>(g));
    }
    if (j.is_string()) {
        const auto [nt, ntheta] = parse_extents(j.get<std::string>(), "grid");
        if (nt < 7) throw invalid_scenario("grid needs at least 7 axial intervals");
        CylinderGrid grid;
        grid.n_t = nt;
        grid.n_theta = ntheta % 2 == 1 ? ntheta : ntheta + 1;
        return grid;
    }
    throw invalid_scenario("grid must be an integer or a NtxNtheta string");
}

inline std::pair<std::size_t, std::size_t> parse_lattice(const nlohmann::json& j) {
    if (j.is_number_integer()) {
        const long n = j.get<long>();
        if (n < 4) throw invalid_scenario("lattice must have at least 4 nodes per direction");
        return {static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
    }
    if (j.is_string()) {
        const auto [ntheta, ns] = parse_extents(j.get<std::string>(), "lattice");
        if (ntheta < 4 || ns < 4)
            throw invalid_scenario("lattice must have at least 4 nodes per direction");
        return {ntheta, ns};
    }
    throw invalid_scenario("lattice must be an integer or a NthetaxNs string");
}

inline void check_winding_params(int k_theta, int k_s, double mass) {
    if (k_theta == 0 || k_s == 0)
        throw invalid_scenario("winding family needs nonzero winding numbers");
    if (std::abs(k_theta) > 64 || std::abs(k_s) > 64)
        throw invalid_scenario("winding numbers above 64 are not supported");
    for (double bad : {-2.0, 0.0, 2.0})
        if (mass == bad)
            throw invalid_scenario("mass " + std::to_string(mass) +
                                   " makes the boundary data singular");
}

// One additive term of an inline Pauli field: coeff * trig(k_theta*theta +
// 2*pi*k_s*s) added to the d vector component named by axis.
struct PauliTerm {
    int axis = 2;
    bool is_sin = false;
    int k_theta = 0;
    int k_s = 0;
    double coeff = 0.0;
};

inline std::vector<PauliTerm> parse_pauli_terms(const nlohmann::json& j) {
    if (!j.is_array() || j.empty())
        throw invalid_scenario("pauli-field needs a nonempty terms array");
    std::vector<PauliTerm> terms;
    for (const auto& t : j) {
        if (!t.is_object()) throw invalid_scenario("pauli-field terms must be objects");
        PauliTerm term;
        term.axis = int_field(t, "axis", 2);
        if (term.axis < 0 || term.axis > 2)
            throw invalid_scenario("pauli-field axis must be 0, 1, or 2");
        if (t.contains("basis")) {
            const std::string basis = t.at("basis").get<std::string>();
            if (basis == "sin")
                term.is_sin = true;
            else if (basis != "cos")
                throw invalid_scenario("pauli-field basis must be cos or sin");
        }
        term.k_theta = int_field(t, "k_theta", 0);
        term.k_s = int_field(t, "k_s", 0);
        if (std::abs(term.k_theta) > 64 || std::abs(term.k_s) > 64)
            throw invalid_scenario("pauli-field frequencies above 64 are not supported");
        term.coeff = number_field(t, "coeff", 0.0);
        terms.push_back(term);
    }
    return terms;
}

}  // namespace scenario_detail

// Builds the loop family a scenario names.  Builtins cover the verification
// suite; "realize" rebuilds the winding band through the reflection
// construction; "pauli-field" takes inline trigonometric d-vector data on
// the nontrivial boundary component.
inline LoopFamilySpec family_from_scenario(const Scenario& sc) {
    const nlohmann::json& fam = sc.family;
    if (!fam.is_object()) throw invalid_scenario("family must be an object");

    LoopFamilySpec spec;
    if (fam.contains("builtin")) {
        const std::string which = fam.at("builtin").get<std::string>();
        if (which == "winding") {
            const int k_theta = scenario_detail::int_field(fam, "k_theta", 1);
            const int k_s = scenario_detail::int_field(fam, "k_s", 1);
            const double mass = scenario_detail::number_field(fam, "mass", 1.0);
            scenario_detail::check_winding_params(k_theta, k_s, mass);
            spec = winding_spec(k_theta, k_s, mass);
        } else if (which == "dir-plus") {
            spec = dir_plus_spec();
        } else if (which == "dir-minus") {
            spec = dir_minus_spec();
        } else if (which == "locally-constant") {
            spec = locally_constant_spec();
        } else {
            throw invalid_scenario("unknown builtin family " + which);
        }
    } else if (fam.contains("realize")) {
        const nlohmann::json& r = fam.at("realize");
        if (!r.is_object() || r.value("band", std::string()) != "winding")
            throw invalid_scenario("realize prescription must name the winding band");
        const int k_theta = scenario_detail::int_field(r, "k_theta", 1);
        const int k_s = scenario_detail::int_field(r, "k_s", 1);
        const double mass = scenario_detail::number_field(r, "mass", 1.0);
        scenario_detail::check_winding_params(k_theta, k_s, mass);
        FrameFunction band = [k_theta, k_s, mass](double theta, double s) {
            return lower_band_frame(winding_automorphism(theta, s, k_theta, k_s, mass));
        };
        spec = realize_family({nullptr, std::move(band)}, 2, std::abs(k_theta),
                              "realized-winding");
    } else if (fam.contains("pauli-field")) {
        auto terms = scenario_detail::parse_pauli_terms(fam.at("pauli-field"));
        int max_freq = 0;
        for (const auto& t : terms) max_freq = std::max(max_freq, std::abs(t.k_theta));
        spec.m = 2;
        spec.max_theta_frequency = max_freq;
        spec.name = "pauli-field";
        spec.automorphism = [terms](int comp, double theta, double s) {
            if (comp == 0) return Matrix::identity(2);
            double d[3] = {0.0, 0.0, 0.0};
            for (const auto& t : terms) {
                const double phase = t.k_theta * theta + 2.0 * std::numbers::pi * t.k_s * s;
                d[t.axis] += t.coeff * (t.is_sin ? std::sin(phase) : std::cos(phase));
            }
            return Matrix{{cplx(d[2]), cplx(d[0], -d[1])}, {cplx(d[0], d[1]), cplx(-d[2])}};
        };
    } else {
        throw invalid_scenario("family needs a builtin, realize, or pauli-field entry");
    }

    spec.lattice_theta = sc.lattice_theta;
    spec.lattice_s = sc.lattice_s;
    return spec;
}

inline Scenario parse_scenario(const nlohmann::json& j) {
    if (!j.is_object()) throw invalid_scenario("scenario must be a JSON object");
    Scenario sc;
    sc.schema_version = scenario_detail::int_field(j, "schema_version", 1);
    if (sc.schema_version != 1)
        throw invalid_scenario("unsupported schema_version " +
                               std::to_string(sc.schema_version));
    if (!j.contains("name") || !j.at("name").is_string() ||
        j.at("name").get<std::string>().empty())
        throw invalid_scenario("scenario needs a nonempty name");
    sc.name = j.at("name").get<std::string>();
    if (!j.contains("family")) throw invalid_scenario("scenario needs a family");
    sc.family = j.at("family");

    if (j.contains("grid")) sc.grid = scenario_detail::parse_grid(j.at("grid"));
    if (j.contains("lattice")) {
        const auto [lt, ls] = scenario_detail::parse_lattice(j.at("lattice"));
        sc.lattice_theta = lt;
        sc.lattice_s = ls;
    }
    sc.window = scenario_detail::number_field(j, "window", 1.0);
    if (!(sc.window > 0)) throw invalid_scenario("window must be positive");
    if (j.contains("seed")) {
        const nlohmann::json& s = j.at("seed");
        if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<long long>() < 0))
            throw invalid_scenario("seed must be a nonnegative integer");
        sc.seed = s.get<std::uint64_t>();
    }

    family_from_scenario(sc);
    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_scenario("cannot open scenario file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw invalid_scenario(std::string("scenario is not valid JSON: ") + e.what());
    }
    return parse_scenario(j);
}

// Canonical form with every default materialized; nlohmann objects iterate
// in sorted key order, so dumping this is byte-stable.
inline nlohmann::json canonical_scenario(const Scenario& sc) {
    nlohmann::json j;
    j["schema_version"] = sc.schema_version;
    j["name"] = sc.name;
    j["family"] = sc.family;
    j["grid"] = {{"n_t", sc.grid.n_t}, {"n_theta", sc.grid.n_theta}};
    j["lattice"] = {{"n_theta", sc.lattice_theta}, {"n_s", sc.lattice_s}};
    j["window"] = sc.window;
    j["seed"] = sc.seed;
    return j;
}

}  // namespace indexlab
