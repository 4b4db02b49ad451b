#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "indexlab/boundary.hpp"
#include "indexlab/csv.hpp"
#include "indexlab/runrecord.hpp"
#include "indexlab/scenario.hpp"
#include "indexlab/svg.hpp"

namespace {

using namespace indexlab;
using nlohmann::json;

struct CommonFlags {
    std::string scenario_path;
    std::string grid;
    std::string lattice;
    double window = 0.0;
    std::string out;
    bool no_cache = false;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_scenario) {
    auto* opt = cmd->add_option("--scenario", f.scenario_path, "scenario JSON file");
    if (needs_scenario) opt->required();
    cmd->add_option("--grid", f.grid, "operator grid override, NtxNtheta or one integer");
    cmd->add_option("--lattice", f.lattice, "boundary lattice override, NthetaxNs or one integer");
    cmd->add_option("--window", f.window, "trusted spectral window override");
    cmd->add_option("--out", f.out, "directory for reports and plots");
    cmd->add_flag("--no-cache", f.no_cache, "skip reading and writing the run cache");
    cmd->add_option_function<std::uint64_t>(
        "--seed",
        [&f](const std::uint64_t& v) {
            f.seed = v;
            f.seed_given = true;
        },
        "seed override for the scenario");
}

json extent_json(const std::string& text) {
    for (char c : text)
        if (!std::isdigit(static_cast<unsigned char>(c))) return json(text);
    try {
        return json(std::stol(text));
    } catch (const std::exception&) {
        return json(text);
    }
}

Scenario load_with_overrides(const CommonFlags& f) {
    Scenario sc = load_scenario(f.scenario_path);
    if (!f.grid.empty()) sc.grid = scenario_detail::parse_grid(extent_json(f.grid));
    if (!f.lattice.empty()) {
        const auto [lt, ls] = scenario_detail::parse_lattice(extent_json(f.lattice));
        sc.lattice_theta = lt;
        sc.lattice_s = ls;
    }
    if (f.window != 0.0) {
        if (!(f.window > 0)) throw invalid_scenario("window must be positive");
        sc.window = f.window;
    }
    if (f.seed_given) sc.seed = f.seed;
    return sc;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw error("cannot write " + path.string());
}

json record_summary(const RunRecord& r, bool cache_hit) {
    return json{{"scenario", r.scenario_name},
                {"hash", r.hash},
                {"ind_t", r.ind_t},
                {"ind_t_components", r.ind_t_components},
                {"ind_a", r.ind_a},
                {"cayley_flow", r.cayley},
                {"match", r.match ? "MATCH" : "MISMATCH"},
                {"gap", r.gap},
                {"defect_max", r.defect_max},
                {"samples_used", r.samples_used},
                {"edge_warning", r.edge_warning},
                {"cache", cache_hit ? "hit" : "miss"}};
}

// Obtains the record for a scenario, consulting the cache unless disabled.
RunRecord obtain_record(const Scenario& sc, bool no_cache, bool& cache_hit) {
    cache_hit = false;
    const std::string hash = scenario_hash(sc);
    if (!no_cache) {
        if (auto hit = load_cached(hash)) {
            cache_hit = true;
            return *hit;
        }
    }
    RunRecord r = run_verify(sc);
    if (!no_cache) save_record(r);
    return r;
}

int cmd_verify(const CommonFlags& f) {
    Scenario sc = load_with_overrides(f);
    bool cache_hit = false;
    RunRecord r = obtain_record(sc, f.no_cache, cache_hit);
    std::cout << record_summary(r, cache_hit).dump(2) << "\n";
    if (!f.out.empty()) {
        const std::filesystem::path dir(f.out);
        write_text(dir / "record.json", record_to_json(r).dump(2) + "\n");
        emit_plots(r, dir);
    }
    return r.match ? 0 : 2;
}

int cmd_sf(const CommonFlags& f) {
    Scenario sc = load_with_overrides(f);
    DiscreteFamily family = assemble(family_from_scenario(sc), sc.grid, sc.window);
    FlowResult tracked = spectral_flow_result(family);
    FlowResult phased = cayley_flow_result(family);
    json out{{"scenario", sc.name},
             {"flow", tracked.flow},
             {"cayley_flow", phased.flow},
             {"routes_agree", tracked.flow == phased.flow},
             {"samples_used", tracked.samples_used},
             {"refine_rounds", tracked.refine_rounds},
             {"min_abs_eigenvalue", tracked.min_abs_eigenvalue},
             {"edge_warning", tracked.edge_warning || phased.edge_warning},
             {"window", sc.window},
             {"grid", std::to_string(sc.grid.n_t) + "x" + std::to_string(sc.grid.n_theta)}};
    std::cout << out.dump(2) << "\n";
    return tracked.flow == phased.flow ? 0 : 2;
}

int cmd_chern(const CommonFlags& f) {
    Scenario sc = load_with_overrides(f);
    LoopFamilySpec spec = family_from_scenario(sc);
    json components = json::array();
    long total = 0;
    std::vector<FluxRow> rows;
    for (const auto& field : build_f_field(spec)) {
        PlaquetteSummary summary = plaquette_fluxes(field);
        const long oriented = field.orientation * summary.chern_raw;
        total += oriented;
        components.push_back({{"component", field.component_id},
                              {"chern", oriented},
                              {"orientation", field.orientation},
                              {"residue", summary.residue},
                              {"min_link", summary.min_link}});
        for (const auto& p : summary.fluxes)
            rows.push_back({field.component_id, p.i, p.j, p.flux});
    }
    json out{{"scenario", sc.name}, {"components", components}, {"ind_t", total}};
    std::cout << out.dump(2) << "\n";
    if (!f.out.empty()) write_text(std::filesystem::path(f.out) / "fluxes.csv", flux_csv(rows));
    return 0;
}

int cmd_gap(const CommonFlags& f) {
    Scenario sc = load_with_overrides(f);
    DiscreteFamily family = assemble(family_from_scenario(sc), sc.grid, sc.window);
    const double gap = gap_probe(family);
    json out{{"scenario", sc.name},
             {"gap", gap},
             {"grid", std::to_string(sc.grid.n_t) + "x" + std::to_string(sc.grid.n_theta)}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_plot(const CommonFlags& f) {
    Scenario sc = load_with_overrides(f);
    bool cache_hit = false;
    RunRecord r = obtain_record(sc, f.no_cache, cache_hit);
    const std::filesystem::path dir(f.out.empty() ? "plots" : f.out);
    auto files = emit_plots(r, dir);
    json names = json::array();
    for (const auto& p : files) names.push_back(p.string());
    std::cout << json{{"scenario", sc.name}, {"cache", cache_hit ? "hit" : "miss"},
                      {"files", names}}
                     .dump(2)
              << "\n";
    return 0;
}

int cmd_ktheory(std::size_t n_max, const std::string& out_dir) {
    json report = run_ktheory(n_max);
    std::cout << report.dump(2) << "\n";
    if (!out_dir.empty())
        write_text(std::filesystem::path(out_dir) / "ktheory.json", report.dump(2) + "\n");
    return report.at("all_green").get<bool>() ? 0 : 2;
}

Matrix random_gaussian(std::mt19937& rng, std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> gauss;
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = cplx(gauss(rng), gauss(rng));
    return m;
}

Matrix random_shifted_hermitian(std::mt19937& rng, std::size_t m, double shift) {
    Matrix g = random_gaussian(rng, m, m);
    EMat h = 0.5 * (g.eigen() + g.eigen().adjoint()) +
             shift * EMat::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    return Matrix::from_eigen(h);
}

json boundary_suite(std::uint64_t seed) {
    std::mt19937 rng(static_cast<std::uint32_t>(seed ^ 0x9e3779b9u));
    double worst = 0.0;
    std::size_t checked = 0;
    bool classification_ok = true;
    for (int component : {0, 1}) {
        for (std::size_t m : {1ul, 2ul, 3ul}) {
            auto sample = dirac_sample(component, m);
            auto s = split(sample);
            for (int rep = 0; rep < 34; ++rep) {
                AutomorphismT t{random_shifted_hermitian(rng, m, 3.0)};
                auto l = t_to_l(sample, s, t);
                auto back = l_to_t(sample, s, l);
                worst = std::max(worst,
                                 (back.matrix.eigen() - t.matrix.eigen()).cwiseAbs().maxCoeff());
                const bool lagrangian = check_lagrangian(sample.sigma_n, l.frame);
                classification_ok = classification_ok && lagrangian;

                Matrix skew = random_gaussian(rng, m, m);
                EMat crooked = t.matrix.eigen() +
                               0.5 * (skew.eigen() - skew.eigen().adjoint()) +
                               EMat::Identity(static_cast<Eigen::Index>(m),
                                              static_cast<Eigen::Index>(m)) *
                                   cplx(0, 0.7);
                auto lc = t_to_l(sample, s, AutomorphismT{Matrix::from_eigen(crooked)});
                classification_ok =
                    classification_ok && !check_lagrangian(sample.sigma_n, lc.frame);
                ++checked;
            }
        }
    }
    const bool ok = worst <= 1e-8 && classification_ok;
    return json{{"name", "boundary-round-trip"},
                {"ok", ok},
                {"samples", checked},
                {"worst_defect", worst},
                {"classification_ok", classification_ok}};
}

json green_suite(std::uint64_t seed) {
    std::mt19937 rng(static_cast<std::uint32_t>(seed ^ 0x7f4a7c15u));
    CylinderGrid grid;
    grid.n_t = 9;
    grid.n_theta = 7;
    RawCylinderOperator op(grid, 2);
    std::normal_distribution<double> gauss;
    double worst = 0.0, worst_flipped = 0.0;
    for (int rep = 0; rep < 25; ++rep) {
        EVec u(op.full_dim()), v(op.full_dim());
        for (std::size_t r = 0; r < op.full_dim(); ++r) {
            u(static_cast<Eigen::Index>(r)) = cplx(gauss(rng), gauss(rng));
            v(static_cast<Eigen::Index>(r)) = cplx(gauss(rng), gauss(rng));
        }
        u /= u.norm();
        v /= v.norm();
        worst = std::max(worst, std::abs(op.green_defect(u, v)));
        worst_flipped = std::max(worst_flipped, std::abs(op.green_defect(u, v, -1)));
    }

    // pair supported on single boundary nodes; its flipped defect is exactly
    // two angular weights, an order-one control for the sign convention
    EVec bu = EVec::Zero(static_cast<Eigen::Index>(op.full_dim()));
    EVec bv = EVec::Zero(static_cast<Eigen::Index>(op.full_dim()));
    bu(static_cast<Eigen::Index>(op.row_index(0, 0, 0, 0))) = cplx(1);
    bv(static_cast<Eigen::Index>(op.row_index(1, 0, 0, 0))) = cplx(1);
    const double concentrated = std::abs(op.green_defect(bu, bv, -1));

    const bool ok = worst <= 1e-12 && worst_flipped > 1e-2 &&
                    std::abs(concentrated - 2.0 * grid.h_theta()) <= 1e-13;
    return json{{"name", "green-identity"},
                {"ok", ok},
                {"worst_defect", worst},
                {"flipped_control", worst_flipped},
                {"concentrated_control", concentrated}};
}

json additivity_suite(std::uint64_t seed) {
    std::mt19937 rng(static_cast<std::uint32_t>(seed ^ 0x2545f491u));
    std::uniform_int_distribution<int> sign(0, 1);
    std::uniform_real_distribution<double> offset(0.2, 0.8);
    bool ok = true;
    auto toy = [](double off, int sgn) {
        return make_matrix_family(
            [off, sgn](double s) {
                Matrix m(1, 1);
                m(0, 0) = cplx(sgn * (s - off));
                return m;
            },
            1, 1.0, false, "toy");
    };
    for (int rep = 0; rep < 5; ++rep) {
        auto f = toy(offset(rng), sign(rng) ? 1 : -1);
        auto g = toy(offset(rng), sign(rng) ? 1 : -1);
        const long sum = path_flow(direct_sum(f, g)).flow;
        ok = ok && sum == path_flow(f).flow + path_flow(g).flow;
    }
    return json{{"name", "flow-additivity"}, {"ok", ok}, {"pairs", 5}};
}

int cmd_properties(std::uint64_t seed) {
    json suites = json::array();
    suites.push_back(boundary_suite(seed));
    suites.push_back(green_suite(seed));
    suites.push_back(additivity_suite(seed));
    bool all_ok = true;
    for (const auto& s : suites) all_ok = all_ok && s.at("ok").get<bool>();
    std::cout << json{{"seed", seed}, {"suites", suites}, {"all_ok", all_ok}}.dump(2) << "\n";
    return all_ok ? 0 : 2;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const invalid_scenario*>(&e)) return 3;
    if (dynamic_cast<const no_convergence*>(&e) || dynamic_cast<const grid_too_coarse*>(&e) ||
        dynamic_cast<const step_too_coarse*>(&e) ||
        dynamic_cast<const ambiguous_crossing*>(&e) ||
        dynamic_cast<const nyquist_violation*>(&e) || dynamic_cast<const rank_jump*>(&e) ||
        dynamic_cast<const zero_eigenvalue*>(&e) ||
        dynamic_cast<const singular_iterate*>(&e) || dynamic_cast<const not_invertible*>(&e))
        return 4;
    return 5;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"loop family index verification toolkit"};
    app.require_subcommand(1);

    CommonFlags verify_f, sf_f, chern_f, gap_f, plot_f;
    std::size_t ktheory_n = 4;
    std::string ktheory_out;
    std::uint64_t properties_seed = 0;

    auto* verify = app.add_subcommand(
        "verify", "compare the topological and analytical index of a scenario");
    add_common(verify, verify_f, true);

    auto* sf = app.add_subcommand("sf", "spectral flow of the assembled operator family");
    add_common(sf, sf_f, true);

    auto* chern = app.add_subcommand("chern", "boundary Chern numbers on the lattice");
    add_common(chern, chern_f, true);

    auto* gap = app.add_subcommand("gap", "smallest eigenvalue magnitude along the loop");
    add_common(gap, gap_f, true);

    auto* plot = app.add_subcommand("plot", "emit CSV tables and SVG plots for a scenario");
    add_common(plot, plot_f, true);

    auto* ktheory =
        app.add_subcommand("ktheory", "exact polynomial identities in the coinvariant ring");
    ktheory->add_option("--n", ktheory_n, "largest variable count to check");
    ktheory->add_option("--out", ktheory_out, "directory for the JSON report");

    auto* properties =
        app.add_subcommand("properties", "randomized invariant suites with a fixed seed");
    properties->add_option("--seed", properties_seed, "seed for the randomized suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        if (verify->parsed()) return cmd_verify(verify_f);
        if (sf->parsed()) return cmd_sf(sf_f);
        if (chern->parsed()) return cmd_chern(chern_f);
        if (gap->parsed()) return cmd_gap(gap_f);
        if (plot->parsed()) return cmd_plot(plot_f);
        if (ktheory->parsed()) return cmd_ktheory(ktheory_n, ktheory_out);
        if (properties->parsed()) return cmd_properties(properties_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 5;
}
