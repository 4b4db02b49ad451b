#include "helpers.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "indexlab/csv.hpp"
#include "indexlab/svg.hpp"

using namespace indexlab;

namespace {

RunRecord tiny_record() {
    RunRecord r;
    r.scenario_name = "tiny";
    r.hash = "0123456789abcdef";
    r.tool = tool_version;
    r.created_utc = "2026-01-01T00:00:00Z";
    r.ind_t_components = {0, -1};
    r.ind_t = -1;
    r.ind_a = -1;
    r.cayley = -1;
    r.match = true;
    r.window = 1.0;
    r.sample_params = {0.0, 0.5, 1.0};
    r.eigenvalues = {{-0.5, 0.25}, {0.1}, {-0.5, 0.25}};
    r.fluxes = {{0, 0, 0, 0.125}, {0, 0, 1, -0.25}, {1, 1, 0, 0.5}, {1, 1, 1, -0.0625}};
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("eigenvalue table renders with padded columns") {
    RunRecord r = tiny_record();
    const std::string expected =
        "s,lambda_1,lambda_2\n"
        "0,-0.5,0.25\n"
        "0.5,0.1,\n"
        "1,-0.5,0.25\n";
    CHECK(eigenvalue_csv(r) == expected);
    CHECK(eigenvalue_csv(r) == eigenvalue_csv(r.sample_params, r.eigenvalues));
}

TEST_CASE("eigenvalue table rejects empty or misaligned data") {
    CHECK_THROWS_AS(eigenvalue_csv({}, {}), missing_data);
    CHECK_THROWS_AS(eigenvalue_csv({0.0, 1.0}, {{0.5}}), missing_data);
}

TEST_CASE("flux table renders one row per plaquette") {
    const std::string expected =
        "component,i,j,flux\n"
        "0,0,0,0.125\n"
        "0,0,1,-0.25\n"
        "1,1,0,0.5\n"
        "1,1,1,-0.0625\n";
    CHECK(flux_csv(tiny_record()) == expected);
    CHECK(flux_csv(std::vector<FluxRow>{}) == "component,i,j,flux\n");
}

TEST_CASE("numeric cells round-trip the doubles exactly") {
    std::vector<double> params = {1.0 / 3.0};
    std::vector<std::vector<double>> values = {{0.1 + 0.2}};
    const std::string csv = eigenvalue_csv(params, values);
    const auto line = csv.substr(csv.find('\n') + 1);
    const auto comma = line.find(',');
    CHECK(std::stod(line.substr(0, comma)) == params[0]);
    CHECK(std::stod(line.substr(comma + 1)) == values[0][0]);
}

TEST_CASE("flow diagram is deterministic and marks the crossings") {
    RunRecord r = tiny_record();
    const std::string svg = flow_diagram_svg(r);
    CHECK(svg == flow_diagram_svg(r));
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("loop parameter s") != std::string::npos);
    // both branch segments cross zero between s=0.5 and s=1 plus one on the
    // first leg: the sorted pairing gives (-0.5 -> 0.1) rising through zero
    // and (0.1 -> -0.5) falling back
    CHECK(count_occurrences(svg, "stroke=\"#c03030\"") == 2);
    CHECK(count_occurrences(svg, "stroke-dasharray") == 2);

    RunRecord empty;
    CHECK_THROWS_AS(flow_diagram_svg(empty), missing_data);
}

TEST_CASE("flux heatmap draws every plaquette of both components") {
    RunRecord r = tiny_record();
    const std::string svg = flux_heatmap_svg(r);
    CHECK(svg == flux_heatmap_svg(r));
    CHECK(count_occurrences(svg, "<rect") == 1 + 4);
    CHECK(svg.find("component 0") != std::string::npos);
    CHECK(svg.find("component 1") != std::string::npos);

    RunRecord no_flux = tiny_record();
    no_flux.fluxes.clear();
    CHECK(flux_heatmap_svg(no_flux).find("no plaquette flux") != std::string::npos);
}

TEST_CASE("plot emission writes byte-identical files on reruns") {
    RunRecord r = tiny_record();
    auto dir = std::filesystem::temp_directory_path() / "indexlab-fmt";
    std::filesystem::remove_all(dir);

    auto files = emit_plots(r, dir);
    REQUIRE(files.size() == 4);
    std::vector<std::string> first;
    for (const auto& p : files) {
        CHECK(std::filesystem::file_size(p) > 0);
        first.push_back(slurp(p));
    }
    auto again = emit_plots(r, dir);
    for (std::size_t k = 0; k < files.size(); ++k) CHECK(slurp(again[k]) == first[k]);

    RunRecord empty;
    CHECK_THROWS_AS(emit_plots(empty, dir), missing_data);
}

TEST_CASE("command line binary honors the exit code contract") {
    if (!std::filesystem::exists("./indexlab")) {
        WARN("indexlab binary not next to the test runner; skipping CLI smoke checks");
        return;
    }
    auto dir = std::filesystem::temp_directory_path() / "indexlab-cli";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    const auto scenario = dir / "plus.json";
    std::ofstream(scenario)
        << R"({"name":"cli-plus","family":{"builtin":"dir-plus"},"grid":8})";
    const auto cache = dir / "cache";
    const std::string env = "INDEXLAB_CACHE_DIR=" + cache.string() + " ";

    auto run = [&](const std::string& cmd) {
        const int status = std::system((env + cmd).c_str());
        return WEXITSTATUS(status);
    };

    CHECK(run("./indexlab verify --scenario " + scenario.string() + " > " +
              (dir / "verify.json").string()) == 0);
    CHECK(run("./indexlab ktheory --n 2 > " + (dir / "kt.json").string()) == 0);
    CHECK(run("./indexlab properties --seed 1 > " + (dir / "props.json").string()) == 0);

    const auto bad = dir / "bad.json";
    std::ofstream(bad) << R"({"name":"bad"})";
    CHECK(run("./indexlab verify --scenario " + bad.string() + " 2>/dev/null >/dev/null") == 3);
    CHECK(run("./indexlab verify --scenario " + (dir / "absent.json").string() +
              " 2>/dev/null >/dev/null") == 3);

    // cache hit on the second run must reproduce the summary byte for byte
    const auto first = dir / "v1.json";
    const auto second = dir / "v2.json";
    CHECK(run("./indexlab verify --scenario " + scenario.string() + " > " + first.string()) ==
          0);
    CHECK(run("./indexlab verify --scenario " + scenario.string() + " > " + second.string()) ==
          0);
    std::string a = slurp(first), b = slurp(second);
    const auto strip = [](std::string& text) {
        const auto pos = text.find("\"cache\"");
        if (pos != std::string::npos) {
            const auto end = text.find('\n', pos);
            text.erase(pos, end - pos + 1);
        }
    };
    strip(a);
    strip(b);
    CHECK(a == b);
    CHECK(slurp(second).find("\"cache\": \"hit\"") != std::string::npos);
}
