#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include "transonic/config.hpp"
#include "transonic/io.hpp"

using namespace transonic;

TEST_CASE("empty configuration yields the defaults") {
    const RunConfig cfg = parse_config("");
    REQUIRE(cfg.gas.gamma == 2.0);
    REQUIRE(cfg.N_modes == 12);
    REQUIRE(cfg.Q_nodes == 96);
    REQUIRE(cfg.M_x1 == 160);
    REQUIRE(cfg.eps == 1e-3);
    REQUIRE(cfg.sigma.sigma0 == 1e-2);
    REQUIRE(cfg.out_dir == "out");
    REQUIRE(cfg.formats == std::vector<std::string>{"csv", "json", "svg"});
    REQUIRE(!cfg.force_amplitude.has_value());
}

TEST_CASE("sections, comments and lists parse") {
    const std::string text =
        "# demo\n"
        "[gas]\n"
        "gamma = 1.4   # diatomic\n"
        "[force]\n"
        "kind = polynomial\n"
        "params = 0, 0, 1\n"
        "[discretization]\n"
        "N_modes = 8\n"
        "Q_nodes = 40\n"
        "[outputs]\n"
        "formats = csv dat\n";
    const RunConfig cfg = parse_config(text);
    REQUIRE(cfg.gas.gamma == 1.4);
    REQUIRE(cfg.force_kind == ForceKind::polynomial);
    REQUIRE(cfg.force_params == std::vector<double>{0.0, 0.0, 1.0});
    REQUIRE(cfg.N_modes == 8);
    REQUIRE(cfg.formats == std::vector<std::string>{"csv", "dat"});
}

TEST_CASE("configuration rejections carry the key path") {
    using Catch::Matchers::ContainsSubstring;
    REQUIRE_THROWS_MATCHES(parse_config("[gas]\ngamma = 0.9\n"), ValidationError,
                           Catch::Matchers::MessageMatches(ContainsSubstring("gamma must exceed 1")));
    REQUIRE_THROWS_MATCHES(parse_config("[gas]\nbogus = 1\n"), ValidationError,
                           Catch::Matchers::MessageMatches(ContainsSubstring("gas.bogus")));
    REQUIRE_THROWS_MATCHES(parse_config("[gas]\ngamma = 2\ngamma = 3\n"), ParseError,
                           Catch::Matchers::MessageMatches(
                               ContainsSubstring("line 3") && ContainsSubstring("line 2")));
    REQUIRE_THROWS_AS(parse_config("[gas]\ngamma = two\n"), ParseError);
    REQUIRE_THROWS_AS(parse_config("gamma\n"), ParseError);
    REQUIRE_THROWS_AS(parse_config("[unfinished\n"), ParseError);
    REQUIRE_THROWS_AS(parse_config("[outputs]\nformats = png\n"), ValidationError);
    REQUIRE_THROWS_AS(parse_config("[discretization]\nN_modes = 12\nQ_nodes = 20\n"),
                      ValidationError);
    REQUIRE_THROWS_AS(parse_config("[inlet]\nkind = custom\n"), ValidationError);
}

TEST_CASE("tables round-trip their samples exactly") {
    Table t;
    t.headers = {"x", "y"};
    t.cols = {{0.1, 1.0 / 3.0, -2.5e-17}, {1.0, 2.0, 3.0}};
    const std::string csv = t.to_csv();
    REQUIRE(csv.substr(0, 4) == "x,y\n");
    // %.17g is lossless for doubles
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    for (std::size_t i = 0; i < t.rows(); ++i) {
        std::getline(in, line);
        const std::size_t comma = line.find(',');
        REQUIRE(std::stod(line.substr(0, comma)) == t.cols[0][i]);
        REQUIRE(std::stod(line.substr(comma + 1)) == t.cols[1][i]);
    }
    const std::string dat = t.to_dat();
    REQUIRE(dat.substr(0, 6) == "# x y\n");
}

TEST_CASE("json reports carry the certificate fields") {
    LinearCertificate cert;
    cert.converged = true;
    cert.energy_ratio = 0.25;
    cert.levels.push_back(SigmaLevel{1e-2, 0.25, true, true, -1.0});
    const ordered_json j = certificate_json(cert);
    REQUIRE(j["converged"] == true);
    REQUIRE(j["energy_ratio"] == 0.25);
    REQUIRE(j["levels"].size() == 1);
    REQUIRE(j["levels"][0]["sigma"] == 1e-2);

    NormReport rep;
    rep.l2r = 1.5;
    rep.components.emplace_back("f", 2.25);
    const ordered_json nj = norms_json(rep);
    REQUIRE(nj["l2r"] == 1.5);
    REQUIRE(nj["component_squares"]["f"] == 2.25);
}

TEST_CASE("svg plots are structurally sound") {
    PlotSeries s;
    s.label = "u";
    s.x = {0.0, 0.5, 1.0};
    s.y = {1.0, 1.2, 1.5};
    const std::string svg = svg_line_plot("title", "x1", "u", {s});
    REQUIRE(svg.find("<svg") == 0);
    REQUIRE(svg.find("<polyline") != std::string::npos);
    REQUIRE(svg.find("title") != std::string::npos);
    REQUIRE(svg.find("</svg>") != std::string::npos);

    PlotSeries bad = s;
    bad.y[1] = std::nan("");
    REQUIRE_THROWS_AS(svg_line_plot("t", "x", "y", {bad}), IOError);
}

TEST_CASE("text files write and re-read byte for byte") {
    const auto dir = std::filesystem::temp_directory_path() / "transonic_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "t.csv").string();
    const std::string content = "a,b\n1,2\n";
    write_text_file(path, content);
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    REQUIRE(ss.str() == content);
    std::filesystem::remove_all(dir);
    REQUIRE_THROWS_AS(write_text_file("/nonexistent-dir-xyz/f.txt", "x"), IOError);
}
