#include "doctest.h"

#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <sys/wait.h>

// HYPERIDEAL_CLI and HYPERIDEAL_DATA come from the build.

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(HYPERIDEAL_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string data(const std::string& name) { return std::string(HYPERIDEAL_DATA) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string scratch(const std::string& name) { return "cli_test_" + name; }

void write(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

/// The number following `label` in the output.
double number_after(const std::string& text, const std::string& label) {
    std::smatch m;
    const std::regex re(label + R"(:?\s*([-+0-9.eE]+))");
    REQUIRE(std::regex_search(text, m, re));
    return std::stod(m[1]);
}

}  // namespace

TEST_CASE("validate") {
    CHECK(run("validate " + data("tetrahedron_ideal.json")).status == 0);
    const Run bad = run("validate " + data("tetrahedron_inadmissible.json"));
    CHECK(bad.status == 1);
    CHECK(bad.out.find("witness: 0-1 0-2 0-3") != std::string::npos);
    write(scratch("truncated.json"), "{\"vertices\": [0, 1,");
    CHECK(run("validate " + scratch("truncated.json")).status == 2);
    CHECK(run("validate no_such_file.json").status == 2);
    CHECK(run("validate").status == 2);
}

TEST_CASE("realize") {
    const std::string out1 = scratch("octahedron1.json"), out2 = scratch("octahedron2.json");
    const std::string svg = scratch("octahedron.svg");
    const Run r = run("realize " + data("octahedron_ideal.json") + " --out " + out1 + " --svg " + svg);
    REQUIRE(r.status == 0);
    CHECK(std::abs(number_after(r.out, "volume") - 3.66386237670888) < 1e-6);
    const auto doc = nlohmann::json::parse(slurp(out1));
    CHECK(std::abs(doc["volume"].get<double>() - 3.66386237670888) < 1e-8);
    CHECK(doc["tool"]["version"].is_string());
    CHECK(doc["vertices"].size() == 6);
    CHECK(doc["faces"][0]["normal"].size() == 4);
    CHECK(slurp(svg).find("<svg") != std::string::npos);

    REQUIRE(run("realize " + data("octahedron_ideal.json") + " --out " + out2).status == 0);
    CHECK(slurp(out1) == slurp(out2));

    CHECK(run("realize " + data("tetrahedron_inadmissible.json")).status == 1);
    CHECK(run("realize " + data("cube.json") + " --max-iter 1 --tol 1e-300").status == 3);
}

TEST_CASE("batch realize") {
    const std::string inputs =
        data("cube.json") + " " + data("tetrahedron_hyperideal.json") + " " + data("octahedron_ideal.json");
    const Run serial = run("realize " + inputs);
    const Run parallel = run("realize " + inputs + " --jobs 3");
    CHECK(serial.status == 0);
    CHECK(parallel.status == 0);
    CHECK(serial.out == parallel.out);
    CHECK(run("realize " + inputs + " " + data("tetrahedron_inadmissible.json") + " --jobs 2").status == 1);
    CHECK(run("realize " + inputs + " --out x.json").status == 2);
}

TEST_CASE("koebe") {
    const std::string out = scratch("cube_circles.json"), svg = scratch("cube_circles.svg");
    const Run r = run("koebe " + data("cube.json") + " --out " + out + " --svg " + svg);
    REQUIRE(r.status == 0);
    CHECK(number_after(r.out, "tangency residual") < 1e-6);
    const auto doc = nlohmann::json::parse(slurp(out));
    int black = 0;
    for (const auto& c : doc["circles"]) black += c["color"] == "black";
    CHECK(black == 6);
    for (const auto& a : doc["arcs"])
        if (a["kind"] == "black-black") CHECK(a["tangent"].get<bool>());

    write(scratch("disk.json"), R"({"vertices": [0, 1, 2], "faces": [[0, 1, 2]]})");
    CHECK(run("koebe " + scratch("disk.json")).status == 2);
    CHECK(run("koebe " + data("cube.json") + " --steps 3 --max-iter 1 --tol 1e-300").status == 3);
}

TEST_CASE("simplex") {
    const Run regular = run("simplex --regular 1.2");
    CHECK(regular.status == 0);
    CHECK(regular.out.find("all eigenvalues positive") != std::string::npos);

    const std::string w = "2.0943951023931957";
    const Run ideal = run("simplex --angles " + w + " " + w + " " + w + " " + w + " " + w + " " + w);
    CHECK(ideal.status == 0);
    CHECK(std::abs(number_after(ideal.out, "volume") - 1.01494161) < 1e-8);
    const Run deg = run("simplex --degrees --angles 120 120 120 120 120 120");
    CHECK(std::abs(number_after(deg.out, "volume") - 1.01494161) < 1e-8);

    CHECK(run("simplex --angles 1 1 1 1 1 1").status == 1);
    CHECK(run("simplex --angles 1 1 1").status == 2);
    CHECK(run("simplex").status == 2);
}
