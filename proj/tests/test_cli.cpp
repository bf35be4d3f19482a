#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cellwalk/complex.hpp"
#include "cellwalk/generators.hpp"

namespace fs = std::filesystem;

namespace {

std::string binary() {
    const char* bin = std::getenv("CELLWALK_BIN");
    REQUIRE(bin != nullptr);
    return bin;
}

int run(const std::string& args) {
    const std::string cmd = binary() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir(const char* tag) : path(fs::temp_directory_path() / (std::string("cellwalk_") + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("validate exit codes: pass, schema error, semantic failure") {
    TempDir dir("validate");
    CHECK(run("validate --generate grid2d") == 0);
    CHECK(run("validate --generate \"simplicial(0 1 2; 0 1 3; 0 2 3; 1 2 3)\"") == 0);

    // dangling face reference: schema error, exit 2
    const auto bad = dir.path / "bad.json";
    std::ofstream(bad) << R"({
      "group": {"kind": "trivial"},
      "cells": {"0": ["v"], "1": ["e"]},
      "incidence": {"1": [{"cell": "e", "faces": [{"face": "w", "coeff": 1}]}]}
    })";
    CHECK(run("validate --complex " + bad.string()) == 2);

    // degenerate cell: validation failure, exit 1
    const auto degenerate = dir.path / "degenerate.json";
    std::ofstream(degenerate) << R"({
      "group": {"kind": "trivial"},
      "cells": {"0": ["a", "b", "c"], "1": ["e"]},
      "incidence": {"1": [{"cell": "e", "faces": [
        {"face": "a", "coeff": 1}, {"face": "b", "coeff": -1}
      ]}]}
    })";
    CHECK(run("validate --complex " + degenerate.string() + " --degree 0") == 1);

    // disconnected complex also fails
    CHECK(run("validate --generate \"simplicial(0 1 2; 3 4 5)\" --degree 0") == 1);
}

TEST_CASE("generate emits manifests that reload to the same complex") {
    TempDir dir("generate");
    CHECK(run("generate --generate grid2d --out " + dir.path.string()) == 0);
    const auto manifest = dir.path / "manifest.json";
    auto text = slurp(manifest);
    auto x = cellwalk::load_complex(text);
    CHECK(cellwalk::save_complex(x) == text);
    CHECK(cellwalk::save_complex(cellwalk::make_grid2d()) == text);

    CHECK(run("validate --complex " + manifest.string()) == 0);
}

TEST_CASE("reruns with identical parameters produce byte-identical CSVs") {
    TempDir a("rerun_a");
    TempDir b("rerun_b");
    const std::string args =
        " --generate grid2d --degree 1 --q 0.9 --steps 30 --walkers 20000 --seed 12345 --out ";
    REQUIRE(run("walk" + args + a.path.string()) == 0);
    REQUIRE(run("walk" + args + b.path.string()) == 0);
    CHECK(slurp(a.path / "walk.csv") == slurp(b.path / "walk.csv"));

    const std::string targs = " --generate grid2d --degree 1 --q 0.5 --steps 16 --out ";
    REQUIRE(run("trace" + targs + a.path.string()) == 0);
    REQUIRE(run("trace" + targs + b.path.string()) == 0);
    CHECK(slurp(a.path / "trace.csv") == slurp(b.path / "trace.csv"));

    const std::string dargs =
        " --generate grid2d --degree 1 --quad-m 64 --window 0.05:0.5 --out ";
    REQUIRE(run("density" + dargs + a.path.string()) == 0);
    REQUIRE(run("density" + dargs + b.path.string()) == 0);
    CHECK(slurp(a.path / "density.csv") == slurp(b.path / "density.csv"));
}

TEST_CASE("trace with q = 1 is the constant orbit count") {
    TempDir dir("lazy");
    REQUIRE(run("trace --generate grid2d --degree 1 --q 1 --steps 8 --out " +
                dir.path.string()) == 0);
    auto text = slurp(dir.path / "trace.csv");
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);  // header
    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line == "\r") continue;
        // p column is the fourth field
        std::istringstream fields(line);
        std::string f;
        for (int i = 0; i < 4; ++i) std::getline(fields, f, ',');
        CHECK(std::stod(f) == 2.0);
        ++rows;
    }
    CHECK(rows == 9);
}

TEST_CASE("nsi runs both paths and reports them") {
    TempDir dir("nsi");
    REQUIRE(run("nsi --generate grid2d --degree 1 --q 0.9 --quad-m 128 "
                "--window 0.05:0.3 --nwindow 20:120 --out " +
                dir.path.string()) == 0);
    auto text = slurp(dir.path / "nsi.csv");
    CHECK(text.find("density") != std::string::npos);
    CHECK(text.find("walk") != std::string::npos);
    CHECK(fs::exists(dir.path / "density.csv"));
    CHECK(fs::exists(dir.path / "trace.csv"));
    CHECK(fs::exists(dir.path / "residuals.csv"));
}

TEST_CASE("unrecognized generator specs exit with a schema error") {
    CHECK(run("validate --generate \"nonsense(3)\"") == 2);
    CHECK(run("walk") == 2);  // neither --complex nor --generate given
}
