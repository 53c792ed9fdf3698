#include "doctest.h"

#include "vstates/cli.hpp"
#include "vstates/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

using namespace vstates;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::initializer_list<std::string> args) {
    std::vector<std::string> store{"vstates"};
    store.insert(store.end(), args);
    std::vector<const char*> argv;
    for (const auto& s : store) argv.push_back(s.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("vstates_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

} // namespace

TEST_CASE("default quadrature size") {
    CHECK(cli::default_quadrature(32, 4) == 4096);
    CHECK(cli::default_quadrature(32, 5) == 4480);
    CHECK(cli::default_quadrature(8, 5) % 160 == 0);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"bogus"}).code == cli::kUsage);
    CHECK(run({"threshold", "--b", "1.2"}).code == cli::kUsage);
    CHECK(run({"threshold"}).code == cli::kUsage);
    CHECK(run({"spectrum", "--b", "0.5", "--format", "svg"}).code == cli::kUsage);
    CHECK(run({"branch", "--b", "0.5", "--m", "4", "--sign", "up", "--out", "x.json"}).code == cli::kUsage);
    CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("threshold") {
    const auto r = run({"threshold", "--b", "0.5"});
    CHECK(r.code == 0);
    CHECK(r.out.find("N=3 ") != std::string::npos);
    CHECK(r.out.find("E_2=-") != std::string::npos);
    CHECK(run({"threshold", "--b", "0.1"}).code == 0);
    CHECK(run({"threshold", "--b", "0.9"}).out.find("N=14 ") != std::string::npos);

    ::setenv("VSTATES_NMAX", "10", 1);
    const auto exhausted = run({"threshold", "--b", "0.9"});
    ::unsetenv("VSTATES_NMAX");
    CHECK(exhausted.code == cli::kGuard);
    CHECK(exhausted.err.find("VSTATES_NMAX") != std::string::npos);
}

TEST_CASE("spectrum") {
    const auto r = run({"spectrum", "--b", "0.5"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 22);
    CHECK(rows[0] == "m,C_m,D_m,Delta_m,lambda_minus,lambda_plus,omega_minus,omega_plus,transversal");
    CHECK(rows[1].rfind("3,", 0) == 0);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].substr(rows[i].rfind(',') + 1) == "true");
        std::vector<double> v;
        std::istringstream cells(rows[i]);
        for (std::string c; std::getline(cells, c, ',');) v.push_back(std::strtod(c.c_str(), nullptr));
        CHECK(v[7] == (1 - v[4]) / 2);
        CHECK(v[6] == (1 - v[5]) / 2);
    }
    const auto below = run({"spectrum", "--b", "0.5", "--m", "2"});
    CHECK(below.code == cli::kGuard);
    CHECK(below.err.find("below threshold") != std::string::npos);

    const auto path = scratch() / "spec.json";
    CHECK(run({"spectrum", "--b", "0.7", "--m-min", "6", "--m-max", "8", "--format", "json", "--out", path.string()})
              .code == 0);
    CHECK(nlohmann::json::parse(read_file(path)).size() == 3);

    CHECK(run({"spectrum", "--b", "0.5"}).out == r.out);
}

TEST_CASE("branch and render") {
    const auto json_path = scratch() / "branch.json";
    const auto r = run({"branch", "--b", "0.6", "--m", "5", "--sign", "minus", "--modes", "2", "--quad", "1280",
                        "--steps", "2", "--ds", "1e-3", "--out", json_path.string(), "--boundaries"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(read_file(json_path));
    CHECK(doc["sign"] == "minus");
    CHECK(doc["K"] == 2);
    CHECK(doc["P"] == 1280);
    REQUIRE(doc["points"].size() == 3);
    CHECK(doc["stopped_reason"].is_null());
    for (const auto& pt : doc["points"]) {
        CHECK(pt["residual_norm"].get<double>() <= 1e-10);
    }
    for (int i = 0; i < 3; ++i) {
        const auto csv = lines(read_file(boundary_path(json_path, i)));
        CHECK(csv.size() == 513);
        CHECK(csv[0] == "theta,x1,y1,x2,y2");
    }

    const auto svg_path = scratch() / "branch.svg";
    CHECK(run({"render", "--in", json_path.string(), "--out", svg_path.string()}).code == 0);
    const auto svg = read_file(svg_path);
    std::size_t polys = 0;
    for (auto pos = svg.find("<polygon"); pos != std::string::npos; pos = svg.find("<polygon", pos + 1)) ++polys;
    CHECK(polys == 6);

    const auto none = run({"render", "--in", json_path.string(), "--select", "none"});
    CHECK(none.code == 0);
    CHECK(none.out.find("<polygon") == std::string::npos);
    CHECK(run({"render", "--in", json_path.string(), "--select", "0,2"}).code == 0);
    CHECK(run({"render", "--in", json_path.string(), "--select", "0,x"}).code == cli::kUsage);

    auto broken = doc;
    broken["points"][1]["c"] = "oops";
    const auto bad_path = scratch() / "bad.json";
    write_file(bad_path, broken.dump());
    const auto bad = run({"render", "--in", bad_path.string()});
    CHECK(bad.code == cli::kUsage);
    CHECK(bad.err.find("/points/1/c") != std::string::npos);

    CHECK(run({"branch", "--b", "0.6", "--m", "5", "--modes", "2", "--quad", "1010", "--out",
               (scratch() / "x.json").string()})
              .code == cli::kGuard);
    CHECK(run({"branch", "--b", "0.6", "--m", "2", "--out", (scratch() / "x.json").string()}).code == cli::kGuard);
}

TEST_CASE("executable exit codes") {
    const std::string exe = VSTATES_EXE;
    auto status = [&](const std::string& args) {
        const int raw = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
        return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    };
    CHECK(status("threshold --b 0.5") == 0);
    CHECK(status("threshold --b 1.2") == 2);
    CHECK(status("spectrum --b 0.5 --m 2") == 3);
}
