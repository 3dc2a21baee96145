#include "modlift/cli.hpp"

#include "doctest.h"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using modlift::cli::format_complex;
using modlift::cli::parse_complex;
namespace fs = std::filesystem;

namespace {

struct Output {
    int code;
    std::string text;
};

Output run(const std::string& args, const std::string& env = "") {
    const char* exe = std::getenv("MODLIFT_CLI");
    REQUIRE_MESSAGE(exe != nullptr, "MODLIFT_CLI not set");
    std::string cmd = env + " '" + std::string(exe) + "' " + args + " 2>&1";
    FILE* p = ::popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string text;
    char buf[4096];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) text.append(buf, n);
    int status = ::pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, text};
}

std::vector<nlohmann::json> json_lines(const std::string& text) {
    std::vector<nlohmann::json> out;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);)
        if (!line.empty()) out.push_back(nlohmann::json::parse(line));
    return out;
}

fs::path temp(const char* tag, const char* ext) {
    return fs::temp_directory_path() / ("modlift_cli_" + std::string(tag) + "_" + std::to_string(::getpid()) + ext);
}

}  // namespace

TEST_CASE("parse_complex") {
    CHECK(parse_complex("i") == std::complex<double>(0, 1));
    CHECK(parse_complex("-i") == std::complex<double>(0, -1));
    CHECK(parse_complex("2i") == std::complex<double>(0, 2));
    CHECK(parse_complex("0.5+1.5i") == std::complex<double>(0.5, 1.5));
    CHECK(parse_complex("0.25 - 2i") == std::complex<double>(0.25, -2));
    CHECK(parse_complex("1e-3+2e0i") == std::complex<double>(1e-3, 2));
    CHECK(parse_complex("3") == std::complex<double>(3, 0));
    CHECK(parse_complex("-0.5+i") == std::complex<double>(-0.5, 1));
    CHECK_THROWS(parse_complex(""));
    CHECK_THROWS(parse_complex("1+2j"));
    CHECK_THROWS(parse_complex("abc"));
    auto z = std::complex<double>(0.1, -3.25);
    CHECK(parse_complex(format_complex(z)) == z);
}

TEST_CASE("version and help") {
    auto v = run("--version");
    CHECK(v.code == 0);
    CHECK(v.text.find("modlift 0.1.0") != std::string::npos);
    CHECK(v.text.find("schema 1") != std::string::npos);
    CHECK(run("--help").code == 0);
    CHECK(run("").code == 1);
    CHECK(run("frobnicate").code == 1);
}

TEST_CASE("forms") {
    auto r = run("forms --disc 12");
    REQUIRE(r.code == 0);
    auto lines = json_lines(r.text);
    REQUIRE(lines.size() == 2);
    for (auto& j : lines) CHECK(j["disc"] == 12);
    auto s = json_lines(run("forms --disc 5 --set speriod").text);
    CHECK(s.size() == 2);
    CHECK(json_lines(run("forms --disc 5 --set containing --z 0.1+0.2i").text).size() >= 1);
    CHECK(run("forms --disc 5 --set everything").code == 1);
}

TEST_CASE("trace") {
    auto r = run("trace --kind cm --F J --disc -3");
    REQUIRE(r.code == 0);
    CHECK(std::stod(r.text) == doctest::Approx(-248).epsilon(1e-12));
    auto j = json_lines(run("trace --kind cycle --F one --disc 5 --format json").text);
    REQUIRE(j.size() == 1);
    double tr1 = std::stod(j[0]["value"].get<std::string>());
    CHECK(tr1 == doctest::Approx(4 * std::log((1 + std::sqrt(5.0)) / 2) / std::sqrt(5.0)).epsilon(1e-12));
    auto csv = run("trace --kind cycle --F J2 --disc 5 8 --format csv");
    CHECK(csv.code == 0);
    CHECK(std::count(csv.text.begin(), csv.text.end(), '\n') == 3);
    CHECK(run("trace --kind cm --disc 5").code == 1);
    CHECK(run("trace --kind cycle --disc 7").code == 1);
    CHECK(run("trace --kind cycle --F K --disc 5").code == 1);
    CHECK(run("trace --kind cycle --disc 5 --tol 1").code == 1);
}

TEST_CASE("cache file") {
    auto path = temp("cache", ".json");
    fs::remove(path);
    auto r = run("trace --kind cycle --F J --disc 5 13", "MODLIFT_CACHE='" + path.string() + "'");
    REQUIRE(r.code == 0);
    REQUIRE(fs::exists(path));
    auto doc = nlohmann::json::parse(std::ifstream(path));
    CHECK(doc["schema"] == 1);
    CHECK(doc["entries"].size() == 2);
    // --cache overrides the environment
    auto other = temp("cache2", ".json");
    run("trace --kind cm --disc -4 --cache '" + other.string() + "'", "MODLIFT_CACHE='" + path.string() + "'");
    CHECK(fs::exists(other));
    CHECK(nlohmann::json::parse(std::ifstream(path))["entries"].size() == 2);
    auto again = run("trace --kind cycle --F J --disc 5", "MODLIFT_CACHE='" + path.string() + "'");
    CHECK(again.text == run("trace --kind cycle --F J --disc 5").text);
    fs::remove(path);
    fs::remove(other);
}

TEST_CASE("output does not depend on the thread count") {
    auto a = temp("det1", ".json"), b = temp("det3", ".json");
    auto r1 = run("trace --kind cycle --F J --disc 5 8 12 13 17 --format json --threads 1 --cache '" + a.string() + "'");
    auto r3 = run("trace --kind cycle --F J --disc 5 8 12 13 17 --format json --threads 3 --cache '" + b.string() + "'");
    CHECK(r1.code == 0);
    CHECK(r1.text == r3.text);
    auto slurp = [](const fs::path& p) {
        std::ifstream is(p);
        return std::string(std::istreambuf_iterator<char>(is), {});
    };
    CHECK(slurp(a) == slurp(b));
    fs::remove(a);
    fs::remove(b);
}

TEST_CASE("faber") {
    auto r = run("faber --m 1 --order 3");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.text);
    CHECK(j["coeffs"]["-1"] == 1);
    CHECK(j["coeffs"]["1"] == 196884);
    CHECK(j["coeffs"]["3"] == 864299970);
    CHECK_FALSE(j["coeffs"].contains("0"));
    // exact integers beyond double precision
    auto big = run("faber --m 2 --order 40");
    CHECK(big.text.find("\"40\":") != std::string::npos);
}

TEST_CASE("evaluation commands") {
    auto f = json_lines(run("integral --delta 5 --z i --format json").text);
    REQUIRE(f.size() == 1);
    CHECK(f[0]["re"].get<double>() == doctest::Approx(4 / (5 * std::numbers::pi)).epsilon(1e-9));
    CHECK(run("lift --delta 5 --z 0.2+1.3i").code == 0);
    CHECK(run("deriv --delta 8 --z 0.2+1.3i --format json").code == 0);
    CHECK(run("product --delta 5 --z 2i").code == 0);
    CHECK(run("lift --delta 4 --z i").code == 1);
    CHECK(run("lift --delta 5 --z -i").code == 1);
    CHECK(run("lift --delta 5 --z i --trunc 2").code == 1);
    CHECK(run("lift --delta 5").code == 1);
}

TEST_CASE("grid output") {
    auto path = temp("grid", ".csv");
    auto r = run("lift --delta 5 --grid -0.5 0.5 0.8 1.2 3 2 --out '" + path.string() + "'");
    REQUIRE(r.code == 0);
    std::ifstream is(path);
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,y,re,im,singular_flag");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 6);
    fs::remove(path);
    CHECK(run("lift --delta 5 --grid 0 1 0.5 1 2 2").code == 1);
}

TEST_CASE("verify") {
    auto r = run("verify --suite period --delta 5");
    CHECK(r.code == 0);
    auto lines = json_lines(r.text);
    CHECK(lines.size() == 3);
    for (auto& j : lines) CHECK(j["ok"] == true);
    CHECK(run("verify --suite jump --delta 5").code == 0);
    CHECK(run("verify --suite nonsense").code == 1);
}
