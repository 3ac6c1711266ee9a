#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct CliResult {
    int exit_code;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(DESCENTLAB_BIN) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    while (fgets(buf.data(), buf.size(), p)) out += buf.data();
    int status = pclose(p);
    return {WEXITSTATUS(status), out};
}

} // namespace

TEST_CASE("lattice info: square lattice") {
    auto r = run_cli("lattice info --tau i --prec 50");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    double jre = std::stod(j["j"]["re"].get<std::string>());
    CHECK(jre == Catch::Approx(1728.0).epsilon(1e-12));
    CHECK(std::stod(j["legendre_residual"].get<std::string>()) < 1e-40);
    CHECK(j["precision"]["decimal_digits"] == 50);
}

TEST_CASE("lattice info: rho has g2 = 0") {
    auto r = run_cli("lattice info --tau rho --prec 50");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(std::abs(std::stod(j["g2"]["re"].get<std::string>())) < 1e-40);
    CHECK(std::abs(std::stod(j["g2"]["im"].get<std::string>())) < 1e-40);
}

TEST_CASE("lattice info: sqrt3(1+i) report is finite with small legendre residual") {
    auto r = run_cli("lattice info --tau \"sqrt3*(1+1i)\" --prec 50");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(std::stod(j["legendre_residual"].get<std::string>()) < 1e-40);
}

TEST_CASE("table and json agree") {
    auto a = run_cli("lattice info --tau i --prec 50");
    auto b = run_cli("lattice info --tau i --prec 50 --output table");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    json j = json::parse(a.out);
    std::string g2 = j["g2"]["re"].get<std::string>();
    CHECK(b.out.find("g2.re = " + g2) != std::string::npos);
}

TEST_CASE("descent torus verdicts") {
    auto r = run_cli("descent torus --b \"1+1i\"");
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(r.out)["verdict"] == "none");

    auto r2 = run_cli("descent torus --b 1 --b sqrt2");
    json j2 = json::parse(r2.out);
    CHECK(j2["verdict"] == "descends");
    CHECK(j2["target"] == json::array({"Gm", "Gm"}));

    auto r3 = run_cli("descent torus --b \"1,i\"");
    json j3 = json::parse(r3.out);
    CHECK(j3["verdict"] == "descends");
    CHECK(j3["target"] == json::array({"Gm", "S"}));
}

TEST_CASE("descent elliptic verdicts") {
    auto r = run_cli("descent elliptic --tau \"sqrt3*(1+1i)\"");
    json j = json::parse(r.out);
    CHECK(j["definable"] == false);

    auto r2 = run_cli("descent elliptic --tau \"1/2 + sqrt5*1i\"");
    json j2 = json::parse(r2.out);
    CHECK(j2["definable"] == true);
    CHECK(j2["witness"]["type"] == "RationalRealPart");
    CHECK(j2["witness"]["value"] == "1/2");
}

TEST_CASE("ext kernel residual") {
    auto r = run_cli("ext kernel --kind ga --param 1 --tau i --prec 50");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(std::stod(j["periodicity_residual"].get<std::string>()) < 1e-30);
}

TEST_CASE("weil restrict and groupcat delta") {
    auto r = run_cli("weil restrict --object Gm");
    json j = json::parse(r.out);
    CHECK(j["factors"][0]["restriction"] == "Gm x S");

    auto r2 = run_cli("groupcat delta --object \"ExtGa(E(tau=i),t=1) x Gm\"");
    CHECK(json::parse(r2.out)["delta"] == 2);
}

TEST_CASE("relations find on a values file") {
    std::string path = "/tmp/descentlab_test_values.json";
    {
        std::ofstream f(path);
        f << R"(["eta1*lambda2 - eta2*lambda1", "2*pi*i"])";
    }
    auto r = run_cli("relations find --file " + path + " --maxcoeff 10 --tau i --prec 50");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["status"] == "found");
    CHECK(j["coefficients"] == json::array({"1", "-1"}));
    std::remove(path.c_str());
}

TEST_CASE("exit codes") {
    CHECK(run_cli("descent torus --b \"1+\"").exit_code == 1);      // parse
    CHECK(run_cli("descent torus --b 0").exit_code == 2);           // domain
    CHECK(run_cli("descent elliptic --tau 7").exit_code == 2);      // tau real
    CHECK(run_cli("lattice info --tau i --prec 5").exit_code == 2); // bad precision
    CHECK(run_cli("nonsense").exit_code != 0);
    // round trip: every json output re-parses
    auto r = run_cli("descent elliptic --tau \"sqrt2*1i\"");
    CHECK_NOTHROW(json::parse(r.out));
}
