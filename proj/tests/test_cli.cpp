#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the CLI with stderr folded into a separate file so stdout stays parseable.
Run run(const std::string& args, std::string* err = nullptr) {
    const std::string errfile = "cli_test_stderr.txt";
    const std::string cmd = std::string(PEARCEY_CLI_PATH) + " " + args + " 2>" + errfile;
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (err) {
        err->clear();
        if (FILE* f = std::fopen(errfile.c_str(), "r")) {
            while ((n = fread(buf, 1, sizeof buf, f)) > 0) err->append(buf, n);
            std::fclose(f);
        }
    }
    std::remove(errfile.c_str());
    return r;
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream is(csv);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#') rows.push_back(line);
    return rows;
}

}  // namespace

TEST_CASE("det at gamma = 0") {
    const Run r = run("det --s 2 --gamma 0 --rho 1");
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["results"][0]["F"].get<double>() == 0.0);
    CHECK(j.contains("config"));
    CHECK(j.contains("diagnostics"));
    CHECK(j["meta"]["version"].is_string());
}

TEST_CASE("scan CSV columns and error trend") {
    const Run r = run("scan --gamma 0.5 --rho 0 --s-min 4 --s-max 10 --s-steps 4 --format csv");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("# pearcey", 0) == 0);
    const auto rows = data_lines(r.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == "s,F_num,F_asy,leading,subleading,log_term,constant,err,err_est");
    std::vector<double> err;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::vector<double> v;
        std::istringstream is(rows[i]);
        std::string cell;
        while (std::getline(is, cell, ',')) v.push_back(std::stod(cell));
        REQUIRE(v.size() == 9);
        err.push_back(v[7]);
    }
    // s = 4, 5.5, 7, 8.5, 10
    CHECK(err.back() < err.front());
}

TEST_CASE("chf-verify report") {
    const Run r = run("chf-verify --beta-im 0.11");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["diagnostics"]["max_ray_residual"].get<double>() <= 1e-9);
    CHECK(j["results"].size() == 24);
}

TEST_CASE("usage and numerical errors") {
    std::string err;
    CHECK(run("det --s 2 --gamma 1.5").code == 2);
    CHECK(run("det --bogus 1").code == 2);
    CHECK(run("").code == 2);
    CHECK(run("scan --format xml").code == 2);
    CHECK(run("selftest --criteria 13").code == 2);
    const Run bad = run("det --s 10 --gamma 1 --tol 1e-12", &err);
    CHECK(bad.code == 1);
    const auto j = nlohmann::json::parse(err, nullptr, false);
    REQUIRE_FALSE(j.is_discarded());
    CHECK(j["error"]["kind"].is_string());
    CHECK(j["error"]["message"].is_string());
}

TEST_CASE("output is deterministic") {
    const std::string args = "moments --s-min 2 --s-max 4 --s-steps 2 --format csv";
    const Run a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("hamiltonian CSV export") {
    const Run r = run("hamiltonian --gamma 0.5 --format csv");
    REQUIRE(r.code == 0);
    const auto rows = data_lines(r.out);
    CHECK(rows[0].rfind("s,re_p0", 0) == 0);
    CHECK(rows.size() >= 201);
}

TEST_CASE("kernel grid with all oracles") {
    const Run r = run("kernel --x-min -1 --x-max 1 --x-steps 2 --oracle all");
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["results"].size() == 9);
    for (const auto& row : j["results"]) {
        if (row["x"] == row["y"]) continue;
        CHECK(std::fabs(row["K_rational"].get<double>() - row["K_rh"].get<double>()) < 1e-7);
    }
}

TEST_CASE("selftest subset") {
    const Run r = run("selftest --criteria 11 12");
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS [11]") != std::string::npos);
    CHECK(r.out.find("PASS [12]") != std::string::npos);
}
