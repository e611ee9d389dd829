#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

const std::string& binary() {
    static const std::string path = [] {
        const char* env = std::getenv("PSQ_BIN");
        REQUIRE_MESSAGE(env != nullptr, "PSQ_BIN must point at the CLI binary");
        return std::string(env);
    }();
    return path;
}

// Run `<prefix> "$PSQ_BIN" <args>` through the shell, capturing stdout.
RunResult run(const std::string& args, const std::string& prefix = "") {
    std::string cmd = prefix;
    if (!cmd.empty()) cmd += " ";
    cmd += "\"" + binary() + "\" " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = std::move(out);
    return r;
}

std::filesystem::path scratch_dir() {
    static const std::filesystem::path dir = [] {
        auto p = std::filesystem::temp_directory_path() /
                 ("psq_cli_" + std::to_string(::getpid()));
        std::filesystem::create_directories(p);
        return p;
    }();
    return dir;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double num(const nlohmann::json& j) { return std::stod(j.get<std::string>()); }

} // namespace

TEST_CASE("help and argument errors use the contract exit codes") {
    CHECK(run("--help").exit_code == 0);
    CHECK(run("theta-s --help").exit_code == 0);
    CHECK(run("").exit_code == 2);               // missing subcommand
    CHECK(run("theta-s --rho 2").exit_code == 2); // missing required flag
    CHECK(run("transform --rho 0.8 --capacity 6 --theta 0.5 --method bogus").exit_code == 2);
    CHECK(run("transform --rho 0.8 --capacity 6 --theta 0.5 --n 6 --method resolvent")
              .exit_code == 2);
    CHECK(run("table --regime super --rho 2 --capacities 50,25").exit_code == 2);
    CHECK(run("table --regime critical --rho 2 --capacities 25,50").exit_code == 2);
    CHECK(run("simulate --rho 1 --capacity 2 --count 10 --seed 1").exit_code == 2);
    CHECK(run("simulate --rho 1 --capacity 2 --count 10 --seed 1 --n 0 --stationary")
              .exit_code == 2);
    CHECK(run("density --rho 1 --capacity 2 --n 0 --method ode --gnuplot /tmp/x.gp")
              .exit_code == 2); // no --output to plot from
}

TEST_CASE("theta-s reports the exact rate and regime estimates") {
    const auto r = run("theta-s --rho 2 --capacity 20");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["config"]["subcommand"] == "theta-s");
    CHECK(doc["config"]["capacity"] == 20);
    CHECK(num(doc["theta_s_exact"]) ==
          doctest::Approx(-0.052579024192081600107).epsilon(1e-10));
    bool saw_super = false;
    for (const auto& est : doc["estimates"]) {
        if (est["regime"] == "super") {
            saw_super = true;
            CHECK(num(est["theta_s_estimate"]) == doctest::Approx(-0.05259375).epsilon(1e-12));
            CHECK(est["terms"].size() == 4);
        }
    }
    CHECK(saw_super);
}

TEST_CASE("transform cross-checks its two solvers") {
    const auto csv = run("transform --rho 0.8 --capacity 6 --theta 0.5 --method both "
                         "--format csv");
    REQUIRE(csv.exit_code == 0);
    const auto rows = lines_of(csv.out);
    REQUIRE(rows.size() == 7);
    CHECK(rows[0] == "n,phat_theorem21,phat_resolvent,rel_discrepancy");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto fields = split_csv(rows[i]);
        REQUIRE(fields.size() == 4);
        CHECK(std::stod(fields[3]) < 1e-8);
    }

    const auto js = run("transform --rho 0.8 --capacity 6 --theta 0.5 --method resolvent "
                        "--format json");
    REQUIRE(js.exit_code == 0);
    const auto doc = nlohmann::json::parse(js.out);
    REQUIRE(doc["values"].size() == 6);
    double prev = 1e300;
    for (const auto& row : doc["values"]) {
        const double v = num(row["phat"]);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("spectrum lists the closed-form eigenvalues") {
    const auto r = run("spectrum --rho 1 --capacity 2 --method eigen --format json");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc["eigenvalues"].size() == 2);
    const double root3 = std::sqrt(3.0);
    CHECK(num(doc["eigenvalues"][0]) == doctest::Approx((-3.0 - root3) / 2.0).epsilon(1e-12));
    CHECK(num(doc["eigenvalues"][1]) == doctest::Approx((-3.0 + root3) / 2.0).epsilon(1e-12));
    CHECK(num(doc["theta_s"]) == doctest::Approx((-3.0 + root3) / 2.0).epsilon(1e-12));
}

TEST_CASE("table emits the contract header and a sensible convergence order") {
    const auto r = run("table --regime super --rho 2 --capacities 25,50,100,200 --format csv");
    REQUIRE(r.exit_code == 0);
    const auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == "K,theta_s_exact,theta_s_asymp,abs_err,implied_order");
    const auto first = split_csv(rows[1]);
    REQUIRE(first.size() == 5);
    CHECK(first[0] == "25");
    CHECK(first[4].empty());
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const auto fields = split_csv(rows[i]);
        REQUIRE(fields.size() == 5);
        const double order = std::stod(fields[4]);
        CHECK(order > 4.5);
        CHECK(order < 5.5);
    }
}

TEST_CASE("output bytes are deterministic and thread-count independent") {
    const std::string args = "table --regime sub --rho 0.5 --capacities 25,50,100 --format json";
    const auto a = run(args, "PS_SOJOURN_THREADS=1");
    const auto b = run(args, "PS_SOJOURN_THREADS=8");
    const auto c = run(args, "PS_SOJOURN_THREADS=8");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(b.out == c.out);
}

TEST_CASE("density curves") {
    const auto ode = run("density --rho 0.5 --capacity 1 --n 0 --method ode --t-max 5 "
                         "--points 11 --format csv");
    REQUIRE(ode.exit_code == 0);
    const auto rows = lines_of(ode.out);
    REQUIRE(rows.size() >= 3);
    CHECK(rows[0] == "t,density,survival");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto fields = split_csv(rows[i]);
        REQUIRE(fields.size() == 3);
        const double t = std::stod(fields[0]);
        CHECK(std::stod(fields[1]) == doctest::Approx(std::exp(-t)).epsilon(1e-6));
        CHECK(std::stod(fields[2]) == doctest::Approx(std::exp(-t)).epsilon(1e-6));
    }

    const auto inv = run("density --rho 1 --capacity 5 --n 2 --method invert --t-max 5 "
                         "--points 11 --format csv");
    REQUIRE(inv.exit_code == 0);
    const auto inv_rows = lines_of(inv.out);
    CHECK(inv_rows[0] == "t,density");
    CHECK(std::stod(split_csv(inv_rows[1])[0]) > 0.0); // t = 0 dropped
}

TEST_CASE("gnuplot companion script") {
    const auto out_csv = scratch_dir() / "curve.csv";
    const auto script = scratch_dir() / "curve.gp";
    const auto r = run("density --rho 0.8 --capacity 4 --n 1 --method spectral --t-max 10 "
                       "--points 21 --format csv --output \"" +
                       out_csv.string() + "\" --gnuplot \"" + script.string() + "\"");
    REQUIRE(r.exit_code == 0);
    const auto body = read_file(out_csv);
    CHECK(lines_of(body)[0] == "t,density,survival");
    const auto gp = read_file(script);
    CHECK(gp.find("set datafile separator") != std::string::npos);
    CHECK(gp.find(out_csv.string()) != std::string::npos);
}

TEST_CASE("simulate writes samples and a summary") {
    const auto out_csv = scratch_dir() / "samples.csv";
    const auto r = run("simulate --rho 1 --capacity 2 --n 1 --count 20000 --seed 5 "
                       "--output \"" +
                       out_csv.string() + "\"");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["sample_count"] == 20000);
    const double mean = num(doc["mean"]);
    const double se = num(doc["std_error"]);
    CHECK(std::abs(mean - 5.0 / 3.0) <= 4.0 * se);
    CHECK(num(doc["min"]) > 0.0);

    const auto rows = lines_of(read_file(out_csv));
    REQUIRE(rows.size() == 20001);
    CHECK(rows[0] == "sojourn_time");
    CHECK(std::stod(rows[1]) > 0.0);

    const auto st = run("simulate --rho 0.5 --capacity 3 --stationary --count 5000 --seed 9");
    REQUIRE(st.exit_code == 0);
    const auto sdoc = nlohmann::json::parse(st.out);
    CHECK(sdoc["config"]["mode"] == "stationary");
    CHECK(sdoc.contains("blocked_count"));
    CHECK(sdoc["initial_state_counts"].size() == 3);
}

TEST_CASE("compare runs the full cross-validation and reports pass") {
    const auto r = run("compare --rho 0.8 --capacity 5 --thetas 0.25,1 --t-max 20 "
                       "--format json");
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["pass"] == true);
    REQUIRE(doc["checks"].size() == 4);
    for (const auto& check : doc["checks"]) {
        CHECK(check["pass"] == true);
        CHECK(num(check["residual"]) <= num(check["tolerance"]));
    }
}
