#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pkp/expectation.hpp"
#include "support/test_helpers.hpp"

// These tests drive the installed binary; the path arrives via the PKP_CLI
// environment variable (set by CTest). They are skipped when it is absent.

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

const char* cli_path() { return std::getenv("PKP_CLI"); }

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(cli_path()) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

} // namespace

#define REQUIRE_CLI() \
    if (cli_path() == nullptr) SKIP("PKP_CLI not set; CLI tests need the built binary")

TEST_CASE("expect emits the documented value for the star anchor", "[cli]") {
    REQUIRE_CLI();
    const auto r = run_cli("expect --variant ipkp_star --q 7 --ell 1 --m 3 --n 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("exact                   = 97/57") != std::string::npos);
}

TEST_CASE("expect validates parameters and reports the constraint", "[cli]") {
    REQUIRE_CLI();
    CHECK(run_cli("expect --variant ipkp --q 7 --ell 5 --m 3 --n 1").exit_code == 2);
    CHECK(run_cli("expect --variant pkp --q 7 --ell 3 --m 3 --n 1").exit_code == 2);
    CHECK(run_cli("expect --variant nonsense --q 7 --ell 1 --m 3 --n 1").exit_code == 2);
    // non-prime-power q: hard error without the override, warning with it
    CHECK(run_cli("expect --variant ipkp --q 12 --ell 1 --m 3 --n 1").exit_code == 2);
    CHECK(run_cli("expect --variant ipkp --q 12 --ell 1 --m 3 --n 1 --allow-any-q")
              .exit_code == 0);
}

TEST_CASE("count refuses oversized enumeration with exit code 3", "[cli]") {
    REQUIRE_CLI();
    const auto tmp = std::filesystem::temp_directory_path() / "pkp_cli_cap_test.json";
    const auto gen = run_cli("gen --variant ipkp --q 2 --ell 1 --m 13 --n 1 --seed 5 --out " +
                             tmp.string());
    REQUIRE(gen.exit_code == 0);
    CHECK(run_cli("count " + tmp.string()).exit_code == 3);
    std::filesystem::remove(tmp);
}

TEST_CASE("gen then count sees the planted solution", "[cli]") {
    REQUIRE_CLI();
    const auto tmp = std::filesystem::temp_directory_path() / "pkp_cli_gen_count.json";
    REQUIRE(run_cli("gen --variant pkp_star --q 11 --ell 2 --m 5 --n 1 --seed 31 "
                    "--with-secret --out " + tmp.string()).exit_code == 0);
    const auto count = run_cli("count " + tmp.string() + " --format json");
    CHECK(count.exit_code == 0);
    const auto j = nlohmann::json::parse(count.out);
    CHECK(j.at("n_sol").get<std::uint64_t>() >= 1);
    CHECK(j.at("contains_secret").get<bool>());
    std::filesystem::remove(tmp);
}

TEST_CASE("gen is byte-identical for equal seeds", "[cli]") {
    REQUIRE_CLI();
    const auto a = run_cli("gen --variant ipkp --q 7 --ell 2 --m 5 --n 2 --seed 99 "
                           "--with-secret --out -");
    const auto b = run_cli("gen --variant ipkp --q 7 --ell 2 --m 5 --n 2 --seed 99 "
                           "--with-secret --out -");
    const auto c = run_cli("gen --variant ipkp --q 7 --ell 2 --m 5 --n 2 --seed 100 "
                           "--with-secret --out -");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
}

TEST_CASE("csv output round-trips: re-evaluating a row reproduces the exact value",
          "[cli]") {
    REQUIRE_CLI();
    const auto r = run_cli("table --variant pkp --q 251 --ell 39..41 --m 69 --n 1");
    CHECK(r.exit_code == 0);
    std::stringstream lines(r.out);
    std::string header;
    REQUIRE(std::getline(lines, header));
    CHECK(header == "variant,q,ell,m,n,exact_num,exact_den,exact_decimal,"
                    "exact_minus_one_decimal,heuristic_decimal,ratio_decimal");
    std::string line;
    unsigned rows = 0;
    while (std::getline(lines, line)) {
        const auto cells = split_csv_line(line);
        REQUIRE(cells.size() == 11);
        pkp::ParameterSet p;
        p.variant = pkp::parse_variant(cells[0]);
        p.q = std::stoll(cells[1]);
        p.ell = static_cast<unsigned>(std::stoul(cells[2]));
        p.m = static_cast<unsigned>(std::stoul(cells[3]));
        p.n = static_cast<unsigned>(std::stoul(cells[4]));
        const pkp::Rat reported =
            pkp::make_rational(pkp::Int(cells[5]), pkp::Int(cells[6]));
        CHECK(pkp::evaluate(p).exact == reported);
        ++rows;
    }
    CHECK(rows == 3);
}

TEST_CASE("table sweep emits one row per grid point, monotone in ell", "[cli]") {
    REQUIRE_CLI();
    const auto r = run_cli("table --variant pkp --q 251 --ell 30..41 --m 69 --n 1");
    CHECK(r.exit_code == 0);
    std::stringstream lines(r.out);
    std::string line;
    std::getline(lines, line); // header
    std::vector<pkp::Rat> exact;
    while (std::getline(lines, line)) {
        const auto cells = split_csv_line(line);
        exact.push_back(pkp::make_rational(pkp::Int(cells[5]), pkp::Int(cells[6])));
    }
    REQUIRE(exact.size() == 12);
    for (std::size_t i = 0; i + 1 < exact.size(); ++i) CHECK(exact[i] > exact[i + 1]);
}

TEST_CASE("json report matches the library evaluation", "[cli]") {
    REQUIRE_CLI();
    const auto r = run_cli("expect --variant pkp --q 251 --ell 41 --m 69 --n 1 --format json");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const pkp::ParameterSet p{251, 41, 69, 1, pkp::Variant::pkp};
    const auto rep = pkp::evaluate(p);
    CHECK(pkp::Int(j.at("exact").at("num").get<std::string>()) == numerator(rep.exact));
    CHECK(pkp::Int(j.at("exact").at("den").get<std::string>()) == denominator(rep.exact));
    CHECK(j.at("exact_decimal").get<std::string>() == pkp::to_decimal(rep.exact, 12));
    CHECK_FALSE(j.at("outside_validity").get<bool>());
}

TEST_CASE("mc subcommand reproduces a report under a fixed seed", "[cli]") {
    REQUIRE_CLI();
    const std::string args = "mc --variant pkp --q 5 --ell 1 --m 4 --n 1 --samples 2000 "
                             "--seed 7 --format json";
    const auto a = run_cli(args), b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j.at("status").get<std::string>() == "PASS");
    CHECK(j.at("samples").get<std::uint64_t>() == 2000);
}

TEST_CASE("enumerate-exact agrees with the formula and exits 0", "[cli]") {
    REQUIRE_CLI();
    const auto r = run_cli("enumerate-exact --variant pkp --q 2 --ell 1 --m 2 --n 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("exhaustive = 4/3") != std::string::npos);
    CHECK(r.out.find("equal      = true") != std::string::npos);
    // cap refusal surfaces as exit 3
    CHECK(run_cli("enumerate-exact --variant ipkp --q 7 --ell 2 --m 5 --n 1").exit_code == 3);
}

TEST_CASE("heuristic subcommand prints the exact fraction", "[cli]") {
    REQUIRE_CLI();
    const auto r = run_cli("heuristic --variant ipkp --q 5 --ell 1 --m 1 --n 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("heuristic         = 1/5") != std::string::npos);
}
