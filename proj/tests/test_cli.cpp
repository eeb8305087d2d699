#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    std::string tag = std::to_string(counter++);
    auto tmp = std::filesystem::temp_directory_path();
    std::string out_path = (tmp / ("primpoint_out_" + tag)).string();
    std::string err_path = (tmp / ("primpoint_err_" + tag)).string();
    std::string cmd = std::string(PRIMPOINT_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    auto slurp = [](const std::string& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::filesystem::remove(out_path);
    std::filesystem::remove(err_path);
    return r;
}

std::string first_line(const std::string& s) {
    auto pos = s.find('\n');
    return pos == std::string::npos ? s : s.substr(0, pos);
}

}  // namespace

TEST_CASE("count subcommand") {
    RunResult r = run_cli("count --q 7 --poly \"x1^2+x2^2+x3^2-1\" --method brute");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);  // strict parse
    CHECK(j.at("count") == 3);
    CHECK(j.at("q") == 7);
    CHECK(j.at("method") == "brute");

    RunResult m = run_cli("count --q 7 --poly \"x1^2+x2^2+x3^2-1\" --method moebius");
    CHECK(m.exit_code == 0);
    CHECK(json::parse(m.out).at("count") == 3);
}

TEST_CASE("count rejects fields over the cap") {
    RunResult r = run_cli("count --q 4294967311 --poly \"x1+x2\" --method brute");
    CHECK(r.exit_code == 1);
    json e = json::parse(r.err);
    CHECK(e.contains("error"));
}

TEST_CASE("parse errors carry a position and exit 1") {
    RunResult r = run_cli("count --q 7 --poly \"x1++x2\" --method brute");
    CHECK(r.exit_code == 1);
    json e = json::parse(first_line(r.err));
    CHECK(e.contains("error"));
    CHECK(e.contains("position"));
}

TEST_CASE("field info") {
    RunResult r = run_cli("field info --q 9");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j.at("p") == 3);
    CHECK(j.at("n") == 2);
    CHECK(j.at("modulus") == json::array({1, 0, 1}));  // x^2 + 1
    CHECK(j.at("phi_q_minus_1") == 4);

    RunResult r5 = run_cli("field info --p 5 --n 1");
    CHECK(json::parse(r5.out).at("generator") == 2);
}

TEST_CASE("bound subcommands") {
    RunResult bf = run_cli("bound fermat --q 7 --d 2,2,2 --b 1");
    CHECK(bf.exit_code == 0);
    json j = json::parse(bf.out);
    CHECK(j.at("count") == 3);
    CHECK(j.at("holds") == true);
    CHECK(j.at("bound").get<double>() == doctest::Approx(9.993).epsilon(0.001));

    RunResult bd = run_cli("bound dwork --q 7 --poly \"x1^3+x2^3-1\"");
    CHECK(bd.exit_code == 0);
    CHECK(json::parse(bd.out).at("holds") == true);

    RunResult bs = run_cli("bound superelliptic --q 13 --n 2 --d 3 --s 1");
    CHECK(bs.exit_code == 0);
    CHECK(json::parse(bs.out).at("bound").get<double>() == doctest::Approx(38.459).epsilon(0.001));
}

TEST_CASE("hyperplane subcommand and exact/brute agreement") {
    RunResult ex = run_cli("hyperplane --q 17 --a 1,1,1 --b 0 --method exact");
    CHECK(ex.exit_code == 0);
    CHECK(json::parse(ex.out).at("count") == 24);
    RunResult br = run_cli("hyperplane --q 17 --a 1,1,1 --b 0 --method brute");
    CHECK(json::parse(br.out).at("count") == 24);
    RunResult bad = run_cli("hyperplane --q 7 --a 1,1 --b 0 --method exact");
    CHECK(bad.exit_code == 1);  // 7 is not a Fermat prime
}

TEST_CASE("jacobi subcommand") {
    RunResult r = run_cli("jacobi --q 5 --orders 2,2 --b 1");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j.at("re").get<double>() == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(j.at("magnitude_law") == "q^((s-2)/2)");
    RunResult r2 = run_cli("jacobi --q 13 --orders 4,3 --b 1");
    CHECK(json::parse(r2.out).at("magnitude").get<double>() == doctest::Approx(std::sqrt(13.0)).epsilon(1e-6));
}

TEST_CASE("sieve subcommand") {
    RunResult r = run_cli("sieve --q 10000019 --d 2,2,2 --primes 13,17,19,23 --w-ell 32,32,32");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j.at("criterion") == true);
    CHECK(j.at("delta").get<double>() == doctest::Approx(0.3044).epsilon(0.001));
    CHECK(j.at("t_total") == 12);
}

TEST_CASE("scan sphere with expectations") {
    RunResult ok = run_cli("scan sphere --max 1000 --expect 3,5,9,13,25");
    CHECK(ok.exit_code == 0);
    json j = json::parse(ok.out);
    CHECK(j.at("exceptional") == json::array({3, 5, 9, 13, 25}));

    RunResult bad = run_cli("scan sphere --max 100 --expect 3,5");
    CHECK(bad.exit_code == 2);

    RunResult csv = run_cli("scan sphere --max 50 --format csv");
    CHECK(csv.exit_code == 0);
    std::istringstream lines(csv.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "q,has_primitive,witness_x,witness_y,witness_z");
    size_t rows = 0;
    std::string l;
    while (std::getline(lines, l))
        if (!l.empty()) ++rows;
    CHECK(rows == 18);  // odd prime powers up to 50
}

TEST_CASE("scan output is identical at any parallelism") {
    RunResult j1 = run_cli("scan sphere --max 600 --jobs 1");
    RunResult j2 = run_cli("scan sphere --max 600 --jobs 2");
    CHECK(j1.exit_code == 0);
    CHECK(j2.exit_code == 0);
    CHECK(j1.out == j2.out);

    auto tmp = std::filesystem::temp_directory_path();
    std::string c1 = (tmp / "primpoint_cli_ck1.jsonl").string();
    std::string c2 = (tmp / "primpoint_cli_ck2.jsonl").string();
    std::filesystem::remove(c1);
    std::filesystem::remove(c2);
    run_cli("scan sphere --max 600 --jobs 1 --checkpoint " + c1);
    run_cli("scan sphere --max 600 --jobs 2 --checkpoint " + c2);
    std::ifstream f1(c1), f2(c2);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK(!s1.str().empty());
    std::filesystem::remove(c1);
    std::filesystem::remove(c2);
}

TEST_CASE("report JSON is deterministic apart from elapsed_ms") {
    auto strip = [](const std::string& out) {
        json j = json::parse(out);
        j.erase("elapsed_ms");
        return j;
    };
    RunResult a = run_cli("bound fermat --q 49 --d 2,3 --b 1");
    RunResult b = run_cli("bound fermat --q 49 --d 2,3 --b 1");
    CHECK(strip(a.out) == strip(b.out));
}

TEST_CASE("csv report has a header and one row") {
    RunResult r = run_cli("count --q 5 --poly \"x1+x2\" --method brute --format csv");
    CHECK(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string header, row, extra;
    CHECK(std::getline(lines, header));
    CHECK(std::getline(lines, row));
    CHECK_FALSE(std::getline(lines, extra));
    CHECK(header == "q,p,n,poly,method,count,main_term,deviation,bound,holds,elapsed_ms");
    CHECK(row.substr(0, 6) == "5,5,1,");
}

TEST_CASE("threshold sphere") {
    RunResult r = run_cli("threshold sphere");
    CHECK(r.exit_code == 0);
    double t = json::parse(r.out).at("threshold").get<double>();
    CHECK(t == doctest::Approx(5.2143e9).epsilon(0.001));
}

TEST_CASE("work budget environment variable") {
    std::string cmd = "PRIMPOINT_WORK_BUDGET=10 " + std::string(PRIMPOINT_CLI_PATH) +
                      " count --q 31 --poly \"x1^2+x2^2+x3^2-1\" --method brute";
    auto tmp = std::filesystem::temp_directory_path();
    std::string err_path = (tmp / "primpoint_budget_err").string();
    int rc = std::system((cmd + " 2>" + err_path + " >/dev/null").c_str());
    CHECK(WEXITSTATUS(rc) == 1);
    std::ifstream in(err_path);
    std::stringstream ss;
    ss << in.rdbuf();
    json e = json::parse(first_line(ss.str()));
    CHECK(e.at("error").get<std::string>().find("budget") != std::string::npos);
    std::filesystem::remove(err_path);
}
