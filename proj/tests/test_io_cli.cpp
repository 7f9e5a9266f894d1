#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "stringlab/fieldio.hpp"
#include "stringlab/numerics.hpp"
#include "stringlab/pipelines.hpp"
#include "stringlab/simulate.hpp"

using namespace stringlab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string bin_path() {
    const char* p = std::getenv("STRINGLAB_BIN");
    return p ? p : "";
}

int run_cli(const std::string& args) {
    const int rc = std::system((bin_path() + " " + args).c_str());
    return WEXITSTATUS(rc);
}

} // namespace

TEST_CASE("double formatting round-trips exactly") {
    GaussianStream g(1);
    for (int i = 0; i < 1000; ++i) {
        const double v = (g.uniform01() - 0.5) * std::pow(10.0, 30.0 * (g.uniform01() - 0.5));
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(std::stod(format_double(0.1)) == 0.1);
}

TEST_CASE("field dump and load round-trip") {
    GridSpec g{0.5, 1.0, -0.25, 0.75, 5, 7};
    FieldSample f = sample_field(g, 2, 98765);
    const std::string path = "roundtrip_field.csv";
    write_field_csv(f, path);
    FieldSample back = read_field_csv(path);
    CHECK(back.values == f.values); // bitwise through %.17g
    CHECK(back.d == f.d);
    CHECK(back.seed == f.seed);
    CHECK(back.grid.n_t == g.n_t);
    CHECK(back.grid.t_min == g.t_min);
    CHECK(back.jitter_used == f.jitter_used);
    std::remove(path.c_str());
    std::remove((path + ".meta").c_str());
}

TEST_CASE("CSV dialect: header row, LF endings, dot decimals") {
    GridSpec g{0.5, 1.0, 0.0, 1.0, 3, 3};
    FieldSample f = sample_field(g, 1, 4);
    const std::string path = "dialect_field.csv";
    write_field_csv(f, path);
    const std::string text = slurp(path);
    CHECK(text.rfind("t,x,j,value\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.find(';') == std::string::npos);
    std::remove(path.c_str());
    std::remove((path + ".meta").c_str());
}

TEST_CASE("kernel table values match the library at full precision") {
    const std::string csv = kernel_table_csv({0.0, 10.0});
    std::istringstream is(csv);
    std::string header, row0, row10;
    std::getline(is, header);
    CHECK(header == "x,H,F,h_tail");
    std::getline(is, row0);
    std::getline(is, row10);
    CHECK(row0 == "0," + format_double(profile_h(0.0)) + "," + format_double(profile_f(0.0)) +
                      "," + format_double(profile_h_tail(0.0)));
    // h_tail(10) below 1e-6 lands in the table
    const auto pos = row10.rfind(',');
    CHECK(std::stod(row10.substr(pos + 1)) <= 1e-6);
    // empty grid -> header-only table
    CHECK(kernel_table_csv({}) == "x,H,F,h_tail\n");
}

TEST_CASE("dims table rows") {
    const std::string csv = dims_table_csv();
    CHECK(csv.find("1,1,2.75,1.75,3.75,2.75\n") != std::string::npos);
    CHECK(csv.find("12,6,6,EMPTY,EMPTY,EMPTY\n") != std::string::npos);
    CHECK(csv.find("13,6,6,EMPTY,EMPTY,EMPTY\n") != std::string::npos);
    CHECK(csv.find("5,5,5.5,0.5,2.75,1.5\n") != std::string::npos);
}

TEST_CASE("cli: dims output, determinism, exit codes") {
    if (bin_path().empty()) {
        MESSAGE("STRINGLAB_BIN not set; skipping CLI end-to-end checks");
        return;
    }
    CHECK(run_cli("dims -o dims_run.csv") == 0);
    const std::string a = slurp("dims_run.csv");
    CHECK(run_cli("dims -o dims_run.csv") == 0);
    CHECK(a == slurp("dims_run.csv")); // same config twice -> byte-identical
    CHECK(a.find("# config_digest=") == 0);
    CHECK(a.find("d,range,graph,level,double_I,double_II\n") != std::string::npos);
    CHECK(a.find("6,6,6,EMPTY,2.5,1\n") != std::string::npos);
    std::remove("dims_run.csv");

    // config error -> exit 2
    CHECK(run_cli("estimate --set bogus 2>/dev/null") == 2);
    CHECK(run_cli("simulate --n-t 1 --n-x 4 2>/dev/null") == 2);
    // unknown flag -> CLI parse error -> exit 2
    CHECK(run_cli("dims --no-such-flag 2>/dev/null") == 2);
    // self-check passes
    CHECK(run_cli("--self-check dims -o self_dims.csv 2>/dev/null") == 0);
    std::remove("self_dims.csv");
}

TEST_CASE("cli: simulate then localtime round trip") {
    if (bin_path().empty()) return;
    CHECK(run_cli("simulate --t-min 0.5 --t-max 1 --x-min 0 --x-max 1 --n-t 8 --n-x 8 "
                  "--seed 3 -o cli_field.csv 2>/dev/null") == 0);
    CHECK(run_cli("localtime --field cli_field.csv --u 0.0 --n 500 -o cli_lt.csv") == 0);
    const std::string lt = slurp("cli_lt.csv");
    CHECK(lt.find("u,n,estimate\n") != std::string::npos);
    std::istringstream is(lt);
    std::string line, data;
    std::getline(is, line); // provenance
    CHECK(line.rfind("# config_digest=", 0) == 0);
    std::getline(is, line); // header
    std::getline(is, data);
    const double est = std::stod(data.substr(data.rfind(',') + 1));
    CHECK(est >= 0.0);
    std::remove("cli_field.csv");
    std::remove("cli_field.csv.meta");
    std::remove("cli_lt.csv");
}

TEST_CASE("cli: estimate report determinism") {
    if (bin_path().empty()) return;
    const std::string flags =
        "estimate --set range --d 1 --t-min 0.5 --t-max 1 --x-min 0 --x-max 1 "
        "--n-t 32 --n-x 32 --replicas 3 --max-draws 3 --k-min 2 --k-max 5 --seed 5 ";
    CHECK(run_cli(flags + "-o est_run.jsonl") == 0);
    const std::string a = slurp("est_run.jsonl");
    CHECK(run_cli(flags + "-o est_run.jsonl") == 0);
    CHECK(a == slurp("est_run.jsonl")); // same config twice -> byte-identical
    CHECK(a.find("\"aggregate\":true") != std::string::npos);
    CHECK(a.find("\"config_digest\"") != std::string::npos);
    CHECK(a.find("\"target\":1.0") != std::string::npos);
    std::remove("est_run.jsonl");

    // energy sweep emits one row per (gamma, resolution)
    CHECK(run_cli("energy --gamma 4 --resolution 32 64 -o en.csv") == 0);
    const std::string en = slurp("en.csv");
    CHECK(en.find("gamma,resolution,value\n") != std::string::npos);
    CHECK(en.find("4,32,") != std::string::npos);
    CHECK(en.find("4,64,") != std::string::npos);
    std::remove("en.csv");

    // banded double-time pipeline end to end (tolerance widened: the
    // pass flag is not the point of this smoke check)
    CHECK(run_cli("estimate --set double-ii --d 1 --replicas 2 --max-draws 2 "
                  "--k-min 2 --k-max 5 --seed 8 --tolerance 5 -o dbl.jsonl") == 0);
    const std::string dbl = slurp("dbl.jsonl");
    CHECK(dbl.find("\"set\":\"double-ii\"") != std::string::npos);
    CHECK(dbl.find("\"target\":2.75") != std::string::npos);
    std::remove("dbl.jsonl");

    // lnd-check subcommand carries the minimizing configuration
    CHECK(run_cli("lnd-check --lemma positions --samples 2000 --seed 4 -o lnd.csv") == 0);
    const std::string lnd = slurp("lnd.csv");
    CHECK(lnd.find("lemma,min_ratio,samples,t1,x1,t2,x2,s1,y1,s2,y2\n") != std::string::npos);
    CHECK(lnd.find("positions,") != std::string::npos);
    std::remove("lnd.csv");

    // missing field file is a numeric failure, not a config error
    CHECK(run_cli("localtime --field no_such_field.csv 2>/dev/null") == 3);
}
