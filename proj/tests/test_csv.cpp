#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "simkern/csv.hpp"
#include "simkern/rng.hpp"

using namespace simkern;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempDir {
    std::filesystem::path dir;
    TempDir() {
        dir = std::filesystem::temp_directory_path() /
              ("simkern_csv_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir);
    }
    ~TempDir() { std::filesystem::remove_all(dir); }
    std::string path(const std::string& f) const { return (dir / f).string(); }
};

}  // namespace

TEST_CASE("matrix round trips byte-identically") {
    TempDir tmp;
    Rng rng(8);
    Matrix m(7, 7);
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j) m(i, j) = rng.uniform(0.0, 1.0);
    std::string p1 = tmp.path("a.csv"), p2 = tmp.path("b.csv");
    write_matrix_csv(p1, m);
    Matrix back = read_matrix_csv(p1);
    REQUIRE(back.rows() == 7);
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j) CHECK(back(i, j) == m(i, j));
    write_matrix_csv(p2, back);
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("matrix reader rejects missing and ragged input") {
    TempDir tmp;
    CHECK_THROWS_AS(read_matrix_csv(tmp.path("nope.csv")), KernelNotFound);
    {
        std::ofstream out(tmp.path("ragged.csv"));
        out << "1,2,3\n1,2\n";
    }
    CHECK_THROWS_AS(read_matrix_csv(tmp.path("ragged.csv")), ConfigError);
    {
        std::ofstream out(tmp.path("junk.csv"));
        out << "1,abc\n";
    }
    CHECK_THROWS_AS(read_matrix_csv(tmp.path("junk.csv")), ConfigError);
}

TEST_CASE("tables round trip with their header") {
    TempDir tmp;
    std::vector<std::string> header{"name", "value"};
    std::vector<std::vector<std::string>> rows{{"a", "1"}, {"b", "2.5"}};
    write_table_csv(tmp.path("t.csv"), header, rows);
    CsvTable table = read_table_csv(tmp.path("t.csv"));
    CHECK(table.header == header);
    CHECK(table.rows == rows);
    CHECK(table.column("value") == 1);
    CHECK_THROWS_AS(table.column("missing"), ConfigError);
}

TEST_CASE("result records round trip including non-finite metrics") {
    TempDir tmp;
    std::vector<ResultRecord> records;
    ResultRecord a;
    a.repetition = 3;
    a.subsample = 0.25;
    a.algorithm = "simkern_svm";
    a.hyperparams = "C=0.5";
    a.val_metric = 0.875;
    a.test_metric = 0.75;
    ResultRecord b;
    b.repetition = 0;
    b.subsample = 1.0;
    b.algorithm = "rf";
    b.hyperparams = "none";
    b.val_metric = -std::numeric_limits<double>::infinity();
    b.test_metric = std::numeric_limits<double>::quiet_NaN();
    records = {a, b};
    write_results_csv(tmp.path("r.csv"), records);
    auto back = read_results_csv(tmp.path("r.csv"));
    REQUIRE(back.size() == 2);
    CHECK(back[0].repetition == 3);
    CHECK(back[0].subsample == 0.25);
    CHECK(back[0].algorithm == "simkern_svm");
    CHECK(back[0].hyperparams == "C=0.5");
    CHECK(back[0].val_metric == 0.875);
    CHECK(back[0].test_metric == 0.75);
    CHECK(back[1].val_metric == -std::numeric_limits<double>::infinity());
    CHECK(std::isnan(back[1].test_metric));
}

TEST_CASE("17-digit formatting preserves doubles exactly") {
    Rng rng(4);
    for (int i = 0; i < 1000; ++i) {
        double v = rng.uniform(-1.0, 1.0) * std::pow(10.0, static_cast<double>(rng.uniform_int(-12, 12)));
        CHECK(parse_double_field(format_double_17(v)) == v);
    }
}

TEST_CASE("csv line splitting keeps empty fields") {
    CHECK(split_csv_line("a,b,c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(split_csv_line("a,,c") == std::vector<std::string>{"a", "", "c"});
    CHECK(split_csv_line("") == std::vector<std::string>{""});
}
