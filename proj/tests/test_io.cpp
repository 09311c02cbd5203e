#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "airykit/io.hpp"

using namespace airykit;

TEST_CASE("17-digit formatting round-trips")
{
    const double v = 0.12345678901234567;
    CHECK(std::stod(format_g17(v)) == v);
    CHECK(format_g17(1.0) == "1");
}

TEST_CASE("CSV assembly is deterministic with LF endings and comments")
{
    const std::vector<std::string> comments{"order=96", "seed=1"};
    const std::vector<std::string> header{"a", "b"};
    const std::vector<std::vector<double>> rows{{1.0, 2.5}, {-0.25, 3.0}};
    const std::string one = make_csv(comments, header, rows);
    const std::string two = make_csv(comments, header, rows);
    CHECK(one == two);
    CHECK(one.find("# order=96\n") != std::string::npos);
    CHECK(one.find("a,b\n") != std::string::npos);
    CHECK(one.find('\r') == std::string::npos);
}

TEST_CASE("json table mirrors the csv content")
{
    const std::string j = make_table("json", {"order=96"}, {"a"}, {{2.0}});
    CHECK(j.find("\"columns\"") != std::string::npos);
    CHECK(j.find("2.0") != std::string::npos);
    CHECK_THROWS(make_table("xml", {}, {}, {}));
}

TEST_CASE("atomic writes land complete files")
{
    const std::string path = "airykit_io_test.tmp.csv";
    write_file_atomic(path, "x\n1\n");
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "x\n1\n");
    std::remove(path.c_str());
}
