#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "pqm/csv.hpp"
#include "pqm/errors.hpp"

using namespace pqm;
using pqm::testing::Gen;

namespace {

void expect_parse_error(std::string_view text, std::size_t line, std::size_t column) {
    try {
        (void)parse_csv(text);
        FAIL("expected ParseError for: " << text);
    } catch (const ParseError& e) {
        CHECK(e.row() == line);
        CHECK(e.column() == column);
    }
}

std::string random_field(Gen& g) {
    static const std::string pool = "ab,\" \n\r1x";
    std::string s;
    const std::size_t len = g.index(0, 5);
    for (std::size_t k = 0; k < len; ++k) {
        s.push_back(pool[g.index(0, pool.size() - 1)]);
    }
    return s;
}

}  // namespace

TEST_CASE("plain table") {
    const auto t = parse_csv("a,b,label\nx,y,pos\nz,y,neg\n");
    CHECK(t.header == std::vector<std::string>{"a", "b", "label"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1] == std::vector<std::string>{"z", "y", "neg"});
}

TEST_CASE("quotes, escapes, CRLF, BOM and blank lines") {
    const auto t = parse_csv("\xEF\xBB\xBF" "a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\r\n\r\n\"multi\nline\",\r\n");
    CHECK(t.header == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == std::vector<std::string>{"x,1", "say \"hi\""});
    CHECK(t.rows[1] == std::vector<std::string>{"multi\nline", ""});
}

TEST_CASE("missing trailing newline and empty quoted fields") {
    const auto t = parse_csv("only\n\"\"\nv");
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0] == std::vector<std::string>{""});
    CHECK(t.rows[1] == std::vector<std::string>{"v"});
}

TEST_CASE("malformed input reports line and column") {
    expect_parse_error("a,b\n1,2,3\n", 2, 3);
    expect_parse_error("a,b\n1\n", 2, 2);
    expect_parse_error("a,b\n1,\"open\n", 2, 3);
    expect_parse_error("a,b\nx\"y,2\n", 2, 2);
    expect_parse_error("a,b\n\"x\"y,2\n", 2, 4);
    expect_parse_error("", 1, 1);
    expect_parse_error("\n\n", 1, 1);
}

TEST_CASE("property: serialize then parse is the identity") {
    Gen g(71);
    for (int it = 0; it < 300; ++it) {
        CsvTable t;
        const std::size_t cols = g.index(1, 4);
        for (std::size_t c = 0; c < cols; ++c) {
            t.header.push_back("h" + std::to_string(c));
        }
        const std::size_t rows = g.index(0, 5);
        for (std::size_t r = 0; r < rows; ++r) {
            std::vector<std::string> rec;
            for (std::size_t c = 0; c < cols; ++c) {
                rec.push_back(random_field(g));
            }
            t.rows.push_back(std::move(rec));
        }
        CHECK(parse_csv(serialize_csv(t)) == t);
    }
}

TEST_CASE("dataset conversion infers alphabets in first-appearance order") {
    const auto t = parse_csv("colour,class,size\nred,A,big\nblue,B,big\nred,B,small\n");
    const auto ds = dataset_from_csv(t, "class");
    CHECK(ds.feature_names() == std::vector<std::string>{"colour", "size"});
    CHECK(ds.alphabets()[0].size() == 2);
    CHECK(ds.alphabets()[1].symbol(1) == "small");
    CHECK(ds.labels() == std::vector<std::string>{"A", "B"});
    CHECK(ds.rows()[2].pattern.features == std::vector<std::size_t>{0, 1});

    const auto back = dataset_to_csv(ds, "class");
    CHECK(back.header == std::vector<std::string>{"colour", "size", "class"});
    CHECK(back.rows[1] == std::vector<std::string>{"blue", "big", "B"});
    CHECK(dataset_to_csv(dataset_from_csv(back, "class"), "class") == back);

    CHECK_THROWS_AS(dataset_from_csv(t, "missing"), ParseError);
    CHECK_THROWS_AS(dataset_from_csv(parse_csv("only\nx\n"), "only"), ParseError);
}

TEST_CASE("target fields with or without the label column") {
    const auto t = parse_csv("f1,f2,y\na,b,1\nb,a,0\n");
    const auto ds = dataset_from_csv(t, "y");
    CHECK(pattern_from_fields(ds, t.header, {"b", "b"}, "y").features == std::vector<std::size_t>{1, 0});
    CHECK(pattern_from_fields(ds, t.header, {"a", "a", "?"}, "y").features == std::vector<std::size_t>{0, 1});
    CHECK_THROWS_AS(pattern_from_fields(ds, t.header, {"c", "a"}, "y"), DomainError);
    CHECK_THROWS_AS(pattern_from_fields(ds, t.header, {"a"}, "y"), DomainError);
}

TEST_CASE("reading a file") {
    const auto path = std::filesystem::temp_directory_path() / "pqm_csv_test.csv";
    {
        std::ofstream f(path, std::ios::binary);
        f << "a,b\n1,2\n";
    }
    CHECK(read_csv(path).rows.size() == 1);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_csv(path), std::filesystem::filesystem_error);
}
