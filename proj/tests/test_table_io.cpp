#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <string>
#include <unistd.h>

#include "krank/errors.hpp"
#include "krank/table_io.hpp"

namespace fs = std::filesystem;
using namespace krank;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("krank_io_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("round trip") {
    const auto t = PartitionTable::build(1500);
    const auto path = scratch("rt.ptab");
    save_table(t, path);
    const auto back = load_table(path);
    CHECK(back == t);
    const auto again = scratch("rt2.ptab");
    save_table(back, again);
    CHECK(slurp(path) == slurp(again));
}

TEST_CASE("header layout") {
    const auto path = scratch("hdr.ptab");
    save_table(PartitionTable::build(5), path);
    const std::string bytes = slurp(path);
    const std::string expected_head{'P', 'T', 'A', 'B', 1, 0, 0, 0, 5, 0, 0, 0, 0, 0, 0, 0};
    REQUIRE(bytes.size() > expected_head.size());
    CHECK(bytes.substr(0, 16) == expected_head);
    // p(0) = 1: length 1, then byte 0x01
    CHECK(bytes.substr(16, 5) == std::string{1, 0, 0, 0, 1});
    // p(5) = 7 is the last record
    CHECK(bytes.substr(bytes.size() - 5) == std::string{1, 0, 0, 0, 7});
}

TEST_CASE("corrupt files") {
    const auto path = scratch("bad.ptab");
    save_table(PartitionTable::build(300), path);
    const std::string good = slurp(path);

    spit(path, "XTAB" + good.substr(4));
    CHECK_THROWS_AS(load_table(path), CorruptFileError);

    std::string v = good;
    v[4] = 9;
    spit(path, v);
    CHECK_THROWS_AS(load_table(path), CorruptFileError);

    spit(path, good.substr(0, good.size() - 3));
    CHECK_THROWS_AS(load_table(path), CorruptFileError);

    spit(path, good + "x");
    CHECK_THROWS_AS(load_table(path), CorruptFileError);

    spit(path, good.substr(0, 10));
    CHECK_THROWS_AS(load_table(path), CorruptFileError);

    CHECK_THROWS(load_table(scratch("missing.ptab")));
}

TEST_CASE("spot-check indices") {
    const auto idx = spot_check_indices(5000);
    CHECK(idx == spot_check_indices(5000));
    CHECK(idx.size() == static_cast<std::size_t>(kSpotCheckCount));
    for (auto i : idx) {
        CHECK(i >= 1);
        CHECK(i <= 5000);
    }
}

TEST_CASE("tampered value is caught by the recurrence") {
    const std::int64_t max_n = 5000;
    const auto t = PartitionTable::build(max_n);
    const auto target = spot_check_indices(max_n).front();
    std::vector<mpz_class> vals(t.values().begin(), t.values().end());
    vals[static_cast<std::size_t>(target)] += 1;
    const auto path = scratch("tamper.ptab");
    save_table(PartitionTable::from_values(vals), path);
    CHECK_THROWS_AS(load_table(path), RecurrenceMismatchError);
}

TEST_CASE("load_or_build") {
    const auto path = scratch("lob.ptab");
    fs::remove(path);
    const auto built = load_or_build_table(800, path);
    CHECK(fs::exists(path));
    CHECK(built == PartitionTable::build(800));
    const auto loaded = load_or_build_table(600, path);
    CHECK(loaded.max_n() >= 600);
    CHECK(loaded.at(600) == built.at(600));
    const auto grown = load_or_build_table(900, path);
    CHECK(grown.max_n() == 900);
    CHECK(load_or_build_table(50, "").max_n() == 50);
}
