#include <doctest.h>

#include "fixtures.hpp"
#include "fpmatch/errors.hpp"
#include "fpmatch/template_io.hpp"

#include <random>

using namespace fpmatch;

TEST_CASE("header-only template")
{
    const auto t = parse_template("MNT 1\n300 400\n0\n");
    CHECK(t.empty());
    CHECK(t.width == 300);
    CHECK(t.height == 400);
}

TEST_CASE("record fields map directly")
{
    const auto t = parse_template("MNT 1\n300 300\n1\n100 150 45.0 E 0.9\n", "probe");
    REQUIRE(t.size() == 1);
    const Minutia& m = t.minutiae[0];
    CHECK(m.x == 100.0);
    CHECK(m.y == 150.0);
    CHECK(m.direction == 45.0);
    CHECK(m.type == MinutiaType::Ending);
    CHECK(m.quality == 0.9);
    CHECK(t.id == "probe");
}

TEST_CASE("comments and blank lines are skipped")
{
    const auto t = parse_template("# scanner A\nMNT 1\n\n300 300\n# two records\n2\n1 2 3 B 1\n# mid\n4 5 6 E 0\n");
    REQUIRE(t.size() == 2);
    CHECK(t.minutiae[0].type == MinutiaType::Bifurcation);
    CHECK(t.minutiae[1].quality == 0.0);
}

TEST_CASE("range violations")
{
    CHECK_THROWS_AS(parse_template("MNT 1\n300 300\n1\n10 10 360.0 E 0.5\n"), RangeError);
    CHECK_THROWS_AS(parse_template("MNT 1\n300 300\n1\n10 10 -1 E 0.5\n"), RangeError);
    CHECK_THROWS_AS(parse_template("MNT 1\n300 300\n1\n10 10 10 E 1.01\n"), RangeError);
    CHECK_THROWS_AS(parse_template("MNT 1\n300 300\n1\n301 10 10 E 1\n"), RangeError);
    CHECK_THROWS_AS(parse_template("MNT 1\n300 300\n1\n10 -0.5 10 E 1\n"), RangeError);
    CHECK_NOTHROW(parse_template("MNT 1\n300 300\n1\n300 0 359.999 E 1\n"));
}

TEST_CASE("format violations")
{
    CHECK_THROWS_AS(parse_template(""), FormatError);
    CHECK_THROWS_AS(parse_template("MNT 2\n300 300\n0\n"), FormatError);
    CHECK_THROWS_AS(parse_template("XYZ 1\n300 300\n0\n"), FormatError);
    CHECK_THROWS_AS(parse_template("MNT 1\n300\n0\n"), FormatError);
    CHECK_THROWS_AS(parse_template("MNT 1\n0 300\n0\n"), FormatError);
    CHECK_THROWS_AS(parse_template("MNT 1\n300 300\n-1\n"), FormatError);
    CHECK_THROWS_AS(parse_template("MNT 1\n300 300\n2\n1 1 1 E 1\n"), FormatError);
    CHECK_THROWS_AS(parse_template("MNT 1\n300 300\n1\n1 1 1 E 1\n2 2 2 E 1\n"), FormatError);
    CHECK_THROWS_AS(parse_template("MNT 1\n300 300\n1\n1 1 1 X 1\n"), FormatError);
    CHECK_THROWS_AS(parse_template("MNT 1\n300 300\n1\n1 1 1 E\n"), FormatError);
    CHECK_THROWS_AS(parse_template("MNT 1\n300 300\n1\n1 1 1 E 1 7\n"), FormatError);
    CHECK_THROWS_AS(parse_template("MNT 1\n300 300\n1\n1,5 1 1 E 1\n"), FormatError);
    CHECK_THROWS_AS(parse_template("MNT 1\n300 300\n1\nnan 1 1 E 1\n"), FormatError);
    CHECK_THROWS_AS(parse_template("MNT 1\n300 300\n1\ninf 1 1 E 1\n"), FormatError);
}

TEST_CASE("write examples")
{
    MinutiaTemplate t;
    t.width = 320;
    t.height = 240;
    CHECK(write_template(t) == "MNT 1\n320 240\n0\n");
    t.minutiae.push_back({1.5, 2, 3, MinutiaType::Bifurcation, 0.25});
    const std::string text = write_template(t);
    CHECK(text == "MNT 1\n320 240\n1\n1.500000 2.000000 3.000000 B 0.250000\n");
}

TEST_CASE("round trip on random templates")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto t = testing::random_template(rng, 50);
        const auto back = parse_template(write_template(t));
        REQUIRE(back.size() == t.size());
        CHECK(back.width == t.width);
        CHECK(back.height == t.height);
        for (std::size_t i = 0; i < t.size(); ++i) {
            CHECK(std::abs(back.minutiae[i].x - t.minutiae[i].x) <= 1e-6);
            CHECK(std::abs(back.minutiae[i].y - t.minutiae[i].y) <= 1e-6);
            // 359.9999996 would round to 360.000000; wrap-aware comparison.
            CHECK(angle_diff(back.minutiae[i].direction, t.minutiae[i].direction) <= 1e-6);
            CHECK(back.minutiae[i].type == t.minutiae[i].type);
            CHECK(std::abs(back.minutiae[i].quality - t.minutiae[i].quality) <= 1e-6);
        }
    }
}

TEST_CASE("file helpers")
{
    testing::TempDir dir("io");
    std::mt19937_64 rng(19);
    auto t = testing::random_template(rng, 5);
    save_template(dir.path() / "7_3.mnt", t);
    const auto back = load_template(dir.path() / "7_3.mnt");
    CHECK(back.id == "7_3");
    CHECK(back.size() == 5);
    CHECK_THROWS_AS(load_template(dir.path() / "missing.mnt"), IoError);

    write_text_file(dir.path() / "bad.mnt", "MNT 1\n10 10\n1\n20 20 0 E 1\n");
    CHECK_THROWS_AS(load_template(dir.path() / "bad.mnt"), RangeError);
}

TEST_CASE("scan_dataset")
{
    testing::TempDir dir("scan");
    const std::string body = "MNT 1\n10 10\n0\n";
    CHECK(scan_dataset(dir.path()).entries.empty());

    for (int s = 1; s <= 100; ++s)
        for (int i = 1; i <= 8; ++i)
            write_text_file(dir.path() / (std::to_string(s) + "_" + std::to_string(i) + ".mnt"), body);
    write_text_file(dir.path() / "notes.txt", "x");
    write_text_file(dir.path() / "1_1.mnt.bak", "x");
    const auto m = scan_dataset(dir.path());
    REQUIRE(m.entries.size() == 800);
    CHECK(m.entries.front().subject == 1);
    CHECK(m.entries.front().impression == 1);
    CHECK(m.entries[1].impression == 2);
    CHECK(m.entries.back().subject == 100);
    CHECK(m.entries.back().impression == 8);

    write_text_file(dir.path() / "01_1.mnt", body);
    CHECK_THROWS_AS(scan_dataset(dir.path()), DuplicateEntry);

    CHECK_THROWS_AS(scan_dataset(dir.path() / "nope"), IoError);
}

TEST_CASE("directions just below 360 write as 0")
{
    MinutiaTemplate t;
    t.width = t.height = 10;
    t.minutiae.push_back({1, 1, 359.9999999, MinutiaType::Ending, 1});
    const auto back = parse_template(write_template(t));
    CHECK(back.minutiae[0].direction == 0.0);
}
