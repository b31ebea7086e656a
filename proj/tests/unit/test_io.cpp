// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>
#include <vector>

#include "prox/io/cache.hpp"
#include "prox/io/range.hpp"
#include "prox/io/table.hpp"

using namespace prox::io;

namespace {

std::filesystem::path scratch_dir(const std::string& tag)
{
    const auto d = std::filesystem::temp_directory_path() /
                   ("prox-test-" + tag + "-" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    std::filesystem::create_directories(d);
    return d;
}

Table awkward_table()
{
    Table t;
    t.meta = {{"tool", "prox"}, {"note", "unit"}};
    t.columns = {"label", "x", "n", "ok", "missing"};
    const std::vector<double> xs{0.1, 1.0 / 3.0, 1e-300, 4.9406564584124654e-324, -0.0,
                                 1.7976931348623157e308, std::nextafter(1.0, 2.0), 100.0};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        t.add_row({"a,b \"q\"\nline " + std::to_string(i), xs[i], static_cast<long long>(i) - 3, i % 3 == 0, nullptr});
    }
    return t;
}

} // namespace

TEST_CASE("range syntax", "[range]")
{
    CHECK(parse_range("2.5") == std::vector<double>{2.5});
    CHECK(parse_range("1,2,4") == std::vector<double>{1.0, 2.0, 4.0});
    const auto lin = parse_range("0:1:lin:5");
    REQUIRE(lin.size() == 5);
    CHECK(lin[2] == 0.5);
    const auto lg = parse_range("1.5:100:log:8");
    REQUIRE(lg.size() == 8);
    CHECK(lg.front() == 1.5);
    CHECK(lg.back() == 100.0);
    for (std::size_t i = 1; i < lg.size(); ++i) CHECK(std::abs(lg[i] / lg[i - 1] - std::pow(100.0 / 1.5, 1.0 / 7.0)) < 1e-12);
    CHECK(parse_range("3:3:lin:1") == std::vector<double>{3.0});
    CHECK_THROWS_AS(parse_range("0:1:log:4"), prox::PreconditionError);
    CHECK_THROWS_AS(parse_range("0:1:cubic:4"), prox::PreconditionError);
    CHECK_THROWS_AS(parse_range("0:1:lin:2.5"), prox::PreconditionError);
    CHECK_THROWS_AS(parse_range("0:1:lin"), prox::PreconditionError);
    CHECK_THROWS_AS(parse_range("abc"), prox::PreconditionError);
    CHECK_THROWS_AS(parse_range("1e999"), prox::PreconditionError);
    CHECK_THROWS_AS(parse_range(""), prox::PreconditionError);
}

TEST_CASE("CSV quoting follows RFC 4180", "[csv]")
{
    Table t;
    t.columns = {"s", "v"};
    t.add_row({"he said \"hi\", twice", 1.5});
    const auto text = csv_data(t);
    CHECK(text == "\"s\",\"v\"\r\n\"he said \"\"hi\"\", twice\",1.5\r\n");
    const auto back = from_csv(text);
    CHECK(back.rows[0][0] == "he said \"hi\", twice");
}

TEST_CASE("CSV and JSON round trips are lossless", "[csv][json]")
{
    const auto t = awkward_table();
    const auto via_csv = from_csv(to_csv(t));
    CHECK(via_csv.meta == t.meta);
    CHECK(same_data(t, via_csv));
    const auto via_json = from_json(to_json(via_csv));
    CHECK(same_data(t, via_json));
    CHECK(to_csv(via_json) == to_csv(t));
    CHECK(std::signbit(via_json.rows[4][1].get<double>()));
    CHECK(via_json.rows[3][1].get<double>() == 4.9406564584124654e-324);
}

TEST_CASE("floats are written with 17 significant digits", "[csv]")
{
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("JSON keeps insertion order", "[json]")
{
    Table t;
    t.meta = {{"zeta", 1}, {"alpha", 2}};
    t.columns = {"z", "a"};
    t.add_row({1.0, 2.0});
    const auto s = to_json(t);
    CHECK(s.find("\"zeta\"") < s.find("\"alpha\""));
    CHECK(s.find("\"z\": 1.0") < s.find("\"a\": 2.0"));
}

TEST_CASE("malformed tables are rejected", "[csv]")
{
    Table t;
    t.columns = {"x"};
    CHECK_THROWS_AS(t.add_row({1.0, 2.0}), prox::PreconditionError);
    CHECK_THROWS_AS(t.add_row({std::numeric_limits<double>::quiet_NaN()}), prox::PreconditionError);
    CHECK_THROWS_AS(from_csv("\"x\",\"y\"\r\n1\r\n"), prox::PreconditionError);
    CHECK_THROWS_AS(from_csv("\"x\"\r\n\"open\r\n"), prox::PreconditionError);
    CHECK_THROWS_AS(from_csv("\"x\"\r\nabc\r\n"), prox::PreconditionError);
    CHECK_THROWS_AS(from_csv(""), prox::PreconditionError);
}

TEST_CASE("plain x,y CSV without header block", "[csv]")
{
    const auto t = from_csv("x,y\n1,2\n3.5,-4\n");
    CHECK(t.columns == std::vector<std::string>{"x", "y"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1][1].get<double>() == -4.0);
}

TEST_CASE("cache put then get returns identical bytes", "[cache]")
{
    const auto dir = scratch_dir("cache");
    std::ostringstream warn;
    const Cache c(dir, &warn);
    const auto k = Cache::key("alpha", {{"a", 1.0}, {"m", 4.0}}, {{"tol", 1e-10}});
    CHECK(k.size() == 64);
    CHECK_FALSE(c.get(k).has_value());
    const std::string value = "{\"alpha\":0.87769572288400004,\"s\":\"\\u00e9\"}";
    c.put(k, value);
    const auto e = c.get(k);
    REQUIRE(e.has_value());
    CHECK(e->value == value);
    CHECK(e->key == k);
    CHECK_FALSE(e->created.empty());
    CHECK(warn.str().empty());
    std::filesystem::remove_all(dir);
}

TEST_CASE("cache keys depend on every input", "[cache]")
{
    const nlohmann::json p = {{"a", 1.0}, {"m", 4.0}};
    const auto k = Cache::key("alpha", p, {{"tol", 1e-10}});
    CHECK(k == Cache::key("alpha", {{"m", 4.0}, {"a", 1.0}}, {{"tol", 1e-10}}));
    CHECK(k != Cache::key("alpha", p, {{"tol", 1e-9}}));
    CHECK(k != Cache::key("hc3", p, {{"tol", 1e-10}}));
    CHECK(k != Cache::key("alpha", {{"a", 1.0}, {"m", 4.000000000000001}}, {{"tol", 1e-10}}));
    CHECK(k != Cache::key("alpha", p, {{"tol", 1e-10}}, prox::solver_revision + 1));
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("a corrupt cache entry is a miss with a warning", "[cache]")
{
    const auto dir = scratch_dir("corrupt");
    std::ostringstream warn;
    const Cache c(dir, &warn);
    const auto k = Cache::key("theta", {{"gamma", 0.0}}, {});
    c.put(k, "payload");
    {
        std::ofstream f(c.path_of(k), std::ios::trunc);
        f << "{\"key\":\"" << k << "\",\"value\":\"tampered\",\"created\":\"x\",\"digest\":\"00\"}";
    }
    CHECK_FALSE(c.get(k).has_value());
    CHECK(warn.str().find("corrupt") != std::string::npos);
    {
        std::ofstream f(c.path_of(k), std::ios::trunc);
        f << "not json";
    }
    CHECK_FALSE(c.get(k).has_value());
    c.put(k, "payload");
    CHECK(c.get(k)->value == "payload");
    std::filesystem::remove_all(dir);
}

TEST_CASE("concurrent writers and readers see whole entries", "[cache]")
{
    const auto dir = scratch_dir("concurrent");
    std::ostringstream warn;
    const Cache c(dir, &warn);
    const auto k = Cache::key("mu1", {{"xi", 0.5}}, {});
    const std::string big(200000, 'v');
    std::vector<std::thread> pool;
    std::atomic<int> bad{0};
    for (int w = 0; w < 4; ++w) {
        pool.emplace_back([&] {
            for (int i = 0; i < 20; ++i) {
                c.put(k, big);
                const auto e = c.get(k);
                if (!e || e->value != big) ++bad;
            }
        });
    }
    for (auto& t : pool) t.join();
    CHECK(bad.load() == 0);
    CHECK(warn.str().empty());
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        (void)entry;
        ++files;
    }
    CHECK(files == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("the environment variable selects the cache directory", "[cache]")
{
    const auto dir = scratch_dir("env");
    const auto other = dir / "configured";
    ::setenv(Cache::env_var, dir.c_str(), 1);
    auto c = Cache::open(other);
    REQUIRE(c.has_value());
    CHECK(c->dir() == dir);
    ::unsetenv(Cache::env_var);
    c = Cache::open(other);
    REQUIRE(c.has_value());
    CHECK(c->dir() == other);
    CHECK_FALSE(Cache::open(std::nullopt).has_value());
    std::filesystem::remove_all(dir);
}
