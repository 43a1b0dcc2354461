#include "helpers.hpp"
#include "logbench/io.hpp"
#include "logbench/synthetic.hpp"

#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

using namespace logbench;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("sha256") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    testing::TempDir dir("sha");
    std::ofstream(dir.path / "f") << "abc";
    CHECK(sha256_path(dir.path / "f") == sha256_hex("abc"));
    const auto d1 = sha256_path(dir.path);
    std::ofstream(dir.path / "g") << "x";
    CHECK(sha256_path(dir.path) != d1);
    CHECK_THROWS_AS(sha256_path(dir.path / "missing"), IoError);
}

TEST_CASE("atomic file") {
    testing::TempDir dir("atomic");
    const auto target = dir.path / "out.csv";
    {
        AtomicFile f(target);
        f.stream() << "partial";
        CHECK_FALSE(fs::exists(target));
    }
    CHECK_FALSE(fs::exists(target));
    CHECK(fs::is_empty(dir.path));  // temp file removed

    std::ofstream(target) << "old";
    {
        AtomicFile f(target);
        f.stream() << "partial";
    }
    CHECK(slurp(target) == "old");

    write_file_atomic(target, "new\n");
    CHECK(slurp(target) == "new\n");
    write_file_atomic(dir.path / "nested" / "out.txt", "x");  // parents are created
    CHECK(slurp(dir.path / "nested" / "out.txt") == "x");
    CHECK_THROWS(write_file_atomic(target / "under_a_file.txt", "x"));
}

TEST_CASE("manifest") {
    RunManifest m;
    m.tool_version = "t";
    m.command_line = {"logbench", "eval"};
    m.config = {{"runs", "25"}, {"seed", "42"}};
    m.inputs = {{"a.tsv", "00"}};
    m.sample_sizes = {{"run0.train", 5582}};
    m.timings_s = {{"total", 1.5}};
    m.warnings = {"w"};
    const auto j = nlohmann::json::parse(m.to_json());
    CHECK(j["config_hash"] == m.config_hash());
    CHECK(j["sample_sizes"]["run0.train"] == 5582);
    CHECK(j["command_line"].size() == 2);
    RunManifest other = m;
    other.config[1].second = "43";
    CHECK(other.config_hash() != m.config_hash());
    other.timings_s = {{"total", 9.0}};
    other.config = m.config;
    CHECK(other.config_hash() == m.config_hash());
}

TEST_CASE("committed fixtures match the generators") {
    testing::TempDir dir("fixtures");
    const auto names = synthetic::write_fixtures(dir.path);
    std::vector<std::string> committed;
    for (const auto& e : fs::directory_iterator(testing::fixture("")))
        committed.push_back(e.path().filename().string());
    std::sort(committed.begin(), committed.end());
    CHECK(names == committed);
    for (const auto& n : names) {
        INFO(n);
        CHECK(slurp(dir.path / n) == slurp(testing::fixture(n)));
    }
}
