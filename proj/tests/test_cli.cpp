#include "cli.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "logbench");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = logbench::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string fx(const std::string& name) { return testing::fixture(name).string(); }

}  // namespace

TEST_CASE("profiles list") {
    const auto r = run({"profiles", "list"});
    CHECK(r.code == 0);
    for (const char* p : {"hdfs", "bgl", "thunderbird", "hadoop", "adfa"}) CHECK(r.out.find(p) != std::string::npos);
    CHECK(run({"profiles", "show", "hdfs"}).out.find("blk_") != std::string::npos);
    CHECK(run({"profiles", "show", "nope"}).code != 0);
}

TEST_CASE("help lists every flag") {
    const auto r = run({"--help-all"});
    CHECK(r.code == 0);
    for (const char* flag : {"--profile", "--templates", "--input", "--out", "--unmatched", "--mode", "--window",
                             "--step", "--labels", "--out-dir", "--top", "--by-pair", "--entropy-n", "--lz",
                             "--count-trailing", "--detectors", "--train-frac", "--runs", "--seed",
                             "--granularity", "--ecvc-norm", "--ngram-norm", "--ngram-pad", "--jobs",
                             "--detector", "--scores", "--threshold", "--unlisted-normal"}) {
        INFO(flag);
        CHECK(r.out.find(flag) != std::string::npos);
    }
    CHECK(run({"eval", "--help"}).out.find("--train-frac") != std::string::npos);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code != 0);
    CHECK(run({"frobnicate"}).code != 0);
    CHECK(run({"eval", "--input", fx("combined.seq.tsv")}).code != 0);  // missing --out-dir
}

TEST_CASE("eval writes a summary row per detector") {
    testing::TempDir dir("cli_eval");
    const auto r = run({"eval", "--input", fx("combined.seq.tsv"), "--detectors",
                        "event,length,ecvc,event+length+ecvc,edit,ngram2,timing", "--train-frac", "0.2", "--runs",
                        "3", "--seed", "42", "--jobs", "2", "--out-dir", dir.path.string()});
    INFO(r.err);
    REQUIRE(r.code == 0);
    const auto summary = lines(slurp(dir.path / "summary.csv"));
    REQUIRE(summary.size() == 8);
    CHECK(summary[0] == "detector,avg_f1,max_f1,std_f1");
    CHECK(summary[4].rfind("event+length+ecvc,", 0) == 0);
    for (const char* f : {"results.csv", "runs.csv", "sweep.csv", "manifest.json"}) CHECK(fs::exists(dir.path / f));
    const auto m = nlohmann::json::parse(slurp(dir.path / "manifest.json"));
    CHECK(m.contains("config_hash"));
    CHECK(m["inputs"].size() == 1);
    CHECK(m["sample_sizes"].size() >= 1);
    for (const auto& e : fs::directory_iterator(dir.path))
        CHECK(e.path().filename().string().find(".tmp.") == std::string::npos);
}

TEST_CASE("invalid train fraction is refused") {
    testing::TempDir dir("cli_bad");
    const auto r = run({"eval", "--input", fx("combined.seq.tsv"), "--detectors", "event", "--train-frac", "1.5",
                        "--out-dir", dir.path.string()});
    CHECK(r.code != 0);
    CHECK_FALSE(r.err.empty());
    CHECK_FALSE(fs::exists(dir.path / "results.csv"));
    CHECK(run({"eval", "--input", fx("combined.seq.tsv"), "--detectors", "ecvc+edit", "--out-dir",
               dir.path.string()})
              .code != 0);
    CHECK(run({"eval", "--input", "/no/such/file.tsv", "--detectors", "event", "--out-dir", dir.path.string()})
              .code != 0);
}

TEST_CASE("parse, group, stats and complexity pipeline") {
    testing::TempDir dir("cli_pipe");
    const auto events = (dir.path / "events.tsv").string();
    const auto seqs = (dir.path / "seqs.tsv").string();
    auto r = run({"parse", "--profile", "hdfs", "--templates",
                  std::string(LOGBENCH_SOURCE_DIR) + "/data/templates/hdfs.templates", "--input", fx("hdfs_mini.log"),
                  "--out", events, "--unmatched", (dir.path / "unmatched.log").string()});
    INFO(r.err);
    REQUIRE(r.code == 0);
    CHECK(fs::exists(events + ".report.json"));
    CHECK(fs::exists(events + ".manifest.json"));
    CHECK(lines(slurp(dir.path / "unmatched.log")).size() == 1);

    r = run({"group", "--input", events, "--out", seqs, "--mode", "id", "--labels", fx("hdfs_mini_labels.csv")});
    REQUIRE(r.code == 0);
    const auto stored = lines(slurp(seqs));
    CHECK(stored.size() == 25);  // header + 24 blocks

    r = run({"stats", "--input", seqs, "--report", events + ".report.json", "--out-dir",
             (dir.path / "stats").string()});
    REQUIRE(r.code == 0);
    for (const char* f : {"summary.csv", "summary.json", "event_frequency.csv", "lengths.csv", "top_sequences.csv",
                          "interarrival.csv", "manifest.json"})
        CHECK(fs::exists(dir.path / "stats" / f));
    const auto sum = nlohmann::json::parse(slurp(dir.path / "stats" / "summary.json"));
    CHECK(sum.dump().find("24") != std::string::npos);

    const auto ent = (dir.path / "entropy.csv").string();
    r = run({"complexity", "--input", seqs, "--entropy-n", "1..3", "--lz", "--out", ent});
    REQUIRE(r.code == 0);
    CHECK(lines(slurp(ent)).size() == 1 + 3 * 3);
    CHECK(fs::exists(dir.path / "entropy.lz.csv"));
    CHECK(lines(slurp(dir.path / "entropy.lz.csv")).size() == 25);

    r = run({"group", "--input", events, "--out", (dir.path / "win.tsv").string(), "--mode", "window", "--window",
             "5", "--step", "2"});
    CHECK(r.code == 0);
    CHECK(run({"group", "--input", events, "--out", (dir.path / "w0.tsv").string(), "--mode", "window",
               "--window", "0"})
              .code != 0);
}

TEST_CASE("raw synthetic log through the whole pipeline") {
    testing::TempDir dir("cli_syn");
    const auto events = (dir.path / "events.tsv").string();
    const auto seqs = (dir.path / "seqs.tsv").string();
    REQUIRE(run({"parse", "--profile", "synthetic", "--templates", fx("combined.templates"), "--input",
                 fx("combined.log"), "--out", events})
                .code == 0);
    REQUIRE(run({"group", "--input", events, "--out", seqs}).code == 0);
    // Grouping the raw log reproduces the committed sequence store.
    CHECK(slurp(seqs) == slurp(fx("combined.seq.tsv")));
    const auto out = (dir.path / "ev").string();
    const auto r = run({"eval", "--input", seqs, "--detectors", "event", "--granularity", "event", "--runs", "2",
                        "--train-frac", "0.2", "--out-dir", out});
    INFO(r.err);
    CHECK(r.code == 0);
}

TEST_CASE("sweep writes curves and scores") {
    testing::TempDir dir("cli_sweep");
    const auto curve = (dir.path / "sweep.csv").string();
    const auto scores = (dir.path / "scores.csv").string();
    const auto r = run({"sweep", "--input", fx("count_shift.seq.tsv"), "--detector", "ecvc", "--train-frac", "0.2",
                        "--out", curve, "--scores", scores});
    INFO(r.err);
    REQUIRE(r.code == 0);
    CHECK(lines(slurp(curve)).size() == 102);
    CHECK(lines(slurp(scores)).front() == "seq_id,detector,score,flag,label");
    CHECK(fs::exists(curve + ".manifest.json"));
}
