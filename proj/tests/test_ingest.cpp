#include "helpers.hpp"
#include "logbench/ingest.hpp"
#include "logbench/profile.hpp"
#include "logbench/synthetic.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace logbench;

namespace {

TemplateCatalog hdfs_catalog() {
    return load_template_catalog(std::string(LOGBENCH_SOURCE_DIR) + "/data/templates/hdfs.templates");
}

DatasetProfile hdfs_profile() { return resolve_profile("hdfs", profile_directory()); }

std::vector<ParsedEvent> collect(std::istream& in, const LineParser& parser, IngestReport& report,
                                 ParseOptions options = {}) {
    std::vector<ParsedEvent> out;
    report = parse_stream(in, parser, [&](const ParsedEvent& e) { out.push_back(e); }, options);
    return out;
}

}  // namespace

TEST_CASE("HDFS receiving-block line") {
    const auto cat = hdfs_catalog();
    const auto prof = hdfs_profile();
    const auto out = parse_line(
        "081109 203518 143 INFO dfs.DataNode$DataXceiver: Receiving block blk_123 src: /A dest: /B", cat, prof, 1);
    const auto* ev = std::get_if<ParsedEvent>(&out);
    REQUIRE(ev);
    CHECK(ev->event_id == 5);
    CHECK(ev->seq_ids == std::vector<std::string>{"blk_123"});
    CHECK(ev->timestamp == doctest::Approx(1226262918.0));
    CHECK_FALSE(ev->label.is_labeled());
}

TEST_CASE("unmatched and invalid lines") {
    const auto cat = hdfs_catalog();
    const auto prof = hdfs_profile();
    CHECK(std::holds_alternative<Unmatched>(
        parse_line("081109 203518 143 INFO dfs.X: completely unrelated text", cat, prof)));
    CHECK(std::holds_alternative<InvalidLine>(parse_line("too short", cat, prof)));
    CHECK(std::holds_alternative<InvalidLine>(
        parse_line("08x109 203518 143 INFO dfs.X: Receiving block blk_1 src: /A dest: /B", cat, prof)));
}

TEST_CASE("parse_line is deterministic") {
    const auto cat = hdfs_catalog();
    const auto prof = hdfs_profile();
    const std::string line = "081109 203518 143 INFO dfs.FSNamesystem: BLOCK* ask 10.0.0.1:50010 to delete blk_1 blk_2";
    const auto a = parse_line(line, cat, prof, 9);
    const auto b = parse_line(line, cat, prof, 9);
    REQUIRE(std::holds_alternative<ParsedEvent>(a));
    CHECK(std::get<ParsedEvent>(a) == std::get<ParsedEvent>(b));
    CHECK(std::get<ParsedEvent>(a).seq_ids == std::vector<std::string>{"blk_1", "blk_2"});
}

TEST_CASE("three-line file with one dual-id line") {
    const LineParser parser(hdfs_catalog(), hdfs_profile());
    std::vector<ParsedEvent> events;
    const auto report = parse_file(testing::fixture("hdfs_three_lines.log"), parser,
                                   [&](const ParsedEvent& e) { events.push_back(e); });
    CHECK(report.total_lines == 3);
    CHECK(report.matched == 3);
    CHECK(report.parsed_events == 4);
    CHECK(report.parsed_events > report.total_lines);
    std::size_t ids = 0;
    for (const auto& e : events) ids += e.seq_ids.size();
    CHECK(ids == 4);
    CHECK(report.files == 1);
}

TEST_CASE("file of only unmatched lines") {
    const LineParser parser(hdfs_catalog(), hdfs_profile());
    std::istringstream in("081109 203518 143 INFO a: nothing\n081109 203519 143 INFO a: still nothing\n");
    IngestReport report;
    const auto events = collect(in, parser, report);
    CHECK(events.empty());
    CHECK(report.parsed_events == 0);
    CHECK(report.unmatched == 2);
    CHECK(report.total_lines == 2);
}

TEST_CASE("unmatched lines are dumped verbatim") {
    const LineParser parser(hdfs_catalog(), hdfs_profile());
    std::istringstream in("081109 203518 143 INFO a: nothing\n");
    std::ostringstream dump;
    ParseOptions opt;
    opt.unmatched_dump = &dump;
    IngestReport report;
    collect(in, parser, report, opt);
    CHECK(dump.str() == "081109 203518 143 INFO a: nothing\n");
}

TEST_CASE("mini HDFS: accounting and parallel equals serial") {
    const auto sample = synthetic::mini_hdfs();
    const LineParser parser(hdfs_catalog(), hdfs_profile());
    std::istringstream in1(sample.log), in2(sample.log);
    IngestReport serial, parallel;
    ParseOptions po;
    po.jobs = 4;
    po.chunk_lines = 7;
    const auto a = collect(in1, parser, serial);
    const auto b = collect(in2, parser, parallel, po);
    CHECK(a == b);
    CHECK(serial.matched + serial.unmatched + serial.invalid == serial.total_lines);
    CHECK(serial.unmatched == 1);
    CHECK(parallel.to_json() == serial.to_json());
    std::size_t ids = 0;
    for (const auto& e : a) ids += e.seq_ids.size();
    CHECK(ids == serial.parsed_events);
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i - 1].line_no < a[i].line_no);
}

TEST_CASE("report json roundtrip") {
    IngestReport r;
    r.total_lines = 10;
    r.matched = 7;
    r.unmatched = 2;
    r.invalid = 1;
    r.parsed_events = 8;
    r.errors.push_back({4, "unparseable timestamp"});
    const auto back = IngestReport::from_json(r.to_json());
    CHECK(back.to_json() == r.to_json());
    CHECK(back.errors.at(0).line_no == 4);
}

TEST_CASE("parsed-event writer and reader roundtrip") {
    std::vector<ParsedEvent> events(2);
    events[0].event_id = 5;
    events[0].timestamp = 1.5;
    events[0].seq_ids = {"blk_1", "blk_2"};
    events[0].label = Label::normal();
    events[0].line_no = 1;
    events[1].event_id = 7;
    events[1].seq_ids = {"blk_3"};
    events[1].label = Label::anomalous("crash");
    events[1].line_no = 3;
    std::ostringstream out;
    ParsedEventWriter w(out);
    for (const auto& e : events) w.write(e);
    const std::string text = out.str();
    CHECK(text.rfind("line_no\tevent_id\ttimestamp\tseq_id\tlabel\n", 0) == 0);
    std::istringstream in(text);
    const auto back = read_parsed_events(in);
    REQUIRE(back.size() == 2);
    CHECK(back[0].seq_ids == events[0].seq_ids);
    CHECK(back[0].timestamp == 1.5);
    CHECK(back[1].label == events[1].label);
    CHECK(std::isnan(back[1].timestamp));
}

TEST_CASE("event-marker labels and field ids") {
    const auto raw = synthetic::combined_raw_log();
    std::istringstream tin(raw.templates);
    const LineParser parser(parse_template_catalog(tin), resolve_profile("synthetic", profile_directory()));
    std::istringstream in(raw.log);
    IngestReport report;
    const auto events = collect(in, parser, report);
    CHECK(report.unmatched == 0);
    CHECK(report.invalid == 0);
    CHECK(report.anomalous_events > 0);
    CHECK(report.normal_events + report.anomalous_events == report.parsed_events);
    for (const auto& e : events) {
        CHECK(e.label.is_labeled());
        CHECK(e.seq_ids.size() == 1);
    }
}

TEST_CASE("directory labels and token traces") {
    DatasetProfile p = resolve_profile("adfa", profile_directory());
    CHECK(directory_label("Training_Data_Master/UTD-0001.txt", p).is_normal());
    const auto a = directory_label("Attack_Data_Master/Hydra_FTP_1/UAD-Hydra-FTP-1-1.txt", p);
    CHECK(a.is_anomalous());
    CHECK(a.tag == "Hydra_FTP_1");

    testing::TempDir dir("adfa");
    std::filesystem::create_directories(dir.path / "Training_Data_Master");
    std::filesystem::create_directories(dir.path / "Attack_Data_Master" / "Web_Shell_1");
    std::ofstream(dir.path / "Training_Data_Master" / "t1.txt") << "6 6 63 6 42 \n120 6\n";
    std::ofstream(dir.path / "Attack_Data_Master" / "Web_Shell_1" / "a1.txt") << "6 195 0\n";
    const LineParser parser(TemplateCatalog{}, p);
    std::vector<ParsedEvent> events;
    const auto report = parse_path(dir.path, parser, [&](const ParsedEvent& e) { events.push_back(e); });
    CHECK(report.files == 2);
    CHECK(report.parsed_events == 9);
    CHECK(report.invalid == 1);  // 0 is not a valid event id
    const auto seqs = group_by_file(events);
    REQUIRE(seqs.size() == 2);
    CHECK(seqs[0].label.is_anomalous());
    CHECK(seqs[0].events == std::vector<EventId>{6, 195});
    CHECK(seqs[1].label.is_normal());
    CHECK(seqs[1].events == std::vector<EventId>{6, 6, 63, 6, 42, 120, 6});
}

TEST_CASE("unreadable input yields an incomplete report") {
    const LineParser parser(hdfs_catalog(), hdfs_profile());
    const auto r = parse_file("/nonexistent/file.log", parser, [](const ParsedEvent&) {});
    CHECK_FALSE(r.complete);
    CHECK_FALSE(r.failure.empty());
}
