#include "logbench/catalog.hpp"

#include <doctest.h>

#include <sstream>

using namespace logbench;

namespace {

TemplateCatalog parse(const std::string& text) {
    std::istringstream in(text);
    return parse_template_catalog(in);
}

}  // namespace

TEST_CASE("pattern with three wildcards") {
    const auto cat = parse("5  Receiving block <*> src: <*> dest: <*>\n");
    REQUIRE(cat.size() == 1);
    const auto* t = cat.find(5);
    REQUIRE(t);
    CHECK(t->wildcard_count() == 3);
    CHECK(t->literal_length() == std::string("Receiving block ").size() + std::string(" src: ").size() +
                                     std::string(" dest: ").size());
}

TEST_CASE("empty catalog file warns") {
    const auto cat = parse("");
    CHECK(cat.empty());
    CHECK_FALSE(cat.warnings().empty());
    const auto only_comments = parse("# nothing here\n\n");
    CHECK(only_comments.empty());
    CHECK_FALSE(only_comments.warnings().empty());
}

TEST_CASE("duplicate event ids are rejected") {
    CHECK_THROWS_AS(parse("7\tfoo <*>\n7\tbar <*>\n"), ValidationError);
}

TEST_CASE("malformed line reports its line number") {
    try {
        parse("1\tok <*>\nnot-a-number\tbroken\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse("3\t<*>\n"), ParseError);  // no literal and not catch-all
    CHECK_NOTHROW(parse("3\t<*>\tcatch-all\n"));
}

TEST_CASE("tab format, E prefix and options") {
    const auto cat = parse("E12\tuser <*> logged in from <*>\tseq=0,other=1\n");
    const auto* t = cat.find(12);
    REQUIRE(t);
    CHECK(t->param_roles.at(0) == ParamRole::SequenceId);
    CHECK(t->param_roles.at(1) == ParamRole::Other);
}

TEST_CASE("wildcards match lazily and the trailing wildcard takes the rest") {
    EventTemplate t;
    t.event_id = 1;
    t.segments = parse_pattern("a <*> b <*>");
    auto m = t.match("a x b y b z");
    REQUIRE(m);
    CHECK((*m)[0] == "x");
    CHECK((*m)[1] == "y b z");
    CHECK_FALSE(t.match("a x c y"));
    CHECK_FALSE(t.match("za x b y"));  // anchored at the start
}

TEST_CASE("lazy match backtracks when the short placement fails") {
    EventTemplate t;
    t.segments = parse_pattern("<*> to <*> done");
    auto m = t.match("copy to a to b done");
    REQUIRE(m);
    CHECK((*m)[0] == "copy");
    CHECK((*m)[1] == "a to b");
    CHECK_FALSE(t.match("copy to a to b done now"));  // anchored at the end
}

TEST_CASE("most specific template wins") {
    const auto cat = parse("9\tReceived block <*> of size <*> from <*>\n"
                           "6\tReceived block <*> src: <*> dest: <*> of size <*>\n"
                           "2\tReceived <*>\n"
                           "3\tReceived <*>\n");
    auto m = cat.match("Received block b1 src: /a dest: /b of size 10");
    REQUIRE(m);
    CHECK(m->tmpl->event_id == 6);
    m = cat.match("Received block b1 of size 10 from /a");
    REQUIRE(m);
    CHECK(m->tmpl->event_id == 9);
    m = cat.match("Received something else");
    REQUIRE(m);
    CHECK(m->tmpl->event_id == 2);  // equal literal length: lower id first
    CHECK_FALSE(cat.match("nothing matches"));
}

TEST_CASE("bundled HDFS catalog loads") {
    const auto cat = load_template_catalog(std::string(LOGBENCH_SOURCE_DIR) + "/data/templates/hdfs.templates");
    CHECK(cat.size() == 31);
    auto m = cat.match("PacketResponder 1 for block blk_38865049064139660 terminating");
    REQUIRE(m);
    CHECK(m->tmpl->event_id == 11);
    m = cat.match("Deleted block blk_1 at file /mnt/hadoop/dfs/data/current/blk_1");
    REQUIRE(m);
    CHECK(m->tmpl->event_id == 30);
}
