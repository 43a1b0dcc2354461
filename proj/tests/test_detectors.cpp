#include "helpers.hpp"
#include "logbench/detectors.hpp"

#include <doctest.h>

#include <cmath>

using namespace logbench;
using testing::anom;
using testing::seq;
using testing::timed;

namespace {

CountVector cv(std::vector<EventId> ev) { return CountVector(ev); }

}  // namespace

TEST_CASE("new event types") {
    const std::vector<Sequence> train{seq({1, 2}), seq({2, 3})};
    const auto model = train_new_events(train);
    CHECK(model.ids == std::unordered_set<EventId>{1, 2, 3});
    CHECK_FALSE(score_new_events(seq({1, 2}), model));
    CHECK(score_new_events(seq({1, 99}), model));

    const std::vector<Sequence> dup{seq({1, 2}), seq({1, 2}), seq({2, 3})};
    CHECK(train_new_events(dup).ids == model.ids);
    CHECK_THROWS_AS(train_new_events(std::vector<Sequence>{}), ValidationError);

    // HDFS-style: event 7 only in anomalies.
    const std::vector<Sequence> hdfs{seq({5, 5, 5, 22, 11, 9, 11, 9, 26, 26, 26, 23, 23, 23, 21, 21})};
    CHECK(score_new_events(anom({5, 22, 7, 11}), train_new_events(hdfs)));
}

TEST_CASE("sequence lengths") {
    std::vector<Sequence> train;
    for (std::size_t len : {13, 19, 22, 25}) train.push_back(seq(std::vector<EventId>(len, 5)));
    const auto b = train_lengths(train);
    CHECK(b.min_len == 13);
    CHECK(b.max_len == 25);
    CHECK(score_lengths(seq({5, 7}), b));
    CHECK_FALSE(score_lengths(seq(std::vector<EventId>(20, 1)), b));
    CHECK_FALSE(score_lengths(seq(std::vector<EventId>(13, 1)), b));
    CHECK_FALSE(score_lengths(seq(std::vector<EventId>(25, 1)), b));
    CHECK(score_lengths(seq(std::vector<EventId>(26, 1)), b));
    CHECK_THROWS_AS(train_lengths(std::vector<Sequence>{}), ValidationError);
}

TEST_CASE("ecvc training and idf") {
    const std::vector<Sequence> one{seq({1, 1, 2})};
    const auto bank = train_ecvc(one, false);
    REQUIRE(bank.vectors.size() == 1);
    CHECK(bank.vectors[0] == cv({1, 1, 2}));
    CHECK_FALSE(bank.idf);
    CHECK_THROWS_AS(train_ecvc(std::vector<Sequence>{}, false), ValidationError);

    const std::vector<Sequence> four{seq({1, 2}), seq({1}), seq({1}), seq({1, 1})};
    const auto weighted = train_ecvc(four, true);
    REQUIRE(weighted.idf);
    CHECK(weighted.idf->weight(1) == 0.0);
    CHECK(weighted.idf->weight(2) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK(weighted.idf->weight(2) == doctest::Approx(1.386).epsilon(1e-3));
    CHECK(weighted.idf->weight(77) == doctest::Approx(std::log(4.0) + 1.0));
    CHECK(weighted.vectors.size() == 3);  // deduplicated
}

TEST_CASE("ecvc distance") {
    CHECK(ecvc_distance(cv({1, 2, 2}), cv({2, 1, 2}), nullptr) == 0.0);
    CHECK(ecvc_distance(cv({1}), cv({2}), nullptr) == 1.0);
    // Brute force: |3-3| + |1-1| + |0-1| = 1 over mass 4 + 5 = 9.
    CHECK(ecvc_distance(cv({5, 5, 5, 22}), cv({5, 5, 5, 22, 7}), nullptr) == doctest::Approx(1.0 / 9.0));
    CHECK(ecvc_distance(cv({}), cv({}), nullptr) == 0.0);
    // Length normalization: 1 / max(4, 5).
    CHECK(ecvc_distance(cv({5, 5, 5, 22}), cv({5, 5, 5, 22, 7}), nullptr, EcvcNorm::Length) ==
          doctest::Approx(0.2));
    CHECK(ecvc_distance(cv({1, 1}), cv({2, 2}), nullptr, EcvcNorm::Length) == 1.0);

    const std::vector<Sequence> train{seq({5, 5, 5, 22, 7}), seq({1, 2})};
    const auto bank = train_ecvc(train, false);
    const auto v = score_ecvc(seq({5, 22, 5, 5}), bank, 0.1);
    CHECK(v.score == doctest::Approx(1.0 / 9.0));
    CHECK(v.flag);
    CHECK_FALSE(score_ecvc(seq({5, 22, 5, 5}), bank, 0.12).flag);
    CHECK_FALSE(score_ecvc(seq({2, 1}), bank, 0.0).flag);
}

TEST_CASE("weighted ecvc ignores ubiquitous events") {
    const std::vector<Sequence> train{seq({1, 2}), seq({1, 3})};
    const auto bank = train_ecvc(train, true);
    // Event 1 has weight 0, so extra copies of it cost nothing.
    CHECK(ecvc_score(cv({1, 1, 1, 2}), bank) == 0.0);
    CHECK(ecvc_score(cv({1, 9}), bank) == 1.0);
}

TEST_CASE("n-gram dictionary") {
    const std::vector<Sequence> t{seq({1, 2, 3})};
    const auto d = train_ngrams(t, 2);
    CHECK(d.grams.size() == 2);
    CHECK(d.grams.count({1, 2}));
    CHECK(d.grams.count({2, 3}));

    const std::vector<Sequence> shortt{seq({1})};
    const auto p = train_ngrams(shortt, 2);
    CHECK(p.grams.size() == 1);
    CHECK(p.grams.count({kBoundaryEvent, 1}));

    CHECK_THROWS_AS(train_ngrams(t, 0), ValidationError);
    const auto end = sliding_windows(std::vector<EventId>{4}, 3, NGramPadding::End);
    REQUIRE(end.size() == 1);
    CHECK(end[0] == std::vector<EventId>{4, kBoundaryEvent, kBoundaryEvent});
    CHECK(sliding_windows(std::vector<EventId>{4}, 3, NGramPadding::None).empty());
}

TEST_CASE("n-gram scoring") {
    NGramDict d;
    d.n = 2;
    d.grams.insert({1, 2});
    const std::vector<EventId> s{1, 2, 3};
    const auto c = count_ngram_mismatches(s, d);
    CHECK(c.windows == 2);
    CHECK(c.mismatches == 1);

    const std::vector<Sequence> batch{seq({1, 2, 3}), seq({1, 2}), seq({3, 3, 3, 3, 3})};
    const auto per = score_ngrams(batch, d, NGramNormalization::PerSequence);
    CHECK(per[0] == 0.5);
    CHECK(per[1] == 0.0);
    CHECK(per[2] == 1.0);
    // Global max: the 4-mismatch outlier shrinks the 1-mismatch score.
    const auto glob = score_ngrams(batch, d, NGramNormalization::GlobalMax);
    CHECK(glob[0] == 0.25);
    CHECK(glob[2] == 1.0);
    const auto flags = score_ngrams(batch, d, 0.3, NGramNormalization::GlobalMax);
    CHECK_FALSE(flags[0].flag);
    CHECK(flags[2].flag);

    const std::vector<Sequence> clean{seq({1, 2})};
    CHECK(score_ngrams(clean, d, NGramNormalization::GlobalMax)[0] == 0.0);
}

TEST_CASE("edit distance") {
    const std::vector<EventId> a{1, 2, 3}, b{1, 3};
    CHECK(levenshtein(a, b) == 1);
    CHECK(levenshtein(std::vector<EventId>{}, a) == 3);
    CHECK(levenshtein_bounded(a, b, 1) == std::optional<std::size_t>(1));
    CHECK_FALSE(levenshtein_bounded(a, std::vector<EventId>{4, 5, 6}, 2));

    const std::vector<Sequence> t{seq({1, 3})};
    const auto bank = train_edit(t);
    CHECK(edit_score(a, bank) == doctest::Approx(1.0 / 3.0));
    CHECK(edit_score(b, bank) == 0.0);
    CHECK(edit_score(std::vector<EventId>{7, 8}, bank) == 1.0);
    CHECK(score_edit(seq({1, 2, 3}), bank, 0.3).flag);
    CHECK_FALSE(score_edit(seq({1, 2, 3}), bank, 0.34).flag);

    const std::vector<Sequence> dup{seq({1, 2}), seq({1, 2}), seq({4}), seq({1, 2, 3, 4})};
    const auto deduped = train_edit(dup);
    CHECK(deduped.sequences.size() == 3);
    CHECK(deduped.sequences.front().size() == 1);
}

TEST_CASE("edit score is order sensitive") {
    const std::vector<Sequence> t{seq({1, 2})};
    const auto bank = train_edit(t);
    CHECK(edit_score(std::vector<EventId>{1, 2}, bank) == 0.0);
    CHECK(edit_score(std::vector<EventId>{2, 1}, bank) == 1.0);
}

TEST_CASE("timing ranges") {
    const std::vector<Sequence> single{timed({1, 2}, {0, 3})};
    const auto r1 = train_timing(single);
    const auto& one = r1.ranges.at({1, 2});
    CHECK(one.min_dt == 3.0);
    CHECK(one.max_dt == 3.0);

    const std::vector<Sequence> many{timed({1, 2, 1, 2}, {0, 2, 10, 15}), timed({1, 2}, {100, 104})};
    const auto r = train_timing(many);
    CHECK(r.ranges.at({1, 2}).min_dt == 2.0);
    CHECK(r.ranges.at({1, 2}).max_dt == 5.0);
    CHECK(r.ranges.at({2, 1}).min_dt == 8.0);

    const std::vector<Sequence> vm{timed({3, 4}, {0, 12}), timed({3, 4}, {50, 65}), timed({3, 4}, {80, 93.5})};
    const auto rv = train_timing(vm);
    CHECK(rv.ranges.at({3, 4}).min_dt == 12.0);
    CHECK(rv.ranges.at({3, 4}).max_dt == 15.0);

    const std::vector<Sequence> none{seq({1, 2})};
    CHECK_THROWS_AS(train_timing(none), NotApplicableError);
}

TEST_CASE("timing scores") {
    TimingRanges m;
    m.ranges[{1, 2}] = {10, 20};
    CHECK(timing_score(timed({1, 2}, {0, 15}), m).score == 0.0);
    CHECK(timing_score(timed({1, 2}, {0, 30}), m).score == doctest::Approx(0.5));
    CHECK(timing_score(timed({1, 2}, {0, 20}), m).score == 0.0);
    CHECK(timing_score(timed({1, 2}, {0, 10}), m).score == 0.0);
    CHECK(timing_score(timed({1, 2}, {0, 5}), m).score == doctest::Approx(0.5));
    CHECK(timing_score(timed({1, 2}, {0, 100}), m).score == 1.0);  // clamped
    CHECK(timing_score(timed({2, 1}, {0, 999}), m).score == 0.0);  // unseen pair

    const auto neg = timing_score(timed({1, 2}, {50, 40}), m);
    CHECK(neg.negative_deltas == 1);
    CHECK(neg.score == 1.0);  // clamped delta 0 against lower bound 10

    TimingRanges z;
    z.ranges[{1, 2}] = {0, 0};
    CHECK(timing_score(timed({1, 2}, {0, 1e-7}), z).score == doctest::Approx(0.1));
    CHECK(score_timing(timed({1, 2}, {0, 30}), m, 0.4).flag);
    CHECK_FALSE(score_timing(timed({1, 2}, {0, 30}), m, 0.5).flag);
}

TEST_CASE("combine_or") {
    const bool ff[] = {false, false};
    const bool ft[] = {false, true};
    CHECK_FALSE(combine_or(ff));
    CHECK(combine_or(ft));
    CHECK_THROWS_AS(combine_or(std::span<const bool>{}), ValidationError);
}

TEST_CASE("detector factory") {
    for (const auto& n : base_detector_names()) {
        const auto d = make_detector(n);
        CHECK(d->name() == n);
    }
    CHECK_FALSE(make_detector("event")->thresholded());
    CHECK(make_detector("ngram4")->thresholded());
    const auto combo = make_detector("Event + Length + ECVC");
    CHECK(combo->name() == "event+length+ecvc");
    CHECK(combo->thresholded());
    CHECK_FALSE(make_detector("event+length")->thresholded());
    CHECK_THROWS_AS(make_detector("ecvc+edit"), ValidationError);
    CHECK_THROWS_AS(make_detector("magic"), ValidationError);
    CHECK_THROWS_AS(make_detector("ngram0"), ValidationError);
    CHECK_THROWS_AS(make_detector(""), ValidationError);
}

TEST_CASE("combined detector ORs flags") {
    const std::vector<Sequence> train{seq({1, 2, 2, 3}), seq({1, 2, 3, 3})};
    const auto d = make_detector("event+length+ecvc");
    d->train(train);
    const std::vector<Sequence> test{seq({1, 2, 3, 3}), seq({1, 9, 2, 3}), seq({1}), seq({1, 1, 1, 2})};
    const auto s = d->score(test);
    REQUIRE(s.scores.size() == 4);
    CHECK_FALSE(s.scores[0].flagged(0.0));
    CHECK(s.scores[1].hard_flag);
    CHECK(s.scores[2].hard_flag);
    CHECK_FALSE(s.scores[3].hard_flag);
    REQUIRE(s.scores[3].score);
    CHECK(s.scores[3].flagged(0.2));
    CHECK_FALSE(s.scores[3].flagged(0.5));
}

TEST_CASE("parallel scoring matches serial") {
    std::vector<Sequence> train, test;
    for (int i = 0; i < 30; ++i) train.push_back(seq({1, 2, 3, static_cast<EventId>(i % 4 + 1)}));
    for (int i = 0; i < 50; ++i) test.push_back(seq({static_cast<EventId>(i % 7), 2, 3, 1, static_cast<EventId>(i % 3)}));
    for (const char* name : {"ecvc", "ecvc-idf", "ngram2", "ngram3", "edit", "event+length+edit"}) {
        DetectorOptions one, four;
        four.jobs = 4;
        auto a = make_detector(name, one);
        auto b = make_detector(name, four);
        a->train(train);
        b->train(train);
        const auto sa = a->score(test), sb = b->score(test);
        for (std::size_t i = 0; i < test.size(); ++i) {
            CHECK(sa.scores[i].hard_flag == sb.scores[i].hard_flag);
            CHECK(sa.scores[i].score == sb.scores[i].score);
        }
    }
}
