#include "logbench/detectors.hpp"

#include "logbench/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace logbench {

namespace {

void require_training(std::span<const Sequence> train, const char* who) {
    if (train.empty()) throw ValidationError(std::string(who) + ": training set is empty");
}

/// Scores each distinct event list once and fans the result back out.
template <typename Fn>
std::vector<double> score_distinct(std::span<const Sequence> batch, std::size_t jobs, Fn&& fn) {
    std::unordered_map<std::vector<EventId>, std::size_t, EventListHash> index;
    std::vector<const std::vector<EventId>*> distinct;
    std::vector<std::size_t> slot(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        auto [it, inserted] = index.try_emplace(batch[i].events, distinct.size());
        if (inserted) distinct.push_back(&batch[i].events);
        slot[i] = it->second;
    }
    std::vector<double> unique_scores(distinct.size());
    util::parallel_for(distinct.size(), jobs, [&](std::size_t k) { unique_scores[k] = fn(*distinct[k]); });
    std::vector<double> out(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) out[i] = unique_scores[slot[i]];
    return out;
}

}  // namespace

// --- new event types -------------------------------------------------------

KnownEvents train_new_events(std::span<const Sequence> train) {
    require_training(train, "new-event detector");
    KnownEvents model;
    for (const auto& s : train) model.ids.insert(s.events.begin(), s.events.end());
    return model;
}

bool score_new_events(const Sequence& seq, const KnownEvents& model) {
    return std::any_of(seq.events.begin(), seq.events.end(),
                       [&](EventId e) { return !model.ids.contains(e); });
}

// --- sequence lengths ------------------------------------------------------

LengthBounds train_lengths(std::span<const Sequence> train) {
    require_training(train, "length detector");
    LengthBounds b{train.front().size(), train.front().size()};
    for (const auto& s : train) {
        b.min_len = std::min(b.min_len, s.size());
        b.max_len = std::max(b.max_len, s.size());
    }
    return b;
}

bool score_lengths(const Sequence& seq, const LengthBounds& model) {
    return seq.size() < model.min_len || seq.size() > model.max_len;
}

// --- event count vector clustering -----------------------------------------

double IdfWeights::weight(EventId e) const {
    const auto it = weights.find(e);
    return it == weights.end() ? unseen_weight : it->second;
}

CountVectorBank train_ecvc(std::span<const Sequence> train, bool idf) {
    require_training(train, "ECVC detector");
    CountVectorBank bank;
    bank.training_size = train.size();
    std::unordered_set<CountVector, CountVectorHash> seen;
    std::unordered_map<EventId, std::size_t> doc_freq;
    for (const auto& s : train) {
        CountVector cv(s.events);
        for (const auto& [e, c] : cv.entries()) ++doc_freq[e];
        if (seen.insert(cv).second) bank.vectors.push_back(std::move(cv));
    }
    if (idf) {
        IdfWeights w;
        const double n = static_cast<double>(train.size());
        for (const auto& [e, df] : doc_freq) w.weights[e] = std::log(n / static_cast<double>(df));
        w.unseen_weight = std::log(n) + 1.0;
        bank.idf = std::move(w);
    }
    return bank;
}

double ecvc_distance(const CountVector& a, const CountVector& b, const IdfWeights* idf, EcvcNorm norm) {
    const auto& ea = a.entries();
    const auto& eb = b.entries();
    double diff = 0.0, mass_a = 0.0, mass_b = 0.0;
    const auto w = [&](EventId e) { return idf ? idf->weight(e) : 1.0; };
    std::size_t i = 0, j = 0;
    while (i < ea.size() || j < eb.size()) {
        if (j == eb.size() || (i < ea.size() && ea[i].first < eb[j].first)) {
            const double wa = w(ea[i].first) * ea[i].second;
            diff += wa;
            mass_a += wa;
            ++i;
        } else if (i == ea.size() || eb[j].first < ea[i].first) {
            const double wb = w(eb[j].first) * eb[j].second;
            diff += wb;
            mass_b += wb;
            ++j;
        } else {
            const double we = w(ea[i].first);
            diff += we * std::abs(static_cast<double>(ea[i].second) - static_cast<double>(eb[j].second));
            mass_a += we * ea[i].second;
            mass_b += we * eb[j].second;
            ++i;
            ++j;
        }
    }
    const double denom = norm == EcvcNorm::Mass ? mass_a + mass_b : std::max(mass_a, mass_b);
    if (denom <= 0.0) return 0.0;
    return std::min(1.0, diff / denom);
}

double ecvc_score(const CountVector& cv, const CountVectorBank& bank, EcvcNorm norm) {
    if (bank.vectors.empty()) throw ValidationError("ECVC bank is empty");
    const IdfWeights* idf = bank.idf ? &*bank.idf : nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ref : bank.vectors) {
        best = std::min(best, ecvc_distance(cv, ref, idf, norm));
        if (best == 0.0) break;
    }
    return best;
}

Verdict score_ecvc(const Sequence& seq, const CountVectorBank& bank, double threshold, EcvcNorm norm) {
    const double s = ecvc_score(to_count_vector(seq), bank, norm);
    return {s, s > threshold};
}

// --- n-grams ---------------------------------------------------------------

std::size_t NGramHash::operator()(const std::vector<EventId>& g) const noexcept {
    return EventListHash{}(g);
}

std::vector<std::vector<EventId>> sliding_windows(std::span<const EventId> events, std::size_t n,
                                                  NGramPadding padding) {
    if (n == 0) throw ValidationError("n-gram size must be positive");
    std::vector<std::vector<EventId>> out;
    if (events.size() >= n) {
        out.reserve(events.size() - n + 1);
        for (std::size_t i = 0; i + n <= events.size(); ++i)
            out.emplace_back(events.begin() + static_cast<std::ptrdiff_t>(i),
                             events.begin() + static_cast<std::ptrdiff_t>(i + n));
        return out;
    }
    if (padding == NGramPadding::None) return out;
    std::vector<EventId> w(n - events.size(), kBoundaryEvent);
    if (padding == NGramPadding::Start) w.insert(w.end(), events.begin(), events.end());
    else w.insert(w.begin(), events.begin(), events.end());
    out.push_back(std::move(w));
    return out;
}

NGramDict train_ngrams(std::span<const Sequence> train, std::size_t n, NGramPadding padding) {
    if (n == 0) throw ValidationError("n-gram size must be positive");
    require_training(train, "n-gram detector");
    NGramDict dict;
    dict.n = n;
    dict.padding = padding;
    for (const auto& s : train)
        for (auto& w : sliding_windows(s.events, n, padding)) dict.grams.insert(std::move(w));
    return dict;
}

NGramCounts count_ngram_mismatches(std::span<const EventId> events, const NGramDict& dict) {
    NGramCounts c;
    for (const auto& w : sliding_windows(events, dict.n, dict.padding)) {
        ++c.windows;
        if (!dict.grams.contains(w)) ++c.mismatches;
    }
    return c;
}

namespace {

std::vector<double> ngram_scores(std::span<const Sequence> batch, const NGramDict& dict,
                                 NGramNormalization normalization, std::size_t jobs) {
    if (normalization == NGramNormalization::PerSequence) {
        return score_distinct(batch, jobs, [&](const std::vector<EventId>& ev) {
            const auto c = count_ngram_mismatches(ev, dict);
            return c.windows ? static_cast<double>(c.mismatches) / static_cast<double>(c.windows) : 0.0;
        });
    }
    std::vector<double> raw = score_distinct(batch, jobs, [&](const std::vector<EventId>& ev) {
        return static_cast<double>(count_ngram_mismatches(ev, dict).mismatches);
    });
    const double peak = raw.empty() ? 0.0 : *std::max_element(raw.begin(), raw.end());
    for (double& r : raw) r = peak > 0.0 ? r / peak : 0.0;
    return raw;
}

}  // namespace

std::vector<double> score_ngrams(std::span<const Sequence> batch, const NGramDict& dict,
                                 NGramNormalization normalization) {
    return ngram_scores(batch, dict, normalization, 1);
}

std::vector<Verdict> score_ngrams(std::span<const Sequence> batch, const NGramDict& dict, double threshold,
                                  NGramNormalization normalization) {
    std::vector<Verdict> out;
    for (double s : score_ngrams(batch, dict, normalization)) out.push_back({s, s > threshold});
    return out;
}

// --- edit distance ---------------------------------------------------------

std::size_t levenshtein(std::span<const EventId> a, std::span<const EventId> b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::optional<std::size_t> levenshtein_bounded(std::span<const EventId> a, std::span<const EventId> b,
                                               std::size_t max_distance) {
    if (a.size() < b.size()) std::swap(a, b);
    if (a.size() - b.size() > max_distance) return std::nullopt;
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        std::size_t row_min = cur[0];
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
            row_min = std::min(row_min, cur[j]);
        }
        if (row_min > max_distance) return std::nullopt;
        std::swap(prev, cur);
    }
    const std::size_t d = prev[b.size()];
    if (d > max_distance) return std::nullopt;
    return d;
}

EditBank train_edit(std::span<const Sequence> train) {
    require_training(train, "edit-distance detector");
    std::unordered_set<std::vector<EventId>, EventListHash> seen;
    EditBank bank;
    for (const auto& s : train)
        if (seen.insert(s.events).second) bank.sequences.push_back(s.events);
    std::stable_sort(bank.sequences.begin(), bank.sequences.end(),
                     [](const auto& x, const auto& y) { return x.size() < y.size(); });
    return bank;
}

double edit_score(std::span<const EventId> events, const EditBank& bank) {
    if (bank.sequences.empty()) throw ValidationError("edit bank is empty");
    const auto& refs = bank.sequences;
    const std::size_t len = events.size();
    double best = 1.0;

    const auto try_candidate = [&](const std::vector<EventId>& ref) {
        const std::size_t m = std::max(len, ref.size());
        if (m == 0) {
            best = 0.0;
            return;
        }
        const auto bound = static_cast<std::size_t>(std::floor(best * static_cast<double>(m)));
        if (const auto d = levenshtein_bounded(events, ref, bound)) {
            const double s = static_cast<double>(*d) / static_cast<double>(m);
            if (s < best) best = s;
        }
    };
    const auto length_bound = [&](std::size_t other) {
        const std::size_t m = std::max(len, other);
        if (m == 0) return 0.0;
        const std::size_t gap = len > other ? len - other : other - len;
        return static_cast<double>(gap) / static_cast<double>(m);
    };

    // Visit bank entries outward from the closest length; the length-gap lower
    // bound grows monotonically in both directions, so each side can stop early.
    const auto mid = static_cast<std::size_t>(
        std::lower_bound(refs.begin(), refs.end(), len, [](const auto& r, std::size_t l) { return r.size() < l; }) -
        refs.begin());
    std::size_t up = mid;
    std::size_t down = mid;  // next candidate below is down - 1
    bool up_open = up < refs.size(), down_open = down > 0;
    while ((up_open || down_open) && best > 0.0) {
        if (up_open) {
            if (length_bound(refs[up].size()) >= best) up_open = false;
            else {
                try_candidate(refs[up]);
                up_open = ++up < refs.size();
            }
        }
        if (down_open && best > 0.0) {
            if (length_bound(refs[down - 1].size()) >= best) down_open = false;
            else {
                try_candidate(refs[down - 1]);
                down_open = --down > 0;
            }
        }
    }
    return best;
}

Verdict score_edit(const Sequence& seq, const EditBank& bank, double threshold) {
    const double s = edit_score(seq.events, bank);
    return {s, s > threshold};
}

// --- event timing ----------------------------------------------------------

std::size_t EventPairHash::operator()(const std::pair<EventId, EventId>& p) const noexcept {
    return static_cast<std::size_t>(util::mix64(static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.first)) << 32 |
                                                static_cast<std::uint32_t>(p.second)));
}

TimingRanges train_timing(std::span<const Sequence> train) {
    require_training(train, "timing detector");
    TimingRanges model;
    bool any = false;
    for (const auto& s : train) {
        if (!s.has_timestamps()) continue;
        any = true;
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            const double t0 = s.timestamps[i], t1 = s.timestamps[i + 1];
            if (!has_timestamp(t0) || !has_timestamp(t1)) continue;
            const double dt = std::max(0.0, t1 - t0);
            auto [it, inserted] = model.ranges.try_emplace({s.events[i], s.events[i + 1]}, TimingRange{dt, dt});
            if (!inserted) {
                it->second.min_dt = std::min(it->second.min_dt, dt);
                it->second.max_dt = std::max(it->second.max_dt, dt);
            }
        }
    }
    if (!any) throw NotApplicableError("timing detector needs timestamps in the training data");
    return model;
}

TimingScore timing_score(const Sequence& seq, const TimingRanges& model) {
    TimingScore out;
    if (seq.timestamps.size() != seq.events.size()) return out;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        const double t0 = seq.timestamps[i], t1 = seq.timestamps[i + 1];
        if (!has_timestamp(t0) || !has_timestamp(t1)) continue;
        const auto it = model.ranges.find({seq.events[i], seq.events[i + 1]});
        if (it == model.ranges.end()) continue;
        double dt = t1 - t0;
        if (dt < 0.0) {
            dt = 0.0;
            ++out.negative_deltas;
        }
        const auto [lo, hi] = it->second;
        double dev = 0.0;
        if (dt < lo) dev = (lo - dt) / std::max(lo, kTimingEpsilon);
        else if (dt > hi) dev = (dt - hi) / std::max(hi, kTimingEpsilon);
        out.score = std::max(out.score, dev);
    }
    out.score = std::clamp(out.score, 0.0, 1.0);
    return out;
}

Verdict score_timing(const Sequence& seq, const TimingRanges& model, double threshold) {
    const double s = timing_score(seq, model).score;
    return {s, s > threshold};
}

bool combine_or(std::span<const bool> flags) {
    if (flags.empty()) throw ValidationError("combine_or needs at least one detector output");
    return std::any_of(flags.begin(), flags.end(), [](bool f) { return f; });
}

// --- uniform detector interface -------------------------------------------

namespace {

template <typename Model>
const Model& trained(const std::optional<Model>& m, const std::string& name) {
    if (!m) throw ValidationError(name + " detector used before training");
    return *m;
}

class NewEventsDetector final : public Detector {
public:
    std::string name() const override { return "event"; }
    bool thresholded() const override { return false; }
    void train(std::span<const Sequence> t) override { model_ = train_new_events(t); }
    BatchScores score(std::span<const Sequence> batch) const override {
        const auto& m = trained(model_, name());
        BatchScores out;
        out.scores.reserve(batch.size());
        for (const auto& s : batch) out.scores.push_back({score_new_events(s, m), std::nullopt});
        return out;
    }

private:
    std::optional<KnownEvents> model_;
};

class LengthDetector final : public Detector {
public:
    std::string name() const override { return "length"; }
    bool thresholded() const override { return false; }
    void train(std::span<const Sequence> t) override { model_ = train_lengths(t); }
    BatchScores score(std::span<const Sequence> batch) const override {
        const auto& m = trained(model_, name());
        BatchScores out;
        out.scores.reserve(batch.size());
        for (const auto& s : batch) out.scores.push_back({score_lengths(s, m), std::nullopt});
        return out;
    }

private:
    std::optional<LengthBounds> model_;
};

BatchScores from_scores(const std::vector<double>& scores) {
    BatchScores out;
    out.scores.reserve(scores.size());
    for (double s : scores) out.scores.push_back({false, s});
    return out;
}

class EcvcDetector final : public Detector {
public:
    EcvcDetector(bool idf, const DetectorOptions& opt) : idf_(idf), opt_(opt) {}
    std::string name() const override { return idf_ ? "ecvc-idf" : "ecvc"; }
    bool thresholded() const override { return true; }
    void train(std::span<const Sequence> t) override { model_ = train_ecvc(t, idf_); }
    BatchScores score(std::span<const Sequence> batch) const override {
        const auto& m = trained(model_, name());
        return from_scores(score_distinct(batch, opt_.jobs, [&](const std::vector<EventId>& ev) {
            return ecvc_score(CountVector(ev), m, opt_.ecvc_norm);
        }));
    }

private:
    bool idf_;
    DetectorOptions opt_;
    std::optional<CountVectorBank> model_;
};

class NGramDetector final : public Detector {
public:
    NGramDetector(std::size_t n, const DetectorOptions& opt) : n_(n), opt_(opt) {}
    std::string name() const override { return "ngram" + std::to_string(n_); }
    bool thresholded() const override { return true; }
    void train(std::span<const Sequence> t) override { model_ = train_ngrams(t, n_, opt_.ngram_padding); }
    BatchScores score(std::span<const Sequence> batch) const override {
        return from_scores(ngram_scores(batch, trained(model_, name()), opt_.ngram_normalization, opt_.jobs));
    }

private:
    std::size_t n_;
    DetectorOptions opt_;
    std::optional<NGramDict> model_;
};

class EditDetector final : public Detector {
public:
    explicit EditDetector(const DetectorOptions& opt) : opt_(opt) {}
    std::string name() const override { return "edit"; }
    bool thresholded() const override { return true; }
    void train(std::span<const Sequence> t) override { model_ = train_edit(t); }
    BatchScores score(std::span<const Sequence> batch) const override {
        const auto& m = trained(model_, name());
        return from_scores(score_distinct(batch, opt_.jobs,
                                          [&](const std::vector<EventId>& ev) { return edit_score(ev, m); }));
    }

private:
    DetectorOptions opt_;
    std::optional<EditBank> model_;
};

class TimingDetector final : public Detector {
public:
    explicit TimingDetector(const DetectorOptions& opt) : opt_(opt) {}
    std::string name() const override { return "timing"; }
    bool thresholded() const override { return true; }
    void train(std::span<const Sequence> t) override { model_ = train_timing(t); }
    BatchScores score(std::span<const Sequence> batch) const override {
        const auto& m = trained(model_, name());
        std::vector<TimingScore> raw(batch.size());
        util::parallel_for(batch.size(), opt_.jobs, [&](std::size_t i) { raw[i] = timing_score(batch[i], m); });
        BatchScores out;
        out.scores.reserve(batch.size());
        for (const auto& r : raw) {
            out.scores.push_back({false, r.score});
            out.negative_deltas += r.negative_deltas;
        }
        return out;
    }

private:
    DetectorOptions opt_;
    std::optional<TimingRanges> model_;
};

class CombinedDetector final : public Detector {
public:
    explicit CombinedDetector(std::vector<std::unique_ptr<Detector>> members) : members_(std::move(members)) {}

    std::string name() const override {
        std::string n;
        for (const auto& m : members_) n += (n.empty() ? "" : "+") + m->name();
        return n;
    }
    bool thresholded() const override {
        return std::any_of(members_.begin(), members_.end(), [](const auto& m) { return m->thresholded(); });
    }
    void train(std::span<const Sequence> t) override {
        for (auto& m : members_) m->train(t);
    }
    BatchScores score(std::span<const Sequence> batch) const override {
        BatchScores out;
        out.scores.assign(batch.size(), SequenceScore{});
        for (const auto& m : members_) {
            BatchScores part = m->score(batch);
            out.negative_deltas += part.negative_deltas;
            for (std::size_t i = 0; i < batch.size(); ++i) {
                out.scores[i].hard_flag = out.scores[i].hard_flag || part.scores[i].hard_flag;
                if (part.scores[i].score) out.scores[i].score = part.scores[i].score;
            }
        }
        return out;
    }

private:
    std::vector<std::unique_ptr<Detector>> members_;
};

std::unique_ptr<Detector> make_base_detector(std::string_view name, const DetectorOptions& opt) {
    if (name == "event") return std::make_unique<NewEventsDetector>();
    if (name == "length") return std::make_unique<LengthDetector>();
    if (name == "ecvc") return std::make_unique<EcvcDetector>(false, opt);
    if (name == "ecvc-idf") return std::make_unique<EcvcDetector>(true, opt);
    if (name == "edit") return std::make_unique<EditDetector>(opt);
    if (name == "timing") return std::make_unique<TimingDetector>(opt);
    if (name.rfind("ngram", 0) == 0) {
        const auto n = util::parse_int<std::size_t>(name.substr(5));
        if (!n || *n == 0) throw ValidationError("n-gram detector needs a positive size: '" + std::string(name) + "'");
        return std::make_unique<NGramDetector>(*n, opt);
    }
    throw ValidationError("unknown detector '" + std::string(name) + "'");
}

}  // namespace

std::unique_ptr<Detector> make_detector(std::string_view spec, const DetectorOptions& options) {
    std::vector<std::unique_ptr<Detector>> members;
    for (auto part : util::split(spec, '+')) {
        const std::string name = util::to_lower(util::trim(part));
        if (name.empty()) throw ValidationError("empty detector name in '" + std::string(spec) + "'");
        members.push_back(make_base_detector(name, options));
    }
    const auto thresholded = std::count_if(members.begin(), members.end(), [](const auto& m) { return m->thresholded(); });
    if (thresholded > 1)
        throw ValidationError("combination '" + std::string(spec) + "' has more than one thresholded detector");
    if (members.size() == 1) return std::move(members.front());
    return std::make_unique<CombinedDetector>(std::move(members));
}

std::vector<std::string> base_detector_names() {
    return {"event", "length", "ecvc", "ecvc-idf", "ngram2", "ngram3", "ngram10", "edit", "timing"};
}

}  // namespace logbench
