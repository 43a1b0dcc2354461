#include "logbench/ingest.hpp"

#include "logbench/util.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>

namespace logbench {

namespace {

struct PreambleSplit {
    std::vector<std::string_view> fields;
    std::string_view message;
};

/// Takes `count` leading whitespace-separated fields; the remainder (leading
/// blanks removed, inner spacing kept) is the message.
std::optional<PreambleSplit> split_preamble(std::string_view line, std::size_t count) {
    PreambleSplit out;
    out.fields.reserve(count);
    std::size_t i = 0;
    for (std::size_t f = 0; f < count; ++f) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i == start) return std::nullopt;
        out.fields.push_back(line.substr(start, i - start));
    }
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    out.message = line.substr(i);
    return out;
}

void push_unique(std::vector<std::string>& ids, std::string_view id) {
    if (id.empty()) return;
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.emplace_back(id);
}

void count_labels(IngestReport& r, const Label& label, std::uint64_t n) {
    switch (label.kind) {
        case Label::Kind::Normal: r.normal_events += n; break;
        case Label::Kind::Anomalous: r.anomalous_events += n; break;
        case Label::Kind::Unlabeled: r.unlabeled_events += n; break;
    }
}

}  // namespace

struct LineParser::Impl {
    TemplateCatalog catalog;
    DatasetProfile profile;
    std::optional<std::regex> seq_regex;
    bool seq_regex_has_group = false;
    std::vector<std::size_t> ts_fields;
    std::optional<std::size_t> seq_field;
    std::optional<std::size_t> label_field;

    std::optional<std::size_t> field_index(const std::string& name) const {
        const auto it = std::find(profile.preamble.begin(), profile.preamble.end(), name);
        if (it == profile.preamble.end()) return std::nullopt;
        return static_cast<std::size_t>(it - profile.preamble.begin());
    }
};

LineParser::LineParser(const TemplateCatalog& catalog, const DatasetProfile& profile)
    : impl_(std::make_unique<Impl>()) {
    profile.validate();
    if (profile.event_source == EventSource::Templates && catalog.empty())
        throw ValidationError("template catalog is empty");
    impl_->catalog = catalog;
    impl_->profile = profile;
    if (profile.seq_source == SeqIdSource::Regex) {
        impl_->seq_regex.emplace(profile.seq_id_pattern, std::regex::ECMAScript | std::regex::optimize);
        impl_->seq_regex_has_group = impl_->seq_regex->mark_count() > 0;
    }
    for (const auto& f : profile.timestamp_fields) impl_->ts_fields.push_back(*impl_->field_index(f));
    if (profile.seq_source == SeqIdSource::Field) impl_->seq_field = impl_->field_index(profile.seq_field);
    if (profile.label_source == LabelSource::EventMarker)
        impl_->label_field = impl_->field_index(profile.label_field);
}

LineParser::~LineParser() = default;
LineParser::LineParser(LineParser&&) noexcept = default;
LineParser& LineParser::operator=(LineParser&&) noexcept = default;

const DatasetProfile& LineParser::profile() const noexcept { return impl_->profile; }

LineOutcome LineParser::parse(std::string_view line, std::size_t line_no,
                              const SourceFile* source) const {
    const Impl& im = *impl_;
    const DatasetProfile& p = im.profile;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.remove_suffix(1);
    if (util::trim(line).empty()) return InvalidLine{"empty line"};

    ParsedEvent ev;
    ev.line_no = line_no;

    if (p.event_source == EventSource::Tokens) {
        const auto id = util::parse_int<EventId>(util::trim(line));
        if (!id || *id <= 0) return InvalidLine{"token is not a positive event id"};
        ev.event_id = *id;
    } else {
        const auto split = split_preamble(line, p.preamble.size());
        if (!split) return InvalidLine{"line shorter than the preamble"};

        if (!im.ts_fields.empty()) {
            std::string ts_text;
            for (std::size_t k = 0; k < im.ts_fields.size(); ++k) {
                if (k) ts_text += ' ';
                ts_text += split->fields[im.ts_fields[k]];
            }
            ev.timestamp = parse_timestamp(ts_text, p);
            if (!has_timestamp(ev.timestamp)) return InvalidLine{"unparseable timestamp '" + ts_text + "'"};
        }
        if (im.label_field) {
            const std::string_view marker = split->fields[*im.label_field];
            ev.label = marker == p.normal_marker ? Label::normal() : Label::anomalous(std::string(marker));
        }

        auto match = im.catalog.match(split->message);
        if (!match) return Unmatched{};
        ev.event_id = match->tmpl->event_id;
        ev.params.reserve(match->params.size());
        for (auto v : match->params) ev.params.emplace_back(v);

        bool seq_from_template = false;
        for (const auto& [idx, role] : match->tmpl->param_roles) {
            if (role == ParamRole::SequenceId) {
                push_unique(ev.seq_ids, util::trim(match->params[idx]));
                seq_from_template = true;
            } else if (role == ParamRole::Timestamp) {
                ev.timestamp = parse_timestamp(match->params[idx], p);
                if (!has_timestamp(ev.timestamp)) return InvalidLine{"unparseable timestamp parameter"};
            }
        }
        if (!seq_from_template) {
            if (im.seq_regex) {
                const std::string msg(split->message);
                for (std::sregex_iterator it(msg.begin(), msg.end(), *im.seq_regex), end; it != end; ++it)
                    push_unique(ev.seq_ids, (*it)[im.seq_regex_has_group ? 1 : 0].str());
            } else if (im.seq_field) {
                push_unique(ev.seq_ids, split->fields[*im.seq_field]);
            }
        }
    }

    if (p.seq_source == SeqIdSource::File && source) push_unique(ev.seq_ids, source->seq_id);
    if (p.label_source == LabelSource::FileDirectory && source) ev.label = source->label;
    return ev;
}

LineOutcome parse_line(std::string_view line, const TemplateCatalog& catalog,
                       const DatasetProfile& profile, std::size_t line_no) {
    if (catalog.empty() && profile.event_source == EventSource::Templates)
        throw ValidationError("template catalog is empty");
    return LineParser(catalog, profile).parse(line, line_no);
}

void IngestReport::merge(const IngestReport& o) {
    total_lines += o.total_lines;
    matched += o.matched;
    unmatched += o.unmatched;
    invalid += o.invalid;
    discarded_no_id += o.discarded_no_id;
    parsed_events += o.parsed_events;
    normal_events += o.normal_events;
    anomalous_events += o.anomalous_events;
    unlabeled_events += o.unlabeled_events;
    files += o.files;
    for (const auto& e : o.errors) {
        if (errors.size() >= kMaxStoredErrors) break;
        errors.push_back(e);
    }
    if (!o.complete) {
        complete = false;
        if (failure.empty()) failure = o.failure;
    }
}

std::string IngestReport::to_json() const {
    nlohmann::ordered_json j;
    j["total_lines"] = total_lines;
    j["matched"] = matched;
    j["unmatched"] = unmatched;
    j["invalid"] = invalid;
    j["discarded_no_id"] = discarded_no_id;
    j["parsed_events"] = parsed_events;
    j["normal_events"] = normal_events;
    j["anomalous_events"] = anomalous_events;
    j["unlabeled_events"] = unlabeled_events;
    j["files"] = files;
    j["complete"] = complete;
    j["failure"] = failure;
    auto& errs = j["errors"] = nlohmann::ordered_json::array();
    for (const auto& e : errors) errs.push_back({{"line", e.line_no}, {"reason", e.reason}});
    return j.dump(2);
}

IngestReport IngestReport::from_json(std::string_view text) {
    const auto j = nlohmann::json::parse(text);
    IngestReport r;
    r.total_lines = j.value("total_lines", std::uint64_t{0});
    r.matched = j.value("matched", std::uint64_t{0});
    r.unmatched = j.value("unmatched", std::uint64_t{0});
    r.invalid = j.value("invalid", std::uint64_t{0});
    r.discarded_no_id = j.value("discarded_no_id", std::uint64_t{0});
    r.parsed_events = j.value("parsed_events", std::uint64_t{0});
    r.normal_events = j.value("normal_events", std::uint64_t{0});
    r.anomalous_events = j.value("anomalous_events", std::uint64_t{0});
    r.unlabeled_events = j.value("unlabeled_events", std::uint64_t{0});
    r.files = j.value("files", std::uint64_t{0});
    r.complete = j.value("complete", true);
    r.failure = j.value("failure", std::string{});
    if (j.contains("errors"))
        for (const auto& e : j["errors"])
            r.errors.push_back({e.value("line", std::size_t{0}), e.value("reason", std::string{})});
    return r;
}

namespace {

void account(IngestReport& report, LineOutcome&& outcome, std::size_t line_no, std::string_view raw,
             const LineParser& parser, const EventSink& sink, const ParseOptions& options) {
    ++report.total_lines;
    if (auto* ev = std::get_if<ParsedEvent>(&outcome)) {
        ++report.matched;
        if (ev->seq_ids.empty() && parser.profile().seq_source != SeqIdSource::None) {
            ++report.discarded_no_id;
            return;
        }
        const std::uint64_t copies = std::max<std::size_t>(1, ev->seq_ids.size());
        report.parsed_events += copies;
        count_labels(report, ev->label, copies);
        sink(*ev);
    } else if (std::holds_alternative<Unmatched>(outcome)) {
        ++report.unmatched;
        if (options.unmatched_dump) *options.unmatched_dump << raw << '\n';
    } else {
        ++report.invalid;
        if (report.errors.size() < IngestReport::kMaxStoredErrors)
            report.errors.push_back({line_no, std::get<InvalidLine>(outcome).reason});
    }
}

}  // namespace

IngestReport parse_stream(std::istream& in, const LineParser& parser, const EventSink& sink,
                          const ParseOptions& options, const SourceFile* source) {
    IngestReport report;
    const bool tokens = parser.profile().event_source == EventSource::Tokens;
    std::size_t line_no = 0;

    // Logical records: physical lines, or single tokens for pre-tokenized traces.
    std::vector<std::string> chunk;
    const std::size_t chunk_size = std::max<std::size_t>(1, options.chunk_lines);
    std::vector<LineOutcome> outcomes;

    const auto flush = [&] {
        outcomes.assign(chunk.size(), Unmatched{});
        const std::size_t base = line_no;
        util::parallel_for(chunk.size(), options.jobs, [&](std::size_t i) {
            outcomes[i] = parser.parse(chunk[i], base + i + 1, source);
        });
        for (std::size_t i = 0; i < chunk.size(); ++i)
            account(report, std::move(outcomes[i]), base + i + 1, chunk[i], parser, sink, options);
        line_no += chunk.size();
        chunk.clear();
    };

    std::string raw;
    while (std::getline(in, raw)) {
        if (tokens) {
            for (auto tok : util::split_ws(raw)) {
                if (tok == "\r") continue;
                chunk.emplace_back(tok);
                if (chunk.size() >= chunk_size) flush();
            }
        } else {
            chunk.push_back(std::move(raw));
            if (chunk.size() >= chunk_size) flush();
        }
    }
    flush();
    if (in.bad()) {
        report.complete = false;
        report.failure = "read error after line " + std::to_string(line_no);
    }
    return report;
}

IngestReport parse_file(const std::filesystem::path& path, const LineParser& parser,
                        const EventSink& sink, const ParseOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        IngestReport r;
        r.complete = false;
        r.failure = "cannot open " + path.string();
        return r;
    }
    const DatasetProfile& p = parser.profile();
    SourceFile source{path.filename().string(), {}};
    if (p.label_source == LabelSource::FileDirectory) source.label = directory_label(path, p);
    IngestReport r = parse_stream(in, parser, sink, options, &source);
    r.files = 1;
    return r;
}

Label directory_label(const std::filesystem::path& relative_file, const DatasetProfile& profile) {
    const auto& normals = profile.normal_directories;
    const std::filesystem::path dir = relative_file.parent_path();
    for (const auto& part : dir)
        if (std::find(normals.begin(), normals.end(), part.string()) != normals.end()) return Label::normal();
    return Label::anomalous(dir.filename().string());
}

IngestReport parse_path(const std::filesystem::path& path, const LineParser& parser,
                        const EventSink& sink, const ParseOptions& options) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(path)) return parse_file(path, parser, sink, options);

    std::vector<fs::path> files;
    std::error_code ec;
    for (fs::recursive_directory_iterator it(path, ec), end; it != end; it.increment(ec)) {
        if (ec) break;
        if (it->is_regular_file()) files.push_back(it->path());
    }
    IngestReport report;
    if (ec) {
        report.complete = false;
        report.failure = "cannot list " + path.string() + ": " + ec.message();
        return report;
    }
    std::sort(files.begin(), files.end());
    const DatasetProfile& p = parser.profile();
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        if (!in) {
            report.complete = false;
            report.failure = "cannot open " + f.string();
            return report;
        }
        const fs::path rel = fs::relative(f, path);
        SourceFile source{rel.generic_string(), {}};
        if (p.label_source == LabelSource::FileDirectory) source.label = directory_label(rel, p);
        IngestReport part = parse_stream(in, parser, sink, options, &source);
        part.files = 1;
        report.merge(part);
        if (!report.complete) return report;
    }
    return report;
}

ParsedEventWriter::ParsedEventWriter(std::ostream& out) : out_(out) {
    out_ << "line_no\tevent_id\ttimestamp\tseq_id\tlabel\n";
}

void ParsedEventWriter::write(const ParsedEvent& e) {
    const std::string ts = has_timestamp(e.timestamp) ? util::format_double(e.timestamp) : "";
    const std::string label = to_string(e.label);
    const auto emit = [&](std::string_view id) {
        out_ << e.line_no << '\t' << e.event_id << '\t' << ts << '\t' << id << '\t' << label << '\n';
    };
    if (e.seq_ids.empty()) emit("");
    for (const auto& id : e.seq_ids) emit(id);
}

void read_parsed_events(std::istream& in, const EventSink& sink) {
    std::string raw;
    std::size_t line_no = 0;
    std::optional<ParsedEvent> pending;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("line_no", 0) == 0) continue;
        const auto f = util::split(line, '\t');
        if (f.size() != 5) throw ParseError("expected 5 tab-separated fields", line_no);
        ParsedEvent ev;
        const auto src_line = util::parse_int<std::size_t>(f[0]);
        const auto id = util::parse_int<EventId>(f[1]);
        if (!src_line || !id) throw ParseError("bad line number or event id", line_no);
        ev.line_no = *src_line;
        ev.event_id = *id;
        if (!f[2].empty()) {
            const auto ts = util::parse_double(f[2]);
            if (!ts) throw ParseError("bad timestamp", line_no);
            ev.timestamp = *ts;
        }
        if (!f[3].empty()) ev.seq_ids.emplace_back(f[3]);
        ev.label = parse_label(f[4]);

        if (pending && pending->line_no == ev.line_no && pending->event_id == ev.event_id &&
            !ev.seq_ids.empty() && !pending->seq_ids.empty()) {
            pending->seq_ids.push_back(std::move(ev.seq_ids.front()));
            continue;
        }
        if (pending) sink(*pending);
        pending = std::move(ev);
    }
    if (pending) sink(*pending);
}

std::vector<ParsedEvent> read_parsed_events(std::istream& in) {
    std::vector<ParsedEvent> out;
    read_parsed_events(in, [&](const ParsedEvent& e) { out.push_back(e); });
    return out;
}

}  // namespace logbench
