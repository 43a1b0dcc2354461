#include "logbench/catalog.hpp"

#include "logbench/util.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>

namespace logbench {

namespace {

constexpr std::string_view kWildcard = "<*>";

bool match_from(const std::vector<TemplateSegment>& segs, std::size_t seg, std::string_view msg,
                std::size_t pos, std::vector<std::string_view>& captures) {
    if (seg == segs.size()) return pos == msg.size();
    const TemplateSegment& s = segs[seg];
    if (!s.wildcard) {
        if (msg.substr(pos, s.text.size()) != s.text) return false;
        return match_from(segs, seg + 1, msg, pos + s.text.size(), captures);
    }
    if (seg + 1 == segs.size()) {
        captures.push_back(msg.substr(pos));
        return true;
    }
    const TemplateSegment& next = segs[seg + 1];
    if (next.wildcard) {
        captures.push_back(msg.substr(pos, 0));
        if (match_from(segs, seg + 1, msg, pos, captures)) return true;
        captures.pop_back();
        return false;
    }
    for (std::size_t at = msg.find(next.text, pos); at != std::string_view::npos;
         at = msg.find(next.text, at + 1)) {
        captures.push_back(msg.substr(pos, at - pos));
        if (match_from(segs, seg + 1, msg, at, captures)) return true;
        captures.pop_back();
    }
    return false;
}

ParamRole parse_role(std::string_view name, std::size_t line_no) {
    if (name == "seq") return ParamRole::SequenceId;
    if (name == "ts") return ParamRole::Timestamp;
    if (name == "other") return ParamRole::Other;
    throw ParseError("unknown parameter role '" + std::string(name) + "'", line_no);
}

EventId parse_event_id(std::string_view token, std::size_t line_no) {
    if (!token.empty() && (token.front() == 'E' || token.front() == 'e')) token.remove_prefix(1);
    const auto id = util::parse_int<EventId>(token);
    if (!id || *id <= 0) throw ParseError("event id must be a positive integer", line_no);
    return *id;
}

}  // namespace

std::size_t EventTemplate::literal_length() const {
    std::size_t n = 0;
    for (const auto& s : segments)
        if (!s.wildcard) n += s.text.size();
    return n;
}

std::size_t EventTemplate::wildcard_count() const {
    return static_cast<std::size_t>(
        std::count_if(segments.begin(), segments.end(), [](const auto& s) { return s.wildcard; }));
}

std::optional<std::vector<std::string_view>> EventTemplate::match(std::string_view message) const {
    std::vector<std::string_view> captures;
    captures.reserve(segments.size());
    if (!match_from(segments, 0, message, 0, captures)) return std::nullopt;
    return captures;
}

std::vector<TemplateSegment> parse_pattern(std::string_view pattern) {
    std::vector<TemplateSegment> segs;
    std::size_t pos = 0;
    while (pos < pattern.size()) {
        const std::size_t at = pattern.find(kWildcard, pos);
        if (at == std::string_view::npos) {
            segs.push_back({false, std::string(pattern.substr(pos))});
            break;
        }
        if (at > pos) segs.push_back({false, std::string(pattern.substr(pos, at - pos))});
        segs.push_back({true, {}});
        pos = at + kWildcard.size();
    }
    return segs;
}

TemplateCatalog::TemplateCatalog(std::vector<EventTemplate> templates,
                                 std::vector<std::string> warnings)
    : templates_(std::move(templates)), warnings_(std::move(warnings)) {
    std::set<EventId> seen;
    for (const auto& t : templates_) {
        if (t.event_id <= 0)
            throw ValidationError("event id " + std::to_string(t.event_id) + " is not positive");
        if (!seen.insert(t.event_id).second)
            throw ValidationError("duplicate event id " + std::to_string(t.event_id));
        if (t.literal_length() == 0 && !t.catch_all)
            throw ValidationError("template " + std::to_string(t.event_id) +
                                  " has no literal text and is not marked catch-all");
    }
    std::stable_sort(templates_.begin(), templates_.end(), [](const auto& a, const auto& b) {
        const auto la = a.literal_length(), lb = b.literal_length();
        if (la != lb) return la > lb;
        return a.event_id < b.event_id;
    });
    anchors_.reserve(templates_.size());
    for (const auto& t : templates_) {
        std::string longest;
        for (const auto& s : t.segments)
            if (!s.wildcard && s.text.size() > longest.size()) longest = s.text;
        anchors_.push_back(std::move(longest));
    }
}

const EventTemplate* TemplateCatalog::find(EventId id) const {
    for (const auto& t : templates_)
        if (t.event_id == id) return &t;
    return nullptr;
}

std::optional<TemplateCatalog::Match> TemplateCatalog::match(std::string_view message) const {
    for (std::size_t i = 0; i < templates_.size(); ++i) {
        if (!anchors_[i].empty() && message.find(anchors_[i]) == std::string_view::npos) continue;
        if (auto caps = templates_[i].match(message)) return Match{&templates_[i], std::move(*caps)};
    }
    return std::nullopt;
}

TemplateCatalog parse_template_catalog(std::istream& in) {
    std::vector<EventTemplate> templates;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (util::trim(line).empty() || util::trim(line).front() == '#') continue;

        std::string_view id_field, pattern, options;
        if (line.find('\t') != std::string_view::npos) {
            const auto fields = util::split(line, '\t');
            if (fields.size() > 3) throw ParseError("too many tab-separated fields", line_no);
            id_field = fields[0];
            pattern = fields.size() > 1 ? fields[1] : std::string_view{};
            options = fields.size() > 2 ? fields[2] : std::string_view{};
        } else {
            line = util::trim(line);
            const std::size_t sp = line.find(' ');
            if (sp == std::string_view::npos) throw ParseError("missing template pattern", line_no);
            id_field = line.substr(0, sp);
            pattern = line.substr(sp + 1);
        }
        id_field = util::trim(id_field);
        pattern = util::trim(pattern);
        if (pattern.empty()) throw ParseError("missing template pattern", line_no);

        EventTemplate t;
        t.event_id = parse_event_id(id_field, line_no);
        t.segments = parse_pattern(pattern);
        const std::size_t wildcards = t.wildcard_count();
        for (std::string_view opt : util::split(options, ',')) {
            opt = util::trim(opt);
            if (opt.empty()) continue;
            if (opt == "catch-all") {
                t.catch_all = true;
                continue;
            }
            const std::size_t eq = opt.find('=');
            if (eq == std::string_view::npos) throw ParseError("malformed template option", line_no);
            const auto idx = util::parse_int<std::size_t>(util::trim(opt.substr(eq + 1)));
            if (!idx || *idx >= wildcards)
                throw ParseError("parameter role refers to a missing wildcard", line_no);
            t.param_roles[*idx] = parse_role(util::trim(opt.substr(0, eq)), line_no);
        }
        if (t.literal_length() == 0 && !t.catch_all)
            throw ParseError("pattern without literal text must be marked catch-all", line_no);
        templates.push_back(std::move(t));
    }
    std::vector<std::string> warnings;
    if (templates.empty()) warnings.emplace_back("template catalog is empty");
    return TemplateCatalog(std::move(templates), std::move(warnings));
}

TemplateCatalog load_template_catalog(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open template catalog " + path.string());
    return parse_template_catalog(in);
}

}  // namespace logbench
