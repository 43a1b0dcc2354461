#include "logbench/profile.hpp"

#include "logbench/util.hpp"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <istream>
#include <regex>

#ifndef LOGBENCH_DEFAULT_PROFILE_DIR
#define LOGBENCH_DEFAULT_PROFILE_DIR "profiles"
#endif

namespace logbench {

namespace {

std::vector<std::string> split_list(std::string_view value, char delim) {
    std::vector<std::string> out;
    for (auto part : (delim == ' ' ? util::split_ws(value) : util::split(value, delim))) {
        part = util::trim(part);
        if (!part.empty()) out.emplace_back(part);
    }
    return out;
}

bool parse_bool(std::string_view v, std::size_t line_no) {
    const auto lower = util::to_lower(v);
    if (lower == "true" || lower == "yes" || lower == "1") return true;
    if (lower == "false" || lower == "no" || lower == "0") return false;
    throw ParseError("expected a boolean, got '" + std::string(v) + "'", line_no);
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

void DatasetProfile::validate() const {
    if (name.empty()) throw ValidationError("profile has no name");
    for (const auto& f : timestamp_fields)
        if (!contains(preamble, f))
            throw ValidationError("timestamp field '" + f + "' is not part of the preamble");
    if (has_timestamps() && timestamp_format.empty())
        throw ValidationError("timestamp fields given without timestamp_format");
    switch (seq_source) {
        case SeqIdSource::Regex:
            if (seq_id_pattern.empty()) throw ValidationError("seq_source=regex needs seq_id_pattern");
            try {
                std::regex probe(seq_id_pattern);
            } catch (const std::regex_error& e) {
                throw ValidationError("invalid seq_id_pattern: " + std::string(e.what()));
            }
            break;
        case SeqIdSource::Field:
            if (!contains(preamble, seq_field))
                throw ValidationError("seq_field '" + seq_field + "' is not part of the preamble");
            break;
        case SeqIdSource::File:
        case SeqIdSource::None: break;
    }
    if (label_source == LabelSource::EventMarker && !contains(preamble, label_field))
        throw ValidationError("label_field '" + label_field + "' is not part of the preamble");
    if (event_source == EventSource::Tokens && !preamble.empty())
        throw ValidationError("event_source=tokens does not support a preamble");
}

DatasetProfile parse_profile(std::istream& in) {
    DatasetProfile p;
    bool have_label_source = false;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = util::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
        const std::string key(util::trim(line.substr(0, eq)));
        const std::string_view value = util::trim(line.substr(eq + 1));

        if (key == "name") {
            p.name = value;
        } else if (key == "preamble") {
            p.preamble = split_list(value, ' ');
        } else if (key == "timestamp_fields") {
            p.timestamp_fields = split_list(value, ' ');
        } else if (key == "timestamp_format") {
            p.timestamp_format = value;
        } else if (key == "base_year") {
            const auto y = util::parse_int<int>(value);
            if (!y) throw ParseError("base_year must be an integer", line_no);
            p.base_year = *y;
        } else if (key == "seq_source") {
            if (value == "regex") p.seq_source = SeqIdSource::Regex;
            else if (value == "field") p.seq_source = SeqIdSource::Field;
            else if (value == "file") p.seq_source = SeqIdSource::File;
            else if (value == "none") p.seq_source = SeqIdSource::None;
            else throw ParseError("unknown seq_source '" + std::string(value) + "'", line_no);
        } else if (key == "seq_id_pattern") {
            p.seq_id_pattern = value;
        } else if (key == "seq_field") {
            p.seq_field = value;
        } else if (key == "label_source") {
            if (have_label_source) throw ParseError("label_source given more than once", line_no);
            have_label_source = true;
            if (value == "sequence-file") p.label_source = LabelSource::SequenceFile;
            else if (value == "event-marker") p.label_source = LabelSource::EventMarker;
            else if (value == "file-directory") p.label_source = LabelSource::FileDirectory;
            else throw ParseError("unknown label_source '" + std::string(value) + "'", line_no);
        } else if (key == "label_field") {
            p.label_field = value;
        } else if (key == "normal_marker") {
            p.normal_marker = value;
        } else if (key == "normal_directories") {
            p.normal_directories = split_list(value, ',');
        } else if (key == "unlisted_normal") {
            p.unlisted_normal = parse_bool(value, line_no);
        } else if (key == "event_source") {
            if (value == "templates") p.event_source = EventSource::Templates;
            else if (value == "tokens") p.event_source = EventSource::Tokens;
            else throw ParseError("unknown event_source '" + std::string(value) + "'", line_no);
        } else {
            throw ParseError("unknown profile key '" + key + "'", line_no);
        }
    }
    if (!have_label_source) throw ValidationError("profile must set label_source");
    p.validate();
    return p;
}

DatasetProfile load_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open profile " + path.string());
    return parse_profile(in);
}

std::filesystem::path profile_directory() {
    if (const char* env = std::getenv("LOGBENCH_PROFILE_DIR"); env && *env) return env;
    return LOGBENCH_DEFAULT_PROFILE_DIR;
}

std::vector<std::string> bundled_profile_names(const std::filesystem::path& dir) {
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".profile")
            names.push_back(entry.path().stem().string());
    std::sort(names.begin(), names.end());
    return names;
}

DatasetProfile resolve_profile(const std::string& name_or_path, const std::filesystem::path& dir) {
    const std::filesystem::path as_path(name_or_path);
    if (std::filesystem::is_regular_file(as_path)) return load_profile(as_path);
    const auto bundled = dir / (name_or_path + ".profile");
    if (std::filesystem::is_regular_file(bundled)) return load_profile(bundled);
    throw ValidationError("unknown profile '" + name_or_path + "'");
}

double parse_timestamp(std::string_view text, const DatasetProfile& profile) {
    text = util::trim(text);
    if (text.empty()) return kNoTimestamp;
    if (profile.timestamp_format == "epoch") {
        const auto v = util::parse_double(text);
        return v ? *v : kNoTimestamp;
    }
    const std::string buf(text);
    std::tm tm{};
    tm.tm_year = profile.base_year - 1900;
    tm.tm_mday = 1;
    const char* rest = strptime(buf.c_str(), profile.timestamp_format.c_str(), &tm);
    if (!rest) return kNoTimestamp;
    double fraction = 0.0;
    if (*rest == '.' || *rest == ',') {
        const char* digits = rest + 1;
        const char* end = digits;
        while (*end >= '0' && *end <= '9') ++end;
        if (end == digits) return kNoTimestamp;
        const auto f = util::parse_double("0." + std::string(digits, end));
        if (!f) return kNoTimestamp;
        fraction = *f;
        rest = end;
    }
    if (*rest != '\0') return kNoTimestamp;
    return static_cast<double>(timegm(&tm)) + fraction;
}

}  // namespace logbench
