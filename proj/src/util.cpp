#include "logbench/util.hpp"

#include "logbench/types.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

namespace logbench {

std::string to_string(const Label& label) {
    switch (label.kind) {
        case Label::Kind::Normal: return "normal";
        case Label::Kind::Anomalous: return label.tag.empty() ? "anomaly" : "anomaly:" + label.tag;
        case Label::Kind::Unlabeled: break;
    }
    return "unlabeled";
}

Label parse_label(std::string_view text) {
    text = util::trim(text);
    const std::string lower = util::to_lower(text);
    if (lower == "normal" || lower == "0" || lower == "-") return Label::normal();
    if (lower == "unlabeled" || lower == "?" || lower.empty()) return Label::unlabeled();
    if (lower == "anomaly" || lower == "anomalous" || lower == "abnormal" || lower == "1")
        return Label::anomalous();
    if (lower.rfind("anomaly:", 0) == 0) return Label::anomalous(std::string(text.substr(8)));
    return Label::anomalous(std::string(text));
}

std::string to_token(const Label& label) {
    switch (label.kind) {
        case Label::Kind::Normal: return "-";
        case Label::Kind::Unlabeled: return "?";
        case Label::Kind::Anomalous: break;
    }
    if (label.tag.empty()) return "*";
    std::string tag = label.tag;
    for (char& c : tag)
        if (std::isspace(static_cast<unsigned char>(c))) c = '_';
    return tag;
}

Label parse_label_token(std::string_view token) {
    if (token == "-") return Label::normal();
    if (token == "?") return Label::unlabeled();
    if (token == "*") return Label::anomalous();
    return Label::anomalous(std::string(token));
}

}  // namespace logbench

namespace logbench::util {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string_view> split(std::string_view s, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(delim, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    double value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

std::string format_double(double v) {
    std::array<char, 400> buf{};
    const double mag = std::abs(v);
    // Plain notation for the usual range (epoch seconds, scores), exponent otherwise.
    const auto fmt = (mag == 0.0 || (mag >= 1e-4 && mag < 1e16)) ? std::chars_format::fixed : std::chars_format::general;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, fmt);
    if (ec != std::errc{}) return "nan";
    return std::string(buf.data(), ptr);
}

std::string format_fixed(double v, int digits) {
    std::array<char, 64> buf{};
    const int n = std::snprintf(buf.data(), buf.size(), "%.*f", digits, v);
    return std::string(buf.data(), static_cast<std::size_t>(n));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t x;
    do x = rng();
    while (x >= limit);
    return x % n;
}

double uniform_real(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

std::size_t default_jobs() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

}  // namespace logbench::util
