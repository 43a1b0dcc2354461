#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace logbench {

/// Integer event type assigned by template matching. Valid ids are positive.
using EventId = std::int32_t;

/// Timestamps are seconds since the epoch; NaN marks an absent timestamp.
inline constexpr double kNoTimestamp = std::numeric_limits<double>::quiet_NaN();

inline bool has_timestamp(double t) { return !std::isnan(t); }

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input; carries the 1-based source line when known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Raised when a detector cannot be trained on the given data (e.g. timing without timestamps).
class NotApplicableError : public Error {
public:
    using Error::Error;
};

/// Ground truth of an event or a sequence.
struct Label {
    enum class Kind : std::uint8_t { Unlabeled, Normal, Anomalous };

    Kind kind = Kind::Unlabeled;
    std::string tag;  // anomaly category, may be empty

    static Label normal() { return {Kind::Normal, {}}; }
    static Label anomalous(std::string tag = {}) { return {Kind::Anomalous, std::move(tag)}; }
    static Label unlabeled() { return {}; }

    bool is_normal() const noexcept { return kind == Kind::Normal; }
    bool is_anomalous() const noexcept { return kind == Kind::Anomalous; }
    bool is_labeled() const noexcept { return kind != Kind::Unlabeled; }

    friend bool operator==(const Label&, const Label&) = default;
};

/// "normal", "anomaly", "anomaly:<tag>" or "unlabeled".
std::string to_string(const Label& label);
Label parse_label(std::string_view text);

/// Compact single-token form used for per-event label columns:
/// "-" normal, "?" unlabeled, "*" untagged anomaly, otherwise the tag.
std::string to_token(const Label& label);
Label parse_label_token(std::string_view token);

}  // namespace logbench
