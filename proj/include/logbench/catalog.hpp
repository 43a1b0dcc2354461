#pragma once

#include "logbench/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace logbench {

enum class ParamRole { SequenceId, Timestamp, Other };

/// One literal run of text or one `<*>` wildcard slot.
struct TemplateSegment {
    bool wildcard = false;
    std::string text;

    friend bool operator==(const TemplateSegment&, const TemplateSegment&) = default;
};

/// Pattern mapping raw log messages to an event type.
///
/// Wildcards match lazily up to the next literal (the leftmost placement that
/// still lets the rest of the pattern match); a trailing wildcard takes the
/// remainder of the message. Matching is anchored at both ends.
struct EventTemplate {
    EventId event_id = 0;
    std::vector<TemplateSegment> segments;
    std::map<std::size_t, ParamRole> param_roles;  // wildcard index -> role
    bool catch_all = false;

    std::size_t literal_length() const;
    std::size_t wildcard_count() const;

    /// Captured wildcard values on success. Views point into `message`.
    std::optional<std::vector<std::string_view>> match(std::string_view message) const;
};

/// Splits a pattern on `<*>`; adjacent literal text is kept verbatim.
std::vector<TemplateSegment> parse_pattern(std::string_view pattern);

/// Immutable, ordered set of templates. Safe to share across threads.
class TemplateCatalog {
public:
    struct Match {
        const EventTemplate* tmpl = nullptr;
        std::vector<std::string_view> params;
    };

    TemplateCatalog() = default;

    /// Validates id uniqueness and orders templates longest-literal first,
    /// then by ascending event id. Throws ValidationError on duplicates.
    explicit TemplateCatalog(std::vector<EventTemplate> templates,
                             std::vector<std::string> warnings = {});

    const std::vector<EventTemplate>& templates() const noexcept { return templates_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    bool empty() const noexcept { return templates_.empty(); }
    std::size_t size() const noexcept { return templates_.size(); }
    const EventTemplate* find(EventId id) const;

    /// First template in catalog order that matches the whole message.
    std::optional<Match> match(std::string_view message) const;

private:
    std::vector<EventTemplate> templates_;
    std::vector<std::string> anchors_;  // longest literal per template, used as a prefilter
    std::vector<std::string> warnings_;
};

/// Reads `<id><TAB><pattern>[<TAB><options>]` lines. The id may carry an `E`
/// prefix; without tabs the id is separated from the pattern by whitespace.
/// Options are comma separated: `seq=<k>`, `ts=<k>`, `other=<k>` (k is the
/// 0-based wildcard index) and `catch-all`. Blank lines and `#` comments are skipped.
TemplateCatalog parse_template_catalog(std::istream& in);
TemplateCatalog load_template_catalog(const std::filesystem::path& path);

}  // namespace logbench
