#pragma once

#include "logbench/sequencing.hpp"

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#ifndef LOGBENCH_FIXTURE_DIR
#define LOGBENCH_FIXTURE_DIR "data/fixtures"
#endif

namespace testing {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(LOGBENCH_FIXTURE_DIR) / name;
}

inline logbench::Sequence seq(std::vector<logbench::EventId> events,
                              logbench::Label label = logbench::Label::normal(), std::string id = {}) {
    logbench::Sequence s;
    s.seq_id = std::move(id);
    s.events = std::move(events);
    s.label = std::move(label);
    return s;
}

inline logbench::Sequence anom(std::vector<logbench::EventId> events, std::string id = {}) {
    return seq(std::move(events), logbench::Label::anomalous(), std::move(id));
}

inline logbench::Sequence timed(std::vector<logbench::EventId> events, std::vector<double> ts,
                                logbench::Label label = logbench::Label::normal()) {
    auto s = seq(std::move(events), std::move(label));
    s.timestamps = std::move(ts);
    return s;
}

/// Scratch directory removed on destruction.
struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("logbench_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

}  // namespace testing
