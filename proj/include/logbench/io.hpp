#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace logbench {

/// Writes to `<path>.tmp.<pid>` and renames onto `path` on commit(). An uncommitted
/// file is removed on destruction, so readers never see partial output.
class AtomicFile {
public:
    explicit AtomicFile(std::filesystem::path path);
    ~AtomicFile();
    AtomicFile(const AtomicFile&) = delete;
    AtomicFile& operator=(const AtomicFile&) = delete;

    std::ofstream& stream() { return out_; }
    void commit();

private:
    std::filesystem::path path_;
    std::filesystem::path tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

/// Convenience: write `content` atomically.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Lowercase hex SHA-256 of a file. A directory is hashed over its sorted regular files
/// (relative path and content digest of each).
std::string sha256_path(const std::filesystem::path& path);
std::string sha256_hex(const std::string& data);

struct RunManifest {
    std::string tool_version;
    std::vector<std::string> command_line;
    std::vector<std::pair<std::string, std::string>> config;  // resolved settings, in order
    std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256
    std::vector<std::pair<std::string, std::uint64_t>> sample_sizes;
    std::vector<std::pair<std::string, double>> timings_s;
    std::vector<std::string> warnings;

    /// SHA-256 over the resolved config entries.
    std::string config_hash() const;
    std::string to_json() const;
};

/// Wall-clock stopwatch for manifest timings.
class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace logbench
