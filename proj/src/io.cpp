#include "logbench/io.hpp"

#include "logbench/types.hpp"

#include <json.hpp>
#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <memory>

namespace logbench {

namespace fs = std::filesystem;

AtomicFile::AtomicFile(fs::path path) : path_(std::move(path)) {
    if (path_.has_parent_path()) fs::create_directories(path_.parent_path());
    tmp_ = path_;
    tmp_ += ".tmp." + std::to_string(::getpid());
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot create " + tmp_.string());
}

AtomicFile::~AtomicFile() {
    if (committed_) return;
    out_.close();
    std::error_code ec;
    fs::remove(tmp_, ec);
}

void AtomicFile::commit() {
    out_.flush();
    if (!out_) throw IoError("write failed for " + path_.string());
    out_.close();
    std::error_code ec;
    fs::rename(tmp_, path_, ec);
    if (ec) throw IoError("cannot rename " + tmp_.string() + " to " + path_.string() + ": " + ec.message());
    committed_ = true;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    AtomicFile f(path);
    f.stream() << content;
    f.commit();
}

namespace {

struct Digest {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx{EVP_MD_CTX_new(), &EVP_MD_CTX_free};

    Digest() {
        if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("SHA-256 init failed");
    }
    void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx.get(), data, n); }
    std::string hex() {
        std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
        static constexpr char kHex[] = "0123456789abcdef";
        std::string s;
        for (unsigned int i = 0; i < len; ++i) {
            s += kHex[md[i] >> 4];
            s += kHex[md[i] & 15];
        }
        return s;
    }
};

std::string sha256_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    Digest d;
    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        d.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return d.hex();
}

}  // namespace

std::string sha256_hex(const std::string& data) {
    Digest d;
    d.update(data.data(), data.size());
    return d.hex();
}

std::string sha256_path(const fs::path& path) {
    if (!fs::is_directory(path)) return sha256_file(path);
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(path))
        if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::string listing;
    for (const auto& f : files) listing += fs::relative(f, path).generic_string() + '\t' + sha256_file(f) + '\n';
    return sha256_hex(listing);
}

std::string RunManifest::config_hash() const {
    std::string s;
    for (const auto& [k, v] : config) s += k + '=' + v + '\n';
    return sha256_hex(s);
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = "logbench";
    j["version"] = tool_version;
    j["command_line"] = command_line;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config) cfg[k] = v;
    j["config"] = cfg;
    j["config_hash"] = config_hash();
    nlohmann::ordered_json in = nlohmann::ordered_json::array();
    for (const auto& [p, h] : inputs) in.push_back({{"path", p}, {"sha256", h}});
    j["inputs"] = in;
    nlohmann::ordered_json sizes = nlohmann::ordered_json::object();
    for (const auto& [k, v] : sample_sizes) sizes[k] = v;
    j["sample_sizes"] = sizes;
    nlohmann::ordered_json t = nlohmann::ordered_json::object();
    for (const auto& [k, v] : timings_s) t[k] = v;
    j["timings_s"] = t;
    j["warnings"] = warnings;
    return j.dump(2) + "\n";
}

}  // namespace logbench
