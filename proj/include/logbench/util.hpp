#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace logbench::util {

std::string_view trim(std::string_view s);

/// Splits on runs of spaces/tabs; empty fields are never produced.
std::vector<std::string_view> split_ws(std::string_view s);

/// Splits on a single delimiter character; keeps empty fields.
std::vector<std::string_view> split(std::string_view s, char delim);

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
    Int value{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

std::optional<double> parse_double(std::string_view s);

/// Shortest decimal representation that round-trips.
std::string format_double(double v);

/// Fixed-point with `digits` decimals; used for metric columns.
std::string format_fixed(double v, int digits);

std::string to_lower(std::string_view s);

/// SplitMix64 finalizer; used to derive independent RNG streams.
std::uint64_t mix64(std::uint64_t x);

/// Unbiased integer in [0, n) by rejection; stable across standard libraries.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

/// Uniform real in [lo, hi) from the top 53 bits of one draw.
double uniform_real(std::mt19937_64& rng, double lo, double hi);

std::size_t default_jobs();

/// Runs body(i) for i in [0, n) on up to `jobs` threads. The first exception is rethrown.
template <typename Body>
void parallel_for(std::size_t n, std::size_t jobs, Body&& body) {
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += jobs) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace logbench::util
