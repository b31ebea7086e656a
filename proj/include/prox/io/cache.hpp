// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <unistd.h>

#include <json.hpp>
#include <openssl/evp.h>

#include "prox/core/error.hpp"
#include "prox/core/version.hpp"

/// Content-addressed result store: one file per key, published by atomic rename.
namespace prox::io {

inline std::string sha256_hex(const std::string& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("io", "sha256: digest failed");
    }
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

inline std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

struct CacheEntry {
    std::string key;
    std::string value;
    std::string created;
};

class Cache {
public:
    static constexpr const char* env_var = "PROX_CACHE_DIR";

    explicit Cache(std::filesystem::path dir, std::ostream* warnings = &std::cerr)
        : dir_(std::move(dir)), warnings_(warnings)
    {
        if (dir_.empty()) throw PreconditionError("cache: empty directory");
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw Error("io", "cache: cannot create " + dir_.string() + ": " + ec.message());
    }

    /// The environment variable overrides the configured directory; no directory means no cache.
    static std::optional<Cache> open(const std::optional<std::filesystem::path>& configured)
    {
        if (const char* env = std::getenv(env_var); env && *env) return Cache(env);
        if (configured && !configured->empty()) return Cache(*configured);
        return std::nullopt;
    }

    /// Hex SHA-256 of the canonical (key-sorted) JSON of the inputs.
    static std::string key(const std::string& operation, const nlohmann::json& parameters,
                           const nlohmann::json& tolerances, int revision = solver_revision)
    {
        nlohmann::json k = {{"operation", operation},
                            {"parameters", parameters},
                            {"tolerances", tolerances},
                            {"solver_revision", revision}};
        return sha256_hex(k.dump());
    }

    const std::filesystem::path& dir() const { return dir_; }

    std::filesystem::path path_of(const std::string& key) const { return dir_ / (key + ".json"); }

    /// The stored entry, or nothing on a miss; an unreadable or inconsistent entry is a miss with a warning.
    std::optional<CacheEntry> get(const std::string& key) const
    {
        const auto p = path_of(key);
        std::ifstream in(p, std::ios::binary);
        if (!in) return std::nullopt;
        std::ostringstream buf;
        buf << in.rdbuf();
        try {
            const auto doc = nlohmann::json::parse(buf.str());
            CacheEntry e{doc.at("key").get<std::string>(), doc.at("value").get<std::string>(),
                         doc.at("created").get<std::string>()};
            if (e.key != key) throw std::runtime_error("key mismatch");
            if (doc.at("digest").get<std::string>() != sha256_hex(e.value)) throw std::runtime_error("digest mismatch");
            return e;
        } catch (const std::exception& ex) {
            if (warnings_) *warnings_ << "warning: ignoring corrupt cache entry " << p.string() << ": " << ex.what() << "\n";
            return std::nullopt;
        }
    }

    void put(const std::string& key, const std::string& value) const
    {
        const nlohmann::json doc = {
            {"key", key}, {"created", utc_timestamp()}, {"digest", sha256_hex(value)}, {"value", value}};
        static std::atomic<unsigned long> counter{0};
        std::ostringstream tmp_name;
        tmp_name << ".tmp-" << key << "-" << ::getpid() << "-" << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "-"
                 << counter.fetch_add(1) << "-" << std::chrono::steady_clock::now().time_since_epoch().count();
        const auto tmp = dir_ / tmp_name.str();
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw Error("io", "cache: cannot write " + tmp.string());
            out << doc.dump();
            out.flush();
            if (!out) throw Error("io", "cache: write failed for " + tmp.string());
        }
        std::error_code ec;
        std::filesystem::rename(tmp, path_of(key), ec);
        if (ec) {
            std::filesystem::remove(tmp, ec);
            throw Error("io", "cache: cannot publish entry " + key);
        }
    }

private:
    std::filesystem::path dir_;
    std::ostream* warnings_;
};

} // namespace prox::io
