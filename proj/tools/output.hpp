#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace aqi_cli {

using ordered_json = nlohmann::ordered_json;

inline std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Csv {
public:
    explicit Csv(std::vector<std::string> header) {
        for (std::size_t i = 0; i < header.size(); ++i) text_ += (i ? "," : "") + header[i];
        text_ += '\n';
    }

    template <class... T>
    void row(const T&... cells) {
        bool first = true;
        ((text_ += (first ? "" : ","), text_ += cell(cells), first = false), ...);
        text_ += '\n';
    }

    const std::string& text() const { return text_; }

private:
    static std::string cell(double v) { return num(v); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    template <class I>
        requires std::is_integral_v<I>
    static std::string cell(I v) { return std::to_string(v); }

    std::string text_;
};

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Collects every output of a run and publishes them together once the run
// has finished, each file through a temporary name and a rename.
class RunOutputs {
public:
    RunOutputs(std::filesystem::path dir, std::string subcommand, std::string config_hash, std::string config_json)
        : dir_(std::move(dir)),
          subcommand_(std::move(subcommand)),
          config_hash_(std::move(config_hash)),
          config_json_(std::move(config_json)) {}

    void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }
    void add_csv(const std::string& name, const Csv& csv) { add(name, csv.text()); }

    // JSON sidecar tying `meta` to the manifest.
    void add_sidecar(const std::string& name, ordered_json meta) {
        ordered_json doc;
        doc["manifest"] = "manifest.json";
        doc["config_hash"] = config_hash_;
        doc["subcommand"] = subcommand_;
        doc["units"] = "atomic units; quadratures in the vacuum-variance-0.5 convention";
        for (auto it = meta.begin(); it != meta.end(); ++it) doc[it.key()] = it.value();
        add(name, doc.dump(2) + "\n");
    }

    void seed(const std::string& name, std::uint64_t value) { seeds_[name] = value; }

    template <class Fn>
    auto timed(const std::string& stage, Fn&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            timings_.emplace_back(stage, elapsed(t0));
        } else {
            auto r = fn();
            timings_.emplace_back(stage, elapsed(t0));
            return r;
        }
    }

    void publish(const std::string& version) {
        std::filesystem::create_directories(dir_);
        ordered_json manifest;
        manifest["schema"] = 1;
        manifest["tool"] = "aqi";
        manifest["subcommand"] = subcommand_;
        manifest["versions"] = {{"code", version}, {"manifest_schema", 1}, {"config_schema", 1}};
        manifest["config_hash"] = config_hash_;
        manifest["config"] = ordered_json::parse(config_json_);
        manifest["seeds"] = ordered_json::object();
        for (const auto& [k, v] : seeds_) manifest["seeds"][k] = v;
        manifest["outputs"] = ordered_json::array();
        for (const auto& [name, content] : files_)
            manifest["outputs"].push_back({{"file", name}, {"bytes", content.size()}, {"fnv1a", hex(fnv1a(content))}});
        manifest["timings_s"] = ordered_json::object();
        for (const auto& [k, v] : timings_) manifest["timings_s"][k] = v;
        for (const auto& [name, content] : files_) write_atomic(name, content);
        write_atomic("manifest.json", manifest.dump(2) + "\n");
    }

private:
    static double elapsed(std::chrono::steady_clock::time_point t0) {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    void write_atomic(const std::string& name, const std::string& content) {
        const auto final_path = dir_ / name;
        const auto tmp = dir_ / (name + ".partial");
        {
            std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
            os << content;
            if (!os) throw std::runtime_error("cannot write " + tmp.string());
        }
        std::filesystem::rename(tmp, final_path);
    }

    std::filesystem::path dir_;
    std::string subcommand_;
    std::string config_hash_;
    std::string config_json_;
    std::vector<std::pair<std::string, std::string>> files_;
    std::map<std::string, std::uint64_t> seeds_;
    std::vector<std::pair<std::string, double>> timings_;
};

}  // namespace aqi_cli
