#include "abem/harness/report.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "abem/error.hpp"

namespace abem::harness {

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

std::string format_row(const ResultRow& r, const std::string& config_hash, std::uint64_t rng_seed) {
    std::string out = r.algorithm;
    out += ',' + std::to_string(r.k);
    out += ',' + std::to_string(r.snapshot);
    out += ',' + format_number(r.coverage);
    out += ',' + format_number(r.std_error);
    out += ',';
    if (r.seconds) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", *r.seconds);
        out += buf;
    }
    out += ',' + std::to_string(r.generations);
    out += ',' + std::to_string(r.pool_size);
    out += ',' + config_hash;
    out += ',' + std::to_string(rng_seed);
    return out;
}

Checkpoint::Checkpoint(std::filesystem::path path, std::string command, std::string config_hash,
                       std::uint64_t rng_seed, bool resume)
    : path_(std::move(path)), command_(std::move(command)), hash_(std::move(config_hash)), seed_(rng_seed) {
    if (!resume) {
        std::ofstream truncate(path_, std::ios::trunc);
        if (!truncate) throw Error("cannot write " + path_.string());
        return;
    }
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
        const auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) continue;
        if (j.value("command", "") != command_ || j.value("config_hash", "") != hash_ ||
            j.value("rng_seed", std::uint64_t{0}) != seed_ || !j.contains("output")) {
            continue;
        }
        done_[j.at("cell").get<std::string>()] = j.at("output").get<CellOutput>();
    }
}

const Checkpoint::CellOutput* Checkpoint::find(const std::string& cell) const {
    const auto it = done_.find(cell);
    return it == done_.end() ? nullptr : &it->second;
}

void Checkpoint::record(const std::string& cell, const CellOutput& output) {
    nlohmann::json j{{"command", command_}, {"config_hash", hash_}, {"rng_seed", seed_},
                     {"cell", cell},        {"output", output}};
    std::ofstream out(path_, std::ios::app);
    out << j.dump() << '\n';
    out.flush();
    if (!out) throw Error("cannot append to " + path_.string());
    done_[cell] = output;
}

void write_lines(const std::filesystem::path& path, const std::string& header,
                 const std::vector<std::string>& lines) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        if (!out) throw Error("cannot write " + tmp.string());
        out << header << '\n';
        for (const auto& l : lines) out << l << '\n';
        if (!out) throw Error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace abem::harness
