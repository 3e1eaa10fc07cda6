#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace abem::harness {

/// One (algorithm, k, snapshot) result.
struct ResultRow {
    std::string algorithm;
    std::size_t k = 0;
    std::size_t snapshot = 0;  // time index
    double coverage = 0.0;
    double std_error = 0.0;
    std::optional<double> seconds;  // empty when timing is off
    std::size_t generations = 0;
    std::size_t pool_size = 0;
};

inline constexpr const char* kResultHeader =
    "algorithm,k,snapshot,coverage,std_error,seconds,generations,pool_size,config_hash,rng_seed";
inline constexpr const char* kTraceHeader = "generation,best_fitness,avg_fitness,pool_size";

std::string format_row(const ResultRow& row, const std::string& config_hash, std::uint64_t rng_seed);
std::string format_number(double x);

/// Line-oriented progress log of completed cells. Each line is a JSON object
/// holding the cell key and the text lines that cell contributes to the
/// outputs; a torn final line is ignored on reload. Entries written under a
/// different command, config hash or seed are ignored.
class Checkpoint {
public:
    Checkpoint(std::filesystem::path path, std::string command, std::string config_hash,
               std::uint64_t rng_seed, bool resume);

    /// Output lines of a finished cell, keyed by output file name.
    using CellOutput = std::map<std::string, std::vector<std::string>>;

    const CellOutput* find(const std::string& cell) const;
    void record(const std::string& cell, const CellOutput& output);

private:
    std::filesystem::path path_;
    std::string command_;
    std::string hash_;
    std::uint64_t seed_;
    std::map<std::string, CellOutput> done_;
};

/// Writes `lines` after `header`, each newline-terminated, replacing the file
/// atomically.
void write_lines(const std::filesystem::path& path, const std::string& header,
                 const std::vector<std::string>& lines);

}  // namespace abem::harness
