#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "abem/graph.hpp"

namespace abem {

/// Parses a SNAP-style edge list: one "u v" pair per line, whitespace
/// separated, '#' starts a comment line, blank lines ignored. Tokens after the
/// second are rejected.
///
/// Throws ParseError (with the line number) for malformed lines and for input
/// that has no edges at all.
Snapshot load_edge_list(std::istream& in, bool directed, std::size_t time_index = 0);

/// Reads the whole file, decompressing transparently when it is gzip.
std::string read_text_file(const std::filesystem::path& path);

Snapshot load_edge_list_file(const std::filesystem::path& path, bool directed);

/// Writes "u v" lines (undirected edges once, as min max), preceded by a
/// '#' header. Isolated nodes are not representable and are dropped.
void write_edge_list(std::ostream& out, const Snapshot& s);

/// Maps unix timestamps (UTC seconds) to bucket numbers.
class BucketSpec {
public:
    enum class Kind { Quarter, Month, Year, FixedWidth, Boundaries };

    static BucketSpec quarter() { return BucketSpec(Kind::Quarter); }
    static BucketSpec month() { return BucketSpec(Kind::Month); }
    static BucketSpec year() { return BucketSpec(Kind::Year); }
    /// Buckets [origin + i*width, origin + (i+1)*width).
    static BucketSpec fixed_width(std::int64_t width_seconds, std::int64_t origin = 0);
    /// Explicit cut points: bucket i holds timestamps in [b_{i-1}, b_i), with
    /// bucket 0 below b_0. Throws InvalidArgument unless strictly increasing.
    static BucketSpec boundaries(std::vector<std::int64_t> cuts);
    /// Parses "quarter", "month", "year", "fixed:<seconds>[@origin]",
    /// "boundaries:<t0>,<t1>,...".
    static BucketSpec parse(const std::string& text);

    std::int64_t bucket_of(std::int64_t timestamp) const;
    Kind kind() const noexcept { return kind_; }
    std::string to_string() const;

private:
    explicit BucketSpec(Kind k) : kind_(k) {}
    Kind kind_;
    std::int64_t width_ = 0;
    std::int64_t origin_ = 0;
    std::vector<std::int64_t> cuts_;
};

/// How edges of a temporal list populate snapshots.
enum class EdgePersistence {
    /// An edge is present only in buckets where it is observed.
    PerBucket,
    /// An edge is present from its first observation for as long as both
    /// endpoints remain in the network.
    UntilQuit,
};

struct TemporalLoadOptions {
    BucketSpec buckets = BucketSpec::quarter();
    /// A node is present from the bucket of its first interaction to the
    /// bucket of its last one, inclusive. When off, a node is present only in
    /// buckets where it has an edge (PerBucket) or from its first appearance
    /// on (UntilQuit).
    bool join_quit_rule = true;
    EdgePersistence persistence = EdgePersistence::UntilQuit;
    bool directed = false;
};

/// Parses "u v unix_timestamp" lines into one snapshot per non-empty bucket.
/// A snapshot's time index is its bucket number minus the first bucket's.
DynamicNetwork load_temporal_edge_list(std::istream& in, const TemporalLoadOptions& options);
DynamicNetwork load_temporal_edge_list_file(const std::filesystem::path& path,
                                            const TemporalLoadOptions& options);

/// Unix timestamp of 00:00 UTC on the first day of a calendar quarter.
std::int64_t quarter_start(int year, int quarter);

}  // namespace abem
