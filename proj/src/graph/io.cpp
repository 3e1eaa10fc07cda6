#include "abem/graph_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>

#include "abem/error.hpp"

namespace abem {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        if (i >= s.size()) break;
        const auto start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        out.push_back(s.substr(start, i - start));
    }
    return out;
}

template <typename T>
bool parse_int(std::string_view token, T& value) {
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    return ec == std::errc{} && ptr == end;
}

// Yields (line number, content) for every non-blank, non-comment line.
template <typename Fn>
void for_each_data_line(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        fn(number, body);
    }
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    auto q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

Snapshot load_edge_list(std::istream& in, bool directed, std::size_t time_index) {
    std::vector<Edge> edges;
    for_each_data_line(in, [&](std::size_t number, std::string_view body) {
        const auto tokens = split_ws(body);
        if (tokens.size() != 2) {
            throw ParseError("expected two node ids, got " + std::to_string(tokens.size()) +
                                 " tokens",
                             number);
        }
        NodeId u = 0;
        NodeId v = 0;
        if (!parse_int(tokens[0], u) || !parse_int(tokens[1], v)) {
            throw ParseError("node ids must be non-negative integers", number);
        }
        edges.emplace_back(u, v);
    });
    if (edges.empty()) throw ParseError("edge list is empty", 0);
    return Snapshot::from_edges(time_index, {}, edges, directed);
}

std::string read_text_file(const std::filesystem::path& path) {
    // gzread passes uncompressed files through unchanged.
    std::unique_ptr<gzFile_s, decltype(&gzclose)> file(gzopen(path.c_str(), "rb"), &gzclose);
    if (!file) throw Error("cannot open " + path.string());
    std::string out;
    char buffer[1 << 16];
    for (;;) {
        const int n = gzread(file.get(), buffer, sizeof buffer);
        if (n < 0) throw Error("read failed: " + path.string());
        if (n == 0) break;
        out.append(buffer, static_cast<std::size_t>(n));
    }
    return out;
}

Snapshot load_edge_list_file(const std::filesystem::path& path, bool directed) {
    std::istringstream in(read_text_file(path));
    return load_edge_list(in, directed);
}

void write_edge_list(std::ostream& out, const Snapshot& s) {
    out << "# nodes " << s.node_count() << " edges " << s.edge_count()
        << (s.directed() ? " directed" : " undirected") << '\n';
    for (const auto& [u, v] : s.edges()) out << u << ' ' << v << '\n';
}

// ---------------------------------------------------------------------------

BucketSpec BucketSpec::fixed_width(std::int64_t width_seconds, std::int64_t origin) {
    if (width_seconds <= 0) throw InvalidArgument("bucket width must be positive");
    BucketSpec b(Kind::FixedWidth);
    b.width_ = width_seconds;
    b.origin_ = origin;
    return b;
}

BucketSpec BucketSpec::boundaries(std::vector<std::int64_t> cuts) {
    if (cuts.empty()) throw InvalidArgument("bucket boundaries are empty");
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        if (cuts[i] <= cuts[i - 1]) {
            throw InvalidArgument("non-monotone bucket mapping: boundaries must strictly increase");
        }
    }
    BucketSpec b(Kind::Boundaries);
    b.cuts_ = std::move(cuts);
    return b;
}

BucketSpec BucketSpec::parse(const std::string& text) {
    if (text == "quarter") return quarter();
    if (text == "month") return month();
    if (text == "year") return year();
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const auto head = text.substr(0, colon);
        const std::string_view rest = std::string_view(text).substr(colon + 1);
        if (head == "fixed") {
            std::int64_t width = 0;
            std::int64_t origin = 0;
            const auto at = rest.find('@');
            if (!parse_int(rest.substr(0, at), width) ||
                (at != std::string_view::npos && !parse_int(rest.substr(at + 1), origin))) {
                throw InvalidArgument("bad fixed bucket spec: " + text);
            }
            return fixed_width(width, origin);
        }
        if (head == "boundaries") {
            std::vector<std::int64_t> cuts;
            std::size_t start = 0;
            while (start <= rest.size()) {
                const auto comma = rest.find(',', start);
                const auto token = rest.substr(start, comma == std::string_view::npos
                                                          ? std::string_view::npos
                                                          : comma - start);
                std::int64_t value = 0;
                if (!parse_int(trim(token), value)) {
                    throw InvalidArgument("bad bucket boundary in: " + text);
                }
                cuts.push_back(value);
                if (comma == std::string_view::npos) break;
                start = comma + 1;
            }
            return boundaries(std::move(cuts));
        }
    }
    throw InvalidArgument("unknown bucket spec: " + text);
}

std::int64_t BucketSpec::bucket_of(std::int64_t timestamp) const {
    using namespace std::chrono;
    switch (kind_) {
        case Kind::FixedWidth:
            return floor_div(timestamp - origin_, width_);
        case Kind::Boundaries:
            return std::upper_bound(cuts_.begin(), cuts_.end(), timestamp) - cuts_.begin();
        default:
            break;
    }
    const sys_days day{floor<days>(sys_seconds{seconds{timestamp}})};
    const year_month_day ymd{day};
    const auto y = static_cast<std::int64_t>(static_cast<int>(ymd.year()));
    const auto m = static_cast<std::int64_t>(static_cast<unsigned>(ymd.month())) - 1;
    switch (kind_) {
        case Kind::Quarter:
            return y * 4 + m / 3;
        case Kind::Month:
            return y * 12 + m;
        default:
            return y;
    }
}

std::string BucketSpec::to_string() const {
    switch (kind_) {
        case Kind::Quarter:
            return "quarter";
        case Kind::Month:
            return "month";
        case Kind::Year:
            return "year";
        case Kind::FixedWidth:
            return "fixed:" + std::to_string(width_) + "@" + std::to_string(origin_);
        case Kind::Boundaries: {
            std::string s = "boundaries:";
            for (std::size_t i = 0; i < cuts_.size(); ++i) {
                if (i) s += ',';
                s += std::to_string(cuts_[i]);
            }
            return s;
        }
    }
    return {};
}

std::int64_t quarter_start(int year, int quarter) {
    using namespace std::chrono;
    const auto month = static_cast<unsigned>(1 + 3 * (quarter - 1));
    const sys_days day = std::chrono::year{year} / std::chrono::month{month} / 1;
    return duration_cast<seconds>(day.time_since_epoch()).count();
}

DynamicNetwork load_temporal_edge_list(std::istream& in, const TemporalLoadOptions& options) {
    struct Observation {
        NodeId u, v;
        std::int64_t bucket;
    };
    std::vector<Observation> obs;
    for_each_data_line(in, [&](std::size_t number, std::string_view body) {
        const auto tokens = split_ws(body);
        if (tokens.size() != 3) {
            throw ParseError("expected \"u v timestamp\", got " + std::to_string(tokens.size()) +
                                 " tokens",
                             number);
        }
        NodeId u = 0;
        NodeId v = 0;
        if (!parse_int(tokens[0], u) || !parse_int(tokens[1], v)) {
            throw ParseError("node ids must be non-negative integers", number);
        }
        std::int64_t ts = 0;
        if (!parse_int(tokens[2], ts)) throw ParseError("unparsable timestamp", number);
        obs.push_back({u, v, options.buckets.bucket_of(ts)});
    });
    if (obs.empty()) throw ParseError("temporal edge list is empty", 0);

    std::set<std::int64_t> buckets;
    std::map<NodeId, std::pair<std::int64_t, std::int64_t>> lifetime;  // first, last
    std::map<Edge, std::int64_t> first_seen;
    std::map<std::int64_t, std::vector<Edge>> per_bucket;

    const auto key = [&](NodeId u, NodeId v) {
        return options.directed ? Edge{u, v} : Edge{std::min(u, v), std::max(u, v)};
    };
    for (const auto& o : obs) {
        buckets.insert(o.bucket);
        for (NodeId n : {o.u, o.v}) {
            auto [it, inserted] = lifetime.try_emplace(n, o.bucket, o.bucket);
            if (!inserted) {
                it->second.first = std::min(it->second.first, o.bucket);
                it->second.second = std::max(it->second.second, o.bucket);
            }
        }
        if (o.u == o.v) continue;
        const auto e = key(o.u, o.v);
        auto [it, inserted] = first_seen.try_emplace(e, o.bucket);
        if (!inserted) it->second = std::min(it->second, o.bucket);
        per_bucket[o.bucket].push_back(e);
    }

    const auto base = *buckets.begin();
    std::vector<Snapshot> snapshots;
    snapshots.reserve(buckets.size());
    for (const auto b : buckets) {
        const auto alive = [&](NodeId n) {
            const auto& [first, last] = lifetime.at(n);
            if (options.join_quit_rule) return first <= b && b <= last;
            return first <= b;
        };
        std::vector<NodeId> nodes;
        std::vector<Edge> edges;
        if (options.persistence == EdgePersistence::PerBucket) {
            if (auto it = per_bucket.find(b); it != per_bucket.end()) edges = it->second;
        } else {
            for (const auto& [e, first] : first_seen) {
                if (first <= b && alive(e.first) && alive(e.second)) edges.push_back(e);
            }
        }
        const bool isolated_nodes_present =
            options.join_quit_rule || options.persistence == EdgePersistence::UntilQuit;
        if (isolated_nodes_present) {
            for (const auto& [n, span] : lifetime) {
                if (alive(n)) nodes.push_back(n);
            }
        }
        snapshots.push_back(Snapshot::from_edges(static_cast<std::size_t>(b - base), nodes,
                                                 edges, options.directed));
    }
    return DynamicNetwork(std::move(snapshots));
}

DynamicNetwork load_temporal_edge_list_file(const std::filesystem::path& path,
                                            const TemporalLoadOptions& options) {
    std::istringstream in(read_text_file(path));
    return load_temporal_edge_list(in, options);
}

}  // namespace abem
