#pragma once

#include "axe/report.hpp"

namespace axe {

struct RunConfig {
    std::string manifest_path;
    std::string out_path;  // empty: standard output
    enum class Format : uint8_t { Structured, Text } format = Format::Structured;
    double assoc_threshold = 0.5;
    uint32_t max_path_depth = 64;
    uint32_t loop_unroll = 1;
    uint64_t timeout_secs = 600;
    bool dump_graphs = false;

    // Which knobs were set explicitly on the command line (they outrank the
    // manifest-embedded config, which outranks the defaults).
    bool cli_assoc_threshold = false;
    bool cli_max_path_depth = false;
    bool cli_loop_unroll = false;
    bool cli_timeout_secs = false;

    void validate() const;  // UsageError on out-of-range values
};

struct AnalysisOutcome {
    std::string bridge_name;
    std::vector<Finding> findings;
    std::string report;      // rendered in the requested format
    std::string graph_dump;  // xCFG + xDFG listing when dump_graphs is set
    bool timed_out = false;
    RunConfig effective;     // config after precedence resolution

    size_t high_count() const;
};

// End-to-end: load manifest, bind bytecode, run every analysis stage under
// the deadline, assemble and render. Throws ManifestError/RoleError/
// BindError/UsageError for malformed inputs; a deadline hit is reported via
// timed_out with whatever completed.
AnalysisOutcome analyze_bridge(const RunConfig& config);

}  // namespace axe
