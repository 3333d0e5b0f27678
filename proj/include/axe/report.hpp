#pragma once

#include "axe/taint.hpp"

#include <json.hpp>

namespace axe {

struct Finding {
    std::string id;        // stable content hash
    std::string kind;      // ACCESS_CONTROL_OMISSION | ACCESS_CONTROL_VIOLATION_PATH |
                           // SEMANTIC_GRANULARITY | SEMANTIC_INTEGRITY
    std::string severity;  // "high" when trace confirmed, "info" otherwise
    std::string contract;
    uint32_t function_selector = 0;
    std::string function_name;
    nlohmann::ordered_json evidence;
    std::optional<VulnTrace> trace;
};

struct ReportMeta {
    std::string bridge_name;
    double assoc_threshold = 0.5;
    uint32_t max_path_depth = 64;
    uint32_t loop_unroll = 1;
    bool timed_out = false;
};

// One Finding per indicator, sorted by (contract, selector, kind), duplicate
// ids merged.
std::vector<Finding> assemble(const BridgeProgram& program,
                              const std::map<std::string, ContractAnalysis>& analyses,
                              const std::vector<AcFinding>& ac_findings,
                              const std::vector<SemFinding>& sem_findings,
                              const TraceSet& traces);

// Byte-deterministic render targets.
std::string render_structured(const std::vector<Finding>& findings, const ReportMeta& meta);
std::string render_text(const std::vector<Finding>& findings, const ReportMeta& meta);

// "Receive -> _transfer -> {received, balance}"
std::string format_trace(const VulnTrace& trace);

}  // namespace axe
