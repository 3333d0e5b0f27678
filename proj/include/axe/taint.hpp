#pragma once

#include "axe/association.hpp"

#include <set>

namespace axe {

struct TaintSeed {
    DfgNode node;
    std::string origin;  // source descriptor (opcode site / parameter)
};

// Seeds: every CALLDATALOAD/CALLDATACOPY/CALLER/ORIGIN/CALLVALUE/CALLDATASIZE
// occurrence plus every public-function parameter. Interns any node not yet
// present in the graph so unused sources are still tracked.
std::vector<TaintSeed> seed_sources(const BridgeProgram& program, XDfg& xdfg);

struct TaintResult {
    std::vector<std::set<uint32_t>> tainted_by;  // node id -> seed indexes
    size_t iterations = 0;

    bool tainted(uint32_t node) const {
        return node < tainted_by.size() && !tainted_by[node].empty();
    }
};

// Monotone forward fixpoint over the xDFG edges (the Emitting/Informing
// restriction is already baked into the graph construction).
TaintResult propagate(const XDfg& xdfg, const std::vector<TaintSeed>& seeds,
                      const Deadline& deadline);

// Pure graph flavor for oracle comparison: per-seed forward reachability.
std::vector<std::set<uint32_t>> propagate_core(size_t node_count,
                                               const std::vector<std::pair<uint32_t, uint32_t>>& edges,
                                               const std::vector<uint32_t>& seed_nodes,
                                               const Deadline& deadline);

// Taint sinks per the source/sink table: external calls, storage writes,
// BALANCE/ADDRESS reads, and the client node.
struct SinkHit {
    std::string kind;  // "external-call" | "sstore" | "balance" | "address" | "client"
    std::string address;
    uint32_t offset = 0;
    bool is_tainted = false;
};
std::vector<SinkHit> collect_sinks(const BridgeProgram& program, const XDfg& xdfg,
                                   const TaintResult& taint);

// ---------------------------------------------------------------------------
// Vulnerability traces
// ---------------------------------------------------------------------------

struct VulnTrace {
    struct Hop {
        std::string address;
        uint32_t selector = 0;
        bool is_public = true;
        std::string name;
    };
    struct Affected {
        U256 slot{};
        StorageMeaning meaning = StorageMeaning::Other;
        std::string name;
    };
    std::vector<Hop> entry_chain;
    std::vector<Affected> affected;
};

struct TraceSet {
    // Parallel to the finding lists; nullopt when Condition-1 failed and the
    // indicator is demoted to informational.
    std::vector<std::optional<VulnTrace>> access;
    std::vector<std::optional<VulnTrace>> semantic;
};

TraceSet discover_traces(const BridgeProgram& program,
                         const std::map<std::string, ContractAnalysis>& analyses,
                         const std::vector<AcFinding>& ac_findings,
                         const std::vector<SemFinding>& sem_findings, const XDfg& xdfg,
                         const TaintResult& taint);

}  // namespace axe
