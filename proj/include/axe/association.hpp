#pragma once

#include "axe/paths.hpp"
#include "axe/xgraph.hpp"

#include <map>

namespace axe {

struct AnalysisOptions {
    double assoc_threshold = 0.5;
    uint32_t max_path_depth = 64;
    uint32_t loop_unroll = 1;
};

// Inference pattern priors (pattern table values, applied verbatim).
namespace pattern {
constexpr double kControlFlowSingle = 0.95;  // P1
constexpr double kControlFlowSet = 0.60;     // P2
constexpr double kSameBlock = 0.60;          // P3
constexpr double kSemanticCorrelation = 0.70;  // P4
constexpr double kDataFlowDependency = 0.80;   // P5
}  // namespace pattern

struct AssociationEvidence {
    std::string pattern;       // "P1".."P5"
    double prior = 0;
    int source_resource = -1;  // transferring resource, -1 for direct patterns

    bool operator==(const AssociationEvidence& o) const {
        return pattern == o.pattern && source_resource == o.source_resource;
    }
};

struct Association {
    size_t check_idx = 0;
    size_t resource_idx = 0;
    std::vector<uint32_t> path_ids;
    std::vector<AssociationEvidence> evidence;
    double combined = 0;
};

// 1 - prod(1 - p_i); order-invariant, monotone, clamped to [0,1].
double noisy_or(const std::vector<double>& priors);

// Everything the access-control detectors need for one contract.
struct ContractAnalysis {
    const ContractProgram* program = nullptr;
    std::vector<SecurityCheck> checks;     // all functions, classified
    std::vector<Resource> resources;       // all functions
    std::vector<PathRecord> paths;
    std::vector<Association> associations;
    bool paths_truncated = false;

    const Association* association_of(size_t check_idx, size_t resource_idx) const;
};

ContractAnalysis analyze_contract(const ContractProgram& program, const XDfg& xdfg,
                                  const AnalysisOptions& options, const Deadline& deadline);

// Direct + transferred pattern evidence combined by noisy-OR to a fixpoint.
std::vector<Association> infer_associations(const ContractProgram& program,
                                            const std::vector<SecurityCheck>& checks,
                                            const std::vector<Resource>& resources,
                                            const std::vector<PathRecord>& paths,
                                            const XDfg& xdfg, const Deadline& deadline);

struct AcFinding {
    enum class Kind : uint8_t { Omission, ViolationPath };
    Kind kind = Kind::Omission;
    std::string address;
    uint32_t function_selector = 0;
    bool function_public = true;

    // Omission
    std::string category_id;
    Perspective perspective = Perspective::Unclassified;
    std::vector<Feature> missing_features;
    std::vector<Feature> present_features;

    // ViolationPath
    uint32_t path_subset = 0;    // the under-guarded path
    uint32_t path_superset = 0;
    std::vector<Perspective> missing_perspectives;

    int anchor_resource = -1;  // index into the contract's resource list
};

// Compares per-function effective coverage (own checks plus associated checks
// above the threshold) against the role-required categories.
std::vector<AcFinding> detect_omission(const BridgeProgram& program,
                                       const std::map<std::string, ContractAnalysis>& analyses,
                                       const AnalysisOptions& options,
                                       const RuleSet& rules = builtin_rules());

// Pairwise comparison of the perspective sets guarding each entry path to the
// same resource; a strict subset is a violation path.
std::vector<AcFinding> detect_violation_paths(
    const BridgeProgram& program, const std::map<std::string, ContractAnalysis>& analyses);

}  // namespace axe
