#pragma once

#include "axe/checks.hpp"

#include <vector>

namespace axe {

struct PathEnumOptions {
    uint32_t max_depth = 64;   // maximum blocks per path
    uint32_t unroll = 1;       // loop revisits allowed per block
    size_t max_paths = 20000;  // hard cap; crossing it reports truncation
};

// All walks from `entry` to `target` over the successor lists in which the
// target appears only as the final node, no node appears more than unroll+1
// times, and the length stays within max_depth. Pure graph routine so the
// test-side DFS oracle can be compared against it directly.
std::vector<std::vector<uint32_t>> enumerate_paths_core(
    const std::vector<std::vector<uint32_t>>& succ, uint32_t entry, uint32_t target,
    const PathEnumOptions& options, const Deadline& deadline, bool* truncated = nullptr);

struct PathRecord {
    uint32_t id = 0;
    std::string address;
    uint32_t entry_selector = 0;  // public function the path starts from
    size_t resource_idx = 0;      // index into the contract's resource list
    std::vector<uint32_t> blocks;
    std::vector<size_t> checks_on_path;  // indexes into the contract's check list
};

// Entry->resource paths from every public function of the contract.
// `checks` must already be extracted for the whole contract.
std::vector<PathRecord> enumerate_paths(const ContractProgram& program,
                                        const std::vector<Resource>& resources,
                                        const std::vector<SecurityCheck>& checks,
                                        const PathEnumOptions& options, const Deadline& deadline,
                                        bool* truncated = nullptr);

}  // namespace axe
