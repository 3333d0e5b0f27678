#pragma once

#include "axe/cfg.hpp"

#include <vector>

namespace axe {

// Semantic digest of one function: every storage access, event emission,
// external call, conditional branch, and internal call with symbolic operand
// expressions attached. Public frames treat leftover dispatcher stack as
// unknown; internal frames materialize positional stack parameters.
struct FunctionSummary {
    uint32_t selector = 0;
    bool is_public = false;
    bool is_fallback = false;
    uint32_t entry_block = 0;
    std::vector<SemOp> ops;  // sorted by instruction offset
    uint32_t param_count = 0;

    const SemOp* op_at(uint32_t offset) const;
};

std::vector<FunctionSummary> summarize_functions(const ContractCfg& cfg);

}  // namespace axe
