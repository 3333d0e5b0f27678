#pragma once

#include "axe/bytecode.hpp"
#include "axe/interp.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace axe {

enum class Terminator : uint8_t {
    Jump,
    Jumpi,
    Return,
    Revert,
    Stop,
    SelfDestruct,
    Fallthrough,
    Invalid,
    Unresolved,
};

const char* terminator_name(Terminator t);

struct BasicBlock {
    uint32_t id = 0;
    std::vector<Instruction> instructions;
    Terminator terminator = Terminator::Invalid;
    std::vector<uint32_t> successors;  // block ids, sorted, deduplicated

    uint32_t start_offset() const { return instructions.front().offset; }
    uint32_t end_offset() const {  // one past the last byte
        const Instruction& last = instructions.back();
        return static_cast<uint32_t>(last.offset + last.size());
    }
    bool starts_with_jumpdest() const;
};

// A resolved internal-call transfer: `JUMP callee` with a constant return
// address (the byte after the JUMP) still on the stack.
struct CallSite {
    uint32_t block = 0;
    uint32_t offset = 0;          // offset of the JUMP
    uint32_t callee_offset = 0;   // entry offset of the callee
    uint32_t return_offset = 0;   // where the callee jumps back to

    bool operator<(const CallSite& o) const { return offset < o.offset; }
};

struct JumpDiagnostic {
    uint32_t block = 0;
    uint32_t offset = 0;
    std::string reason;
};

// 4-byte dispatcher selectors; internal functions get a synthetic selector
// equal to their entry byte offset, and pure-fallback contracts a sentinel.
struct FunctionBody {
    uint32_t selector = 0;
    bool is_public = false;
    bool is_fallback = false;
    uint32_t entry_block = 0;
    std::vector<uint32_t> blocks;  // sorted block ids
    uint32_t param_count = 0;      // inferred from calldata accesses

    bool contains(uint32_t block_id) const;
};

std::string selector_hex(uint32_t selector);

struct ContractCfg {
    std::vector<Instruction> instructions;
    std::vector<BasicBlock> blocks;
    uint32_t entry = 0;
    std::vector<uint32_t> dead_blocks;
    std::vector<CallSite> call_sites;
    std::vector<JumpDiagnostic> diagnostics;
    std::vector<FunctionBody> functions;   // filled by partition_functions
    std::set<uint32_t> dispatcher_blocks;  // filled by partition_functions

    std::optional<uint32_t> block_at(uint32_t start_offset) const;
    std::optional<uint32_t> block_containing(uint32_t instr_offset) const;
    std::vector<std::pair<uint32_t, uint32_t>> edges() const;
    const FunctionBody* find_public(uint32_t selector) const;
    const FunctionBody* find_internal(uint32_t entry_offset) const;
    const FunctionBody* function_of_block(uint32_t block_id) const;

    // Blocks reachable from `from`, following successors.
    std::set<uint32_t> reachable_from(uint32_t from) const;
};

// Splits at JUMPDEST / after terminators, then resolves jump targets with a
// bounded abstract stack simulation. Dynamic jumps that never resolve are
// marked Unresolved with a diagnostic instead of guessing edges.
ContractCfg recover_cfg(std::vector<Instruction> instructions);

// Recognizes PUSH4/EQ/JUMPI dispatcher chains and internal call targets and
// fills cfg.functions. Hinted selectors missing from the dispatcher produce
// warnings, never errors.
void partition_functions(ContractCfg& cfg, const std::vector<uint32_t>& selector_hints,
                         std::vector<std::string>* warnings = nullptr);

}  // namespace axe
