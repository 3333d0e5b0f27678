#pragma once

#include "axe/bytecode.hpp"
#include "axe/expr.hpp"

#include <map>
#include <span>
#include <vector>

namespace axe {

// What an empty abstract stack materializes on pop. Whole-contract runs start
// at the dispatcher and see junk underflow only; per-function frames of
// internal functions receive their arguments on the stack and materialize
// positional StackParam values instead.
enum class UnderflowPolicy { Unknown, StackParam };

struct MachineState {
    std::vector<ExprPtr> stack;                // back() is top of stack
    std::map<uint64_t, ExprPtr> memory;        // constant-offset scratch words
    uint32_t materialized = 0;                 // StackParam indices handed out
    UnderflowPolicy policy = UnderflowPolicy::Unknown;

    ExprPtr pop();
    void push(ExprPtr v) { stack.push_back(std::move(v)); }
    // Makes sure `depth` entries exist, materializing at the bottom.
    void ensure(size_t depth);

    // Top-aligned pairwise join; conflicting entries widen to Unknown.
    // Returns true when anything changed.
    bool join_from(const MachineState& other);
};

// Semantic events observed while executing a block.
enum class SemOpKind : uint8_t { SStore, SLoadOp, Log, ExtCall, Jumpi, InternalCall };

struct SemOp {
    SemOpKind kind;
    uint32_t offset = 0;
    uint8_t opcode = 0;                 // ExtCall: which CALL variant; Log: LOGn
    std::vector<ExprPtr> args;          // see per-kind layout below
    std::vector<ExprPtr> extra;         // Log: data words; ExtCall: input words
    int64_t taken_target = -1;          // Jumpi: resolved constant target
    uint32_t callee_entry = 0;          // InternalCall
    uint32_t return_offset = 0;         // InternalCall
    // arg layout:
    //   SStore:       [slot, value]
    //   SLoadOp:      [slot]
    //   Log:          topics (topic0 first)
    //   ExtCall:      [target, value?]  (value present for CALL/CALLCODE)
    //   Jumpi:        [condition]
    //   InternalCall: positional callee arguments (first argument first)
};

enum class TermKind : uint8_t {
    Jump,
    Jumpi,
    Return,
    Revert,
    Stop,
    SelfDestruct,
    Fallthrough,
    Invalid,
};

struct TermInfo {
    TermKind kind = TermKind::Fallthrough;
    ExprPtr jump_target;   // Jump/Jumpi
    ExprPtr condition;     // Jumpi
    uint32_t offset = 0;   // offset of the terminating instruction
    // Internal-call pattern at a Jump: a constant return address equal to the
    // byte right after the JUMP sits below the arguments on the stack.
    bool looks_like_call = false;
    uint32_t call_return_offset = 0;
    std::vector<ExprPtr> call_args;  // values above the return address, bottom-up
};

// Executes one straight block worth of instructions against `state`.
// Collected semantic events append to `ops` when non-null.
TermInfo exec_block(std::span<const Instruction> instructions, MachineState& state,
                    std::vector<SemOp>* ops);

}  // namespace axe
