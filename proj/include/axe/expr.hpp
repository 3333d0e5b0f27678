#pragma once

#include "axe/common.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace axe {

// Symbolic values tracked by the abstract stack machine. Leaves that originate
// data (calldata, environment reads, storage loads, ecrecover results) carry
// the byte offset of the defining instruction so def-use edges can be wired
// site-to-site later.
enum class ExprKind : uint8_t {
    Const,
    Calldata,      // kids[0] = byte offset into calldata
    CalldataSize,
    Caller,
    Origin,
    CallValue,
    SelfAddress,
    Timestamp,
    BlockNumber,
    ChainId,
    SelfBalance,
    ExtBalance,    // kids[0] = queried address
    SLoad,         // kids[0] = slot
    MapSlot,       // kids[0] = base slot (Const), kids[1] = key; keccak(key . base)
    Ecrecover,     // output of a call to precompile 0x1
    CallResult,    // result/success of an external call
    StackParam,    // index = positional stack argument of an internal function
    Bin,           // opcode-tagged binary operation
    IsZero,
    BitNot,
    Unknown,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind = ExprKind::Unknown;
    uint8_t opcode = 0;    // Bin only
    U256 value{};          // Const only
    uint32_t index = 0;    // StackParam only
    int64_t site = -1;     // defining instruction offset, -1 when synthetic
    std::vector<ExprPtr> kids;

    bool is_const() const { return kind == ExprKind::Const; }
    bool is_const(const U256& v) const { return kind == ExprKind::Const && value == v; }
};

ExprPtr make_const(U256 v);
ExprPtr make_leaf(ExprKind kind, int64_t site);
ExprPtr make_unary(ExprKind kind, int64_t site, ExprPtr kid);
ExprPtr make_map_slot(ExprPtr base, ExprPtr key);
ExprPtr make_stack_param(uint32_t index);
// Folds when both operands are constant; normalizes ISZERO chains.
ExprPtr make_bin(uint8_t opcode, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_iszero(ExprPtr kid);
ExprPtr make_bitnot(ExprPtr kid);
ExprPtr make_unknown(int64_t site = -1);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// Pre-order walk over every node (including interior Bin nodes).
void walk(const ExprPtr& e, const std::function<void(const Expr&)>& fn);
bool involves(const ExprPtr& e, const std::function<bool(const Expr&)>& pred);

// Calldata word offset 4 + 32*i -> ABI parameter index i.
std::optional<uint32_t> calldata_param_index(const Expr& e);
// Constant base slot behind a storage access expression (Const or MapSlot).
std::optional<U256> slot_base(const ExprPtr& slot);

// Strips any even number of ISZERO wrappers; reports the resulting polarity.
ExprPtr strip_iszero(const ExprPtr& e, bool* negated = nullptr);

std::string to_string(const ExprPtr& e);

}  // namespace axe
