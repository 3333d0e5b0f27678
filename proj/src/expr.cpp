#include "axe/expr.hpp"

#include "axe/opcodes.hpp"

#include <sstream>

namespace axe {

ExprPtr make_const(U256 v) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Const;
    e->value = std::move(v);
    return e;
}

ExprPtr make_leaf(ExprKind kind, int64_t site) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->site = site;
    return e;
}

ExprPtr make_unary(ExprKind kind, int64_t site, ExprPtr kid) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->site = site;
    e->kids.push_back(std::move(kid));
    return e;
}

ExprPtr make_map_slot(ExprPtr base, ExprPtr key) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::MapSlot;
    e->kids.push_back(std::move(base));
    e->kids.push_back(std::move(key));
    return e;
}

ExprPtr make_stack_param(uint32_t index) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::StackParam;
    e->index = index;
    return e;
}

ExprPtr make_unknown(int64_t site) { return make_leaf(ExprKind::Unknown, site); }

static std::optional<U256> fold_bin(uint8_t opcode, const U256& a, const U256& b) {
    switch (opcode) {
        case op::ADD: return a + b;
        case op::MUL: return a * b;
        case op::SUB: return a - b;
        case op::DIV: return b == 0 ? U256(0) : a / b;
        case op::MOD: return b == 0 ? U256(0) : a % b;
        case op::LT: return U256(a < b ? 1 : 0);
        case op::GT: return U256(a > b ? 1 : 0);
        case op::EQ: return U256(a == b ? 1 : 0);
        case op::AND: return a & b;
        case op::OR: return a | b;
        case op::XOR: return a ^ b;
        case op::SHL: return a >= 256 ? U256(0) : U256(b << static_cast<unsigned>(a));
        case op::SHR: return a >= 256 ? U256(0) : U256(b >> static_cast<unsigned>(a));
        default: return std::nullopt;
    }
}

ExprPtr make_bin(uint8_t opcode, ExprPtr lhs, ExprPtr rhs) {
    if (lhs->is_const() && rhs->is_const()) {
        if (auto v = fold_bin(opcode, lhs->value, rhs->value)) return make_const(*v);
    }
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Bin;
    e->opcode = opcode;
    e->kids.push_back(std::move(lhs));
    e->kids.push_back(std::move(rhs));
    return e;
}

ExprPtr make_iszero(ExprPtr kid) {
    if (kid->is_const()) return make_const(U256(kid->value == 0 ? 1 : 0));
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::IsZero;
    e->kids.push_back(std::move(kid));
    return e;
}

ExprPtr make_bitnot(ExprPtr kid) {
    if (kid->is_const()) return make_const(~kid->value);
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::BitNot;
    e->kids.push_back(std::move(kid));
    return e;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->opcode != b->opcode || a->index != b->index ||
        a->site != b->site || a->kids.size() != b->kids.size())
        return false;
    if (a->kind == ExprKind::Const && a->value != b->value) return false;
    for (size_t i = 0; i < a->kids.size(); ++i)
        if (!expr_equal(a->kids[i], b->kids[i])) return false;
    return true;
}

void walk(const ExprPtr& e, const std::function<void(const Expr&)>& fn) {
    if (!e) return;
    fn(*e);
    for (const ExprPtr& k : e->kids) walk(k, fn);
}

bool involves(const ExprPtr& e, const std::function<bool(const Expr&)>& pred) {
    if (!e) return false;
    if (pred(*e)) return true;
    for (const ExprPtr& k : e->kids)
        if (involves(k, pred)) return true;
    return false;
}

std::optional<uint32_t> calldata_param_index(const Expr& e) {
    if (e.kind != ExprKind::Calldata || e.kids.empty() || !e.kids[0]->is_const()) return std::nullopt;
    const U256& off = e.kids[0]->value;
    if (off < 4) return std::nullopt;
    U256 rel = off - 4;
    if (rel % 32 != 0) return std::nullopt;
    auto idx = u256_to_u64(rel / 32);
    if (!idx || *idx > 0xffff) return std::nullopt;
    return static_cast<uint32_t>(*idx);
}

std::optional<U256> slot_base(const ExprPtr& slot) {
    if (!slot) return std::nullopt;
    if (slot->is_const()) return slot->value;
    if (slot->kind == ExprKind::MapSlot && slot->kids[0]->is_const()) return slot->kids[0]->value;
    return std::nullopt;
}

ExprPtr strip_iszero(const ExprPtr& e, bool* negated) {
    ExprPtr cur = e;
    bool neg = false;
    while (cur && cur->kind == ExprKind::IsZero) {
        neg = !neg;
        cur = cur->kids[0];
    }
    if (negated) *negated = neg;
    return cur;
}

std::string to_string(const ExprPtr& e) {
    if (!e) return "<null>";
    std::ostringstream os;
    switch (e->kind) {
        case ExprKind::Const: os << u256_hex(e->value); break;
        case ExprKind::Calldata: os << "calldata[" << to_string(e->kids[0]) << "]"; break;
        case ExprKind::CalldataSize: os << "calldatasize"; break;
        case ExprKind::Caller: os << "caller"; break;
        case ExprKind::Origin: os << "origin"; break;
        case ExprKind::CallValue: os << "callvalue"; break;
        case ExprKind::SelfAddress: os << "address(this)"; break;
        case ExprKind::Timestamp: os << "timestamp"; break;
        case ExprKind::BlockNumber: os << "blocknumber"; break;
        case ExprKind::ChainId: os << "chainid"; break;
        case ExprKind::SelfBalance: os << "selfbalance"; break;
        case ExprKind::ExtBalance: os << "balance(" << to_string(e->kids[0]) << ")"; break;
        case ExprKind::SLoad: os << "sload(" << to_string(e->kids[0]) << ")"; break;
        case ExprKind::MapSlot:
            os << "map(" << to_string(e->kids[0]) << ", " << to_string(e->kids[1]) << ")";
            break;
        case ExprKind::Ecrecover: os << "ecrecover@" << e->site; break;
        case ExprKind::CallResult: os << "callresult@" << e->site; break;
        case ExprKind::StackParam: os << "arg" << e->index; break;
        case ExprKind::Bin:
            os << opcode_name(e->opcode) << "(" << to_string(e->kids[0]) << ", "
               << to_string(e->kids[1]) << ")";
            break;
        case ExprKind::IsZero: os << "iszero(" << to_string(e->kids[0]) << ")"; break;
        case ExprKind::BitNot: os << "not(" << to_string(e->kids[0]) << ")"; break;
        case ExprKind::Unknown: os << "?"; break;
    }
    return os.str();
}

}  // namespace axe
