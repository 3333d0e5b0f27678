#include "axe/interp.hpp"

#include <algorithm>

namespace axe {

ExprPtr MachineState::pop() {
    ensure(1);
    ExprPtr v = stack.back();
    stack.pop_back();
    return v;
}

void MachineState::ensure(size_t depth) {
    while (stack.size() < depth) {
        if (policy == UnderflowPolicy::StackParam)
            stack.insert(stack.begin(), make_stack_param(materialized++));
        else
            stack.insert(stack.begin(), make_unknown());
    }
}

static ExprPtr join_value(const ExprPtr& a, const ExprPtr& b, bool& changed) {
    if (expr_equal(a, b)) return a;
    if (a->kind == ExprKind::Unknown && a->site == -1) return a;
    changed = true;
    return make_unknown();
}

bool MachineState::join_from(const MachineState& other) {
    bool changed = false;
    size_t common = std::min(stack.size(), other.stack.size());
    if (stack.size() > common) {
        stack.erase(stack.begin(), stack.end() - static_cast<long>(common));
        changed = true;
    }
    for (size_t i = 0; i < common; ++i) {
        const ExprPtr& mine = stack[stack.size() - 1 - i];
        const ExprPtr& theirs = other.stack[other.stack.size() - 1 - i];
        ExprPtr joined = join_value(mine, theirs, changed);
        stack[stack.size() - 1 - i] = joined;
    }
    for (auto it = memory.begin(); it != memory.end();) {
        auto oit = other.memory.find(it->first);
        if (oit == other.memory.end() || !expr_equal(it->second, oit->second)) {
            it = memory.erase(it);
            changed = true;
        } else {
            ++it;
        }
    }
    if (other.materialized > materialized) {
        materialized = other.materialized;
        changed = true;
    }
    return changed;
}

namespace {

void clobber_memory_range(MachineState& st, uint64_t offset, uint64_t length) {
    if (length == 0) return;
    auto it = st.memory.lower_bound(offset > 31 ? offset - 31 : 0);
    while (it != st.memory.end() && it->first < offset + length) it = st.memory.erase(it);
}

void store_word(MachineState& st, uint64_t offset, ExprPtr value) {
    clobber_memory_range(st, offset, 32);
    st.memory[offset] = std::move(value);
}

std::vector<ExprPtr> read_words(const MachineState& st, const ExprPtr& offset, const ExprPtr& size,
                                int64_t site) {
    std::vector<ExprPtr> words;
    if (!offset->is_const() || !size->is_const()) return words;
    auto off = u256_to_u64(offset->value);
    auto len = u256_to_u64(size->value);
    if (!off || !len || *len > 16 * 32) return words;
    for (uint64_t o = *off; o + 32 <= *off + *len; o += 32) {
        auto it = st.memory.find(o);
        words.push_back(it != st.memory.end() ? it->second : make_unknown(site));
    }
    return words;
}

}  // namespace

TermInfo exec_block(std::span<const Instruction> instructions, MachineState& state,
                    std::vector<SemOp>* ops) {
    TermInfo term;
    auto emit = [&](SemOp o) {
        if (ops) ops->push_back(std::move(o));
    };

    for (const Instruction& ins : instructions) {
        const int64_t site = ins.offset;
        term.offset = ins.offset;
        if (!ins.valid()) {
            term.kind = TermKind::Invalid;
            return term;
        }
        const uint8_t oc = ins.opcode;

        if (is_push(oc)) {
            state.push(make_const(ins.push_value()));
            continue;
        }
        if (is_dup(oc)) {
            size_t n = oc - op::DUP1 + 1;
            state.ensure(n);
            state.push(state.stack[state.stack.size() - n]);
            continue;
        }
        if (is_swap(oc)) {
            size_t n = oc - op::SWAP1 + 1;
            state.ensure(n + 1);
            std::swap(state.stack.back(), state.stack[state.stack.size() - 1 - n]);
            continue;
        }
        if (is_log(oc)) {
            unsigned topics = oc - op::LOG0;
            ExprPtr offset = state.pop();
            ExprPtr size = state.pop();
            SemOp o{SemOpKind::Log, ins.offset, oc, {}, {}, -1, 0, 0};
            for (unsigned i = 0; i < topics; ++i) o.args.push_back(state.pop());
            o.extra = read_words(state, offset, size, site);
            emit(std::move(o));
            continue;
        }

        switch (oc) {
            case op::STOP:
                term.kind = TermKind::Stop;
                return term;
            case op::RETURN:
                state.pop();
                state.pop();
                term.kind = TermKind::Return;
                return term;
            case op::REVERT:
                state.pop();
                state.pop();
                term.kind = TermKind::Revert;
                return term;
            case op::INVALID:
                term.kind = TermKind::Invalid;
                return term;
            case op::SELFDESTRUCT:
                state.pop();
                term.kind = TermKind::SelfDestruct;
                return term;
            case op::JUMP: {
                ExprPtr target = state.pop();
                term.kind = TermKind::Jump;
                term.jump_target = target;
                // Internal-call idiom: a constant return address pointing at
                // the byte right after this JUMP sits below the arguments.
                U256 ret_addr = U256(ins.offset + 1);
                for (size_t d = 0; d < state.stack.size(); ++d) {
                    const ExprPtr& v = state.stack[state.stack.size() - 1 - d];
                    if (v->is_const(ret_addr)) {
                        term.looks_like_call = true;
                        term.call_return_offset = ins.offset + 1;
                        for (size_t i = 0; i < d; ++i)
                            term.call_args.push_back(state.stack[state.stack.size() - 1 - i]);
                        break;
                    }
                }
                return term;
            }
            case op::JUMPI: {
                ExprPtr target = state.pop();
                ExprPtr cond = state.pop();
                term.kind = TermKind::Jumpi;
                term.jump_target = target;
                term.condition = cond;
                SemOp o{SemOpKind::Jumpi, ins.offset, oc, {cond}, {}, -1, 0, 0};
                if (target->is_const())
                    if (auto t = u256_to_u64(target->value)) o.taken_target = static_cast<int64_t>(*t);
                emit(std::move(o));
                return term;
            }
            case op::JUMPDEST:
                continue;
            case op::CALLDATALOAD:
                state.push(make_unary(ExprKind::Calldata, site, state.pop()));
                continue;
            case op::CALLDATASIZE:
                state.push(make_leaf(ExprKind::CalldataSize, site));
                continue;
            case op::CALLER:
                state.push(make_leaf(ExprKind::Caller, site));
                continue;
            case op::ORIGIN:
                state.push(make_leaf(ExprKind::Origin, site));
                continue;
            case op::CALLVALUE:
                state.push(make_leaf(ExprKind::CallValue, site));
                continue;
            case op::ADDRESS:
                state.push(make_leaf(ExprKind::SelfAddress, site));
                continue;
            case op::TIMESTAMP:
                state.push(make_leaf(ExprKind::Timestamp, site));
                continue;
            case op::NUMBER:
                state.push(make_leaf(ExprKind::BlockNumber, site));
                continue;
            case op::CHAINID:
                state.push(make_leaf(ExprKind::ChainId, site));
                continue;
            case op::SELFBALANCE:
                state.push(make_leaf(ExprKind::SelfBalance, site));
                continue;
            case op::BALANCE:
                state.push(make_unary(ExprKind::ExtBalance, site, state.pop()));
                continue;
            case op::PC:
                state.push(make_const(U256(ins.offset)));
                continue;
            case op::ISZERO:
                state.push(make_iszero(state.pop()));
                continue;
            case op::NOT:
                state.push(make_bitnot(state.pop()));
                continue;
            case op::SLOAD: {
                ExprPtr slot = state.pop();
                ExprPtr load = make_unary(ExprKind::SLoad, site, slot);
                emit(SemOp{SemOpKind::SLoadOp, ins.offset, oc, {slot}, {}, -1, 0, 0});
                state.push(load);
                continue;
            }
            case op::SSTORE: {
                ExprPtr slot = state.pop();
                ExprPtr value = state.pop();
                emit(SemOp{SemOpKind::SStore, ins.offset, oc, {slot, value}, {}, -1, 0, 0});
                continue;
            }
            case op::MLOAD: {
                ExprPtr offset = state.pop();
                ExprPtr out = make_unknown(site);
                if (offset->is_const()) {
                    if (auto off = u256_to_u64(offset->value)) {
                        auto it = state.memory.find(*off);
                        if (it != state.memory.end()) out = it->second;
                    }
                }
                state.push(out);
                continue;
            }
            case op::MSTORE: {
                ExprPtr offset = state.pop();
                ExprPtr value = state.pop();
                if (offset->is_const()) {
                    if (auto off = u256_to_u64(offset->value)) {
                        store_word(state, *off, value);
                        continue;
                    }
                }
                state.memory.clear();
                continue;
            }
            case op::MSTORE8: {
                ExprPtr offset = state.pop();
                state.pop();
                if (offset->is_const()) {
                    if (auto off = u256_to_u64(offset->value)) {
                        clobber_memory_range(state, *off, 1);
                        continue;
                    }
                }
                state.memory.clear();
                continue;
            }
            case op::KECCAK256: {
                ExprPtr offset = state.pop();
                ExprPtr size = state.pop();
                ExprPtr out = make_unknown(site);
                // Solidity mapping slot: keccak256(key . base_slot) over a
                // 64-byte scratch window.
                if (offset->is_const() && size->is_const(U256(0x40))) {
                    if (auto off = u256_to_u64(offset->value)) {
                        auto key_it = state.memory.find(*off);
                        auto base_it = state.memory.find(*off + 32);
                        if (key_it != state.memory.end() && base_it != state.memory.end() &&
                            base_it->second->is_const())
                            out = make_map_slot(base_it->second, key_it->second);
                    }
                }
                state.push(out);
                continue;
            }
            case op::CALLDATACOPY: {
                ExprPtr dst = state.pop();
                ExprPtr src = state.pop();
                ExprPtr len = state.pop();
                if (dst->is_const() && src->is_const() && len->is_const()) {
                    auto d = u256_to_u64(dst->value);
                    auto s = u256_to_u64(src->value);
                    auto n = u256_to_u64(len->value);
                    if (d && s && n && *n <= 16 * 32) {
                        clobber_memory_range(state, *d, *n);
                        for (uint64_t k = 0; k + 32 <= *n; k += 32)
                            state.memory[*d + k] =
                                make_unary(ExprKind::Calldata, site, make_const(U256(*s + k)));
                        continue;
                    }
                }
                state.memory.clear();
                continue;
            }
            case op::CODECOPY:
            case op::RETURNDATACOPY: {
                ExprPtr dst = state.pop();
                state.pop();
                ExprPtr len = state.pop();
                if (dst->is_const() && len->is_const()) {
                    auto d = u256_to_u64(dst->value);
                    auto n = u256_to_u64(len->value);
                    if (d && n) {
                        clobber_memory_range(state, *d, *n);
                        continue;
                    }
                }
                state.memory.clear();
                continue;
            }
            case op::EXTCODECOPY: {
                state.pop();
                ExprPtr dst = state.pop();
                state.pop();
                ExprPtr len = state.pop();
                if (dst->is_const() && len->is_const()) {
                    auto d = u256_to_u64(dst->value);
                    auto n = u256_to_u64(len->value);
                    if (d && n) {
                        clobber_memory_range(state, *d, *n);
                        continue;
                    }
                }
                state.memory.clear();
                continue;
            }
            case op::CALL:
            case op::CALLCODE:
            case op::DELEGATECALL:
            case op::STATICCALL: {
                bool has_value = (oc == op::CALL || oc == op::CALLCODE);
                state.pop();  // gas
                ExprPtr target = state.pop();
                ExprPtr value = has_value ? state.pop() : nullptr;
                ExprPtr in_off = state.pop();
                ExprPtr in_sz = state.pop();
                ExprPtr out_off = state.pop();
                ExprPtr out_sz = state.pop();
                SemOp o{SemOpKind::ExtCall, ins.offset, oc, {target}, {}, -1, 0, 0};
                if (value) o.args.push_back(value);
                o.extra = read_words(state, in_off, in_sz, site);
                emit(std::move(o));
                bool is_ecrecover = target->is_const(U256(1));
                if (out_off->is_const() && out_sz->is_const()) {
                    auto oo = u256_to_u64(out_off->value);
                    auto os = u256_to_u64(out_sz->value);
                    if (oo && os && *os > 0 && *os <= 16 * 32) {
                        clobber_memory_range(state, *oo, *os);
                        state.memory[*oo] = is_ecrecover ? make_leaf(ExprKind::Ecrecover, site)
                                                         : make_leaf(ExprKind::CallResult, site);
                    }
                }
                state.push(make_leaf(ExprKind::CallResult, site));
                continue;
            }
            case op::CREATE:
            case op::CREATE2: {
                unsigned pops = (oc == op::CREATE) ? 3 : 4;
                for (unsigned i = 0; i < pops; ++i) state.pop();
                state.push(make_leaf(ExprKind::CallResult, site));
                continue;
            }
            default: {
                const OpInfo* info = op_info(oc);
                if (!info) {
                    term.kind = TermKind::Invalid;
                    return term;
                }
                std::vector<ExprPtr> in;
                for (unsigned i = 0; i < info->pops; ++i) in.push_back(state.pop());
                if (info->pushes == 1 && info->pops == 2) {
                    state.push(make_bin(oc, in[0], in[1]));
                } else {
                    for (unsigned i = 0; i < info->pushes; ++i) state.push(make_unknown(site));
                }
                continue;
            }
        }
    }
    term.kind = TermKind::Fallthrough;
    return term;
}

}  // namespace axe
