#include "axe/cfg.hpp"

#include <algorithm>
#include <deque>

namespace axe {

const char* terminator_name(Terminator t) {
    switch (t) {
        case Terminator::Jump: return "jump";
        case Terminator::Jumpi: return "jumpi";
        case Terminator::Return: return "return";
        case Terminator::Revert: return "revert";
        case Terminator::Stop: return "stop";
        case Terminator::SelfDestruct: return "selfdestruct";
        case Terminator::Fallthrough: return "fallthrough";
        case Terminator::Invalid: return "invalid";
        case Terminator::Unresolved: return "unresolved";
    }
    return "?";
}

bool BasicBlock::starts_with_jumpdest() const {
    return !instructions.empty() && instructions.front().opcode == op::JUMPDEST;
}

bool FunctionBody::contains(uint32_t block_id) const {
    return std::binary_search(blocks.begin(), blocks.end(), block_id);
}

std::string selector_hex(uint32_t selector) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "0x%08x", selector);
    return buf;
}

std::optional<uint32_t> ContractCfg::block_at(uint32_t start_offset) const {
    for (const BasicBlock& b : blocks)
        if (b.start_offset() == start_offset) return b.id;
    return std::nullopt;
}

std::optional<uint32_t> ContractCfg::block_containing(uint32_t instr_offset) const {
    for (const BasicBlock& b : blocks)
        if (instr_offset >= b.start_offset() && instr_offset < b.end_offset()) return b.id;
    return std::nullopt;
}

std::vector<std::pair<uint32_t, uint32_t>> ContractCfg::edges() const {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    for (const BasicBlock& b : blocks)
        for (uint32_t s : b.successors) out.emplace_back(b.id, s);
    return out;
}

const FunctionBody* ContractCfg::find_public(uint32_t selector) const {
    for (const FunctionBody& f : functions)
        if (f.is_public && f.selector == selector) return &f;
    return nullptr;
}

const FunctionBody* ContractCfg::find_internal(uint32_t entry_offset) const {
    for (const FunctionBody& f : functions)
        if (!f.is_public && f.selector == entry_offset) return &f;
    return nullptr;
}

const FunctionBody* ContractCfg::function_of_block(uint32_t block_id) const {
    for (const FunctionBody& f : functions)
        if (f.contains(block_id)) return &f;
    return nullptr;
}

std::set<uint32_t> ContractCfg::reachable_from(uint32_t from) const {
    std::set<uint32_t> seen;
    std::deque<uint32_t> work{from};
    while (!work.empty()) {
        uint32_t b = work.front();
        work.pop_front();
        if (!seen.insert(b).second) continue;
        for (uint32_t s : blocks[b].successors) work.push_back(s);
    }
    return seen;
}

// ---------------------------------------------------------------------------
// Recovery
// ---------------------------------------------------------------------------

namespace {

Terminator static_terminator(const BasicBlock& b) {
    const Instruction& last = b.instructions.back();
    if (!last.valid()) return Terminator::Invalid;
    switch (last.opcode) {
        case op::JUMP: return Terminator::Unresolved;
        case op::JUMPI: return Terminator::Unresolved;
        case op::RETURN: return Terminator::Return;
        case op::REVERT: return Terminator::Revert;
        case op::STOP: return Terminator::Stop;
        case op::SELFDESTRUCT: return Terminator::SelfDestruct;
        case op::INVALID: return Terminator::Invalid;
        default: return Terminator::Fallthrough;
    }
}

}  // namespace

ContractCfg recover_cfg(std::vector<Instruction> instructions) {
    ContractCfg cfg;
    cfg.instructions = std::move(instructions);

    // Block boundaries: before every JUMPDEST, after every terminator.
    std::vector<BasicBlock> blocks;
    BasicBlock cur;
    auto flush = [&]() {
        if (cur.instructions.empty()) return;
        cur.id = static_cast<uint32_t>(blocks.size());
        cur.terminator = static_terminator(cur);
        blocks.push_back(std::move(cur));
        cur = BasicBlock{};
    };
    for (const Instruction& ins : cfg.instructions) {
        if (ins.opcode == op::JUMPDEST) flush();
        cur.instructions.push_back(ins);
        if (is_block_terminator(ins.opcode) || !ins.valid()) flush();
    }
    flush();
    cfg.blocks = std::move(blocks);
    if (cfg.blocks.empty()) throw EmptyBytecodeError();

    std::map<uint32_t, uint32_t> by_offset;
    for (const BasicBlock& b : cfg.blocks) by_offset[b.start_offset()] = b.id;

    // Worklist simulation with per-block joined input states. The first
    // revisit re-executes with the merged state (one unroll); conflicting
    // entries widen to Unknown inside the join itself.
    constexpr uint32_t kMaxVisits = 8;
    std::vector<std::optional<MachineState>> in_state(cfg.blocks.size());
    std::vector<uint32_t> visits(cfg.blocks.size(), 0);
    std::vector<std::set<uint32_t>> succ(cfg.blocks.size());
    std::vector<bool> saw_dynamic(cfg.blocks.size(), false);
    std::vector<bool> saw_bad_dest(cfg.blocks.size(), false);
    std::set<std::pair<uint32_t, uint32_t>> call_keys;

    std::deque<uint32_t> work;
    in_state[cfg.entry] = MachineState{};
    work.push_back(cfg.entry);

    auto propagate = [&](uint32_t to, const MachineState& st) {
        if (!in_state[to]) {
            in_state[to] = st;
            work.push_back(to);
        } else if (in_state[to]->join_from(st) && visits[to] < kMaxVisits) {
            work.push_back(to);
        }
    };

    auto resolve_target = [&](uint32_t block_id, const TermInfo& term,
                              const MachineState& out) -> std::optional<uint32_t> {
        const ExprPtr& target = term.jump_target;
        if (!target->is_const()) {
            saw_dynamic[block_id] = true;
            return std::nullopt;
        }
        auto off64 = u256_to_u64(target->value);
        if (!off64) {
            saw_bad_dest[block_id] = true;
            return std::nullopt;
        }
        auto it = by_offset.find(static_cast<uint32_t>(*off64));
        if (it == by_offset.end() || !cfg.blocks[it->second].starts_with_jumpdest()) {
            saw_bad_dest[block_id] = true;
            return std::nullopt;
        }
        uint32_t dest = it->second;
        if (term.looks_like_call)
            if (call_keys.insert({term.offset, cfg.blocks[dest].start_offset()}).second)
                cfg.call_sites.push_back(CallSite{block_id, term.offset,
                                                  cfg.blocks[dest].start_offset(),
                                                  term.call_return_offset});
        (void)out;
        return dest;
    };

    while (!work.empty()) {
        uint32_t id = work.front();
        work.pop_front();
        if (visits[id] >= kMaxVisits) continue;
        ++visits[id];

        MachineState st = *in_state[id];
        TermInfo term = exec_block(std::span<const Instruction>(cfg.blocks[id].instructions), st,
                                   nullptr);
        BasicBlock& blk = cfg.blocks[id];
        switch (term.kind) {
            case TermKind::Jump: {
                blk.terminator = Terminator::Jump;
                if (auto dest = resolve_target(id, term, st)) {
                    succ[id].insert(*dest);
                    propagate(*dest, st);
                }
                break;
            }
            case TermKind::Jumpi: {
                blk.terminator = Terminator::Jumpi;
                if (auto dest = resolve_target(id, term, st)) {
                    succ[id].insert(*dest);
                    propagate(*dest, st);
                }
                if (id + 1 < cfg.blocks.size()) {
                    succ[id].insert(id + 1);
                    propagate(id + 1, st);
                }
                break;
            }
            case TermKind::Fallthrough: {
                blk.terminator = Terminator::Fallthrough;
                if (id + 1 < cfg.blocks.size()) {
                    succ[id].insert(id + 1);
                    propagate(id + 1, st);
                } else {
                    // Falling off the end of code halts.
                    blk.terminator = Terminator::Stop;
                }
                break;
            }
            case TermKind::Return: blk.terminator = Terminator::Return; break;
            case TermKind::Revert: blk.terminator = Terminator::Revert; break;
            case TermKind::Stop: blk.terminator = Terminator::Stop; break;
            case TermKind::SelfDestruct: blk.terminator = Terminator::SelfDestruct; break;
            case TermKind::Invalid: blk.terminator = Terminator::Invalid; break;
        }
    }

    for (BasicBlock& b : cfg.blocks) {
        b.successors.assign(succ[b.id].begin(), succ[b.id].end());
        if (visits[b.id] == 0) {
            cfg.dead_blocks.push_back(b.id);
            continue;
        }
        uint32_t term_off = b.instructions.back().offset;
        if (b.terminator == Terminator::Jump && b.successors.empty()) {
            b.terminator = Terminator::Unresolved;
            cfg.diagnostics.push_back(
                {b.id, term_off,
                 saw_bad_dest[b.id] ? "jump to non-JUMPDEST target" : "dynamic jump target"});
        } else if (b.terminator == Terminator::Jumpi && saw_dynamic[b.id]) {
            cfg.diagnostics.push_back({b.id, term_off, "dynamic conditional jump target"});
        } else if (saw_bad_dest[b.id]) {
            cfg.diagnostics.push_back({b.id, term_off, "jump to non-JUMPDEST target"});
        }
    }
    std::sort(cfg.call_sites.begin(), cfg.call_sites.end());
    return cfg;
}

// ---------------------------------------------------------------------------
// Function partition
// ---------------------------------------------------------------------------

namespace {

// Matches a dispatcher block tail: PUSH4 sel; EQ; PUSH dest; JUMPI.
std::optional<std::pair<uint32_t, uint32_t>> match_selector_compare(const BasicBlock& b) {
    const auto& ins = b.instructions;
    if (ins.size() < 4) return std::nullopt;
    size_t n = ins.size();
    if (ins[n - 1].opcode != op::JUMPI) return std::nullopt;
    if (!ins[n - 2].is_push() || ins[n - 2].truncated) return std::nullopt;
    if (ins[n - 3].opcode != op::EQ) return std::nullopt;
    if (ins[n - 4].opcode != op::PUSH4 || ins[n - 4].truncated) return std::nullopt;
    auto sel = u256_to_u64(ins[n - 4].push_value());
    auto dest = u256_to_u64(ins[n - 2].push_value());
    if (!sel || !dest) return std::nullopt;
    return std::make_pair(static_cast<uint32_t>(*sel), static_cast<uint32_t>(*dest));
}

// Body of a function: blocks reachable from its entry, treating internal
// calls as opaque (the traversal continues at the return block) and never
// crossing dispatcher blocks or the given return offsets.
std::vector<uint32_t> collect_body(const ContractCfg& cfg, uint32_t entry_block,
                                   const std::set<uint32_t>& dispatcher,
                                   const std::set<uint32_t>& internal_entries,
                                   const std::set<uint32_t>& stop_offsets) {
    std::map<uint32_t, std::vector<const CallSite*>> calls_by_block;
    for (const CallSite& cs : cfg.call_sites) calls_by_block[cs.block].push_back(&cs);

    std::set<uint32_t> seen;
    std::deque<uint32_t> work{entry_block};
    while (!work.empty()) {
        uint32_t id = work.front();
        work.pop_front();
        if (seen.count(id) || dispatcher.count(id)) continue;
        if (id != entry_block && internal_entries.count(cfg.blocks[id].start_offset())) continue;
        seen.insert(id);
        auto cit = calls_by_block.find(id);
        if (cit != calls_by_block.end()) {
            for (const CallSite* cs : cit->second)
                if (auto ret = cfg.block_at(cs->return_offset)) work.push_back(*ret);
            // A call block's only other successor is the callee entry; skip it.
            continue;
        }
        for (uint32_t s : cfg.blocks[id].successors) {
            if (stop_offsets.count(cfg.blocks[s].start_offset())) continue;
            work.push_back(s);
        }
    }
    return std::vector<uint32_t>(seen.begin(), seen.end());
}

}  // namespace

void partition_functions(ContractCfg& cfg, const std::vector<uint32_t>& selector_hints,
                         std::vector<std::string>* warnings) {
    cfg.functions.clear();
    cfg.dispatcher_blocks.clear();

    // Walk the dispatcher chain: each comparing block sends a matched selector
    // to its function entry and falls through to the next comparison.
    std::vector<std::pair<uint32_t, uint32_t>> selector_map;  // (selector, entry offset)
    std::optional<uint32_t> fallback_block;
    uint32_t chain = cfg.entry;
    while (true) {
        const BasicBlock& b = cfg.blocks[chain];
        auto m = match_selector_compare(b);
        if (!m) {
            if (chain == cfg.entry && selector_map.empty()) break;  // no dispatcher at all
            // End of the chain: a revert/stop tail stays dispatcher plumbing,
            // anything else is the fallback body.
            if (b.terminator == Terminator::Revert || b.terminator == Terminator::Invalid ||
                b.terminator == Terminator::Stop) {
                cfg.dispatcher_blocks.insert(chain);
            } else {
                fallback_block = chain;
            }
            break;
        }
        cfg.dispatcher_blocks.insert(chain);
        selector_map.push_back(*m);
        if (chain + 1 >= cfg.blocks.size()) break;
        chain = chain + 1;  // JUMPI fallthrough continues the chain
    }

    std::set<uint32_t> internal_entries;
    for (const CallSite& cs : cfg.call_sites) internal_entries.insert(cs.callee_offset);

    if (selector_map.empty() && !fallback_block) {
        // Pure fallback contract: everything reachable is one function.
        FunctionBody fb;
        fb.selector = 0xffffffffu;
        fb.is_public = true;
        fb.is_fallback = true;
        fb.entry_block = cfg.entry;
        fb.blocks = collect_body(cfg, cfg.entry, {}, internal_entries, {});
        cfg.functions.push_back(std::move(fb));
    } else {
        for (const auto& [sel, entry_off] : selector_map) {
            auto entry_block = cfg.block_at(entry_off);
            if (!entry_block) {
                if (warnings)
                    warnings->push_back("dispatcher target " + selector_hex(sel) +
                                        " does not start a block");
                continue;
            }
            FunctionBody fb;
            fb.selector = sel;
            fb.is_public = true;
            fb.entry_block = *entry_block;
            fb.blocks = collect_body(cfg, *entry_block, cfg.dispatcher_blocks, internal_entries, {});
            cfg.functions.push_back(std::move(fb));
        }
        if (fallback_block) {
            FunctionBody fb;
            fb.selector = 0xffffffffu;
            fb.is_public = true;
            fb.is_fallback = true;
            fb.entry_block = *fallback_block;
            fb.blocks =
                collect_body(cfg, *fallback_block, cfg.dispatcher_blocks, internal_entries, {});
            cfg.functions.push_back(std::move(fb));
        }
    }

    // Internal functions: one body per distinct call target, bounded by the
    // return offsets of its own call sites.
    for (uint32_t entry_off : internal_entries) {
        auto entry_block = cfg.block_at(entry_off);
        if (!entry_block) continue;
        std::set<uint32_t> stops;
        for (const CallSite& cs : cfg.call_sites)
            if (cs.callee_offset == entry_off) stops.insert(cs.return_offset);
        std::set<uint32_t> other_entries = internal_entries;
        other_entries.erase(entry_off);
        FunctionBody fb;
        fb.selector = entry_off;
        fb.is_public = false;
        fb.entry_block = *entry_block;
        fb.blocks = collect_body(cfg, *entry_block, cfg.dispatcher_blocks, other_entries, stops);
        cfg.functions.push_back(std::move(fb));
    }

    if (warnings) {
        for (uint32_t hint : selector_hints) {
            bool found = false;
            for (const FunctionBody& f : cfg.functions)
                if (f.selector == hint && !f.is_fallback) found = true;
            if (!found)
                warnings->push_back("hinted selector " + selector_hex(hint) +
                                    " not found in dispatcher");
        }
    }
}

}  // namespace axe
