#include "axe/summary.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace axe {

const SemOp* FunctionSummary::op_at(uint32_t offset) const {
    for (const SemOp& o : ops)
        if (o.offset == offset) return &o;
    return nullptr;
}

namespace {

FunctionSummary summarize_one(const ContractCfg& cfg, const FunctionBody& fn) {
    FunctionSummary out;
    out.selector = fn.selector;
    out.is_public = fn.is_public;
    out.is_fallback = fn.is_fallback;
    out.entry_block = fn.entry_block;

    std::map<uint32_t, const CallSite*> call_at_block;
    for (const CallSite& cs : cfg.call_sites)
        if (fn.contains(cs.block)) call_at_block[cs.block] = &cs;

    constexpr uint32_t kMaxVisits = 8;
    std::map<uint32_t, MachineState> in_state;
    std::map<uint32_t, uint32_t> visits;
    std::map<uint32_t, std::vector<SemOp>> block_ops;
    uint32_t max_params = 0;

    MachineState entry;
    entry.policy = fn.is_public ? UnderflowPolicy::Unknown : UnderflowPolicy::StackParam;
    in_state[fn.entry_block] = std::move(entry);
    std::deque<uint32_t> work{fn.entry_block};

    auto propagate = [&](uint32_t to, const MachineState& st) {
        if (!fn.contains(to)) return;
        auto it = in_state.find(to);
        if (it == in_state.end()) {
            in_state[to] = st;
            work.push_back(to);
        } else if (it->second.join_from(st) && visits[to] < kMaxVisits) {
            work.push_back(to);
        }
    };

    while (!work.empty()) {
        uint32_t id = work.front();
        work.pop_front();
        if (visits[id] >= kMaxVisits) continue;
        ++visits[id];

        MachineState st = in_state[id];
        std::vector<SemOp> ops;
        TermInfo term =
            exec_block(std::span<const Instruction>(cfg.blocks[id].instructions), st, &ops);

        if (auto cit = call_at_block.find(id); cit != call_at_block.end()) {
            const CallSite& cs = *cit->second;
            SemOp call{SemOpKind::InternalCall, cs.offset, 0, term.call_args, {}, -1,
                       cs.callee_offset, cs.return_offset};
            ops.push_back(std::move(call));
            // Continue past the call: drop arguments and return address, the
            // callee is summarized as its own frame and returns no values.
            size_t frame = term.call_args.size() + 1;
            if (st.stack.size() >= frame)
                st.stack.resize(st.stack.size() - frame);
            else
                st.stack.clear();
            if (auto ret = cfg.block_at(cs.return_offset)) propagate(*ret, st);
        } else {
            for (uint32_t s : cfg.blocks[id].successors) propagate(s, st);
        }
        max_params = std::max(max_params, st.materialized);
        block_ops[id] = std::move(ops);  // last visit wins (most joined state)
    }

    for (auto& [id, ops] : block_ops)
        out.ops.insert(out.ops.end(), ops.begin(), ops.end());
    std::sort(out.ops.begin(), out.ops.end(),
              [](const SemOp& a, const SemOp& b) { return a.offset < b.offset; });

    if (fn.is_public) {
        uint32_t max_idx = 0;
        bool any = false;
        for (const SemOp& o : out.ops) {
            auto scan = [&](const ExprPtr& e) {
                walk(e, [&](const Expr& n) {
                    if (auto idx = calldata_param_index(n)) {
                        any = true;
                        max_idx = std::max(max_idx, *idx);
                    }
                });
            };
            for (const ExprPtr& e : o.args) scan(e);
            for (const ExprPtr& e : o.extra) scan(e);
        }
        out.param_count = any ? max_idx + 1 : 0;
    } else {
        out.param_count = max_params;
    }
    return out;
}

}  // namespace

std::vector<FunctionSummary> summarize_functions(const ContractCfg& cfg) {
    std::vector<FunctionSummary> out;
    out.reserve(cfg.functions.size());
    for (const FunctionBody& fn : cfg.functions) out.push_back(summarize_one(cfg, fn));
    return out;
}

}  // namespace axe
