#include "axe/xgraph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace axe {

// ---------------------------------------------------------------------------
// xCFG
// ---------------------------------------------------------------------------

bool XNode::operator<(const XNode& o) const {
    return std::tie(kind, address, block) < std::tie(o.kind, o.address, o.block);
}
bool XNode::operator==(const XNode& o) const {
    return kind == o.kind && address == o.address && block == o.block;
}

std::string XNode::label() const {
    switch (kind) {
        case Kind::Relayer: return "relayer";
        case Kind::Client: return "client";
        case Kind::Block: return address + ":b" + std::to_string(block);
    }
    return "?";
}

const char* to_string(XEdgeLabel l) {
    switch (l) {
        case XEdgeLabel::CF: return "CF";
        case XEdgeLabel::Emitting: return "Emitting";
        case XEdgeLabel::Informing: return "Informing";
    }
    return "?";
}

std::vector<const XEdge*> XCfg::with_label(XEdgeLabel l) const {
    std::vector<const XEdge*> out;
    for (const XEdge& e : edges)
        if (e.label == l) out.push_back(&e);
    return out;
}

std::string XCfg::dump() const {
    std::vector<std::string> lines;
    for (const XEdge& e : edges)
        lines.push_back(e.from.label() + " -> " + e.to.label() + " [" + to_string(e.label) + "]");
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const std::string& l : lines) out += l + "\n";
    return out;
}

XCfg build_xcfg(const BridgeProgram& program) {
    XCfg g;
    const XNode relayer{XNode::Kind::Relayer, "", 0};
    const XNode client{XNode::Kind::Client, "", 0};

    for (const ContractProgram& prog : program.programs) {
        for (const BasicBlock& b : prog.cfg.blocks) {
            XNode from{XNode::Kind::Block, prog.entry.address, b.id};
            for (uint32_t s : b.successors)
                g.edges.push_back({from, XNode{XNode::Kind::Block, prog.entry.address, s}, XEdgeLabel::CF});
        }
        for (const EmissionSite& e : prog.emissions) {
            XNode from{XNode::Kind::Block, prog.entry.address, e.block};
            if (prog.role == ChainRole::Source &&
                (e.paired || e.kind == HintKind::Deposit)) {
                g.edges.push_back({from, relayer, XEdgeLabel::Emitting});
            } else if (prog.role == ChainRole::Destination && e.kind == HintKind::Withdraw) {
                g.edges.push_back({from, client, XEdgeLabel::Emitting});
            }
        }
    }

    for (const ResolvedPairing& rp : program.pairings) {
        if (!rp.informing_ok) continue;
        const ContractProgram* dest = program.by_address(rp.authorize_address);
        const FunctionBody* fn = dest->body_of(rp.authorize_selector, /*is_public=*/true);
        g.edges.push_back(
            {relayer, XNode{XNode::Kind::Block, dest->entry.address, fn->entry_block},
             XEdgeLabel::Informing});
    }
    return g;
}

// ---------------------------------------------------------------------------
// xDFG
// ---------------------------------------------------------------------------

bool DfgNode::operator<(const DfgNode& o) const {
    return std::tie(kind, address, a, b) < std::tie(o.kind, o.address, o.a, o.b);
}
bool DfgNode::operator==(const DfgNode& o) const {
    return kind == o.kind && address == o.address && a == o.a && b == o.b;
}

std::string DfgNode::label() const {
    switch (kind) {
        case Kind::Site: return address + ":@" + std::to_string(a);
        case Kind::Param: return address + ":param(" + selector_hex(static_cast<uint32_t>(a)) +
                                 "," + std::to_string(b) + ")";
        case Kind::InternalParam:
            return address + ":iparam(@" + std::to_string(a) + "," + std::to_string(b) + ")";
        case Kind::EventArg:
            return address + ":eventarg(@" + std::to_string(a) + "," + std::to_string(b) + ")";
        case Kind::RelayerSlot:
            return "relayer:slot(" + std::to_string(a) + "," + std::to_string(b) + ")";
        case Kind::Client: return "client";
    }
    return "?";
}

uint32_t XDfg::intern(const DfgNode& n) {
    auto it = index_.find(n);
    if (it != index_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(nodes.size());
    nodes.push_back(n);
    succ.emplace_back();
    index_[n] = id;
    return id;
}

std::optional<uint32_t> XDfg::find(const DfgNode& n) const {
    auto it = index_.find(n);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void XDfg::add_edge(const DfgNode& from, const DfgNode& to, std::string carried) {
    uint32_t f = intern(from);
    uint32_t t = intern(to);
    for (uint32_t s : succ[f])
        if (s == t) return;
    succ[f].push_back(t);
    edges.push_back({f, t, std::move(carried)});
}

bool XDfg::reaches(uint32_t from, uint32_t to) const {
    if (from == to) return true;
    std::vector<bool> seen(nodes.size(), false);
    std::deque<uint32_t> work{from};
    seen[from] = true;
    while (!work.empty()) {
        uint32_t n = work.front();
        work.pop_front();
        for (uint32_t s : succ[n]) {
            if (s == to) return true;
            if (!seen[s]) {
                seen[s] = true;
                work.push_back(s);
            }
        }
    }
    return false;
}

std::vector<uint32_t> XDfg::forward_closure(const std::vector<uint32_t>& roots) const {
    std::vector<bool> seen(nodes.size(), false);
    std::deque<uint32_t> work;
    for (uint32_t r : roots)
        if (r < nodes.size() && !seen[r]) {
            seen[r] = true;
            work.push_back(r);
        }
    std::vector<uint32_t> out;
    while (!work.empty()) {
        uint32_t n = work.front();
        work.pop_front();
        out.push_back(n);
        for (uint32_t s : succ[n])
            if (!seen[s]) {
                seen[s] = true;
                work.push_back(s);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string XDfg::dump() const {
    std::vector<std::string> lines;
    for (const DfgEdge& e : edges) {
        std::string line = nodes[e.from].label() + " -> " + nodes[e.to].label();
        line += e.carried.empty() ? " [dfg]" : " [" + e.carried + "]";
        lines.push_back(std::move(line));
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const std::string& l : lines) out += l + "\n";
    return out;
}

namespace {

struct WireCtx {
    XDfg& g;
    const ContractProgram& prog;
    const FunctionSummary& fn;
    // All SSTORE sites of the contract by base slot, for storage def-use.
    const std::vector<std::pair<U256, uint32_t>>& stores;
    // Block-level reachability within the contract.
    const std::vector<std::set<uint32_t>>& block_reach;
};

bool site_reaches(const WireCtx& ctx, uint32_t from_offset, uint32_t to_offset) {
    auto fb = ctx.prog.cfg.block_containing(from_offset);
    auto tb = ctx.prog.cfg.block_containing(to_offset);
    if (!fb || !tb) return false;
    if (*fb == *tb) return from_offset < to_offset || ctx.block_reach[*fb].count(*tb) > 0;
    return ctx.block_reach[*fb].count(*tb) > 0;
}

void wire(const ExprPtr& e, const DfgNode& consumer, WireCtx& ctx) {
    if (!e) return;
    switch (e->kind) {
        case ExprKind::Const:
            return;
        case ExprKind::Bin:
        case ExprKind::IsZero:
        case ExprKind::BitNot:
        case ExprKind::MapSlot:
            for (const ExprPtr& k : e->kids) wire(k, consumer, ctx);
            return;
        case ExprKind::Calldata: {
            DfgNode self{DfgNode::Kind::Site, ctx.prog.entry.address,
                         static_cast<uint64_t>(e->site), 0};
            ctx.g.add_edge(self, consumer);
            auto idx = calldata_param_index(*e);
            if (idx && ctx.fn.is_public) {
                DfgNode param{DfgNode::Kind::Param, ctx.prog.entry.address, ctx.fn.selector, *idx};
                ctx.g.add_edge(param, self);
            } else {
                wire(e->kids[0], self, ctx);
            }
            return;
        }
        case ExprKind::SLoad: {
            DfgNode self{DfgNode::Kind::Site, ctx.prog.entry.address,
                         static_cast<uint64_t>(e->site), 0};
            ctx.g.add_edge(self, consumer);
            wire(e->kids[0], self, ctx);
            if (auto base = slot_base(e->kids[0])) {
                for (const auto& [slot, store_off] : ctx.stores) {
                    if (slot != *base) continue;
                    if (!site_reaches(ctx, store_off, static_cast<uint32_t>(e->site))) continue;
                    ctx.g.add_edge(
                        DfgNode{DfgNode::Kind::Site, ctx.prog.entry.address, store_off, 0}, self);
                }
            }
            return;
        }
        case ExprKind::ExtBalance: {
            DfgNode self{DfgNode::Kind::Site, ctx.prog.entry.address,
                         static_cast<uint64_t>(e->site), 0};
            ctx.g.add_edge(self, consumer);
            wire(e->kids[0], self, ctx);
            return;
        }
        case ExprKind::StackParam: {
            if (!ctx.fn.is_public) {
                DfgNode param{DfgNode::Kind::InternalParam, ctx.prog.entry.address,
                              ctx.fn.selector, e->index};
                ctx.g.add_edge(param, consumer);
            }
            return;
        }
        case ExprKind::Unknown:
            if (e->site >= 0)
                ctx.g.add_edge(DfgNode{DfgNode::Kind::Site, ctx.prog.entry.address,
                                       static_cast<uint64_t>(e->site), 0},
                               consumer);
            return;
        default: {
            // Environment / call-result leaves carry their defining site.
            if (e->site >= 0)
                ctx.g.add_edge(DfgNode{DfgNode::Kind::Site, ctx.prog.entry.address,
                                       static_cast<uint64_t>(e->site), 0},
                               consumer);
            for (const ExprPtr& k : e->kids) wire(k, consumer, ctx);
            return;
        }
    }
}

}  // namespace

XDfg build_xdfg(const XCfg& xcfg, const BridgeProgram& program) {
    (void)xcfg;
    XDfg g;
    const DfgNode client{DfgNode::Kind::Client, "", 0, 0};

    // Emit-site classification shared with the xCFG construction.
    struct PairedEmit {
        size_t pairing_idx;
        std::string authorize_address;
        uint32_t authorize_selector;
    };
    std::map<std::pair<std::string, uint32_t>, PairedEmit> paired_emits;
    for (size_t pi = 0; pi < program.pairings.size(); ++pi) {
        const ResolvedPairing& rp = program.pairings[pi];
        if (!rp.informing_ok) continue;
        for (const auto& site : rp.emit_sites)
            paired_emits[site] = PairedEmit{pi, rp.authorize_address, rp.authorize_selector};
    }
    std::set<std::pair<std::string, uint32_t>> withdraw_emits;
    for (const ContractProgram& prog : program.programs)
        if (prog.role == ChainRole::Destination)
            for (const EmissionSite& e : prog.emissions)
                if (e.kind == HintKind::Withdraw) withdraw_emits.insert({e.address, e.offset});

    for (const ContractProgram& prog : program.programs) {
        // Storage def-use inputs.
        std::vector<std::pair<U256, uint32_t>> stores;
        for (const FunctionSummary& fs : prog.summaries)
            for (const SemOp& op : fs.ops)
                if (op.kind == SemOpKind::SStore)
                    if (auto base = slot_base(op.args[0])) stores.emplace_back(*base, op.offset);
        std::vector<std::set<uint32_t>> block_reach(prog.cfg.blocks.size());
        for (const BasicBlock& b : prog.cfg.blocks) {
            for (uint32_t s : b.successors) {
                std::set<uint32_t> r = prog.cfg.reachable_from(s);
                block_reach[b.id].insert(r.begin(), r.end());
            }
        }

        for (const FunctionSummary& fs : prog.summaries) {
            WireCtx ctx{g, prog, fs, stores, block_reach};
            for (const SemOp& op : fs.ops) {
                DfgNode site{DfgNode::Kind::Site, prog.entry.address, op.offset, 0};
                switch (op.kind) {
                    case SemOpKind::SStore:
                        g.intern(site);
                        wire(op.args[0], site, ctx);
                        wire(op.args[1], site, ctx);
                        break;
                    case SemOpKind::SLoadOp: {
                        // Materialize the load node and its incoming stores
                        // even when the loaded value is never consumed.
                        g.intern(site);
                        ExprPtr load = make_unary(ExprKind::SLoad, op.offset, op.args[0]);
                        wire(load, site, ctx);
                        break;
                    }
                    case SemOpKind::Jumpi:
                        g.intern(site);
                        wire(op.args[0], site, ctx);
                        break;
                    case SemOpKind::ExtCall:
                        g.intern(site);
                        for (const ExprPtr& a : op.args) wire(a, site, ctx);
                        for (const ExprPtr& w : op.extra) wire(w, site, ctx);
                        break;
                    case SemOpKind::InternalCall: {
                        g.intern(site);
                        for (const ExprPtr& a : op.args) wire(a, site, ctx);
                        for (size_t i = 0; i < op.args.size(); ++i)
                            g.add_edge(site, DfgNode{DfgNode::Kind::InternalParam,
                                                     prog.entry.address, op.callee_entry,
                                                     static_cast<uint64_t>(i)});
                        break;
                    }
                    case SemOpKind::Log: {
                        // Event argument vector: indexed topics (minus the
                        // signature), then the data words.
                        std::vector<ExprPtr> payload;
                        for (size_t i = 1; i < op.args.size(); ++i) payload.push_back(op.args[i]);
                        for (const ExprPtr& w : op.extra) payload.push_back(w);
                        std::pair<std::string, uint32_t> key{prog.entry.address, op.offset};
                        bool is_paired = paired_emits.count(key) > 0;
                        bool is_withdraw = withdraw_emits.count(key) > 0;
                        for (size_t i = 0; i < payload.size(); ++i) {
                            DfgNode arg{DfgNode::Kind::EventArg, prog.entry.address, op.offset,
                                        static_cast<uint64_t>(i)};
                            g.intern(arg);
                            wire(payload[i], arg, ctx);
                            std::string desc = "event_arg[" + std::to_string(i) + "]";
                            if (is_paired) {
                                const PairedEmit& pe = paired_emits[key];
                                DfgNode slot{DfgNode::Kind::RelayerSlot, "", pe.pairing_idx,
                                             static_cast<uint64_t>(i)};
                                g.add_edge(arg, slot, desc);
                                g.add_edge(slot,
                                           DfgNode{DfgNode::Kind::Param, pe.authorize_address,
                                                   pe.authorize_selector, static_cast<uint64_t>(i)},
                                           "authorize_arg[" + std::to_string(i) + "]");
                            }
                            if (is_withdraw) g.add_edge(arg, client, desc);
                        }
                        break;
                    }
                }
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Detectors
// ---------------------------------------------------------------------------

namespace {

struct DepositRoute {
    std::string src_address;
    uint32_t src_selector = 0;
    uint32_t emit_offset = 0;
    HintKind emit_kind = HintKind::Other;
    std::string dest_address;
    uint32_t dest_selector = 0;

    bool operator<(const DepositRoute& o) const {
        return std::tie(src_address, src_selector, emit_offset) <
               std::tie(o.src_address, o.src_selector, o.emit_offset);
    }
};

}  // namespace

std::vector<SemFinding> check_granularity(const XCfg& xcfg, const BridgeProgram& program) {
    (void)xcfg;
    std::vector<DepositRoute> routes;
    for (const ResolvedPairing& rp : program.pairings) {
        if (!rp.informing_ok) continue;
        for (const auto& [addr, offset] : rp.emit_sites) {
            const ContractProgram* prog = program.by_address(addr);
            const EmissionSite* site = nullptr;
            for (const EmissionSite& e : prog->emissions)
                if (e.offset == offset) site = &e;
            auto block = prog->cfg.block_containing(offset);
            if (!site || !block) continue;
            for (const FunctionBody& fn : prog->cfg.functions) {
                if (!fn.is_public) continue;
                if (!prog->function_region(fn).count(*block)) continue;
                routes.push_back(DepositRoute{addr, fn.selector, offset, site->kind,
                                              rp.authorize_address, rp.authorize_selector});
            }
        }
    }
    std::sort(routes.begin(), routes.end());

    std::vector<SemFinding> out;
    std::map<std::pair<std::string, uint32_t>, std::vector<const DepositRoute*>> by_dest;
    for (const DepositRoute& r : routes) by_dest[{r.dest_address, r.dest_selector}].push_back(&r);
    for (const auto& [dest, group] : by_dest) {
        for (size_t i = 0; i < group.size(); ++i) {
            bool found = false;
            for (size_t j = i + 1; j < group.size() && !found; ++j) {
                bool different_fn = group[i]->src_address != group[j]->src_address ||
                                    group[i]->src_selector != group[j]->src_selector;
                bool different_kind = group[i]->emit_kind != group[j]->emit_kind;
                if (!different_fn && !different_kind) continue;
                SemFinding f;
                f.kind = SemFinding::Kind::Granularity;
                f.address = dest.first;
                f.function_selector = dest.second;
                f.deposit_a_address = group[i]->src_address;
                f.deposit_a_selector = group[i]->src_selector;
                f.deposit_b_address = group[j]->src_address;
                f.deposit_b_selector = group[j]->src_selector;
                out.push_back(std::move(f));
                found = true;
            }
            if (found) break;  // one witness pair per withdrawal function
        }
    }
    return out;
}

std::vector<SemFinding> check_integrity(const XDfg& xdfg, const BridgeProgram& program) {
    // Roots: every argument of a paired deposit event on the source chain.
    std::vector<uint32_t> roots;
    for (size_t i = 0; i < xdfg.nodes.size(); ++i)
        if (xdfg.nodes[i].kind == DfgNode::Kind::EventArg) {
            for (const ResolvedPairing& rp : program.pairings) {
                if (!rp.informing_ok) continue;
                for (const auto& [addr, offset] : rp.emit_sites)
                    if (xdfg.nodes[i].address == addr && xdfg.nodes[i].a == offset)
                        roots.push_back(static_cast<uint32_t>(i));
            }
        }
    std::vector<uint32_t> closure = xdfg.forward_closure(roots);
    auto in_closure = [&](uint32_t id) {
        return std::binary_search(closure.begin(), closure.end(), id);
    };

    std::vector<SemFinding> out;
    for (const ContractProgram& prog : program.programs) {
        if (prog.role != ChainRole::Destination) continue;
        for (const FunctionBody& fn : prog.cfg.functions) {
            if (!fn.is_public) continue;
            const AbiHint* hint = prog.entry.find_abi(fn.selector);
            bool relevant = program.is_pairing_target(prog.entry.address, fn.selector) ||
                            (hint && (hint->kind == HintKind::Authorize ||
                                      hint->kind == HintKind::Withdraw));
            if (!relevant) continue;
            std::set<uint32_t> region = prog.function_region(fn);

            SemFinding f;
            f.kind = SemFinding::Kind::Integrity;
            f.address = prog.entry.address;
            f.function_selector = fn.selector;
            for (const FunctionSummary& fs : prog.summaries) {
                for (const SemOp& op : fs.ops) {
                    if (op.kind != SemOpKind::SStore) continue;
                    auto block = prog.cfg.block_containing(op.offset);
                    if (!block || !region.count(*block)) continue;
                    auto base = slot_base(op.args[0]);
                    const StorageHint* sh = base ? prog.entry.find_storage(*base) : nullptr;
                    if (!sh || (sh->meaning != StorageMeaning::Balance &&
                                sh->meaning != StorageMeaning::TokenType))
                        continue;
                    DfgNode site{DfgNode::Kind::Site, prog.entry.address, op.offset, 0};
                    auto id = xdfg.find(site);
                    bool dependent = id && in_closure(*id);
                    if (!dependent)
                        f.independent.push_back(SemFinding::IndependentVar{
                            op.offset, *base, sh->meaning, sh->name});
                }
            }
            if (!f.independent.empty()) {
                std::sort(f.independent.begin(), f.independent.end(),
                          [](const SemFinding::IndependentVar& a,
                             const SemFinding::IndependentVar& b) { return a.offset < b.offset; });
                out.push_back(std::move(f));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Audits
// ---------------------------------------------------------------------------

std::vector<std::string> audit_xcfg(const XCfg& xcfg, const BridgeProgram& program) {
    std::vector<std::string> violations;
    for (const XEdge& e : xcfg.edges) {
        switch (e.label) {
            case XEdgeLabel::CF:
                if (e.from.kind != XNode::Kind::Block || e.to.kind != XNode::Kind::Block ||
                    e.from.address != e.to.address)
                    violations.push_back("CF edge crosses contracts: " + e.from.label() + " -> " +
                                         e.to.label());
                break;
            case XEdgeLabel::Emitting: {
                if (e.from.kind != XNode::Kind::Block) {
                    violations.push_back("Emitting edge from non-block: " + e.from.label());
                    break;
                }
                const ContractProgram* prog = program.by_address(e.from.address);
                bool has_log = false;
                if (prog && e.from.block < prog->cfg.blocks.size())
                    for (const Instruction& ins : prog->cfg.blocks[e.from.block].instructions)
                        if (is_log(ins.opcode)) has_log = true;
                if (!has_log)
                    violations.push_back("Emitting edge originates at a LOG-free block: " +
                                         e.from.label());
                if (e.to.kind == XNode::Kind::Block)
                    violations.push_back("Emitting edge targets a block: " + e.to.label());
                break;
            }
            case XEdgeLabel::Informing: {
                if (e.from.kind != XNode::Kind::Relayer)
                    violations.push_back("Informing edge from non-relayer: " + e.from.label());
                if (e.to.kind != XNode::Kind::Block)
                    violations.push_back("Informing edge targets non-block: " + e.to.label());
                break;
            }
        }
    }
    return violations;
}

std::vector<std::string> audit_xdfg_boundaries(const XDfg& xdfg, const BridgeProgram& program) {
    std::vector<std::string> violations;
    for (const DfgEdge& e : xdfg.edges) {
        const DfgNode& f = xdfg.nodes[e.from];
        const DfgNode& t = xdfg.nodes[e.to];
        bool f_contract = f.kind != DfgNode::Kind::RelayerSlot && f.kind != DfgNode::Kind::Client;
        bool t_contract = t.kind != DfgNode::Kind::RelayerSlot && t.kind != DfgNode::Kind::Client;
        if (f_contract && t_contract && f.address == t.address) continue;  // intra-contract

        bool ok = false;
        if (f.kind == DfgNode::Kind::EventArg && t.kind == DfgNode::Kind::RelayerSlot)
            ok = !e.carried.empty() && e.carried.rfind("event_arg[", 0) == 0;
        else if (f.kind == DfgNode::Kind::RelayerSlot && t.kind == DfgNode::Kind::Param)
            ok = !e.carried.empty() && e.carried.rfind("authorize_arg[", 0) == 0 &&
                 program.is_pairing_target(t.address, static_cast<uint32_t>(t.a));
        else if (f.kind == DfgNode::Kind::EventArg && t.kind == DfgNode::Kind::Client)
            ok = !e.carried.empty() && e.carried.rfind("event_arg[", 0) == 0;
        if (!ok)
            violations.push_back("boundary edge carries a non-argument value: " + f.label() +
                                 " -> " + t.label() + " [" + e.carried + "]");
    }
    return violations;
}

}  // namespace axe
