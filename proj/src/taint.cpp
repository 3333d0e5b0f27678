#include "axe/taint.hpp"

#include <algorithm>
#include <deque>

namespace axe {

std::vector<TaintSeed> seed_sources(const BridgeProgram& program, XDfg& xdfg) {
    std::vector<TaintSeed> seeds;
    for (const ContractProgram& prog : program.programs) {
        for (const FunctionBody& fn : prog.cfg.functions) {
            if (!fn.is_public) continue;
            for (uint32_t i = 0; i < fn.param_count; ++i) {
                DfgNode n{DfgNode::Kind::Param, prog.entry.address, fn.selector, i};
                xdfg.intern(n);
                seeds.push_back(
                    {n, "param " + std::to_string(i) + " of " + prog.function_name(fn)});
            }
        }
        for (const Instruction& ins : prog.cfg.instructions) {
            switch (ins.opcode) {
                case op::CALLDATALOAD:
                case op::CALLDATACOPY:
                case op::CALLER:
                case op::ORIGIN:
                case op::CALLVALUE:
                case op::CALLDATASIZE: {
                    DfgNode n{DfgNode::Kind::Site, prog.entry.address, ins.offset, 0};
                    xdfg.intern(n);
                    seeds.push_back({n, opcode_name(ins.opcode) + "@" + std::to_string(ins.offset)});
                    break;
                }
                default:
                    break;
            }
        }
    }
    return seeds;
}

TaintResult propagate(const XDfg& xdfg, const std::vector<TaintSeed>& seeds,
                      const Deadline& deadline) {
    TaintResult out;
    out.tainted_by.assign(xdfg.nodes.size(), {});
    std::deque<uint32_t> work;
    for (size_t si = 0; si < seeds.size(); ++si) {
        auto id = xdfg.find(seeds[si].node);
        if (!id) continue;
        if (out.tainted_by[*id].insert(static_cast<uint32_t>(si)).second) work.push_back(*id);
    }
    size_t bound = (xdfg.nodes.size() + 1) * (seeds.size() + 1);
    while (!work.empty()) {
        if (++out.iterations > bound) {
            log_warn("taint fixpoint exceeded its iteration bound; partial result");
            break;
        }
        if (out.iterations % 1024 == 0) deadline.check("taint propagation");
        uint32_t n = work.front();
        work.pop_front();
        for (uint32_t s : xdfg.succ[n]) {
            size_t before = out.tainted_by[s].size();
            out.tainted_by[s].insert(out.tainted_by[n].begin(), out.tainted_by[n].end());
            if (out.tainted_by[s].size() != before) work.push_back(s);
        }
    }
    return out;
}

std::vector<std::set<uint32_t>> propagate_core(size_t node_count,
                                               const std::vector<std::pair<uint32_t, uint32_t>>& edges,
                                               const std::vector<uint32_t>& seed_nodes,
                                               const Deadline& deadline) {
    std::vector<std::vector<uint32_t>> succ(node_count);
    for (const auto& [f, t] : edges) succ[f].push_back(t);
    std::vector<std::set<uint32_t>> tainted(node_count);
    std::deque<uint32_t> work;
    for (size_t si = 0; si < seed_nodes.size(); ++si) {
        uint32_t n = seed_nodes[si];
        if (n < node_count && tainted[n].insert(static_cast<uint32_t>(si)).second)
            work.push_back(n);
    }
    size_t steps = 0;
    while (!work.empty()) {
        if (++steps % 4096 == 0) deadline.check("taint propagation");
        uint32_t n = work.front();
        work.pop_front();
        for (uint32_t s : succ[n]) {
            size_t before = tainted[s].size();
            tainted[s].insert(tainted[n].begin(), tainted[n].end());
            if (tainted[s].size() != before) work.push_back(s);
        }
    }
    return tainted;
}

std::vector<SinkHit> collect_sinks(const BridgeProgram& program, const XDfg& xdfg,
                                   const TaintResult& taint) {
    std::vector<SinkHit> out;
    auto tainted_site = [&](const std::string& addr, uint32_t offset) {
        auto id = xdfg.find(DfgNode{DfgNode::Kind::Site, addr, offset, 0});
        return id && taint.tainted(*id);
    };
    for (const ContractProgram& prog : program.programs) {
        for (const Instruction& ins : prog.cfg.instructions) {
            const char* kind = nullptr;
            switch (ins.opcode) {
                case op::CALL:
                case op::CALLCODE:
                case op::STATICCALL:
                case op::DELEGATECALL:
                    kind = "external-call";
                    break;
                case op::SSTORE:
                    kind = "sstore";
                    break;
                case op::BALANCE:
                    kind = "balance";
                    break;
                case op::ADDRESS:
                    kind = "address";
                    break;
                default:
                    break;
            }
            if (!kind) continue;
            out.push_back(SinkHit{kind, prog.entry.address, ins.offset,
                                  tainted_site(prog.entry.address, ins.offset)});
        }
    }
    auto client = xdfg.find(DfgNode{DfgNode::Kind::Client, "", 0, 0});
    if (client)
        out.push_back(SinkHit{"client", "", 0, taint.tainted(*client)});
    return out;
}

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

namespace {

VulnTrace::Hop make_hop(const ContractProgram& prog, const FunctionBody& fn) {
    return VulnTrace::Hop{prog.entry.address, fn.selector, fn.is_public,
                          prog.function_name(fn)};
}

// Taint anywhere in the function's region (its parameters or any site),
// i.e. an external attacker can drive execution into the indicator.
bool region_tainted(const ContractProgram& prog, const FunctionBody& fn, const XDfg& xdfg,
                    const TaintResult& taint) {
    for (uint32_t i = 0; i < std::max<uint32_t>(fn.param_count, 1); ++i) {
        DfgNode n{fn.is_public ? DfgNode::Kind::Param : DfgNode::Kind::InternalParam,
                  prog.entry.address, fn.selector, i};
        auto id = xdfg.find(n);
        if (id && taint.tainted(*id)) return true;
    }
    std::set<uint32_t> region = prog.function_region(fn);
    for (size_t ni = 0; ni < xdfg.nodes.size(); ++ni) {
        const DfgNode& n = xdfg.nodes[ni];
        if (n.kind != DfgNode::Kind::Site || n.address != prog.entry.address) continue;
        auto block = prog.cfg.block_containing(static_cast<uint32_t>(n.a));
        if (block && region.count(*block) && taint.tainted(static_cast<uint32_t>(ni)))
            return true;
    }
    return false;
}

// Call chain from a function to the function owning the anchor resource.
std::vector<VulnTrace::Hop> chain_to_anchor(const ContractProgram& prog, const FunctionBody& from,
                                            const Resource* anchor) {
    std::vector<VulnTrace::Hop> chain{make_hop(prog, from)};
    if (!anchor) return chain;
    // An internal-method anchor extends the chain into the callee.
    uint32_t target_fn_entry = 0;
    bool want_internal = false;
    if (anchor->kind == ResourceKind::InternalMethod) {
        target_fn_entry = anchor->selector;
        want_internal = true;
    } else if (!anchor->function_public) {
        target_fn_entry = anchor->function_selector;
        want_internal = true;
    }
    if (!want_internal) return chain;

    // Breadth-first over the internal call graph starting at `from`.
    std::map<uint32_t, std::vector<const CallSite*>> calls_in;  // caller entry block -> sites
    std::deque<std::pair<const FunctionBody*, std::vector<const FunctionBody*>>> work;
    work.push_back({&from, {}});
    std::set<uint32_t> seen;
    while (!work.empty()) {
        auto [fn, trail] = work.front();
        work.pop_front();
        for (const CallSite& cs : prog.cfg.call_sites) {
            if (!fn->contains(cs.block)) continue;
            const FunctionBody* callee = prog.cfg.find_internal(cs.callee_offset);
            if (!callee || !seen.insert(cs.callee_offset).second) continue;
            auto next_trail = trail;
            next_trail.push_back(callee);
            if (cs.callee_offset == target_fn_entry) {
                for (const FunctionBody* hop : next_trail) chain.push_back(make_hop(prog, *hop));
                return chain;
            }
            work.push_back({callee, next_trail});
        }
    }
    return chain;
}

std::vector<VulnTrace::Affected> affected_from(const ContractAnalysis& ca, const XDfg& xdfg,
                                               const std::string& address, uint32_t anchor_offset) {
    std::vector<VulnTrace::Affected> out;
    auto start = xdfg.find(DfgNode{DfgNode::Kind::Site, address, anchor_offset, 0});
    if (!start) return out;
    std::vector<uint32_t> closure = xdfg.forward_closure({*start});
    for (uint32_t ni : closure) {
        const DfgNode& n = xdfg.nodes[ni];
        if (n.kind != DfgNode::Kind::Site || n.address != address) continue;
        if (n.a == anchor_offset) continue;  // strictly forward of the indicator
        for (const Resource& r : ca.resources) {
            if (r.kind != ResourceKind::FieldAccess || !r.is_store) continue;
            if (r.offset != static_cast<uint32_t>(n.a) || r.touched_slots.empty()) continue;
            out.push_back(VulnTrace::Affected{r.touched_slots[0], r.meaning, r.display_name});
        }
    }
    std::sort(out.begin(), out.end(), [](const VulnTrace::Affected& a, const VulnTrace::Affected& b) {
        return std::tie(a.slot, a.name) < std::tie(b.slot, b.name);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const VulnTrace::Affected& a, const VulnTrace::Affected& b) {
                              return a.slot == b.slot && a.name == b.name;
                          }),
              out.end());
    return out;
}

// The source-chain deposit function feeding a destination authorize entry.
const FunctionBody* first_deposit_fn(const BridgeProgram& program, const std::string& dest_addr,
                                     uint32_t dest_selector, const ContractProgram** src_out) {
    for (const ResolvedPairing& rp : program.pairings) {
        if (!rp.informing_ok || rp.authorize_address != dest_addr ||
            rp.authorize_selector != dest_selector)
            continue;
        for (const auto& [addr, offset] : rp.emit_sites) {
            const ContractProgram* src = program.by_address(addr);
            auto block = src->cfg.block_containing(offset);
            if (!block) continue;
            for (const FunctionBody& fn : src->cfg.functions) {
                if (!fn.is_public) continue;
                if (src->function_region(fn).count(*block)) {
                    *src_out = src;
                    return &fn;
                }
            }
        }
    }
    return nullptr;
}

}  // namespace

TraceSet discover_traces(const BridgeProgram& program,
                         const std::map<std::string, ContractAnalysis>& analyses,
                         const std::vector<AcFinding>& ac_findings,
                         const std::vector<SemFinding>& sem_findings, const XDfg& xdfg,
                         const TaintResult& taint) {
    TraceSet out;

    for (const AcFinding& f : ac_findings) {
        const ContractProgram* prog = program.by_address(f.address);
        const ContractAnalysis& ca = analyses.at(f.address);
        const FunctionBody* fn = prog->body_of(f.function_selector, f.function_public);
        if (!fn || !region_tainted(*prog, *fn, xdfg, taint)) {
            out.access.push_back(std::nullopt);
            log_info(f.address + ": indicator not reachable by attacker taint; demoted to note");
            continue;
        }
        const Resource* anchor =
            f.anchor_resource >= 0 ? &ca.resources[f.anchor_resource] : nullptr;
        VulnTrace trace;
        trace.entry_chain = chain_to_anchor(*prog, *fn, anchor);
        if (anchor) trace.affected = affected_from(ca, xdfg, f.address, anchor->offset);
        out.access.push_back(std::move(trace));
    }

    for (const SemFinding& f : sem_findings) {
        const ContractProgram* prog = program.by_address(f.address);
        const ContractAnalysis& ca = analyses.at(f.address);
        const FunctionBody* fn = prog->body_of(f.function_selector, /*is_public=*/true);
        if (!fn || !region_tainted(*prog, *fn, xdfg, taint)) {
            out.semantic.push_back(std::nullopt);
            log_info(f.address + ": indicator not reachable by attacker taint; demoted to note");
            continue;
        }
        VulnTrace trace;
        // Cross-chain entry: the deposit function on the source chain feeds
        // the flawed withdrawal logic through the relayer.
        const ContractProgram* src = nullptr;
        const FunctionBody* deposit = nullptr;
        if (f.kind == SemFinding::Kind::Granularity) {
            src = program.by_address(f.deposit_a_address);
            if (src) deposit = src->body_of(f.deposit_a_selector, /*is_public=*/true);
        } else {
            deposit = first_deposit_fn(program, f.address, f.function_selector, &src);
        }
        if (deposit && src) trace.entry_chain.push_back(make_hop(*src, *deposit));
        trace.entry_chain.push_back(make_hop(*prog, *fn));

        uint32_t anchor_offset = 0;
        if (f.kind == SemFinding::Kind::Integrity && !f.independent.empty()) {
            anchor_offset = f.independent.front().offset;
        } else {
            // Granularity: forward impact of the withdrawal function's
            // primary resource.
            std::set<uint32_t> region = prog->function_region(*fn);
            for (const Resource& r : ca.resources) {
                if (!region.count(r.block)) continue;
                if (r.kind == ResourceKind::InternalMethod ||
                    (r.kind == ResourceKind::FieldAccess && r.is_store)) {
                    anchor_offset = r.offset;
                    break;
                }
            }
        }
        if (anchor_offset) trace.affected = affected_from(ca, xdfg, f.address, anchor_offset);
        out.semantic.push_back(std::move(trace));
    }
    return out;
}

}  // namespace axe
