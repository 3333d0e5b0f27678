#include "axe/bridge.hpp"

#include <algorithm>
#include <deque>

namespace axe {

const FunctionSummary* ContractProgram::summary_of(uint32_t selector, bool is_public) const {
    for (const FunctionSummary& s : summaries)
        if (s.selector == selector && s.is_public == is_public) return &s;
    return nullptr;
}

const FunctionBody* ContractProgram::body_of(uint32_t selector, bool is_public) const {
    for (const FunctionBody& f : cfg.functions)
        if (f.selector == selector && f.is_public == is_public) return &f;
    return nullptr;
}

std::string ContractProgram::function_name(const FunctionBody& fn) const {
    if (const AbiHint* hint = entry.find_abi(fn.selector)) return hint->name;
    if (fn.is_fallback) return "fallback";
    if (!fn.is_public) {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "fn_0x%04x", fn.selector);
        return buf;
    }
    return selector_hex(fn.selector);
}

std::set<uint32_t> ContractProgram::function_region(const FunctionBody& fn) const {
    std::set<uint32_t> region(fn.blocks.begin(), fn.blocks.end());
    std::deque<const FunctionBody*> work{&fn};
    std::set<uint32_t> seen_callees;
    while (!work.empty()) {
        const FunctionBody* cur = work.front();
        work.pop_front();
        for (const CallSite& cs : cfg.call_sites) {
            if (!cur->contains(cs.block)) continue;
            if (!seen_callees.insert(cs.callee_offset).second) continue;
            if (const FunctionBody* callee = cfg.find_internal(cs.callee_offset)) {
                region.insert(callee->blocks.begin(), callee->blocks.end());
                work.push_back(callee);
            }
        }
    }
    return region;
}

const ContractProgram* BridgeProgram::by_address(const std::string& address) const {
    for (const ContractProgram& p : programs)
        if (p.entry.address == address) return &p;
    return nullptr;
}

std::vector<const ContractProgram*> BridgeProgram::by_role(ChainRole role) const {
    std::vector<const ContractProgram*> out;
    for (const ContractProgram& p : programs)
        if (p.role == role) out.push_back(&p);
    return out;
}

std::vector<std::pair<const ContractProgram*, const FunctionBody*>> BridgeProgram::entry_points(
    ChainRole role) const {
    std::vector<std::pair<const ContractProgram*, const FunctionBody*>> out;
    for (const ContractProgram& p : programs) {
        if (p.role != role) continue;
        for (const FunctionBody& f : p.cfg.functions)
            if (f.is_public) out.emplace_back(&p, &f);
    }
    return out;
}

bool BridgeProgram::is_pairing_target(const std::string& address, uint32_t selector) const {
    for (const ResolvedPairing& rp : pairings)
        if (rp.authorize_address == address && rp.authorize_selector == selector) return true;
    return false;
}

ContractProgram ingest_contract(const ContractEntry& entry, ChainRole role, uint64_t chain_id,
                                const Bytes& runtime_code) {
    ContractProgram out;
    out.entry = entry;
    out.role = role;
    out.chain_id = chain_id;
    StripInfo strip;
    out.code = strip_metadata(runtime_code, &strip);
    if (strip.trailer_len > 0)
        log_debug(entry.address + ": stripped " + std::to_string(strip.trailer_len) +
                  " metadata trailer bytes");
    out.cfg = recover_cfg(disassemble(out.code));

    std::vector<uint32_t> hints;
    for (const AbiHint& h : entry.abi) hints.push_back(h.selector);
    partition_functions(out.cfg, hints, &out.warnings);
    out.summaries = summarize_functions(out.cfg);
    for (const FunctionSummary& s : out.summaries)
        for (FunctionBody& f : out.cfg.functions)
            if (f.selector == s.selector && f.is_public == s.is_public)
                f.param_count = s.param_count;

    for (const JumpDiagnostic& d : out.cfg.diagnostics)
        out.warnings.push_back(entry.address + " block " + std::to_string(d.block) + " @" +
                               std::to_string(d.offset) + ": " + d.reason);
    return out;
}

BridgeProgram bind(BridgeDescriptor descriptor, const std::map<std::string, Bytes>& bytecode) {
    BridgeProgram out;
    out.descriptor = std::move(descriptor);

    for (const ChainEntry& chain : out.descriptor.chains) {
        for (const ContractEntry& entry : chain.contracts) {
            auto it = bytecode.find(entry.address);
            if (it == bytecode.end())
                throw BindError("no bytecode bound for contract " + entry.address);
            ContractProgram prog = ingest_contract(entry, chain.role, chain.chain_id, it->second);
            for (const std::string& w : prog.warnings) out.warnings.push_back(w);
            out.programs.push_back(std::move(prog));
        }
    }

    // Locate event emission sites: LOG* whose first topic is a constant that
    // matches an event hint or a pairing.
    std::set<U256> paired_topics;
    for (const Pairing& p : out.descriptor.pairings) paired_topics.insert(p.deposit_event);
    for (ContractProgram& prog : out.programs) {
        for (const FunctionSummary& fs : prog.summaries) {
            for (const SemOp& op : fs.ops) {
                if (op.kind != SemOpKind::Log || op.args.empty()) continue;
                const ExprPtr& topic0 = op.args[0];
                if (!topic0->is_const()) continue;
                const EventHint* hint = prog.entry.find_event(topic0->value);
                bool paired =
                    prog.role == ChainRole::Source && paired_topics.count(topic0->value) > 0;
                if (!hint && !paired) continue;
                EmissionSite site;
                site.address = prog.entry.address;
                site.offset = op.offset;
                site.block = *prog.cfg.block_containing(op.offset);
                site.topic0 = topic0->value;
                site.kind = hint ? hint->kind : HintKind::Deposit;
                site.name = hint ? hint->name : u256_hex32(topic0->value);
                site.paired = paired;
                prog.emissions.push_back(std::move(site));
            }
        }
        std::sort(prog.emissions.begin(), prog.emissions.end(),
                  [](const EmissionSite& a, const EmissionSite& b) { return a.offset < b.offset; });
        // dedupe: the same LOG can appear once per function summary pass
        prog.emissions.erase(std::unique(prog.emissions.begin(), prog.emissions.end(),
                                         [](const EmissionSite& a, const EmissionSite& b) {
                                             return a.offset == b.offset;
                                         }),
                             prog.emissions.end());
    }

    for (const Pairing& p : out.descriptor.pairings) {
        ResolvedPairing rp;
        rp.pairing = p;
        for (const ContractProgram& prog : out.programs) {
            if (prog.role != ChainRole::Source) continue;
            for (const EmissionSite& e : prog.emissions)
                if (e.topic0 == p.deposit_event) rp.emit_sites.emplace_back(e.address, e.offset);
        }
        for (const ContractProgram& prog : out.programs) {
            if (prog.role != ChainRole::Destination) continue;
            if (prog.body_of(p.authorize_selector, /*is_public=*/true)) {
                rp.authorize_address = prog.entry.address;
                rp.authorize_selector = p.authorize_selector;
            }
        }
        rp.informing_ok = !rp.emit_sites.empty() && !rp.authorize_address.empty();
        if (rp.emit_sites.empty())
            out.warnings.push_back("pairing " + u256_hex32(p.deposit_event) +
                                   ": no emission site located; emitting edge omitted");
        if (rp.authorize_address.empty())
            out.warnings.push_back("pairing " + u256_hex32(p.deposit_event) +
                                   ": authorize selector " + selector_hex(p.authorize_selector) +
                                   " has no public body on the destination chain");
        out.pairings.push_back(std::move(rp));
    }
    for (const std::string& w : out.warnings) log_warn(w);
    return out;
}

}  // namespace axe
