#pragma once

#include "axe/cfg.hpp"
#include "axe/manifest.hpp"
#include "axe/summary.hpp"

#include <map>
#include <set>

namespace axe {

// A LOG site whose first topic is a 32-byte constant known to the manifest
// (event hint) or referenced by a pairing.
struct EmissionSite {
    std::string address;
    uint32_t offset = 0;
    uint32_t block = 0;
    U256 topic0{};
    HintKind kind = HintKind::Other;
    std::string name;
    bool paired = false;
};

// One ingested contract: stripped runtime code, recovered CFG, per-function
// semantic summaries and located event emission sites.
struct ContractProgram {
    ContractEntry entry;
    ChainRole role = ChainRole::Source;
    uint64_t chain_id = 0;
    Bytes code;
    ContractCfg cfg;
    std::vector<FunctionSummary> summaries;
    std::vector<EmissionSite> emissions;
    std::vector<std::string> warnings;

    const FunctionSummary* summary_of(uint32_t selector, bool is_public) const;
    const FunctionBody* body_of(uint32_t selector, bool is_public) const;
    // Display name: abi hint name, else "fallback", else the selector /
    // internal entry offset in hex.
    std::string function_name(const FunctionBody& fn) const;
    // Blocks of fn plus the blocks of (transitively) called internal functions.
    std::set<uint32_t> function_region(const FunctionBody& fn) const;
};

struct ResolvedPairing {
    Pairing pairing;
    std::vector<std::pair<std::string, uint32_t>> emit_sites;  // (address, LOG offset)
    std::string authorize_address;
    uint32_t authorize_selector = 0;
    bool informing_ok = false;  // emit site located and authorize entry found
};

struct BridgeProgram {
    BridgeDescriptor descriptor;
    std::vector<ContractProgram> programs;  // descriptor order: chains, then contracts
    std::vector<ResolvedPairing> pairings;
    std::vector<std::string> warnings;

    const ContractProgram* by_address(const std::string& address) const;
    std::vector<const ContractProgram*> by_role(ChainRole role) const;
    // Public entry points per role: (contract, function) pairs.
    std::vector<std::pair<const ContractProgram*, const FunctionBody*>> entry_points(
        ChainRole role) const;
    bool is_pairing_target(const std::string& address, uint32_t selector) const;
};

// Disassembles, recovers the CFG, partitions functions (selector hints from
// the manifest) and summarizes one contract.
ContractProgram ingest_contract(const ContractEntry& entry, ChainRole role, uint64_t chain_id,
                                const Bytes& runtime_code);

// Binds every descriptor contract to its ingested program and locates event
// emission sites. Missing bytecode -> BindError; a pairing whose emit site
// cannot be located degrades to a warning.
BridgeProgram bind(BridgeDescriptor descriptor, const std::map<std::string, Bytes>& bytecode);

}  // namespace axe
