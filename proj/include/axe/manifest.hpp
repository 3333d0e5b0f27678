#pragma once

#include "axe/common.hpp"

#include <optional>
#include <string>
#include <vector>

namespace axe {

enum class ChainRole : uint8_t { Source, Destination };

// Semantic kind attached to functions and events by the manifest.
enum class HintKind : uint8_t { Deposit, Withdraw, Authorize, Other };

enum class StorageMeaning : uint8_t { Balance, Authorization, RecordList, Liquidity, TokenType, Other };

enum class ArgKind : uint8_t { Amount, Receiver, Signature, Signatory, Token, Chain, Other };

const char* to_string(ChainRole r);
const char* to_string(HintKind k);
const char* to_string(StorageMeaning m);
const char* to_string(ArgKind k);

struct AbiArgHint {
    uint32_t index = 0;
    ArgKind kind = ArgKind::Other;
};

struct AbiHint {
    uint32_t selector = 0;
    std::string name;
    HintKind kind = HintKind::Other;
    std::vector<AbiArgHint> args;

    std::optional<ArgKind> arg_kind(uint32_t index) const;
};

struct EventHint {
    U256 topic0{};
    std::string name;
    HintKind kind = HintKind::Other;
};

struct StorageHint {
    U256 slot{};
    StorageMeaning meaning = StorageMeaning::Other;
    std::string name;  // display label; defaults to the meaning string
};

struct ContractEntry {
    std::string address;  // canonical lowercase 0x-prefixed 20-byte hex
    std::string bytecode_path;
    std::vector<AbiHint> abi;
    std::vector<EventHint> events;
    std::vector<StorageHint> storage;

    const AbiHint* find_abi(uint32_t selector) const;
    const EventHint* find_event(const U256& topic0) const;
    const StorageHint* find_storage(const U256& slot) const;
};

struct ChainEntry {
    uint64_t chain_id = 0;
    ChainRole role = ChainRole::Source;
    std::vector<ContractEntry> contracts;
};

struct Pairing {
    U256 deposit_event{};
    uint32_t authorize_selector = 0;
};

struct ManifestConfig {
    std::optional<double> assoc_threshold;
    std::optional<uint32_t> max_path_depth;
    std::optional<uint32_t> loop_unroll;
    std::optional<uint64_t> timeout_secs;
};

struct BridgeDescriptor {
    std::string name;
    std::vector<ChainEntry> chains;
    std::vector<Pairing> pairings;
    ManifestConfig config;

    const ChainEntry& source() const;
    const ChainEntry& destination() const;
};

// Parses and validates a manifest document. Throws ManifestError with the
// offending field path on schema violations and RoleError when the chains do
// not form exactly one source / one destination pair.
BridgeDescriptor load_manifest(const std::string& document);

}  // namespace axe
