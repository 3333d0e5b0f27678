#include "axe/manifest.hpp"

#include <json.hpp>

#include <algorithm>

namespace axe {

using nlohmann::json;

const char* to_string(ChainRole r) { return r == ChainRole::Source ? "source" : "destination"; }

const char* to_string(HintKind k) {
    switch (k) {
        case HintKind::Deposit: return "deposit";
        case HintKind::Withdraw: return "withdraw";
        case HintKind::Authorize: return "authorize";
        case HintKind::Other: return "other";
    }
    return "other";
}

const char* to_string(StorageMeaning m) {
    switch (m) {
        case StorageMeaning::Balance: return "balance";
        case StorageMeaning::Authorization: return "authorization";
        case StorageMeaning::RecordList: return "recordList";
        case StorageMeaning::Liquidity: return "liquidity";
        case StorageMeaning::TokenType: return "tokenType";
        case StorageMeaning::Other: return "other";
    }
    return "other";
}

const char* to_string(ArgKind k) {
    switch (k) {
        case ArgKind::Amount: return "amount";
        case ArgKind::Receiver: return "receiver";
        case ArgKind::Signature: return "signature";
        case ArgKind::Signatory: return "signatory";
        case ArgKind::Token: return "token";
        case ArgKind::Chain: return "chain";
        case ArgKind::Other: return "other";
    }
    return "other";
}

std::optional<ArgKind> AbiHint::arg_kind(uint32_t index) const {
    for (const AbiArgHint& a : args)
        if (a.index == index) return a.kind;
    return std::nullopt;
}

const AbiHint* ContractEntry::find_abi(uint32_t selector) const {
    for (const AbiHint& a : abi)
        if (a.selector == selector) return &a;
    return nullptr;
}

const EventHint* ContractEntry::find_event(const U256& topic0) const {
    for (const EventHint& e : events)
        if (e.topic0 == topic0) return &e;
    return nullptr;
}

const StorageHint* ContractEntry::find_storage(const U256& slot) const {
    for (const StorageHint& s : storage)
        if (s.slot == slot) return &s;
    return nullptr;
}

const ChainEntry& BridgeDescriptor::source() const {
    for (const ChainEntry& c : chains)
        if (c.role == ChainRole::Source) return c;
    throw RoleError("descriptor has no source chain");
}

const ChainEntry& BridgeDescriptor::destination() const {
    for (const ChainEntry& c : chains)
        if (c.role == ChainRole::Destination) return c;
    throw RoleError("descriptor has no destination chain");
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ManifestError(path, what);
}

const json& need(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) fail(path + "." + key, "missing required field");
    return obj.at(key);
}

std::string need_string(const json& obj, const char* key, const std::string& path) {
    const json& v = need(obj, key, path);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

uint64_t need_uint(const json& obj, const char* key, const std::string& path) {
    const json& v = need(obj, key, path);
    if (!v.is_number_unsigned()) fail(path + "." + key, "expected a non-negative integer");
    return v.get<uint64_t>();
}

U256 parse_hex_word(const std::string& text, size_t expect_bytes, const std::string& path) {
    Bytes raw;
    try {
        raw = hex_decode(text);
    } catch (const MalformedHexError& e) {
        fail(path, e.what());
    }
    if (raw.size() != expect_bytes)
        fail(path, "expected " + std::to_string(expect_bytes) + " bytes, got " +
                       std::to_string(raw.size()));
    return u256_from_bytes(raw.data(), raw.size());
}

uint32_t parse_selector(const std::string& text, const std::string& path) {
    U256 v = parse_hex_word(text, 4, path);
    return static_cast<uint32_t>(v);
}

std::string canonical_address(const std::string& text, const std::string& path) {
    Bytes raw;
    try {
        raw = hex_decode(text);
    } catch (const MalformedHexError& e) {
        fail(path, e.what());
    }
    if (raw.size() != 20) fail(path, "address must be 20 bytes");
    return hex_encode(raw);
}

HintKind parse_kind(const std::string& text, const std::string& path) {
    if (text == "deposit") return HintKind::Deposit;
    if (text == "withdraw") return HintKind::Withdraw;
    if (text == "authorize") return HintKind::Authorize;
    if (text == "other") return HintKind::Other;
    fail(path, "unknown kind '" + text + "'");
}

StorageMeaning parse_meaning(const std::string& text, const std::string& path) {
    if (text == "balance") return StorageMeaning::Balance;
    if (text == "authorization") return StorageMeaning::Authorization;
    if (text == "recordList") return StorageMeaning::RecordList;
    if (text == "liquidity") return StorageMeaning::Liquidity;
    if (text == "tokenType") return StorageMeaning::TokenType;
    if (text == "other") return StorageMeaning::Other;
    fail(path, "unknown storage meaning '" + text + "'");
}

ArgKind parse_arg_kind(const std::string& text, const std::string& path) {
    if (text == "amount") return ArgKind::Amount;
    if (text == "receiver") return ArgKind::Receiver;
    if (text == "signature") return ArgKind::Signature;
    if (text == "signatory") return ArgKind::Signatory;
    if (text == "token") return ArgKind::Token;
    if (text == "chain") return ArgKind::Chain;
    if (text == "other") return ArgKind::Other;
    fail(path, "unknown argument kind '" + text + "'");
}

ContractEntry parse_contract(const json& c, const std::string& path) {
    ContractEntry out;
    out.address = canonical_address(need_string(c, "address", path), path + ".address");
    out.bytecode_path = need_string(c, "bytecode", path);
    if (c.contains("abi")) {
        const json& abi = c.at("abi");
        if (!abi.is_array()) fail(path + ".abi", "expected an array");
        for (size_t i = 0; i < abi.size(); ++i) {
            std::string p = path + ".abi[" + std::to_string(i) + "]";
            AbiHint hint;
            hint.selector = parse_selector(need_string(abi[i], "selector", p), p + ".selector");
            hint.name = need_string(abi[i], "name", p);
            hint.kind = parse_kind(need_string(abi[i], "kind", p), p + ".kind");
            if (abi[i].contains("args")) {
                const json& args = abi[i].at("args");
                if (!args.is_array()) fail(p + ".args", "expected an array");
                for (size_t j = 0; j < args.size(); ++j) {
                    std::string ap = p + ".args[" + std::to_string(j) + "]";
                    AbiArgHint arg;
                    arg.index = static_cast<uint32_t>(need_uint(args[j], "index", ap));
                    arg.kind = parse_arg_kind(need_string(args[j], "kind", ap), ap + ".kind");
                    hint.args.push_back(arg);
                }
            }
            out.abi.push_back(std::move(hint));
        }
    }
    if (c.contains("events")) {
        const json& events = c.at("events");
        if (!events.is_array()) fail(path + ".events", "expected an array");
        for (size_t i = 0; i < events.size(); ++i) {
            std::string p = path + ".events[" + std::to_string(i) + "]";
            EventHint hint;
            hint.topic0 = parse_hex_word(need_string(events[i], "topic0", p), 32, p + ".topic0");
            hint.name = need_string(events[i], "name", p);
            hint.kind = parse_kind(need_string(events[i], "kind", p), p + ".kind");
            out.events.push_back(std::move(hint));
        }
    }
    if (c.contains("storage")) {
        const json& storage = c.at("storage");
        if (!storage.is_array()) fail(path + ".storage", "expected an array");
        for (size_t i = 0; i < storage.size(); ++i) {
            std::string p = path + ".storage[" + std::to_string(i) + "]";
            StorageHint hint;
            hint.slot = U256(need_uint(storage[i], "slot", p));
            hint.meaning = parse_meaning(need_string(storage[i], "meaning", p), p + ".meaning");
            if (storage[i].contains("name")) {
                if (!storage[i]["name"].is_string()) fail(p + ".name", "expected a string");
                hint.name = storage[i]["name"].get<std::string>();
            } else {
                hint.name = to_string(hint.meaning);
            }
            out.storage.push_back(std::move(hint));
        }
    }
    return out;
}

}  // namespace

BridgeDescriptor load_manifest(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        fail("$", std::string("not a well-formed document: ") + e.what());
    }

    BridgeDescriptor out;
    const json& bridge = need(doc, "bridge", "$");
    out.name = need_string(bridge, "name", "$.bridge");

    const json& chains = need(bridge, "chains", "$.bridge");
    if (!chains.is_array() || chains.empty()) fail("$.bridge.chains", "expected a non-empty array");
    for (size_t i = 0; i < chains.size(); ++i) {
        std::string path = "$.bridge.chains[" + std::to_string(i) + "]";
        ChainEntry chain;
        chain.chain_id = need_uint(chains[i], "chain_id", path);
        std::string role = need_string(chains[i], "role", path);
        if (role == "source")
            chain.role = ChainRole::Source;
        else if (role == "destination")
            chain.role = ChainRole::Destination;
        else
            fail(path + ".role", "expected 'source' or 'destination'");
        const json& contracts = need(chains[i], "contracts", path);
        if (!contracts.is_array() || contracts.empty())
            fail(path + ".contracts", "expected a non-empty array");
        for (size_t j = 0; j < contracts.size(); ++j)
            chain.contracts.push_back(
                parse_contract(contracts[j], path + ".contracts[" + std::to_string(j) + "]"));
        out.chains.push_back(std::move(chain));
    }

    size_t sources = 0, destinations = 0;
    for (const ChainEntry& c : out.chains)
        (c.role == ChainRole::Source ? sources : destinations)++;
    if (sources != 1 || destinations != 1)
        throw RoleError("a bridge direction needs exactly one source and one destination chain (got " +
                        std::to_string(sources) + " source, " + std::to_string(destinations) +
                        " destination)");

    // Duplicate addresses would make the program binding ambiguous.
    std::vector<std::string> addrs;
    for (const ChainEntry& c : out.chains)
        for (const ContractEntry& e : c.contracts) addrs.push_back(e.address);
    std::sort(addrs.begin(), addrs.end());
    if (std::adjacent_find(addrs.begin(), addrs.end()) != addrs.end())
        fail("$.bridge.chains", "duplicate contract address");

    if (bridge.contains("pairings")) {
        const json& pairings = bridge.at("pairings");
        if (!pairings.is_array()) fail("$.bridge.pairings", "expected an array");
        for (size_t i = 0; i < pairings.size(); ++i) {
            std::string path = "$.bridge.pairings[" + std::to_string(i) + "]";
            Pairing p;
            p.deposit_event =
                parse_hex_word(need_string(pairings[i], "deposit_event", path), 32,
                               path + ".deposit_event");
            p.authorize_selector = parse_selector(
                need_string(pairings[i], "authorize_selector", path), path + ".authorize_selector");
            bool event_ok = false;
            for (const ContractEntry& e : out.source().contracts)
                if (e.find_event(p.deposit_event)) event_ok = true;
            if (!event_ok)
                fail(path + ".deposit_event",
                     "event is not declared on any source-chain contract");
            bool sel_ok = false;
            for (const ContractEntry& e : out.destination().contracts)
                if (e.find_abi(p.authorize_selector)) sel_ok = true;
            if (!sel_ok)
                fail(path + ".authorize_selector",
                     "selector is not declared on any destination-chain contract");
            out.pairings.push_back(p);
        }
    }

    if (doc.contains("config")) {
        const json& cfg = doc.at("config");
        if (!cfg.is_object()) fail("$.config", "expected an object");
        if (cfg.contains("assoc_threshold")) {
            if (!cfg["assoc_threshold"].is_number())
                fail("$.config.assoc_threshold", "expected a number");
            out.config.assoc_threshold = cfg["assoc_threshold"].get<double>();
        }
        if (cfg.contains("max_path_depth"))
            out.config.max_path_depth = static_cast<uint32_t>(need_uint(cfg, "max_path_depth", "$.config"));
        if (cfg.contains("loop_unroll"))
            out.config.loop_unroll = static_cast<uint32_t>(need_uint(cfg, "loop_unroll", "$.config"));
        if (cfg.contains("timeout_secs"))
            out.config.timeout_secs = need_uint(cfg, "timeout_secs", "$.config");
    }

    return out;
}

}  // namespace axe
