#pragma once

#include "axe/checks.hpp"

#include <map>
#include <string>
#include <vector>

namespace axe {

// ---------------------------------------------------------------------------
// xCFG: per-chain block graphs stitched through synthetic Relayer and Client
// nodes with Emitting / Informing edges.
// ---------------------------------------------------------------------------

struct XNode {
    enum class Kind : uint8_t { Block, Relayer, Client };
    Kind kind = Kind::Block;
    std::string address;  // Block only
    uint32_t block = 0;   // Block only

    bool operator<(const XNode& o) const;
    bool operator==(const XNode& o) const;
    std::string label() const;
};

enum class XEdgeLabel : uint8_t { CF, Emitting, Informing };

const char* to_string(XEdgeLabel l);

struct XEdge {
    XNode from;
    XNode to;
    XEdgeLabel label = XEdgeLabel::CF;
};

struct XCfg {
    std::vector<XEdge> edges;

    std::vector<const XEdge*> with_label(XEdgeLabel l) const;
    std::string dump() const;  // one "from -> to [label]" line per edge
};

XCfg build_xcfg(const BridgeProgram& program);

// ---------------------------------------------------------------------------
// xDFG: def-use graph with restricted propagation across the relayer
// boundary: only event arguments cross Emitting edges and only authorize-call
// arguments cross Informing edges.
// ---------------------------------------------------------------------------

struct DfgNode {
    enum class Kind : uint8_t { Site, Param, InternalParam, EventArg, RelayerSlot, Client };
    Kind kind = Kind::Site;
    std::string address;  // empty for RelayerSlot / Client
    uint64_t a = 0;       // Site: offset; Param: selector; InternalParam: entry offset;
                          // EventArg: log offset; RelayerSlot: pairing index
    uint64_t b = 0;       // Param/InternalParam/EventArg/RelayerSlot: argument index

    bool operator<(const DfgNode& o) const;
    bool operator==(const DfgNode& o) const;
    std::string label() const;
};

struct DfgEdge {
    uint32_t from = 0;
    uint32_t to = 0;
    std::string carried;  // value descriptor for boundary-crossing edges
};

struct XDfg {
    std::vector<DfgNode> nodes;
    std::vector<DfgEdge> edges;
    std::vector<std::vector<uint32_t>> succ;

    uint32_t intern(const DfgNode& n);
    std::optional<uint32_t> find(const DfgNode& n) const;
    void add_edge(const DfgNode& from, const DfgNode& to, std::string carried = "");
    bool reaches(uint32_t from, uint32_t to) const;
    std::vector<uint32_t> forward_closure(const std::vector<uint32_t>& roots) const;
    std::string dump() const;

private:
    std::map<DfgNode, uint32_t> index_;
};

XDfg build_xdfg(const XCfg& xcfg, const BridgeProgram& program);

// ---------------------------------------------------------------------------
// Semantic inconsistency detectors
// ---------------------------------------------------------------------------

struct SemFinding {
    enum class Kind : uint8_t { Granularity, Integrity };
    Kind kind = Kind::Granularity;
    std::string address;          // destination contract
    uint32_t function_selector = 0;

    // Granularity: the two deposit routes converging on the same withdrawal.
    std::string deposit_a_address;
    uint32_t deposit_a_selector = 0;
    std::string deposit_b_address;
    uint32_t deposit_b_selector = 0;

    // Integrity: withdrawal variables with no deposit dependency.
    struct IndependentVar {
        uint32_t offset = 0;  // write site
        U256 slot{};
        StorageMeaning meaning = StorageMeaning::Other;
        std::string name;
    };
    std::vector<IndependentVar> independent;
};

// Deposit routes that converge on one withdrawal function while traversing
// different deposit functions (or differently-kinded emit sites).
std::vector<SemFinding> check_granularity(const XCfg& xcfg, const BridgeProgram& program);

// Withdrawal-side state writes classified as amount/type of withdrawal must
// have an xDFG path from some source-chain deposit event argument.
std::vector<SemFinding> check_integrity(const XDfg& xdfg, const BridgeProgram& program);

// ---------------------------------------------------------------------------
// Structural audits (re-scans used by the property suites)
// ---------------------------------------------------------------------------

// Emitting edges must originate at LOG-bearing blocks; Informing edges at the
// Relayer; CF edges stay within one contract. Returns violations.
std::vector<std::string> audit_xcfg(const XCfg& xcfg, const BridgeProgram& program);

// Every cross-contract / relayer-side xDFG edge must carry an event argument
// (Emitting) or an authorize-call argument (Informing). Returns violations.
std::vector<std::string> audit_xdfg_boundaries(const XDfg& xdfg, const BridgeProgram& program);

}  // namespace axe
