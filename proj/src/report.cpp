#include "axe/report.hpp"

#include "axe/version.hpp"

#include <algorithm>

namespace axe {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string fnv64_hex(const std::string& data) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string function_label(const BridgeProgram& program, const std::string& address,
                           uint32_t selector, bool is_public) {
    const ContractProgram* prog = program.by_address(address);
    if (!prog) return selector_hex(selector);
    const FunctionBody* fn = prog->body_of(selector, is_public);
    return fn ? prog->function_name(*fn) : selector_hex(selector);
}

ordered_json trace_json(const VulnTrace& trace) {
    ordered_json t;
    t["entry_chain"] = ordered_json::array();
    for (const VulnTrace::Hop& hop : trace.entry_chain)
        t["entry_chain"].push_back(selector_hex(hop.selector));
    t["affected"] = ordered_json::array();
    for (const VulnTrace::Affected& a : trace.affected) {
        ordered_json entry;
        entry["slot"] = u256_to_u64(a.slot) ? *u256_to_u64(a.slot) : 0;
        entry["meaning"] = to_string(a.meaning);
        t["affected"].push_back(std::move(entry));
    }
    return t;
}

}  // namespace

std::string format_trace(const VulnTrace& trace) {
    std::string out;
    for (size_t i = 0; i < trace.entry_chain.size(); ++i) {
        if (i) out += " -> ";
        out += trace.entry_chain[i].name;
    }
    out += " -> {";
    for (size_t i = 0; i < trace.affected.size(); ++i) {
        if (i) out += ", ";
        out += trace.affected[i].name;
    }
    out += "}";
    return out;
}

std::vector<Finding> assemble(const BridgeProgram& program,
                              const std::map<std::string, ContractAnalysis>& analyses,
                              const std::vector<AcFinding>& ac_findings,
                              const std::vector<SemFinding>& sem_findings,
                              const TraceSet& traces) {
    std::vector<Finding> out;

    for (size_t i = 0; i < ac_findings.size(); ++i) {
        const AcFinding& f = ac_findings[i];
        Finding r;
        r.kind = f.kind == AcFinding::Kind::Omission ? "ACCESS_CONTROL_OMISSION"
                                                     : "ACCESS_CONTROL_VIOLATION_PATH";
        r.contract = f.address;
        r.function_selector = f.function_selector;
        r.function_name = function_label(program, f.address, f.function_selector, f.function_public);
        if (f.kind == AcFinding::Kind::Omission) {
            r.evidence["category"] = f.category_id;
            r.evidence["perspective"] = to_string(f.perspective);
            ordered_json missing = ordered_json::array();
            for (Feature m : f.missing_features) missing.push_back(feature_id(m));
            r.evidence["missing_features"] = std::move(missing);
            ordered_json present = ordered_json::array();
            for (Feature p : f.present_features) present.push_back(feature_id(p));
            r.evidence["present_features"] = std::move(present);
        } else {
            r.evidence["perspective_gap"] = ordered_json::array();
            for (Perspective p : f.missing_perspectives)
                r.evidence["perspective_gap"].push_back(to_string(p));
            r.evidence["path_under_guarded"] = f.path_subset;
            r.evidence["path_guarded"] = f.path_superset;
            const ContractAnalysis& ca = analyses.at(f.address);
            if (f.anchor_resource >= 0) {
                const Resource& res = ca.resources[f.anchor_resource];
                r.evidence["resource"] = std::string(to_string(res.kind)) + "@" +
                                         std::to_string(res.offset);
            }
        }
        if (i < traces.access.size() && traces.access[i]) r.trace = traces.access[i];
        r.severity = r.trace ? "high" : "info";
        out.push_back(std::move(r));
    }

    for (size_t i = 0; i < sem_findings.size(); ++i) {
        const SemFinding& f = sem_findings[i];
        Finding r;
        r.kind = f.kind == SemFinding::Kind::Granularity ? "SEMANTIC_GRANULARITY"
                                                         : "SEMANTIC_INTEGRITY";
        r.contract = f.address;
        r.function_selector = f.function_selector;
        r.function_name = function_label(program, f.address, f.function_selector, true);
        if (f.kind == SemFinding::Kind::Granularity) {
            r.evidence["deposit_a"] =
                f.deposit_a_address + ":" + selector_hex(f.deposit_a_selector);
            r.evidence["deposit_b"] =
                f.deposit_b_address + ":" + selector_hex(f.deposit_b_selector);
            r.evidence["withdrawal"] = f.address + ":" + selector_hex(f.function_selector);
        } else {
            ordered_json vars = ordered_json::array();
            for (const SemFinding::IndependentVar& v : f.independent) {
                ordered_json jv;
                jv["slot"] = u256_to_u64(v.slot) ? *u256_to_u64(v.slot) : 0;
                jv["meaning"] = to_string(v.meaning);
                jv["name"] = v.name;
                vars.push_back(std::move(jv));
            }
            r.evidence["independent_variables"] = std::move(vars);
        }
        if (i < traces.semantic.size() && traces.semantic[i]) r.trace = traces.semantic[i];
        r.severity = r.trace ? "high" : "info";
        out.push_back(std::move(r));
    }

    for (Finding& f : out)
        f.id = fnv64_hex(f.kind + "|" + f.contract + "|" + selector_hex(f.function_selector) +
                         "|" + f.evidence.dump());

    std::sort(out.begin(), out.end(), [](const Finding& a, const Finding& b) {
        return std::tie(a.contract, a.function_selector, a.kind, a.id) <
               std::tie(b.contract, b.function_selector, b.kind, b.id);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Finding& a, const Finding& b) { return a.id == b.id; }),
              out.end());
    return out;
}

namespace {

const char* kKinds[] = {"ACCESS_CONTROL_OMISSION", "ACCESS_CONTROL_VIOLATION_PATH",
                        "SEMANTIC_GRANULARITY", "SEMANTIC_INTEGRITY"};

ordered_json summary_json(const std::vector<Finding>& findings) {
    ordered_json summary;
    for (const char* kind : kKinds) {
        size_t n = 0;
        for (const Finding& f : findings)
            if (f.kind == kind) ++n;
        summary[kind] = n;
    }
    summary["total"] = findings.size();
    return summary;
}

}  // namespace

std::string render_structured(const std::vector<Finding>& findings, const ReportMeta& meta) {
    ordered_json doc;
    doc["tool_version"] = kToolVersion;
    doc["bridge"] = meta.bridge_name;
    doc["config"]["assoc_threshold"] = meta.assoc_threshold;
    doc["config"]["max_path_depth"] = meta.max_path_depth;
    doc["config"]["loop_unroll"] = meta.loop_unroll;
    if (meta.timed_out) doc["timeout"] = true;
    doc["summary"] = summary_json(findings);
    doc["findings"] = ordered_json::array();
    for (const Finding& f : findings) {
        ordered_json jf;
        jf["id"] = f.id;
        jf["kind"] = f.kind;
        jf["severity"] = f.severity;
        jf["contract"] = f.contract;
        jf["function_selector"] = selector_hex(f.function_selector);
        jf["evidence"] = f.evidence;
        if (f.trace) jf["trace"] = trace_json(*f.trace);
        doc["findings"].push_back(std::move(jf));
    }
    return doc.dump(2) + "\n";
}

std::string render_text(const std::vector<Finding>& findings, const ReportMeta& meta) {
    std::string out;
    out += "axe report: " + meta.bridge_name + "\n";
    out += "tool_version: " + std::string(kToolVersion) + "\n";
    char cfg[160];
    std::snprintf(cfg, sizeof(cfg), "config: assoc_threshold=%g max_path_depth=%u loop_unroll=%u\n",
                  meta.assoc_threshold, meta.max_path_depth, meta.loop_unroll);
    out += cfg;
    if (meta.timed_out) out += "TIMEOUT: analysis budget exceeded; partial results below\n";

    ordered_json summary = summary_json(findings);
    out += "summary:";
    for (auto& [key, value] : summary.items())
        out += " " + key + "=" + value.dump();
    out += "\n";

    for (const Finding& f : findings) {
        out += "\nfinding " + f.id + "\n";
        out += "  kind: " + f.kind + "\n";
        out += "  severity: " + f.severity + "\n";
        out += "  contract: " + f.contract + "\n";
        out += "  function: " + f.function_name + " (" + selector_hex(f.function_selector) + ")\n";
        for (auto& [key, value] : f.evidence.items())
            out += "  " + key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) +
                   "\n";
        if (f.trace) out += "  trace: " + format_trace(*f.trace) + "\n";
    }
    return out;
}

}  // namespace axe
