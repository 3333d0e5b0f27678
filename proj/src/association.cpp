#include "axe/association.hpp"

#include <algorithm>

namespace axe {

double noisy_or(const std::vector<double>& priors) {
    double miss = 1.0;
    for (double p : priors) {
        double clamped = std::min(1.0, std::max(0.0, p));
        miss *= 1.0 - clamped;
    }
    double combined = 1.0 - miss;
    return std::min(1.0, std::max(0.0, combined));
}

const Association* ContractAnalysis::association_of(size_t check_idx, size_t resource_idx) const {
    for (const Association& a : associations)
        if (a.check_idx == check_idx && a.resource_idx == resource_idx) return &a;
    return nullptr;
}

namespace {

// Resources whose reachability differs between the two branch targets are
// control-dependent on the check.
std::vector<std::set<size_t>> dependent_resources(const ContractProgram& program,
                                                  const std::vector<SecurityCheck>& checks,
                                                  const std::vector<Resource>& resources) {
    std::vector<std::set<size_t>> deps(checks.size());
    for (size_t ci = 0; ci < checks.size(); ++ci) {
        const SecurityCheck& c = checks[ci];
        const BasicBlock& blk = program.cfg.blocks[c.block];
        std::optional<uint32_t> fall;
        std::optional<uint32_t> taken;
        for (uint32_t s : blk.successors) {
            if (s == c.block + 1 && !fall)
                fall = s;
            else
                taken = s;
        }
        std::set<uint32_t> reach_taken =
            taken ? program.cfg.reachable_from(*taken) : std::set<uint32_t>{};
        std::set<uint32_t> reach_fall =
            fall ? program.cfg.reachable_from(*fall) : std::set<uint32_t>{};
        for (size_t ri = 0; ri < resources.size(); ++ri) {
            bool in_taken = reach_taken.count(resources[ri].block) > 0;
            bool in_fall = reach_fall.count(resources[ri].block) > 0;
            if (in_taken != in_fall) deps[ci].insert(ri);
        }
    }
    return deps;
}

std::string semantic_tag(const Resource& r, const ContractProgram& program) {
    switch (r.kind) {
        case ResourceKind::FieldAccess:
            return r.meaning == StorageMeaning::Other ? ""
                                                      : std::string("slot:") + to_string(r.meaning);
        case ResourceKind::EventEmit:
        case ResourceKind::AbiEntry:
            return r.hint_kind == HintKind::Other ? ""
                                                  : std::string("kind:") + to_string(r.hint_kind);
        case ResourceKind::InternalMethod: {
            const AbiHint* hint = program.entry.find_abi(r.selector);
            if (hint && hint->kind != HintKind::Other)
                return std::string("kind:") + to_string(hint->kind);
            return "";
        }
    }
    return "";
}

}  // namespace

std::vector<Association> infer_associations(const ContractProgram& program,
                                            const std::vector<SecurityCheck>& checks,
                                            const std::vector<Resource>& resources,
                                            const std::vector<PathRecord>& paths, const XDfg& xdfg,
                                            const Deadline& deadline) {
    std::vector<std::set<size_t>> deps = dependent_resources(program, checks, resources);

    std::map<std::pair<size_t, size_t>, Association> table;
    auto add_evidence = [&](size_t ci, size_t ri, const char* pattern, double prior,
                            int source) -> bool {
        Association& a = table[{ci, ri}];
        a.check_idx = ci;
        a.resource_idx = ri;
        AssociationEvidence ev{pattern, prior, source};
        for (const AssociationEvidence& e : a.evidence)
            if (e == ev) return false;
        a.evidence.push_back(std::move(ev));
        return true;
    };

    // Direct control-flow patterns, witnessed along enumerated paths.
    for (const PathRecord& p : paths) {
        for (size_t ci : p.checks_on_path) {
            if (!deps[ci].count(p.resource_idx)) continue;
            bool single = deps[ci].size() == 1;
            add_evidence(ci, p.resource_idx, single ? "P1" : "P2",
                         single ? pattern::kControlFlowSingle : pattern::kControlFlowSet, -1);
            Association& a = table[{ci, p.resource_idx}];
            if (std::find(a.path_ids.begin(), a.path_ids.end(), p.id) == a.path_ids.end())
                a.path_ids.push_back(p.id);
        }
    }

    // Transfer predicates between resource pairs.
    struct Transfer {
        size_t r1, r2;
        const char* pattern;
        double prior;
    };
    std::vector<Transfer> transfers;
    auto dfg_site = [&](uint32_t offset) {
        return xdfg.find(DfgNode{DfgNode::Kind::Site, program.entry.address, offset, 0});
    };
    for (size_t r1 = 0; r1 < resources.size(); ++r1) {
        deadline.check("association inference");
        for (size_t r2 = 0; r2 < resources.size(); ++r2) {
            if (r1 == r2) continue;
            if (resources[r1].block == resources[r2].block)
                transfers.push_back({r1, r2, "P3", pattern::kSameBlock});
            std::string t1 = semantic_tag(resources[r1], program);
            if (!t1.empty() && t1 == semantic_tag(resources[r2], program))
                transfers.push_back({r1, r2, "P4", pattern::kSemanticCorrelation});
            // Def-use: r2's value reaches r1 itself or the condition of a
            // check that controls r1.
            auto from = dfg_site(resources[r2].offset);
            bool linked = false;
            if (from) {
                auto to = dfg_site(resources[r1].offset);
                if (to && xdfg.reaches(*from, *to)) linked = true;
                for (size_t ci = 0; ci < checks.size() && !linked; ++ci) {
                    if (!deps[ci].count(r1)) continue;
                    auto cond_site = dfg_site(checks[ci].offset);
                    if (cond_site && xdfg.reaches(*from, *cond_site)) linked = true;
                }
            }
            if (linked) transfers.push_back({r1, r2, "P5", pattern::kDataFlowDependency});
        }
    }

    // Evidence transfer to a fixpoint. Monotone: evidence sets only grow, and
    // each (check, resource) pair holds at most one entry per (pattern,
    // source), so this terminates within |R| x |C| rounds.
    size_t max_rounds = resources.size() * checks.size() + 1;
    bool changed = true;
    for (size_t round = 0; changed && round < max_rounds; ++round) {
        deadline.check("association transfer fixpoint");
        changed = false;
        for (const Transfer& t : transfers) {
            for (size_t ci = 0; ci < checks.size(); ++ci) {
                auto src = table.find({ci, t.r2});
                if (src == table.end() || src->second.evidence.empty()) continue;
                if (add_evidence(ci, t.r1, t.pattern, t.prior, static_cast<int>(t.r2)))
                    changed = true;
            }
        }
    }

    std::vector<Association> out;
    for (auto& [key, a] : table) {
        std::vector<double> priors;
        for (const AssociationEvidence& e : a.evidence) priors.push_back(e.prior);
        a.combined = noisy_or(priors);
        std::sort(a.path_ids.begin(), a.path_ids.end());
        out.push_back(std::move(a));
    }
    return out;  // table iteration is (check, resource)-ordered
}

ContractAnalysis analyze_contract(const ContractProgram& program, const XDfg& xdfg,
                                  const AnalysisOptions& options, const Deadline& deadline) {
    ContractAnalysis out;
    out.program = &program;
    for (const FunctionSummary& fs : program.summaries) {
        std::vector<SecurityCheck> checks = extract_checks(program, fs);
        for (SecurityCheck& c : checks) classify_check(c, program, fs);
        out.checks.insert(out.checks.end(), checks.begin(), checks.end());
        std::vector<Resource> resources = extract_resources(program, fs);
        out.resources.insert(out.resources.end(), resources.begin(), resources.end());
    }
    std::sort(out.checks.begin(), out.checks.end(),
              [](const SecurityCheck& a, const SecurityCheck& b) { return a.offset < b.offset; });
    std::sort(out.resources.begin(), out.resources.end(), [](const Resource& a, const Resource& b) {
        return std::tie(a.offset, a.kind) < std::tie(b.offset, b.kind);
    });

    PathEnumOptions popt;
    popt.max_depth = options.max_path_depth;
    popt.unroll = options.loop_unroll;
    out.paths = enumerate_paths(program, out.resources, out.checks, popt, deadline,
                                &out.paths_truncated);
    out.associations =
        infer_associations(program, out.checks, out.resources, out.paths, xdfg, deadline);
    return out;
}

// ---------------------------------------------------------------------------
// Omission
// ---------------------------------------------------------------------------

namespace {

int pick_anchor(const std::vector<Resource>& resources, const std::vector<size_t>& region) {
    auto best_of = [&](auto pred) -> int {
        int best = -1;
        for (size_t ri : region) {
            if (!pred(resources[ri])) continue;
            if (best < 0 || resources[ri].offset < resources[best].offset)
                best = static_cast<int>(ri);
        }
        return best;
    };
    int anchor = best_of([](const Resource& r) { return r.kind == ResourceKind::InternalMethod; });
    if (anchor < 0)
        anchor = best_of([](const Resource& r) {
            return r.kind == ResourceKind::FieldAccess && r.is_store &&
                   r.meaning == StorageMeaning::Balance;
        });
    if (anchor < 0)
        anchor = best_of(
            [](const Resource& r) { return r.kind == ResourceKind::FieldAccess && r.is_store; });
    if (anchor < 0) anchor = best_of([](const Resource& r) { return r.kind == ResourceKind::EventEmit; });
    if (anchor < 0 && !region.empty()) anchor = static_cast<int>(region.front());
    return anchor;
}

}  // namespace

std::vector<AcFinding> detect_omission(const BridgeProgram& program,
                                       const std::map<std::string, ContractAnalysis>& analyses,
                                       const AnalysisOptions& options, const RuleSet& rules) {
    std::vector<AcFinding> out;
    for (const ContractProgram& prog : program.programs) {
        const ContractAnalysis& ca = analyses.at(prog.entry.address);
        for (const FunctionBody& fn : prog.cfg.functions) {
            if (!fn.is_public) continue;
            std::set<uint32_t> region = prog.function_region(fn);
            std::vector<size_t> region_resources;
            for (size_t ri = 0; ri < ca.resources.size(); ++ri)
                if (region.count(ca.resources[ri].block)) region_resources.push_back(ri);
            if (region_resources.empty()) continue;

            const AbiHint* hint = prog.entry.find_abi(fn.selector);
            bool emits_deposit = false;
            for (const EmissionSite& e : prog.emissions)
                if (region.count(e.block) && (e.paired || e.kind == HintKind::Deposit))
                    emits_deposit = true;
            bool has_external_call = false;
            for (const FunctionSummary& fs : prog.summaries)
                for (const SemOp& op : fs.ops)
                    if (op.kind == SemOpKind::ExtCall &&
                        region.count(prog.cfg.block_containing(op.offset).value_or(UINT32_MAX))) {
                        const ExprPtr& target = op.args[0];
                        if (!(target->is_const() && target->value <= 9)) has_external_call = true;
                    }
            bool has_routing_args = false;
            if (hint)
                for (const AbiArgHint& a : hint->args)
                    if (a.kind == ArgKind::Token || a.kind == ArgKind::Chain)
                        has_routing_args = true;

            std::set<std::string> required;
            if (prog.role == ChainRole::Source &&
                ((hint && hint->kind == HintKind::Deposit) || emits_deposit))
                required.insert("C1");
            if (has_external_call || has_routing_args) required.insert("C2");
            if (prog.role == ChainRole::Destination &&
                ((hint && (hint->kind == HintKind::Authorize || hint->kind == HintKind::Withdraw)) ||
                 program.is_pairing_target(prog.entry.address, fn.selector)))
                required.insert("C3");
            if (required.empty()) continue;

            // Effective set: checks in the function's region plus checks
            // associated with one of its resources above the threshold.
            std::vector<SecurityCheck> effective;
            std::set<size_t> used;
            for (size_t ci = 0; ci < ca.checks.size(); ++ci)
                if (region.count(ca.checks[ci].block)) {
                    effective.push_back(ca.checks[ci]);
                    used.insert(ci);
                }
            for (const Association& a : ca.associations) {
                if (a.combined < options.assoc_threshold) continue;
                if (used.count(a.check_idx)) continue;
                for (size_t ri : region_resources)
                    if (a.resource_idx == ri) {
                        effective.push_back(ca.checks[a.check_idx]);
                        used.insert(a.check_idx);
                        break;
                    }
            }

            CheckModelCoverage coverage = evaluate_model(effective, prog.role, rules);
            for (const CategoryCoverage& cc : coverage.categories) {
                if (!required.count(cc.category_id)) continue;
                for (const PerspectiveCoverage& pc : cc.perspectives) {
                    if (pc.satisfied) {
                        if (pc.id == Perspective::P4 &&
                            std::find(pc.present.begin(), pc.present.end(),
                                      Feature::TimeoutComparison) == pc.present.end())
                            log_info(prog.entry.address + " " + prog.function_name(fn) +
                                     ": P4 satisfied via signature validation; no timeout check");
                        continue;
                    }
                    AcFinding f;
                    f.kind = AcFinding::Kind::Omission;
                    f.address = prog.entry.address;
                    f.function_selector = fn.selector;
                    f.function_public = fn.is_public;
                    f.category_id = cc.category_id;
                    f.perspective = pc.id;
                    f.missing_features = pc.missing;
                    f.present_features = pc.present;
                    f.anchor_resource = pick_anchor(ca.resources, region_resources);
                    out.push_back(std::move(f));
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Violation paths
// ---------------------------------------------------------------------------

std::vector<AcFinding> detect_violation_paths(
    const BridgeProgram& program, const std::map<std::string, ContractAnalysis>& analyses) {
    std::vector<AcFinding> out;
    for (const ContractProgram& prog : program.programs) {
        const ContractAnalysis& ca = analyses.at(prog.entry.address);
        std::map<size_t, std::vector<const PathRecord*>> by_resource;
        for (const PathRecord& p : ca.paths) by_resource[p.resource_idx].push_back(&p);

        for (const auto& [ri, paths] : by_resource) {
            if (paths.size() < 2) continue;
            std::vector<std::set<Perspective>> sets(paths.size());
            for (size_t i = 0; i < paths.size(); ++i)
                for (size_t ci : paths[i]->checks_on_path)
                    if (ca.checks[ci].perspective != Perspective::Unclassified)
                        sets[i].insert(ca.checks[ci].perspective);

            bool reported = false;
            for (size_t i = 0; i < paths.size() && !reported; ++i) {
                for (size_t j = i + 1; j < paths.size() && !reported; ++j) {
                    const std::set<Perspective>*sub = nullptr, *super = nullptr;
                    const PathRecord *sub_path = nullptr, *super_path = nullptr;
                    if (sets[i] != sets[j] &&
                        std::includes(sets[j].begin(), sets[j].end(), sets[i].begin(),
                                      sets[i].end())) {
                        sub = &sets[i];
                        super = &sets[j];
                        sub_path = paths[i];
                        super_path = paths[j];
                    } else if (sets[i] != sets[j] &&
                               std::includes(sets[i].begin(), sets[i].end(), sets[j].begin(),
                                             sets[j].end())) {
                        sub = &sets[j];
                        super = &sets[i];
                        sub_path = paths[j];
                        super_path = paths[i];
                    }
                    if (!sub) continue;
                    AcFinding f;
                    f.kind = AcFinding::Kind::ViolationPath;
                    f.address = prog.entry.address;
                    f.function_selector = sub_path->entry_selector;
                    f.path_subset = sub_path->id;
                    f.path_superset = super_path->id;
                    std::set_difference(super->begin(), super->end(), sub->begin(), sub->end(),
                                        std::back_inserter(f.missing_perspectives));
                    f.anchor_resource = static_cast<int>(ri);
                    out.push_back(std::move(f));
                    reported = true;  // one witness pair per resource
                }
            }
        }
    }
    return out;
}

}  // namespace axe
