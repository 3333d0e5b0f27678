#include "axe/paths.hpp"

#include <algorithm>

namespace axe {

namespace {

struct Dfs {
    const std::vector<std::vector<uint32_t>>& succ;
    uint32_t target;
    const PathEnumOptions& options;
    const Deadline& deadline;
    std::vector<std::vector<uint32_t>>& out;
    std::vector<uint32_t> visits;
    std::vector<uint32_t> path;
    bool aborted = false;  // path cap hit, search stopped
    bool pruned = false;   // depth bound cut some branch
    size_t steps = 0;

    void run(uint32_t node) {
        if (aborted) return;
        if (++steps % 4096 == 0) deadline.check("path enumeration");
        if (visits[node] > options.unroll) return;
        if (path.size() >= options.max_depth) {
            pruned = true;
            return;
        }
        ++visits[node];
        path.push_back(node);
        if (node == target) {
            if (out.size() >= options.max_paths)
                aborted = true;
            else
                out.push_back(path);
        } else {
            for (uint32_t s : succ[node]) {
                run(s);
                if (aborted) break;
            }
        }
        path.pop_back();
        --visits[node];
    }
};

}  // namespace

std::vector<std::vector<uint32_t>> enumerate_paths_core(
    const std::vector<std::vector<uint32_t>>& succ, uint32_t entry, uint32_t target,
    const PathEnumOptions& options, const Deadline& deadline, bool* truncated) {
    std::vector<std::vector<uint32_t>> out;
    if (entry >= succ.size() || target >= succ.size()) return out;
    Dfs dfs{succ, target, options, deadline, out,
            std::vector<uint32_t>(succ.size(), 0), {}, false, false, 0};
    dfs.run(entry);
    if (truncated) *truncated = dfs.aborted || dfs.pruned;
    return out;
}

std::vector<PathRecord> enumerate_paths(const ContractProgram& program,
                                        const std::vector<Resource>& resources,
                                        const std::vector<SecurityCheck>& checks,
                                        const PathEnumOptions& options, const Deadline& deadline,
                                        bool* truncated) {
    std::vector<std::vector<uint32_t>> succ(program.cfg.blocks.size());
    for (const BasicBlock& b : program.cfg.blocks) succ[b.id] = b.successors;

    // Checks indexed by block for on-path collection.
    std::map<uint32_t, std::vector<size_t>> checks_by_block;
    for (size_t i = 0; i < checks.size(); ++i) checks_by_block[checks[i].block].push_back(i);

    std::vector<PathRecord> out;
    bool any_truncated = false;
    for (size_t ri = 0; ri < resources.size(); ++ri) {
        const Resource& res = resources[ri];
        for (const FunctionBody& fn : program.cfg.functions) {
            if (!fn.is_public) continue;
            bool t = false;
            auto paths = enumerate_paths_core(succ, fn.entry_block, res.block, options, deadline, &t);
            any_truncated = any_truncated || t;
            for (auto& blocks : paths) {
                PathRecord rec;
                rec.id = static_cast<uint32_t>(out.size());
                rec.address = program.entry.address;
                rec.entry_selector = fn.selector;
                rec.resource_idx = ri;
                for (size_t bi = 0; bi < blocks.size(); ++bi) {
                    auto cit = checks_by_block.find(blocks[bi]);
                    if (cit == checks_by_block.end()) continue;
                    for (size_t ci : cit->second) {
                        // A check in the final block only guards the resource
                        // if it executes before it.
                        if (bi + 1 == blocks.size() && checks[ci].offset > res.offset) continue;
                        rec.checks_on_path.push_back(ci);
                    }
                }
                rec.blocks = std::move(blocks);
                out.push_back(std::move(rec));
            }
        }
    }
    if (truncated) *truncated = any_truncated;
    if (any_truncated)
        log_warn(program.entry.address + ": path enumeration truncated (depth " +
                 std::to_string(options.max_depth) + ", cap " +
                 std::to_string(options.max_paths) + ")");
    return out;
}

}  // namespace axe
