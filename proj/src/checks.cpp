#include "axe/checks.hpp"

#include <algorithm>
#include <map>

namespace axe {

bool SecurityCheck::has_feature(Feature f) const {
    return std::find(features.begin(), features.end(), f) != features.end();
}

const char* to_string(ResourceKind k) {
    switch (k) {
        case ResourceKind::FieldAccess: return "field-access";
        case ResourceKind::InternalMethod: return "internal-method";
        case ResourceKind::AbiEntry: return "abi-entry";
        case ResourceKind::EventEmit: return "event-emit";
    }
    return "?";
}

namespace {

// True when every terminal path out of `block` ends in REVERT/INVALID.
bool all_paths_revert(const ContractCfg& cfg, uint32_t block, std::map<uint32_t, int>& memo) {
    auto it = memo.find(block);
    if (it != memo.end()) return it->second == 1;
    memo[block] = -1;  // visiting: a cycle cannot be proven reverting
    const BasicBlock& b = cfg.blocks[block];
    bool result = false;
    switch (b.terminator) {
        case Terminator::Revert:
        case Terminator::Invalid:
            result = true;
            break;
        case Terminator::Jump:
        case Terminator::Jumpi:
        case Terminator::Fallthrough: {
            result = !b.successors.empty();
            for (uint32_t s : b.successors) {
                auto mit = memo.find(s);
                bool sub = (mit != memo.end() && mit->second == -1)
                               ? false
                               : all_paths_revert(cfg, s, memo);
                if (!sub) {
                    result = false;
                    break;
                }
            }
            break;
        }
        default:
            result = false;
    }
    memo[block] = result ? 1 : 0;
    return result;
}

}  // namespace

std::vector<SecurityCheck> extract_checks(const ContractProgram& program,
                                          const FunctionSummary& fn) {
    std::vector<SecurityCheck> out;
    const FunctionBody* body = program.body_of(fn.selector, fn.is_public);
    if (!body) return out;
    std::map<uint32_t, int> revert_memo;

    for (const SemOp& op : fn.ops) {
        if (op.kind != SemOpKind::Jumpi) continue;
        auto block = program.cfg.block_containing(op.offset);
        if (!block || !body->contains(*block)) continue;

        std::optional<uint32_t> taken;
        if (op.taken_target >= 0) taken = program.cfg.block_at(static_cast<uint32_t>(op.taken_target));
        std::optional<uint32_t> fall;
        if (*block + 1 < program.cfg.blocks.size()) fall = *block + 1;

        bool taken_reverts = taken && all_paths_revert(program.cfg, *taken, revert_memo);
        bool fall_reverts = fall && all_paths_revert(program.cfg, *fall, revert_memo);

        SecurityCheck check;
        check.address = program.entry.address;
        check.block = *block;
        check.offset = op.offset;
        check.function_selector = fn.selector;
        check.function_public = fn.is_public;
        if (taken_reverts != fall_reverts) {
            check.form = CheckForm::RevertGuard;
            // Normalize to the condition under which execution survives.
            check.condition = fall_reverts ? op.args[0] : make_iszero(op.args[0]);
        } else {
            check.form = CheckForm::Branch;
            check.condition = op.args[0];
        }
        out.push_back(std::move(check));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

namespace {

std::optional<ArgKind> arg_hint_of(const Expr& node, const ContractProgram& program,
                                   const FunctionSummary& fn) {
    if (!fn.is_public) return std::nullopt;
    auto idx = calldata_param_index(node);
    if (!idx) return std::nullopt;
    const AbiHint* hint = program.entry.find_abi(fn.selector);
    if (!hint) return std::nullopt;
    return hint->arg_kind(*idx);
}

std::optional<StorageMeaning> sload_meaning(const Expr& node, const ContractProgram& program) {
    if (node.kind != ExprKind::SLoad) return std::nullopt;
    auto base = slot_base(node.kids[0]);
    if (!base) return std::nullopt;
    const StorageHint* hint = program.entry.find_storage(*base);
    if (!hint) return std::nullopt;
    return hint->meaning;
}

bool involves_arg_kind(const ExprPtr& cond, ArgKind kind, const ContractProgram& program,
                       const FunctionSummary& fn) {
    return involves(cond, [&](const Expr& n) {
        auto k = arg_hint_of(n, program, fn);
        return k && *k == kind;
    });
}

bool involves_meaning(const ExprPtr& cond, StorageMeaning m, const ContractProgram& program) {
    return involves(cond, [&](const Expr& n) {
        auto got = sload_meaning(n, program);
        return got && *got == m;
    });
}

bool involves_kind(const ExprPtr& cond, ExprKind k) {
    return involves(cond, [&](const Expr& n) { return n.kind == k; });
}

// EQ node with ecrecover output on one side and a non-constant on the other:
// the recovered signer is compared against a claimed identity.
bool has_signer_identity_compare(const ExprPtr& cond) {
    return involves(cond, [&](const Expr& n) {
        if (n.kind != ExprKind::Bin || n.opcode != op::EQ) return false;
        auto side_has_ecrecover = [](const ExprPtr& e) {
            return involves(e, [](const Expr& m) { return m.kind == ExprKind::Ecrecover; });
        };
        const ExprPtr& a = n.kids[0];
        const ExprPtr& b = n.kids[1];
        if (side_has_ecrecover(a) && !b->is_const()) return true;
        if (side_has_ecrecover(b) && !a->is_const()) return true;
        return false;
    });
}

// Zero test whose subject expression equals the target of an external call in
// the same function.
bool is_external_address_zero_test(const ExprPtr& cond, const FunctionSummary& fn) {
    std::vector<ExprPtr> call_targets;
    for (const SemOp& o : fn.ops) {
        if (o.kind != SemOpKind::ExtCall || o.args.empty()) continue;
        const ExprPtr& target = o.args[0];
        if (target->is_const() && target->value <= 9) continue;  // precompiles
        call_targets.push_back(target);
    }
    if (call_targets.empty()) return false;

    ExprPtr subject = strip_iszero(cond);
    if (subject->kind == ExprKind::Bin && subject->opcode == op::EQ) {
        if (subject->kids[0]->is_const(U256(0)))
            subject = subject->kids[1];
        else if (subject->kids[1]->is_const(U256(0)))
            subject = subject->kids[0];
    }
    for (const ExprPtr& t : call_targets)
        if (expr_equal(subject, t)) return true;
    return false;
}

void add_feature(SecurityCheck& check, Feature f) {
    if (!check.has_feature(f)) check.features.push_back(f);
}

}  // namespace

void classify_check(SecurityCheck& check, const ContractProgram& program,
                    const FunctionSummary& fn) {
    check.perspective = Perspective::Unclassified;
    check.features.clear();
    const ExprPtr& cond = check.condition;
    if (!cond) return;

    bool ecrecover = involves_kind(cond, ExprKind::Ecrecover);
    bool sig_arg = involves_arg_kind(cond, ArgKind::Signature, program, fn);
    bool signatory_arg = involves_arg_kind(cond, ArgKind::Signatory, program, fn);
    bool auth_slot = involves_meaning(cond, StorageMeaning::Authorization, program);

    // P4, signature side: ecrecover output, hinted signature data, or a
    // consultation of an authorization structure.
    if (ecrecover || sig_arg || signatory_arg || auth_slot) {
        check.perspective = Perspective::P4;
        if (ecrecover || sig_arg || signatory_arg) add_feature(check, Feature::SignatureComparison);
        if (has_signer_identity_compare(cond) || auth_slot)
            add_feature(check, Feature::SignatoryValidation);
        if (check.features.empty()) add_feature(check, Feature::SignatureComparison);
        return;
    }
    // P5: consultation of a withdrawal record list.
    if (involves_meaning(cond, StorageMeaning::RecordList, program)) {
        check.perspective = Perspective::P5;
        add_feature(check, Feature::RecordListLookup);
        return;
    }
    // P3: bridge support (token/chain identity) or zero test on a call target.
    if (involves_arg_kind(cond, ArgKind::Token, program, fn) ||
        involves_arg_kind(cond, ArgKind::Chain, program, fn) ||
        involves_meaning(cond, StorageMeaning::TokenType, program) ||
        involves_kind(cond, ExprKind::ChainId)) {
        check.perspective = Perspective::P3;
        add_feature(check, Feature::SupportedTokenOrChainId);
        return;
    }
    if (is_external_address_zero_test(cond, fn)) {
        check.perspective = Perspective::P3;
        add_feature(check, Feature::ExternalAddressZero);
        return;
    }
    // P6: receiver address comparison.
    if (involves_arg_kind(cond, ArgKind::Receiver, program, fn)) {
        check.perspective = Perspective::P6;
        add_feature(check, Feature::ReceiverAddress);
        return;
    }
    // P1: balances, liquidity, deposit amount.
    {
        bool native_balance = involves_kind(cond, ExprKind::ExtBalance) ||
                              involves_kind(cond, ExprKind::SelfBalance);
        bool balance_slot = involves_meaning(cond, StorageMeaning::Balance, program);
        bool liquidity_slot = involves_meaning(cond, StorageMeaning::Liquidity, program);
        bool amount_arg = involves_arg_kind(cond, ArgKind::Amount, program, fn);
        if (native_balance || balance_slot || liquidity_slot || amount_arg) {
            check.perspective = Perspective::P1;
            if (liquidity_slot) add_feature(check, Feature::LiquidityThreshold);
            if ((balance_slot && amount_arg) || (native_balance && amount_arg))
                add_feature(check, Feature::UserBalanceVsDepositAmount);
            else if (native_balance || balance_slot)
                add_feature(check, Feature::BridgeBalanceAfterDeposit);
            else if (amount_arg)
                add_feature(check, Feature::UserBalanceVsDepositAmount);
            return;
        }
    }
    // P4, timeout side: comparison against on-chain time status.
    if (involves_kind(cond, ExprKind::Timestamp) || involves_kind(cond, ExprKind::BlockNumber)) {
        check.perspective = Perspective::P4;
        add_feature(check, Feature::TimeoutComparison);
        return;
    }
    // P2: plain argument / message validation.
    {
        bool any_arg = involves(cond, [&](const Expr& n) {
            return n.kind == ExprKind::Calldata || n.kind == ExprKind::CalldataSize;
        });
        bool msg_arg = involves_kind(cond, ExprKind::Caller) ||
                       involves_kind(cond, ExprKind::CallValue) ||
                       involves_kind(cond, ExprKind::Origin);
        if (any_arg || msg_arg) {
            check.perspective = Perspective::P2;
            if (any_arg) add_feature(check, Feature::PublicFunctionArgument);
            if (msg_arg) add_feature(check, Feature::MessageArgument);
            return;
        }
    }
    // No matcher fired: stays Unclassified (participates in association but
    // never satisfies model coverage).
}

// ---------------------------------------------------------------------------
// Resources
// ---------------------------------------------------------------------------

std::vector<Resource> extract_resources(const ContractProgram& program,
                                        const FunctionSummary& fn) {
    std::vector<Resource> out;
    const FunctionBody* body = program.body_of(fn.selector, fn.is_public);
    if (!body) return out;

    auto base_resource = [&](ResourceKind kind, uint32_t offset) {
        Resource r;
        r.kind = kind;
        r.address = program.entry.address;
        r.offset = offset;
        r.block = program.cfg.block_containing(offset).value_or(0);
        r.function_selector = fn.selector;
        r.function_public = fn.is_public;
        return r;
    };

    if (fn.is_public) {
        const BasicBlock& entry_block = program.cfg.blocks[body->entry_block];
        Resource r = base_resource(ResourceKind::AbiEntry, entry_block.start_offset());
        r.selector = fn.selector;
        if (const AbiHint* hint = program.entry.find_abi(fn.selector)) {
            r.display_name = hint->name;
            r.hint_kind = hint->kind;
        } else {
            r.display_name = program.function_name(*body);
        }
        out.push_back(std::move(r));
    }

    for (const SemOp& op : fn.ops) {
        auto block = program.cfg.block_containing(op.offset);
        if (!block || !body->contains(*block)) continue;
        switch (op.kind) {
            case SemOpKind::SStore:
            case SemOpKind::SLoadOp: {
                const ExprPtr& slot = op.args[0];
                auto base = slot_base(slot);
                const StorageHint* hint =
                    base ? program.entry.find_storage(*base) : nullptr;
                bool is_store = op.kind == SemOpKind::SStore;
                // Loads only count as protected resources on hinted slots.
                if (!is_store && !hint) break;
                Resource r = base_resource(ResourceKind::FieldAccess, op.offset);
                r.is_store = is_store;
                r.slot_expr = slot;
                if (is_store) r.value_expr = op.args[1];
                if (base) r.touched_slots.push_back(*base);
                if (hint) {
                    r.meaning = hint->meaning;
                    r.display_name = hint->name;
                } else {
                    r.display_name = base ? "slot " + u256_hex(*base) : "slot ?";
                }
                out.push_back(std::move(r));
                break;
            }
            case SemOpKind::InternalCall: {
                Resource r = base_resource(ResourceKind::InternalMethod, op.offset);
                r.selector = op.callee_entry;
                if (const FunctionBody* callee = program.cfg.find_internal(op.callee_entry))
                    r.display_name = program.function_name(*callee);
                else
                    r.display_name = "fn_0x" + u256_hex(U256(op.callee_entry)).substr(2);
                out.push_back(std::move(r));
                break;
            }
            case SemOpKind::Log: {
                if (op.args.empty() || !op.args[0]->is_const()) break;
                const EmissionSite* site = nullptr;
                for (const EmissionSite& e : program.emissions)
                    if (e.offset == op.offset) site = &e;
                if (!site) break;  // unknown topic
                Resource r = base_resource(ResourceKind::EventEmit, op.offset);
                r.topic = site->topic0;
                r.hint_kind = site->kind;
                r.display_name = site->name;
                out.push_back(std::move(r));
                break;
            }
            default:
                break;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Resource& a, const Resource& b) { return a.offset < b.offset; });
    return out;
}

// ---------------------------------------------------------------------------
// Coverage
// ---------------------------------------------------------------------------

const PerspectiveCoverage* CheckModelCoverage::find(Perspective p) const {
    for (const CategoryCoverage& c : categories)
        for (const PerspectiveCoverage& pc : c.perspectives)
            if (pc.id == p) return &pc;
    return nullptr;
}

CheckModelCoverage evaluate_model(const std::vector<SecurityCheck>& checks, ChainRole role,
                                  const RuleSet& rules) {
    CheckModelCoverage out;
    for (const RuleCategory& cat : rules.categories) {
        if (std::find(cat.roles.begin(), cat.roles.end(), role) == cat.roles.end()) continue;
        CategoryCoverage cc;
        cc.category_id = cat.id;
        cc.satisfied = true;
        for (const RulePerspective& rp : cat.perspectives) {
            PerspectiveCoverage pc;
            pc.id = rp.id;
            std::set<Feature> present;
            for (const SecurityCheck& c : checks) {
                if (c.perspective != rp.id) continue;
                bool contributes = false;
                for (Feature f : c.features) {
                    present.insert(f);
                    contributes = true;
                }
                if (contributes) pc.witness_offsets.push_back(c.offset);
            }
            pc.present.assign(present.begin(), present.end());
            std::sort(pc.witness_offsets.begin(), pc.witness_offsets.end());
            pc.witness_offsets.erase(
                std::unique(pc.witness_offsets.begin(), pc.witness_offsets.end()),
                pc.witness_offsets.end());

            // Alternatives are disjunctive; pick the closest one to report
            // what is missing (max overlap, then fewest gaps, then order).
            size_t best_overlap = 0;
            size_t best_missing = SIZE_MAX;
            std::vector<Feature> best_gap;
            for (const RuleAlternative& alt : rp.alternatives) {
                size_t overlap = 0;
                std::vector<Feature> gap;
                for (Feature f : alt.required) {
                    if (present.count(f))
                        ++overlap;
                    else
                        gap.push_back(f);
                }
                if (gap.empty()) {
                    pc.satisfied = true;
                    best_gap.clear();
                    break;
                }
                if (overlap > best_overlap ||
                    (overlap == best_overlap && gap.size() < best_missing)) {
                    best_overlap = overlap;
                    best_missing = gap.size();
                    best_gap = gap;
                }
            }
            if (!pc.satisfied) pc.missing = best_gap;
            cc.satisfied = cc.satisfied && pc.satisfied;
            cc.perspectives.push_back(std::move(pc));
        }
        out.categories.push_back(std::move(cc));
    }
    return out;
}

}  // namespace axe
