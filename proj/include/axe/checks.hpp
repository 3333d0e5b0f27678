#pragma once

#include "axe/bridge.hpp"
#include "axe/rules.hpp"

#include <vector>

namespace axe {

enum class CheckForm : uint8_t { RevertGuard, Branch };

// A conditional guard: one JUMPI yields at most one check. The condition is
// normalized to hold on the surviving (non-reverting) edge of a revert guard.
struct SecurityCheck {
    std::string address;
    uint32_t block = 0;
    uint32_t offset = 0;
    CheckForm form = CheckForm::Branch;
    Perspective perspective = Perspective::Unclassified;
    std::vector<Feature> features;  // sorted, unique
    ExprPtr condition;
    uint32_t function_selector = 0;
    bool function_public = false;

    bool has_feature(Feature f) const;
};

enum class ResourceKind : uint8_t { FieldAccess, InternalMethod, AbiEntry, EventEmit };

const char* to_string(ResourceKind k);

struct Resource {
    ResourceKind kind = ResourceKind::FieldAccess;
    std::string address;
    uint32_t block = 0;
    uint32_t offset = 0;
    uint32_t function_selector = 0;
    bool function_public = false;

    // FieldAccess
    bool is_store = false;
    std::vector<U256> touched_slots;  // resolved base slots
    StorageMeaning meaning = StorageMeaning::Other;
    ExprPtr slot_expr;
    ExprPtr value_expr;

    // InternalMethod / AbiEntry
    uint32_t selector = 0;

    // EventEmit
    U256 topic{};
    HintKind hint_kind = HintKind::Other;

    std::string display_name;
};

// Every JUMPI in the function's own blocks (the dispatcher is excluded by
// construction) becomes at most one SecurityCheck; guards whose failing edge
// can only revert are flagged RevertGuard.
std::vector<SecurityCheck> extract_checks(const ContractProgram& program,
                                          const FunctionSummary& fn);

// Hint-assisted feature matching; fills perspective + features in place.
void classify_check(SecurityCheck& check, const ContractProgram& program,
                    const FunctionSummary& fn);

std::vector<Resource> extract_resources(const ContractProgram& program, const FunctionSummary& fn);

// ---------------------------------------------------------------------------
// Model coverage
// ---------------------------------------------------------------------------

struct PerspectiveCoverage {
    Perspective id = Perspective::Unclassified;
    bool satisfied = false;
    std::vector<Feature> present;          // features witnessed by any check
    std::vector<Feature> missing;          // gap of the closest alternative
    std::vector<uint32_t> witness_offsets; // check sites contributing features
};

struct CategoryCoverage {
    std::string category_id;
    bool satisfied = false;  // all perspectives of the category hold
    std::vector<PerspectiveCoverage> perspectives;
};

struct CheckModelCoverage {
    std::vector<CategoryCoverage> categories;

    const PerspectiveCoverage* find(Perspective p) const;
};

// Boolean structure: alternatives within a perspective are OR'd, the features
// of one alternative AND'd, perspectives within a category AND'd. The role
// selects which categories are evaluated (C1+C2 on source, C2+C3 on
// destination).
CheckModelCoverage evaluate_model(const std::vector<SecurityCheck>& checks, ChainRole role,
                                  const RuleSet& rules = builtin_rules());

}  // namespace axe
