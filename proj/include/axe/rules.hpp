#pragma once

#include "axe/manifest.hpp"

#include <string>
#include <vector>

namespace axe {

enum class Perspective : uint8_t { P1, P2, P3, P4, P5, P6, Unclassified };

const char* to_string(Perspective p);

// Security-feature tags matched against branch conditions.
enum class Feature : uint8_t {
    BridgeBalanceAfterDeposit,
    UserBalanceVsDepositAmount,
    LiquidityThreshold,
    AssetOwnership,
    PublicFunctionArgument,
    MessageArgument,
    SupportedTokenOrChainId,
    ExternalAddressZero,
    SignatureComparison,
    SignatoryValidation,
    TimeoutComparison,
    RecordListLookup,
    ReceiverAddress,
};

const char* feature_id(Feature f);
const char* feature_label(Feature f);

// One way to satisfy a perspective: every listed feature must be witnessed.
// Alternatives within a perspective are disjunctive (semantically equivalent
// protections); the features inside one alternative conjoin.
struct RuleAlternative {
    std::string label;  // the model's security-feature name
    std::string usage;  // typical implementation shape
    std::vector<Feature> required;
};

struct RulePerspective {
    Perspective id = Perspective::Unclassified;
    std::string name;
    std::vector<RuleAlternative> alternatives;
};

struct RuleCategory {
    std::string id;  // "C1".."C3"
    std::string name;
    std::vector<ChainRole> roles;  // which chain side the category applies to
    std::vector<RulePerspective> perspectives;
};

struct RuleSet {
    std::string version;
    std::vector<RuleCategory> categories;

    const RuleCategory* category(const std::string& id) const;
    const RulePerspective* perspective(Perspective p) const;

    std::string to_json() const;          // stable key order, pretty-printed
    static RuleSet from_json(const std::string& text);
    bool operator==(const RuleSet& other) const;
};

// The built-in access-control check model.
const RuleSet& builtin_rules();

}  // namespace axe
