#include "axe/rules.hpp"

#include <json.hpp>

namespace axe {

using ordered_json = nlohmann::ordered_json;

const char* to_string(Perspective p) {
    switch (p) {
        case Perspective::P1: return "P1";
        case Perspective::P2: return "P2";
        case Perspective::P3: return "P3";
        case Perspective::P4: return "P4";
        case Perspective::P5: return "P5";
        case Perspective::P6: return "P6";
        case Perspective::Unclassified: return "unclassified";
    }
    return "unclassified";
}

namespace {

struct FeatureInfo {
    Feature f;
    const char* id;
    const char* label;
};

constexpr FeatureInfo kFeatures[] = {
    {Feature::BridgeBalanceAfterDeposit, "bridge-balance-after-deposit",
     "Balance of bridge after deposit"},
    {Feature::UserBalanceVsDepositAmount, "user-balance-vs-deposit-amount", "Balance of user"},
    {Feature::LiquidityThreshold, "liquidity-threshold", "Liquidity of bridge"},
    {Feature::AssetOwnership, "asset-ownership", "Ownership of asset"},
    {Feature::PublicFunctionArgument, "public-function-argument", "Arguments of public function"},
    {Feature::MessageArgument, "message-argument", "Arguments of user message"},
    {Feature::SupportedTokenOrChainId, "supported-token-or-chain", "Bridge-supported token/chain"},
    {Feature::ExternalAddressZero, "external-address-zero", "Address of external invocation"},
    {Feature::SignatureComparison, "signature-comparison", "Signature"},
    {Feature::SignatoryValidation, "signatory-validation", "Signatory"},
    {Feature::TimeoutComparison, "timeout-comparison", "Timeout of signature"},
    {Feature::RecordListLookup, "record-list-lookup", "List recording the withdrawal"},
    {Feature::ReceiverAddress, "receiver-address", "Receiver address"},
};

const FeatureInfo& info(Feature f) {
    for (const FeatureInfo& fi : kFeatures)
        if (fi.f == f) return fi;
    return kFeatures[0];
}

std::optional<Feature> feature_from_id(const std::string& id) {
    for (const FeatureInfo& fi : kFeatures)
        if (id == fi.id) return fi.f;
    return std::nullopt;
}

}  // namespace

const char* feature_id(Feature f) { return info(f).id; }
const char* feature_label(Feature f) { return info(f).label; }

const RuleCategory* RuleSet::category(const std::string& id) const {
    for (const RuleCategory& c : categories)
        if (c.id == id) return &c;
    return nullptr;
}

const RulePerspective* RuleSet::perspective(Perspective p) const {
    for (const RuleCategory& c : categories)
        for (const RulePerspective& rp : c.perspectives)
            if (rp.id == p) return &rp;
    return nullptr;
}

const RuleSet& builtin_rules() {
    static const RuleSet rules = [] {
        RuleSet r;
        r.version = "1";

        RuleCategory c1;
        c1.id = "C1";
        c1.name = "Asset deposit and locking";
        c1.roles = {ChainRole::Source};
        {
            RulePerspective p1;
            p1.id = Perspective::P1;
            p1.name = "Success check for the deposit";
            p1.alternatives = {
                {"Balance of bridge after deposit", "Comparison with balance before deposit",
                 {Feature::BridgeBalanceAfterDeposit}},
                {"Balance of user", "Comparison with the deposit amount",
                 {Feature::UserBalanceVsDepositAmount}},
                {"Liquidity of bridge", "Comparison with deposit threshold",
                 {Feature::LiquidityThreshold}},
                {"Ownership of asset", "Comparison with the asset owner",
                 {Feature::AssetOwnership}},
            };
            RulePerspective p2;
            p2.id = Perspective::P2;
            p2.name = "Validation check for arguments of user";
            p2.alternatives = {
                {"Arguments of public function", "Comparison with logic condition",
                 {Feature::PublicFunctionArgument}},
                {"Arguments of user message", "Comparison with logic condition",
                 {Feature::MessageArgument}},
            };
            c1.perspectives = {p1, p2};
        }

        RuleCategory c2;
        c2.id = "C2";
        c2.name = "Cross-chain router";
        c2.roles = {ChainRole::Source, ChainRole::Destination};
        {
            RulePerspective p3;
            p3.id = Perspective::P3;
            p3.name = "Correctness check for cross-chain router";
            p3.alternatives = {
                {"Bridge-supported token/chain", "Comparison with ID of destination",
                 {Feature::SupportedTokenOrChainId}},
                {"Address of external invocation", "Comparison with 0 address",
                 {Feature::ExternalAddressZero}},
            };
            c2.perspectives = {p3};
        }

        RuleCategory c3;
        c3.id = "C3";
        c3.name = "Asset authorization and withdrawal";
        c3.roles = {ChainRole::Destination};
        {
            RulePerspective p4;
            p4.id = Perspective::P4;
            p4.name = "Validation check for verification";
            p4.alternatives = {
                {"Signature and Signatory", "Comparison with cross-chain message",
                 {Feature::SignatureComparison, Feature::SignatoryValidation}},
                {"Timeout of signature",
                 "Comparison with on-chain time status (timestamp, blocknumber)",
                 {Feature::TimeoutComparison}},
            };
            RulePerspective p5;
            p5.id = Perspective::P5;
            p5.name = "Check for repetitive withdrawal";
            p5.alternatives = {
                {"List recording the withdrawal", "Consultation on the lists (mapping variables)",
                 {Feature::RecordListLookup}},
            };
            RulePerspective p6;
            p6.id = Perspective::P6;
            p6.name = "Correctness check for releasing";
            p6.alternatives = {
                {"Receiver address", "Comparison with user-specified address or 0 address",
                 {Feature::ReceiverAddress}},
            };
            c3.perspectives = {p4, p5, p6};
        }

        r.categories = {c1, c2, c3};
        return r;
    }();
    return rules;
}

std::string RuleSet::to_json() const {
    ordered_json doc;
    doc["rule_set_version"] = version;
    doc["categories"] = ordered_json::array();
    for (const RuleCategory& c : categories) {
        ordered_json jc;
        jc["id"] = c.id;
        jc["name"] = c.name;
        jc["roles"] = ordered_json::array();
        for (ChainRole role : c.roles) jc["roles"].push_back(to_string(role));
        jc["perspectives"] = ordered_json::array();
        for (const RulePerspective& p : c.perspectives) {
            ordered_json jp;
            jp["id"] = to_string(p.id);
            jp["name"] = p.name;
            jp["combinator"] = "any-alternative";
            jp["alternatives"] = ordered_json::array();
            for (const RuleAlternative& a : p.alternatives) {
                ordered_json ja;
                ja["feature"] = a.label;
                ja["usage"] = a.usage;
                ja["combinator"] = "all-of";
                ja["requires"] = ordered_json::array();
                for (Feature f : a.required) ja["requires"].push_back(feature_id(f));
                jp["alternatives"].push_back(std::move(ja));
            }
            jc["perspectives"].push_back(std::move(jp));
        }
        doc["categories"].push_back(std::move(jc));
    }
    return doc.dump(2) + "\n";
}

RuleSet RuleSet::from_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw AxeError(std::string("rule set is not well-formed: ") + e.what());
    }
    RuleSet r;
    r.version = doc.at("rule_set_version").get<std::string>();
    for (const auto& jc : doc.at("categories")) {
        RuleCategory c;
        c.id = jc.at("id").get<std::string>();
        c.name = jc.at("name").get<std::string>();
        for (const auto& jr : jc.at("roles"))
            c.roles.push_back(jr.get<std::string>() == "source" ? ChainRole::Source
                                                                : ChainRole::Destination);
        for (const auto& jp : jc.at("perspectives")) {
            RulePerspective p;
            std::string pid = jp.at("id").get<std::string>();
            for (Perspective cand : {Perspective::P1, Perspective::P2, Perspective::P3,
                                     Perspective::P4, Perspective::P5, Perspective::P6})
                if (pid == to_string(cand)) p.id = cand;
            p.name = jp.at("name").get<std::string>();
            for (const auto& ja : jp.at("alternatives")) {
                RuleAlternative a;
                a.label = ja.at("feature").get<std::string>();
                a.usage = ja.at("usage").get<std::string>();
                for (const auto& jf : ja.at("requires")) {
                    auto f = feature_from_id(jf.get<std::string>());
                    if (!f) throw AxeError("unknown feature id " + jf.get<std::string>());
                    a.required.push_back(*f);
                }
                p.alternatives.push_back(std::move(a));
            }
            c.perspectives.push_back(std::move(p));
        }
        r.categories.push_back(std::move(c));
    }
    return r;
}

bool RuleSet::operator==(const RuleSet& other) const {
    return to_json() == other.to_json();
}

}  // namespace axe
