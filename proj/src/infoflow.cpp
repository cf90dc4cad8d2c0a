#include "spoc/infoflow.hpp"

namespace spoc {

std::string Principal::str() const {
    switch (kind) {
    case Kind::Requestor: return "requestor#" + std::to_string(index);
    case Kind::NodeHost: return "node-host#" + std::to_string(index);
    case Kind::Enclave: return "enclave#" + std::to_string(index);
    case Kind::ThirdParty: return "third-party#" + std::to_string(index);
    case Kind::Public: return "public";
    }
    return "?";
}

std::string_view toString(FlowItem item) {
    switch (item) {
    case FlowItem::Secret: return "secret";
    case FlowItem::Inputs: return "inputs";
    case FlowItem::EncryptionKey: return "encryptionKey";
    case FlowItem::SigningKey: return "signingKey";
    case FlowItem::PlaintextResult: return "plaintextResult";
    }
    return "?";
}

void InfoFlowLedger::grant(const FlowTag& tag, Principal p, std::string via) {
    current_.insert({tag, p});
    history_.push_back({++seq_, tag, p, true, std::move(via)});
}

void InfoFlowLedger::revoke(const FlowTag& tag, Principal p, std::string via) {
    if (current_.erase({tag, p}) != 0) history_.push_back({++seq_, tag, p, false, std::move(via)});
}

void InfoFlowLedger::revokeEverywhere(Principal p, std::string via) {
    for (auto it = current_.begin(); it != current_.end();) {
        if (it->second == p) {
            history_.push_back({++seq_, it->first, p, false, via});
            it = current_.erase(it);
        } else {
            ++it;
        }
    }
}

bool InfoFlowLedger::visible(const FlowTag& tag, Principal p) const {
    return current_.contains({tag, p}) || current_.contains({tag, Principal::everyone()});
}

std::set<Principal> InfoFlowLedger::visibility(const FlowTag& tag) const {
    std::set<Principal> out;
    for (const auto& [t, p] : current_)
        if (t == tag) out.insert(p);
    return out;
}

bool InfoFlowLedger::attemptRead(const FlowTag& tag, Principal reader, std::string via) {
    if (visible(tag, reader)) return true;
    violations_.push_back({++seq_, tag, reader, std::move(via)});
    return false;
}

} // namespace spoc
