#include "perpconj/system.hpp"

#include <set>

#include "perpconj/error.hpp"

namespace perpconj {

Scope SystemDefinition::scope() const {
    Scope s;
    s.state = state_names;
    for (const auto& [name, value] : parameters) s.parameters.push_back(name);
    return s;
}

void SystemDefinition::validate() const {
    if (state_names.empty()) throw ValidationError("system '" + name + "' has no state variables");
    if (components.size() != state_names.size()) {
        throw ValidationError("system '" + name + "' has " + std::to_string(components.size()) +
                              " components for " + std::to_string(state_names.size()) + " state variables");
    }
    std::set<std::string> seen;
    auto check_name = [&](const std::string& id) {
        if (!is_identifier(id)) throw ValidationError("invalid identifier '" + id + "'");
        if (is_function_name(id)) throw ValidationError("'" + id + "' is a reserved function name");
        if (!seen.insert(id).second) throw ValidationError("duplicate name '" + id + "'");
    };
    for (const auto& s : state_names) check_name(s);
    for (const auto& [p, value] : parameters) check_name(p);

    for (std::size_t i = 0; i < components.size(); ++i) {
        for (const auto& id : free_variables(components[i])) {
            if (!seen.count(id)) {
                throw ValidationError("component " + std::to_string(i + 1) + " references undeclared '" + id + "'");
            }
        }
    }
}

SystemDefinition make_system(std::string name, std::vector<std::string> state_names, ParameterSet parameters,
                             std::span<const std::string> sources) {
    SystemDefinition def;
    def.name = std::move(name);
    def.state_names = std::move(state_names);
    def.parameters = std::move(parameters);
    if (sources.size() != def.state_names.size()) {
        throw ValidationError("expected " + std::to_string(def.state_names.size()) + " field components, got " +
                              std::to_string(sources.size()));
    }
    const Scope scope = def.scope();
    for (std::size_t i = 0; i < sources.size(); ++i) {
        try {
            def.components.push_back(parse_expression(sources[i], scope));
        } catch (const SyntaxError& e) {
            throw ValidationError("component " + std::to_string(i + 1) + ": " + e.what());
        } catch (const UnknownIdentifier& e) {
            throw ValidationError("component " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    def.validate();
    return def;
}

}  // namespace perpconj
