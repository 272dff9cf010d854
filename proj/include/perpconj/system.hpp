#pragma once

#include <span>
#include <string>
#include <vector>

#include "perpconj/expr.hpp"

namespace perpconj {

/// An autonomous vector field  dX/dt = f(X)  written as n expressions over
/// named state variables and parameters.
struct SystemDefinition {
    std::string name;
    std::vector<std::string> state_names;
    ParameterSet parameters;
    std::vector<Expression> components;

    std::size_t dimension() const noexcept { return state_names.size(); }
    Scope scope() const;

    /// n >= 1, distinct valid names, one component per state variable, every
    /// free name resolvable. Throws ValidationError.
    void validate() const;
};

/// Parses `sources` against `state_names` and the keys of `parameters`.
/// Errors name the offending component: "component 2: unknown identifier ...".
SystemDefinition make_system(std::string name, std::vector<std::string> state_names, ParameterSet parameters,
                             std::span<const std::string> sources);

}  // namespace perpconj
