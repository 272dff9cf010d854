#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "perpconj/expr.hpp"

namespace perpconj {

/// Straight-line program evaluating several expressions at once. Parameters
/// are bound at compile time; structurally identical subtrees are computed
/// once, also across outputs.
class Tape {
public:
    Tape() = default;
    Tape(std::span<const Expression> outputs, const ParameterSet& params);

    std::size_t output_count() const noexcept { return outputs_.size(); }
    std::size_t instruction_count() const noexcept { return code_.size(); }

    /// Throws DomainError exactly where `evaluate` would.
    void run(std::span<const double> point, std::span<double> out) const;
    std::vector<double> run(std::span<const double> point) const;

private:
    enum class Op : std::uint8_t { Constant, Variable, Unary, Binary };

    struct Instruction {
        Op op = Op::Constant;
        UnaryOp unary_op = UnaryOp::Neg;
        BinaryOp binary_op = BinaryOp::Add;
        std::uint32_t a = 0;  // operand register, or state slot for Variable
        std::uint32_t b = 0;
        double value = 0.0;
    };

    friend class TapeBuilder;

    std::vector<Instruction> code_;
    std::vector<std::uint32_t> outputs_;
    std::size_t min_point_size_ = 0;
};

}  // namespace perpconj
