#include "perpconj/tape.hpp"

#include <bit>
#include <string>
#include <unordered_map>

#include "perpconj/error.hpp"

namespace perpconj {

namespace {

struct InstructionKey {
    std::uint64_t head;
    std::uint64_t operands;
    std::uint64_t bits;

    bool operator==(const InstructionKey&) const = default;
};

struct KeyHash {
    std::size_t operator()(const InstructionKey& k) const noexcept {
        std::uint64_t h = k.head * 0x9E3779B97F4A7C15ull;
        h ^= k.operands + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        h ^= k.bits + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

}  // namespace

class TapeBuilder {
public:
    TapeBuilder(Tape& tape, const ParameterSet& params) : tape_(tape), params_(params) {}

    std::uint32_t compile(const Expression& e) {
        if (auto it = by_node_.find(e.node()); it != by_node_.end()) return it->second;
        std::uint32_t reg = emit(e);
        by_node_.emplace(e.node(), reg);
        return reg;
    }

private:
    using Instruction = Tape::Instruction;
    using Op = Tape::Op;

    std::uint32_t emit(const Expression& e) {
        Instruction ins;
        switch (e.kind()) {
            case ExprKind::Constant: return constant(e.value());
            case ExprKind::Parameter: {
                auto it = params_.find(e.name());
                if (it == params_.end()) throw ValidationError("no value for parameter '" + e.name() + "'");
                return constant(it->second);
            }
            case ExprKind::Variable:
                ins.op = Op::Variable;
                ins.a = static_cast<std::uint32_t>(e.slot());
                tape_.min_point_size_ = std::max(tape_.min_point_size_, e.slot() + 1);
                break;
            case ExprKind::Unary: {
                ins.op = Op::Unary;
                ins.unary_op = e.unary_op();
                ins.a = compile(e.lhs());
                const Instruction& operand = tape_.code_[ins.a];
                if (operand.op == Op::Constant) {
                    try {
                        return constant(apply_unary(ins.unary_op, operand.value));
                    } catch (const DomainError&) {
                    }
                }
                break;
            }
            case ExprKind::Binary: {
                ins.op = Op::Binary;
                ins.binary_op = e.binary_op();
                ins.a = compile(e.lhs());
                ins.b = compile(e.rhs());
                const Instruction& x = tape_.code_[ins.a];
                const Instruction& y = tape_.code_[ins.b];
                if (x.op == Op::Constant && y.op == Op::Constant) {
                    try {
                        return constant(apply_binary(ins.binary_op, x.value, y.value));
                    } catch (const DomainError&) {
                    }
                }
                break;
            }
        }
        return intern(ins);
    }

    std::uint32_t constant(double v) {
        Instruction ins;
        ins.op = Op::Constant;
        ins.value = v;
        return intern(ins);
    }

    std::uint32_t intern(const Instruction& ins) {
        InstructionKey key{
            (static_cast<std::uint64_t>(ins.op) << 16) | (static_cast<std::uint64_t>(ins.unary_op) << 8) |
                static_cast<std::uint64_t>(ins.binary_op),
            (static_cast<std::uint64_t>(ins.a) << 32) | ins.b,
            std::bit_cast<std::uint64_t>(ins.value),
        };
        if (auto it = by_key_.find(key); it != by_key_.end()) return it->second;
        auto reg = static_cast<std::uint32_t>(tape_.code_.size());
        tape_.code_.push_back(ins);
        by_key_.emplace(key, reg);
        return reg;
    }

    Tape& tape_;
    const ParameterSet& params_;
    std::unordered_map<const ExprNode*, std::uint32_t> by_node_;
    std::unordered_map<InstructionKey, std::uint32_t, KeyHash> by_key_;
};

Tape::Tape(std::span<const Expression> outputs, const ParameterSet& params) {
    TapeBuilder builder(*this, params);
    outputs_.reserve(outputs.size());
    for (const auto& e : outputs) outputs_.push_back(builder.compile(e));
}

void Tape::run(std::span<const double> point, std::span<double> out) const {
    if (point.size() < min_point_size_) {
        throw ValidationError("point has " + std::to_string(point.size()) + " coordinates, expected " +
                              std::to_string(min_point_size_));
    }
    std::vector<double> reg(code_.size());
    for (std::size_t i = 0; i < code_.size(); ++i) {
        const Instruction& ins = code_[i];
        switch (ins.op) {
            case Op::Constant: reg[i] = ins.value; break;
            case Op::Variable: reg[i] = point[ins.a]; break;
            case Op::Unary: reg[i] = apply_unary(ins.unary_op, reg[ins.a]); break;
            case Op::Binary: reg[i] = apply_binary(ins.binary_op, reg[ins.a], reg[ins.b]); break;
        }
    }
    for (std::size_t k = 0; k < outputs_.size(); ++k) out[k] = reg[outputs_[k]];
}

std::vector<double> Tape::run(std::span<const double> point) const {
    std::vector<double> out(outputs_.size());
    run(point, out);
    return out;
}

}  // namespace perpconj
