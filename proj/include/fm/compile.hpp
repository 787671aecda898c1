#pragma once

#include "fm/ast.hpp"
#include "fm/graph.hpp"

namespace fm {

struct CompileOptions {
    // User action and keyboard flowsystems on input, a screen flowsystem on output.
    bool model_keyboard_screen = true;
    // Literal operands are fetched from stored memory constants instead of
    // being created inside the ALU.
    bool model_constant_fetch = false;
};

/// Prefix of compiler temporaries introduced by decompose_exprs.
inline constexpr std::string_view kTempPrefix = "__t";

/// Rewrites every assignment and output operand so that it holds at most one
/// binary operator, hoisting inner operations into fresh temporaries.
ast::Program decompose_exprs(const ast::Program& program);

/// Lowers a resolved program to a flowthing graph. The result always validates.
FmGraph compile(const ast::Program& program, const CompileOptions& options = {});

// Flowsystem `role` attribute values written by compile and read by the
// simulator, the emitters and the transforms.
namespace role {
inline constexpr const char* kOs = "os";
inline constexpr const char* kMemory = "memory";
inline constexpr const char* kLiteral = "literal";
inline constexpr const char* kConstant = "constant";
inline constexpr const char* kCout = "cout";
inline constexpr const char* kCin = "cin";
inline constexpr const char* kScreen = "screen";
inline constexpr const char* kUser = "user";
inline constexpr const char* kKeyboard = "keyboard";
inline constexpr const char* kAluOp = "alu_op";
inline constexpr const char* kAluCompare = "alu_compare";
inline constexpr const char* kAluResult = "alu_result";
inline constexpr const char* kSignal = "signal";
}  // namespace role

}  // namespace fm
