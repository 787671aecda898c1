#pragma once

// Graph-to-graph simplification passes and the reduction to flowcharts.

#include <string>
#include <vector>

#include "fm/ast.hpp"
#include "fm/graph.hpp"

namespace fm {

/// Replaces every Arrive/Accept pair by one Receive stage. Throws FmError
/// (MixedReceive) when a flowsystem holds only one of the two.
FmGraph merge_receive(const FmGraph& graph);

/// Splits every Receive stage into Arrive followed by Accept.
FmGraph expand_receive(const FmGraph& graph);

// Annotation-only passes; topology is untouched.
FmGraph collapse_single(const FmGraph& graph);
FmGraph fuse_statements(const FmGraph& graph);

enum class FlowchartNodeKind { Terminal, Process, InputOutput, Decision };

const char* to_string(FlowchartNodeKind k) noexcept;

struct FlowchartNode {
    std::string id;
    FlowchartNodeKind kind = FlowchartNodeKind::Process;
    std::string label;
    friend bool operator==(const FlowchartNode&, const FlowchartNode&) = default;
};

struct FlowchartEdge {
    std::string from;
    std::string to;
    std::string label;  // "", "true" or "false"
    friend bool operator==(const FlowchartEdge&, const FlowchartEdge&) = default;
};

struct Flowchart {
    std::vector<FlowchartNode> nodes;  // nodes.front() is the start terminal
    std::vector<FlowchartEdge> edges;
    friend bool operator==(const Flowchart&, const Flowchart&) = default;
};

/// Uses the statement-sphere metadata written by compile.
Flowchart to_flowchart(const FmGraph& graph);
Flowchart to_flowchart(const ast::Program& program);

}  // namespace fm
