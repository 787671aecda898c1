#pragma once

// JSON persistence, Graphviz DOT rendering and the event narrative.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fm/graph.hpp"
#include "fm/sim.hpp"
#include "fm/transform.hpp"

namespace fm {

/// Malformed graph document. `path` is a JSON pointer to the offending value.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string path, const std::string& reason)
        : std::runtime_error(path + ": " + reason), path_(std::move(path)), reason_(reason) {}
    const std::string& path() const noexcept { return path_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string path_;
    std::string reason_;
};

std::string to_json(const FmGraph& graph);
/// Checks the document shape only; dangling references load and are left to validate.
FmGraph from_json(std::string_view text);

enum class RenderStyle { Full, Simplified };

struct RenderOptions {
    RenderStyle style = RenderStyle::Full;
    bool show_triggers = true;
    bool honor_collapse = true;
    bool honor_fusion = true;
};

std::string to_dot(const FmGraph& graph, const RenderOptions& options = {});
std::string flowchart_to_dot(const Flowchart& chart);

enum class NarrativeDetail {
    Compact,  // triggers, flows between flowsystems and creations
    Verbose,  // one line per arc
};

/// Static narrative without a trace, dynamic (one line per event) with one.
std::string narrate(const FmGraph& graph, const Trace* trace = nullptr,
                    NarrativeDetail detail = NarrativeDetail::Compact);

}  // namespace fm
