#pragma once

#include <iosfwd>

#include "ergoalloc/aog.hpp"

namespace ergoalloc {

/// Graphviz rendering: sub-assemblies as boxes, each hyper-arc as a point
/// joined to its father and both children, labelled `action/agent/cost`.
/// Pruned arcs are dashed.
void write_dot(std::ostream& out, const AndOrGraph& graph);

}  // namespace ergoalloc
