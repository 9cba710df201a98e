#include "ergoalloc/dot.hpp"

#include <ostream>

#include "ergoalloc/text.hpp"

namespace ergoalloc {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

std::string node_id(SubAssembly s) { return "n" + std::to_string(s.bits()); }

}  // namespace

void write_dot(std::ostream& out, const AndOrGraph& graph) {
  out << "digraph aog {\n  rankdir=TB;\n  node [shape=box, fontsize=10];\n";
  for (auto n : graph.nodes()) {
    out << "  " << node_id(n) << " [label=" << quoted(graph.part_name(n));
    if (n == graph.root()) out << ", style=bold";
    out << "];\n";
  }
  for (const auto& a : graph.arcs()) {
    const std::string label = graph.action_labels()[a.action] + "/" + graph.workers()[a.agent].name + "/" +
                              fixed(graph.cost(a.id), 3);
    const std::string style = graph.active(a.id) ? "solid" : "dashed";
    const std::string h = "h" + std::to_string(a.id);
    out << "  " << h << " [shape=point, xlabel=" << quoted(label) << "];\n";
    out << "  " << node_id(a.father) << " -> " << h << " [arrowhead=none, style=" << style << "];\n";
    out << "  " << h << " -> " << node_id(a.left) << " [style=" << style << "];\n";
    out << "  " << h << " -> " << node_id(a.right) << " [style=" << style << "];\n";
  }
  out << "}\n";
}

}  // namespace ergoalloc
