#pragma once

#include <iosfwd>
#include <string>

#include "ergoalloc/allocation.hpp"
#include "ergoalloc/aog.hpp"
#include "ergoalloc/search.hpp"

namespace ergoalloc {

enum class Format { text, json, csv };

/// Throws DomainError for names other than text, json and csv.
Format parse_format(const std::string& name);

void write_plan(std::ostream& out, const AndOrGraph& graph, const AllocationPlan& plan, Format format);

/// One row per executed action. Search wall time is machine-dependent and
/// only written when `timing` is set.
void write_trace_csv(std::ostream& out, const AllocationTrace& trace, bool timing = false);

/// Per-tick human wear for every joint.
void write_wear_csv(std::ostream& out, const AllocationTrace& trace);

/// Share of robot assignments per action label, plus repetition timing.
void write_summary_json(std::ostream& out, const AllocationTrace& trace, const std::string& scenario_name);

}  // namespace ergoalloc
