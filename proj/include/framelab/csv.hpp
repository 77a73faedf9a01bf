#pragma once

#include <iosfwd>
#include <string>

#include "framelab/frame_core.hpp"

namespace framelab {

// Frame interchange format: header row "x1,...,xd", then one vector per row.
// Parsing is strict: equal column counts, finite reals, no stray fields.
// Errors carry 1-based line numbers.
FiniteFrame read_frame_csv(std::istream& in, const std::string& name = "<stream>");
FiniteFrame read_frame_csv_file(const std::string& path);

// All floats are written with 17 significant digits so that rereading the
// file reproduces the exact doubles.
void write_frame_csv(std::ostream& out, const FiniteFrame& frame);
void write_frame_csv_file(const std::string& path, const FiniteFrame& frame);

std::string format_double(double x);  // %.17g

}  // namespace framelab
