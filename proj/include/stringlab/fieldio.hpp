#ifndef STRINGLAB_FIELDIO_HPP
#define STRINGLAB_FIELDIO_HPP

#include <iosfwd>
#include <string>

#include "stringlab/simulate.hpp"

namespace stringlab {

// Full-precision decimal formatting (round-trips doubles exactly).
std::string format_double(double v);

// Field dump: CSV `t,x,j,value`, one row per (node, component), plus a
// sidecar `<path>.meta` with the grid, d, seed and jitter record.
void write_field_csv(const FieldSample& field, const std::string& path);
FieldSample read_field_csv(const std::string& path);

std::string field_meta_block(const FieldSample& field);

} // namespace stringlab

#endif
