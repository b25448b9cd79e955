#pragma once

#include <filesystem>
#include <iosfwd>

#include "orgnorms/landscape.hpp"

namespace orgnorms {

// Binary landscape dump, little-endian:
//
//   magic      8 bytes  "ORGNLSC1"
//   N P K C S  5 x i32
//   rho        f64
//   seed       u64
//   configs    u64      entries per task table
//   tables     M * configs x f64, task-major
//   global_max f64
//   argmax     u32      state bits
//
// Loading re-enumerates the maximum and rejects a file whose stored maximum
// disagrees bitwise.
void save_landscape(const Landscape& lsc, std::ostream& out);
Landscape load_landscape(std::istream& in);

void save_landscape(const Landscape& lsc, const std::filesystem::path& path);
Landscape load_landscape(const std::filesystem::path& path);

}  // namespace orgnorms
