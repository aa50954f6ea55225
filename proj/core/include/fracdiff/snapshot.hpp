#pragma once

#include <string>

#include "fracdiff/tensor_field.hpp"

namespace fracdiff {

/// Structured grid dump (coordinates + value per row, CSV) suitable for
/// external plotting.
void emit_field_snapshot(const TensorField& field, const Grid& grid,
                         const std::string& path);

}  // namespace fracdiff
