#pragma once

#include <optional>
#include <string>

namespace brainergm {

/// Shortest decimal text that reads back to exactly `x`; "nan", "inf", "-inf"
/// for non-finite values.
std::string format_number(double x);

/// format_number, or "NA" when empty.
std::string format_number(const std::optional<double>& x);

}  // namespace brainergm
