#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace entroscale {

// Splits one CSV record. Double-quoted fields may contain commas; embedded
// quotes are doubled. Multi-line fields are not supported (none of the file
// formats here produce them).
std::vector<std::string> csv_split(std::string_view line);

// Quotes a field if it contains a comma, quote or leading/trailing space.
std::string csv_quote(std::string_view field);

// Fixed "%.9g" formatting so repeated runs emit byte-identical files.
std::string fmt_double(double v);

}  // namespace entroscale
