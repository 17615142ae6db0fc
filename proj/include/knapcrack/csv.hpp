#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace knapcrack {

// RFC 4180: quote fields containing comma, quote, CR or LF; double quotes.
std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

// Fixed "%.10g" rendering so reruns produce identical bytes.
std::string format_double(double v);

}  // namespace knapcrack
