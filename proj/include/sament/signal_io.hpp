#pragma once

#include <iosfwd>
#include <string>

#include "sament/hilbert.hpp"

namespace sament {

/// Text format: header `basis=trig ambient_dim=<D>`, then one coefficient per line.
void write_signal(std::ostream& os, const Signal& x);
Signal read_signal(std::istream& is);

void save_signal(const std::string& path, const Signal& x);
Signal load_signal(const std::string& path);

/// Shortest decimal that parses back to exactly `v`.
std::string format_exact(double v);

/// Parse a full decimal token; throws UsageError on trailing junk.
double parse_double(const std::string& token);

}  // namespace sament
