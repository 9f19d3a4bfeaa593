#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sament/hilbert.hpp"
#include "sament/net.hpp"

namespace sament {

struct NetFile {
  double eps1 = 0.0;
  std::uint64_t M = 0;
  std::string spec;
  std::vector<Signal> centers;
};

/// Header `eps1=<v> M=<count> spec=<canonical>`, then every center in the signal
/// text format, separated by `---` lines. Refuses nets with more than
/// `max_values` stored coefficients.
void write_net(std::ostream& os, const EpsilonNet& net, double max_values = 5e7);
NetFile read_net(std::istream& is);

}  // namespace sament
