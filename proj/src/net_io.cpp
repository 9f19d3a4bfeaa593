#include "sament/net_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "sament/errors.hpp"
#include "sament/signal_io.hpp"

namespace sament {

void write_net(std::ostream& os, const EpsilonNet& net, double max_values) {
  const auto M = net.size();
  SAMENT_REQUIRE(M.has_value(), "net too large to write");
  SAMENT_REQUIRE(static_cast<double>(*M) * static_cast<double>(net.basis().ambient_dim) <= max_values,
                 "net file would hold " + std::to_string(*M) + " centers of dimension " +
                     std::to_string(net.basis().ambient_dim) + "; raise the limit to write it");
  os << "eps1=" << format_exact(net.radius()) << " M=" << *M << " spec=" << net.spec_string() << '\n';
  for (std::uint64_t j = 0; j < *M; ++j) {
    if (j > 0) os << "---\n";
    write_signal(os, net.center(j));
  }
}

NetFile read_net(std::istream& is) {
  std::string line;
  SAMENT_REQUIRE(static_cast<bool>(std::getline(is, line)), "net file is empty");
  std::istringstream hs(line);
  std::string te, tm, ts, extra;
  hs >> te >> tm >> ts;
  SAMENT_REQUIRE(te.rfind("eps1=", 0) == 0 && tm.rfind("M=", 0) == 0 && ts.rfind("spec=", 0) == 0 && !(hs >> extra),
                 "malformed net header: " + line);
  NetFile f;
  f.eps1 = parse_double(te.substr(5));
  try {
    std::size_t pos = 0;
    f.M = std::stoull(tm.substr(2), &pos);
    SAMENT_REQUIRE(pos == tm.size() - 2, "bad M");
  } catch (const std::logic_error&) {
    throw UsageError("malformed net header: " + line);
  }
  f.spec = ts.substr(5);
  for (std::uint64_t j = 0; j < f.M; ++j) {
    if (j > 0) {
      SAMENT_REQUIRE(static_cast<bool>(std::getline(is, line)) && line == "---", "missing center separator");
    }
    f.centers.push_back(read_signal(is));
  }
  SAMENT_REQUIRE(!(is >> extra), "trailing data after the last center");
  return f;
}

}  // namespace sament
