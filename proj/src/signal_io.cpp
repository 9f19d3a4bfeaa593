#include "sament/signal_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sament/errors.hpp"

namespace sament {

std::string format_exact(double v) {
  char buf[64];
  // 17 significant digits always round-trip a binary64
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, v);
  SAMENT_REQUIRE(res.ec == std::errc() && res.ptr == last, "malformed number '" + token + "'");
  return v;
}

void write_signal(std::ostream& os, const Signal& x) {
  os << "basis=trig ambient_dim=" << x.size() << '\n';
  for (double c : x.coeffs()) os << format_exact(c) << '\n';
}

Signal read_signal(std::istream& is) {
  std::string line;
  SAMENT_REQUIRE(static_cast<bool>(std::getline(is, line)), "missing signal header");
  std::istringstream hs(line);
  std::string basis_tok, dim_tok;
  hs >> basis_tok >> dim_tok;
  SAMENT_REQUIRE(basis_tok == "basis=trig", "unsupported basis header '" + line + "'");
  SAMENT_REQUIRE(dim_tok.rfind("ambient_dim=", 0) == 0, "malformed signal header '" + line + "'");
  const std::string dim_str = dim_tok.substr(12);
  std::size_t dim = 0;
  const auto res = std::from_chars(dim_str.data(), dim_str.data() + dim_str.size(), dim);
  SAMENT_REQUIRE(res.ec == std::errc() && res.ptr == dim_str.data() + dim_str.size(),
                 "malformed ambient_dim in '" + line + "'");
  std::vector<double> c;
  c.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    SAMENT_REQUIRE(static_cast<bool>(std::getline(is, line)),
                   "signal truncated after " + std::to_string(i) + " coefficients");
    c.push_back(parse_double(line));
  }
  return Signal(BasisSpec::trig(dim), std::move(c));
}

void save_signal(const std::string& path, const Signal& x) {
  std::ofstream os(path);
  SAMENT_REQUIRE(os.good(), "cannot open '" + path + "' for writing");
  write_signal(os, x);
}

Signal load_signal(const std::string& path) {
  std::ifstream is(path);
  SAMENT_REQUIRE(is.good(), "cannot open '" + path + "'");
  return read_signal(is);
}

}  // namespace sament
