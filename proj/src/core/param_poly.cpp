#include "param_poly.hpp"

#include <sstream>

namespace dlab {

Rat ParamPoly::eval(const Rat& beta, const Rat& gamma) const {
  Rat out(0);
  for (const auto& [k, v] : terms_)
    out += v * rat_pow(beta, k.first) * rat_pow(gamma, k.second);
  return out;
}

std::string ParamPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : terms_) {
    Rat av = v;
    if (!first) {
      os << (v < 0 ? " - " : " + ");
      if (v < 0) av = -v;
    } else {
      if (v < 0) {
        os << "-";
        av = -v;
      }
      first = false;
    }
    bool has_vars = k.first || k.second;
    if (av != 1 || !has_vars) os << av.get_str();
    if (av != 1 && has_vars) os << "*";
    if (k.first) {
      os << "b";
      if (k.first > 1) os << "^" << k.first;
      if (k.second) os << "*";
    }
    if (k.second) {
      os << "g";
      if (k.second > 1) os << "^" << k.second;
    }
  }
  return os.str();
}

}  // namespace dlab
