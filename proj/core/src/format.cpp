#include "tandyn/format.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace tandyn {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_complex(Cx z) {
  std::string out = format_double(z.real());
  double b = z.imag();
  if (std::signbit(b)) {
    out += '-';
    b = -b;
  } else {
    out += '+';
  }
  out += format_double(b);
  out += 'i';
  return out;
}

std::string format_itinerary(const Itinerary& itin) {
  std::string out;
  for (size_t i = 0; i < itin.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(itin[i]);
  }
  return out;
}

static std::optional<double> parse_double_exact(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  if (errno == ERANGE && !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<double> parse_double(const std::string& in) {
  std::string s;
  for (char c : in)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  return parse_double_exact(s);
}

std::optional<Cx> parse_complex(const std::string& in) {
  std::string s;
  for (char c : in)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) return std::nullopt;

  bool has_i = s.back() == 'i' || s.back() == 'I';
  if (!has_i) {
    auto v = parse_double_exact(s);
    if (!v) return std::nullopt;
    return Cx(*v, 0.0);
  }
  s.pop_back();  // strip the trailing i

  // Split "a+bi"/"a-bi" at the last sign that is not an exponent sign. A sign
  // at position 0 belongs to the real (or lone imaginary) part.
  size_t split = std::string::npos;
  for (size_t k = s.size(); k-- > 1;) {
    char c = s[k];
    if ((c == '+' || c == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }

  std::string re_part, im_part;
  if (split == std::string::npos) {
    re_part = "0";
    im_part = s;  // forms like "2i", "-2i", "i", "-i"
  } else {
    re_part = s.substr(0, split);
    im_part = s.substr(split);
  }
  if (im_part.empty() || im_part == "+")
    im_part = "1";
  else if (im_part == "-")
    im_part = "-1";

  auto re = parse_double_exact(re_part);
  auto im = parse_double_exact(im_part);
  if (!re || !im) return std::nullopt;
  return Cx(*re, *im);
}

std::optional<Itinerary> parse_itinerary(const std::string& in) {
  std::string s;
  for (char c : in)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) return std::nullopt;

  Itinerary itin;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos
                                                               : comma - pos);
    if (tok.empty()) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size() || errno == ERANGE) return std::nullopt;
    itin.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return itin;
}

}  // namespace tandyn
