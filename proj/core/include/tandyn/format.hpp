#pragma once

// Text round-tripping for the record formats the CLI and image sidecars use:
// complex numbers as "a+bi" with 17 significant digits, itineraries as
// comma-separated integers. Parsing accepts what formatting produces (plus
// the obvious shorthands "2", "2i", "i", "-i").

#include <optional>
#include <string>

#include "tandyn/types.hpp"

namespace tandyn {

std::string format_double(double v);       // %.17g
std::string format_complex(Cx z);          // "a+bi" / "a-bi"
std::string format_itinerary(const Itinerary& itin);

std::optional<double> parse_double(const std::string& s);
std::optional<Cx> parse_complex(const std::string& s);
std::optional<Itinerary> parse_itinerary(const std::string& s);

}  // namespace tandyn
