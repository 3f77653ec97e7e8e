#pragma once

#include <iosfwd>
#include <string>

#include "gasflow/euler.hpp"

namespace gasflow {

// Shortest decimal representation that round-trips through IEEE-754 double.
std::string format_double(double x);

// Header: r,v,rho,T,p,U,phase. Phase column left blank when not computed.
void write_profile_csv(std::ostream& os, const DensityProfile& profile);

// Parses a profile CSV back; metadata fields are left defaulted.
DensityProfile read_profile_csv(std::istream& is);

}  // namespace gasflow
