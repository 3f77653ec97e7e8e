#include "gasflow/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gasflow {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

void write_profile_csv(std::ostream& os, const DensityProfile& profile) {
  os << "r,v,rho,T,p,U,phase\n";
  for (const auto& rec : profile.records) {
    os << format_double(rec.r) << ',' << format_double(rec.v) << ','
       << format_double(rec.rho) << ',' << format_double(rec.T) << ','
       << format_double(rec.p) << ',' << format_double(rec.U) << ',';
    if (rec.phase) os << format_double(*rec.phase);
    os << '\n';
  }
}

namespace {

double parse_field(const std::string& s, const char* what) {
  double value;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw std::runtime_error(std::string("bad CSV field for ") + what + ": '" +
                             s + "'");
  return value;
}

}  // namespace

DensityProfile read_profile_csv(std::istream& is) {
  DensityProfile profile;
  std::string line;
  if (!std::getline(is, line) || line != "r,v,rho,T,p,U,phase")
    throw std::runtime_error("missing or malformed CSV header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    ProfileRecord rec;
    double* slots[6] = {&rec.r, &rec.v, &rec.rho, &rec.T, &rec.p, &rec.U};
    const char* names[6] = {"r", "v", "rho", "T", "p", "U"};
    for (int i = 0; i < 6; ++i) {
      if (!std::getline(ss, field, ','))
        throw std::runtime_error("short CSV row: '" + line + "'");
      *slots[i] = parse_field(field, names[i]);
    }
    if (std::getline(ss, field, ',') && !field.empty())
      rec.phase = parse_field(field, "phase");
    profile.records.push_back(rec);
  }
  return profile;
}

}  // namespace gasflow
