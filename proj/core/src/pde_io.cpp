#include "tmkt/pde_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "tmkt/format.hpp"

namespace tmkt {

void write_snapshot_csv(std::ostream& os, const Grid1D& grid, const Field& fields) {
  os << (fields.species() == 4 ? "x,u,v,u2,v2\n" : "x,u,v\n");
  for (std::size_t i = 0; i < grid.n(); ++i) {
    os << format_double(grid.x(i));
    for (std::size_t s = 0; s < fields.species(); ++s) {
      os << ',' << format_double(fields.component(s)[i]);
    }
    os << '\n';
  }
}

void write_deviation_csv(std::ostream& os, std::span<const DeviationSample> series) {
  os << "t,deviation\n";
  for (const auto& s : series) os << format_double(s.t) << ',' << format_double(s.deviation) << '\n';
}

void write_profile_svg(std::ostream& os, const Grid1D& grid, const Field& fields) {
  constexpr double kWidth = 640.0, kHeight = 360.0, kPad = 40.0;
  constexpr std::array<const char*, 4> kColours{"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  constexpr std::array<const char*, 4> kNames{"u", "v", "u2", "v2"};

  double lo = fields.data().empty() ? 0.0 : fields.data()[0];
  double hi = lo;
  for (double x : fields.data()) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    lo -= 0.5;
    hi += 0.5;
  }
  const auto px = [&](double x) { return kPad + (kWidth - 2 * kPad) * x / grid.length(); };
  const auto py = [&](double y) { return kHeight - kPad - (kHeight - 2 * kPad) * (y - lo) / (hi - lo); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\">\n";
  os << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << kWidth - 2 * kPad
     << "\" height=\"" << kHeight - 2 * kPad << "\" fill=\"none\" stroke=\"#888\"/>\n";
  os << "<text x=\"" << kPad << "\" y=\"" << kPad - 8 << "\" font-size=\"12\">max "
     << format_double(hi) << "</text>\n";
  os << "<text x=\"" << kPad << "\" y=\"" << kHeight - kPad + 16 << "\" font-size=\"12\">min "
     << format_double(lo) << "</text>\n";
  for (std::size_t s = 0; s < fields.species() && s < kColours.size(); ++s) {
    os << "<polyline fill=\"none\" stroke=\"" << kColours[s] << "\" points=\"";
    const auto c = fields.component(s);
    for (std::size_t i = 0; i < grid.n(); ++i) {
      if (i != 0) os << ' ';
      os << format_double(px(grid.x(i))) << ',' << format_double(py(c[i]));
    }
    os << "\"/>\n";
    os << "<text x=\"" << kWidth - kPad + 4 << "\" y=\"" << kPad + 14.0 * static_cast<double>(s + 1)
       << "\" font-size=\"12\" fill=\"" << kColours[s] << "\">" << kNames[s] << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace tmkt
