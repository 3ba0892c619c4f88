// Copyright 2026 The walkbirch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "walkbirch/svg.hpp"

#include <algorithm>
#include <cmath>

#include "walkbirch/format.hpp"

namespace walkbirch {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 480;
constexpr double kMargin = 48;

constexpr const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};
constexpr int kPaletteSize = 10;

const char* color_for(int label) {
  if (label < 0) return "#999999";
  return kPalette[label % kPaletteSize];
}

struct Scale {
  double lo = 0, hi = 1;

  double map(double v, double out_lo, double out_hi) const {
    double t = hi == lo ? 0.5 : (v - lo) / (hi - lo);
    return out_lo + t * (out_hi - out_lo);
  }
};

Scale fit(double lo, double hi) {
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  double pad = 0.05 * (hi - lo);
  return Scale{lo - pad, hi + pad};
}

std::string header(std::string_view title) {
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
         "height=\"480\" viewBox=\"0 0 640 480\">\n";
  out += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"14\">";
  out += title;
  out += "</text>\n";
  return out;
}

void axes(std::string& out, const Scale& x, const Scale& y) {
  auto fx = [](double v) { return format_fixed(v, 2); };
  out += "<rect x=\"" + fx(kMargin) + "\" y=\"" + fx(kMargin) + "\" width=\"" +
         fx(kWidth - 2 * kMargin) + "\" height=\"" + fx(kHeight - 2 * kMargin) +
         "\" fill=\"none\" stroke=\"#333333\"/>\n";
  out += "<text x=\"" + fx(kMargin) + "\" y=\"" + fx(kHeight - kMargin + 16) +
         "\" font-family=\"sans-serif\" font-size=\"10\">" +
         format_fixed(x.lo, 3) + "</text>\n";
  out += "<text x=\"" + fx(kWidth - kMargin) + "\" y=\"" +
         fx(kHeight - kMargin + 16) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"10\">" +
         format_fixed(x.hi, 3) + "</text>\n";
  out += "<text x=\"" + fx(kMargin - 4) + "\" y=\"" + fx(kHeight - kMargin) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"10\">" +
         format_fixed(y.lo, 3) + "</text>\n";
  out += "<text x=\"" + fx(kMargin - 4) + "\" y=\"" + fx(kMargin + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"10\">" +
         format_fixed(y.hi, 3) + "</text>\n";
}

}  // namespace

std::string scatter_svg(const Matrix& points, std::span<const int> labels,
                        std::string_view title) {
  if (points.cols() < 1) fail(Errc::TooFewFeatures, "scatter needs a column");
  const Index n = points.rows();
  const bool two_d = points.cols() >= 2;

  Scale x = fit(points.col(0).minCoeff(), points.col(0).maxCoeff());
  Scale y = two_d ? fit(points.col(1).minCoeff(), points.col(1).maxCoeff())
                  : Scale{-1, 1};

  std::string out = header(title);
  axes(out, x, y);
  for (Index i = 0; i < n; ++i) {
    double px = x.map(points(i, 0), kMargin, kWidth - kMargin);
    double py = y.map(two_d ? points(i, 1) : 0.0, kHeight - kMargin, kMargin);
    int label = i < static_cast<Index>(labels.size())
                    ? labels[static_cast<std::size_t>(i)]
                    : 0;
    out += "<circle cx=\"" + format_fixed(px, 2) + "\" cy=\"" +
           format_fixed(py, 2) + "\" r=\"3\" fill=\"" + color_for(label) +
           "\" fill-opacity=\"0.7\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string line_svg(std::string_view title,
                     std::span<const std::string> x_labels,
                     std::span<const Series> series) {
  double lo = 0, hi = 1;
  bool any = false;
  for (const Series& s : series)
    for (double v : s.values) {
      if (!any) {
        lo = hi = v;
        any = true;
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  Scale y = fit(lo, hi);
  const std::size_t n = x_labels.size();

  std::string out = header(title);
  axes(out, Scale{0, static_cast<double>(n > 1 ? n - 1 : 1)}, y);

  auto x_at = [&](std::size_t i) {
    double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.5;
    return kMargin + t * (kWidth - 2 * kMargin);
  };

  for (std::size_t s = 0; s < series.size(); ++s) {
    const Series& line = series[s];
    out += "<polyline fill=\"none\" stroke=\"";
    out += kPalette[s % kPaletteSize];
    out += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < line.values.size() && i < n; ++i) {
      if (i > 0) out += ' ';
      out += format_fixed(x_at(i), 2) + "," +
             format_fixed(y.map(line.values[i], kHeight - kMargin, kMargin), 2);
    }
    out += "\"/>\n";
    // Legend swatch and label.
    double ly = kMargin + 14 + 14 * static_cast<double>(s);
    out += "<rect x=\"" + format_fixed(kWidth - kMargin - 110, 2) + "\" y=\"" +
           format_fixed(ly - 8, 2) + "\" width=\"10\" height=\"10\" fill=\"" +
           kPalette[s % kPaletteSize] + "\"/>\n";
    out += "<text x=\"" + format_fixed(kWidth - kMargin - 96, 2) + "\" y=\"" +
           format_fixed(ly, 2) +
           "\" font-family=\"sans-serif\" font-size=\"10\">" + line.name +
           "</text>\n";
  }

  // Sparse x tick labels: first, middle, last.
  if (n > 0) {
    for (std::size_t i : {std::size_t{0}, n / 2, n - 1}) {
      out += "<text x=\"" + format_fixed(x_at(i), 2) + "\" y=\"" +
             format_fixed(kHeight - kMargin + 28, 2) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"9\">" +
             x_labels[i] + "</text>\n";
      if (n == 1) break;
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace walkbirch
