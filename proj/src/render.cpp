/*
 * Copyright (c) 2026 the geqlab authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "geqlab/render.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

namespace geqlab {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
constexpr size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(const GenEq& eq, const RenderOptions& opt) {
  const long margin = 50;
  const long base_y = 60;  // reserved headroom above the deepest arc
  long span = std::max<long>(eq.rho, 1) * opt.item_width;

  // stack the bases into nesting levels (1 = innermost)
  std::vector<long> level(eq.bases.size(), 1);
  for (size_t i = 0; i < eq.bases.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      const BaseRec& a = eq.bases[i];
      const BaseRec& b = eq.bases[j];
      bool overlap = a.lo() < b.hi() && b.lo() < a.hi();
      if (overlap && level[j] >= level[i]) level[i] = level[j] + 1;
    }
  }
  long max_level = 1;
  for (long l : level) max_level = std::max(max_level, l);

  long axis_y = base_y + max_level * opt.arc_step + 20;
  long height = axis_y + 90;
  long width = margin * 2 + span;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
     << height << "\">\n";
  os << "<rect width=\"" << width << "\" height=\"" << height
     << "\" fill=\"white\"/>\n";

  auto bx = [&](long boundary) {
    return margin + (boundary - 1) * opt.item_width;
  };

  // section shading along the axis
  if (opt.show_sections) {
    for (const Section& s : eq.sections) {
      if (s.hi <= s.lo) continue;
      os << "<rect x=\"" << bx(s.lo) << "\" y=\"" << axis_y - 6 << "\" width=\""
         << (s.hi - s.lo) * opt.item_width << "\" height=\"12\" fill=\""
         << (s.active ? "#fff3b0" : "#e8e8e8") << "\"/>\n";
      os << "<text x=\"" << (bx(s.lo) + bx(s.hi)) / 2 << "\" y=\""
         << axis_y + 38
         << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#666\">["
         << s.lo << "," << s.hi << (s.active ? ")*" : ")") << "</text>\n";
    }
  }

  // the interval axis with boundary ticks and item labels
  os << "<line x1=\"" << bx(1) << "\" y1=\"" << axis_y << "\" x2=\""
     << bx(eq.rho + 1) << "\" y2=\"" << axis_y
     << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  for (long b = 1; b <= eq.rho + 1; ++b) {
    os << "<line x1=\"" << bx(b) << "\" y1=\"" << axis_y - 7 << "\" x2=\""
       << bx(b) << "\" y2=\"" << axis_y + 7
       << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    os << "<text x=\"" << bx(b) << "\" y=\"" << axis_y + 22
       << "\" font-size=\"11\" text-anchor=\"middle\">" << b << "</text>\n";
  }
  for (long i = 1; i <= eq.rho; ++i) {
    os << "<text x=\"" << bx(i) + opt.item_width / 2 << "\" y=\""
       << axis_y - 12 << "\" font-size=\"12\" font-style=\"italic\" "
       << "text-anchor=\"middle\">h" << i << "</text>\n";
  }

  // bases as arcs; duals share the pair color
  std::map<std::string, size_t> pair_color;
  for (const BaseRec& b : eq.bases) {
    std::string key = std::min(b.id, b.dual);
    if (!pair_color.count(key)) {
      size_t fresh = pair_color.size() % kPaletteSize;
      pair_color[key] = fresh;
    }
  }
  for (size_t i = 0; i < eq.bases.size(); ++i) {
    const BaseRec& b = eq.bases[i];
    const char* color = kPalette[pair_color.at(std::min(b.id, b.dual))];
    long x1 = bx(b.lo()), x2 = bx(b.hi());
    long top = axis_y - 20 - level[i] * opt.arc_step;
    long mid = (x1 + x2) / 2;
    os << "<path d=\"M " << x1 << " " << axis_y - 8 << " C " << x1 << " "
       << top << ", " << x2 << " " << top << ", " << x2 << " " << axis_y - 8
       << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\"";
    if (b.eps < 0) os << " stroke-dasharray=\"6,3\"";
    os << "/>\n";
    // orientation marker: a small triangle at the alpha end
    long ax = bx(b.alpha);
    int dir = b.alpha <= b.beta ? 1 : -1;
    os << "<path d=\"M " << ax << " " << axis_y - 8 << " l " << dir * 7
       << " -5 l 0 10 z\" fill=\"" << color << "\"/>\n";
    os << "<text x=\"" << mid << "\" y=\""
       << top + (axis_y - 8 - top) / 4 + 4
       << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"" << color
       << "\">" << esc(b.id) << (b.eps < 0 ? "&#8315;" : "") << "</text>\n";
  }

  // boundary connections below the axis
  if (opt.show_connections) {
    long cy = axis_y + 50;
    std::map<std::string, bool> done;
    for (const Connection& c : eq.connections) {
      const BaseRec* l = eq.base(c.lambda);
      if (l == nullptr) continue;
      std::string key = std::min(c.lambda, l->dual) + ":" +
                        std::to_string(std::min(c.p, c.q)) + ":" +
                        std::to_string(std::max(c.p, c.q));
      if (done[key]) continue;
      done[key] = true;
      long x1 = bx(c.p), x2 = bx(c.q);
      os << "<line x1=\"" << x1 << "\" y1=\"" << axis_y + 8 << "\" x2=\"" << x1
         << "\" y2=\"" << cy << "\" stroke=\"#999\" stroke-width=\"1\" "
         << "stroke-dasharray=\"3,3\"/>\n";
      os << "<line x1=\"" << x2 << "\" y1=\"" << axis_y + 8 << "\" x2=\"" << x2
         << "\" y2=\"" << cy << "\" stroke=\"#999\" stroke-width=\"1\" "
         << "stroke-dasharray=\"3,3\"/>\n";
      os << "<path d=\"M " << x1 << " " << cy << " C " << x1 << " " << cy + 18
         << ", " << x2 << " " << cy + 18 << ", " << x2 << " " << cy
         << "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1\"/>\n";
      os << "<text x=\"" << (x1 + x2) / 2 << "\" y=\"" << cy + 24
         << "\" font-size=\"10\" text-anchor=\"middle\" fill=\"#777\">"
         << esc(c.lambda) << "</text>\n";
      cy += 4;
    }
  }

  os << "</svg>\n";
  return os.str();
}

}  // namespace geqlab
