#include "hubmix/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hubmix {

namespace {

const char* method_name(SolveMethod m) {
  return m == SolveMethod::structured ? "structured" : "dense";
}

SolveMethod method_from_name(const std::string& s) {
  if (s == "structured") return SolveMethod::structured;
  if (s == "dense") return SolveMethod::dense;
  throw std::invalid_argument("unknown method name: " + s);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trials_csv(const std::vector<TrialRecord>& records) {
  std::string out = "seed,n,k,q,lambda,method,residual,wall_ms\n";
  char buf[256];
  for (const TrialRecord& r : records) {
    const double lam = r.ok ? r.lambda : std::nan("");
    std::snprintf(buf, sizeof(buf), "%llu,%lld,%lld,%s,%s,%s,%s,%s\n",
                  static_cast<unsigned long long>(r.seed),
                  static_cast<long long>(r.n), static_cast<long long>(r.k),
                  format_double(r.drift_q).c_str(), format_double(lam).c_str(),
                  method_name(r.method), format_double(r.residual).c_str(),
                  format_double(r.wall_ms).c_str());
    out += buf;
  }
  return out;
}

std::string sweep_csv(const SweepTable& table) {
  std::string out = "group,count,mean,std,median,p05,p95\n";
  char buf[320];
  for (const GroupStats& g : table.groups) {
    std::snprintf(buf, sizeof(buf), "%s,%lld,%s,%s,%s,%s,%s\n",
                  format_double(g.key).c_str(), static_cast<long long>(g.count),
                  format_double(g.mean).c_str(), format_double(g.stddev).c_str(),
                  format_double(g.median).c_str(), format_double(g.p05).c_str(),
                  format_double(g.p95).c_str());
    out += buf;
  }
  return out;
}

std::string eigenvalue_csv(const Spectrum& spectrum) {
  std::string out = "re,im,mult,method\n";
  char buf[256];
  const char* name =
      spectrum.method == SpectrumMethod::structured ? "structured" : "dense";
  for (const EigenvalueCluster& c : spectrum.eigenvalues) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%lld,%s\n",
                  format_double(c.value.real()).c_str(),
                  format_double(c.value.imag()).c_str(),
                  static_cast<long long>(c.multiplicity), name);
    out += buf;
  }
  return out;
}

std::vector<TrialRecord> parse_trials_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "seed,n,k,q,lambda,method,residual,wall_ms") {
    throw std::invalid_argument("parse_trials_csv: bad header");
  }
  std::vector<TrialRecord> out;
  i64 index = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 8) throw std::invalid_argument("parse_trials_csv: bad row");
    TrialRecord r;
    r.trial_index = index++;
    r.seed = std::stoull(f[0]);
    r.n = std::stoll(f[1]);
    r.k = std::stoll(f[2]);
    r.drift_q = std::stod(f[3]);
    r.lambda = std::stod(f[4]);
    r.method = method_from_name(f[5]);
    r.residual = std::stod(f[6]);
    r.wall_ms = std::stod(f[7]);
    r.ok = !std::isnan(r.lambda);
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG rendering. Deterministic text output; fixed 6-decimal coordinates.
// ---------------------------------------------------------------------------

namespace {

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Extent {
  double lo = 0.0, hi = 1.0;
  void grow(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

}  // namespace

std::string svg_histogram(const std::vector<TrialRecord>& records) {
  constexpr int kBinsX = 40, kBinsY = 60;
  constexpr double kW = 640.0, kH = 480.0, kMargin = 48.0;

  std::vector<const TrialRecord*> ok;
  for (const TrialRecord& r : records) {
    if (r.ok && r.lambda > 0.0) ok.push_back(&r);
  }
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(kW) +
         "\" height=\"" + fmt2(kH) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!ok.empty()) {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const TrialRecord* r : ok) {
      const double x = std::log(static_cast<double>(r->n));
      const double y = std::log(r->lambda);
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
    if (xhi <= xlo) xhi = xlo + 1.0;
    if (yhi <= ylo) yhi = ylo + 1.0;
    std::vector<i64> bins(kBinsX * kBinsY, 0);
    for (const TrialRecord* r : ok) {
      const double x = std::log(static_cast<double>(r->n));
      const double y = std::log(r->lambda);
      int bx = static_cast<int>((x - xlo) / (xhi - xlo) * kBinsX);
      int by = static_cast<int>((y - ylo) / (yhi - ylo) * kBinsY);
      bx = std::clamp(bx, 0, kBinsX - 1);
      by = std::clamp(by, 0, kBinsY - 1);
      ++bins[static_cast<std::size_t>(by * kBinsX + bx)];
    }
    const i64 peak = *std::max_element(bins.begin(), bins.end());
    const double cw = (kW - 2 * kMargin) / kBinsX;
    const double ch = (kH - 2 * kMargin) / kBinsY;
    for (int by = 0; by < kBinsY; ++by) {
      for (int bx = 0; bx < kBinsX; ++bx) {
        const i64 c = bins[static_cast<std::size_t>(by * kBinsX + bx)];
        if (c == 0) continue;
        const int level = 255 - static_cast<int>(
            std::lround(255.0 * static_cast<double>(c) / static_cast<double>(peak)));
        char color[16];
        std::snprintf(color, sizeof(color), "#%02x%02x%02x", level, level, level);
        const double px = kMargin + bx * cw;
        const double py = kH - kMargin - (by + 1) * ch;  // y grows upward
        out += "<rect x=\"" + fmt2(px) + "\" y=\"" + fmt2(py) + "\" width=\"" +
               fmt2(cw) + "\" height=\"" + fmt2(ch) + "\" fill=\"" + color + "\"/>\n";
      }
    }
    char label[160];
    std::snprintf(label, sizeof(label),
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\">ln n in [%.3f, %.3f], "
                  "ln lambda in [%.3f, %.3f]</text>\n",
                  kMargin, kH - 12.0, xlo, xhi, ylo, yhi);
    out += label;
  }
  out += "<rect x=\"" + fmt2(kMargin) + "\" y=\"" + fmt2(kMargin) + "\" width=\"" +
         fmt2(kW - 2 * kMargin) + "\" height=\"" + fmt2(kH - 2 * kMargin) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "</svg>\n";
  return out;
}

std::string svg_curve(const SweepTable& table) {
  constexpr double kW = 640.0, kH = 480.0, kMargin = 56.0;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(kW) +
         "\" height=\"" + fmt2(kH) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  std::vector<const GroupStats*> groups;
  for (const GroupStats& g : table.groups) {
    if (g.count > 0) groups.push_back(&g);
  }
  if (!groups.empty()) {
    Extent ex, ey;
    ex.lo = ex.hi = groups.front()->key;
    ey.lo = 0.0;
    ey.hi = 0.0;
    for (const GroupStats* g : groups) {
      ex.grow(g->key);
      ey.grow(g->mean + g->stddev);
      ey.grow(g->mean - g->stddev);
    }
    if (ex.hi <= ex.lo) ex.hi = ex.lo + 1.0;
    if (ey.hi <= ey.lo) ey.hi = ey.lo + 1.0;
    auto px = [&](double v) {
      return kMargin + (v - ex.lo) / (ex.hi - ex.lo) * (kW - 2 * kMargin);
    };
    auto py = [&](double v) {
      return kH - kMargin - (v - ey.lo) / (ey.hi - ey.lo) * (kH - 2 * kMargin);
    };
    auto polyline = [&](const char* style, auto value) {
      std::string pts;
      for (const GroupStats* g : groups) {
        pts += fmt2(px(g->key)) + "," + fmt2(py(value(g))) + " ";
      }
      return std::string("<polyline fill=\"none\" ") + style + " points=\"" + pts +
             "\"/>\n";
    };
    out += polyline("stroke=\"black\" stroke-width=\"1.5\"",
                    [](const GroupStats* g) { return g->mean; });
    out += polyline("stroke=\"black\" stroke-dasharray=\"6,4\"",
                    [](const GroupStats* g) { return g->mean + g->stddev; });
    out += polyline("stroke=\"black\" stroke-dasharray=\"6,4\"",
                    [](const GroupStats* g) { return g->mean - g->stddev; });
    char label[160];
    std::snprintf(label, sizeof(label),
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\">%s in [%.4g, %.4g], "
                  "lambda up to %.4g</text>\n",
                  kMargin, kH - 12.0, table.group_label.c_str(), ex.lo, ex.hi, ey.hi);
    out += label;
  }
  out += "<rect x=\"" + fmt2(kMargin) + "\" y=\"" + fmt2(kMargin) + "\" width=\"" +
         fmt2(kW - 2 * kMargin) + "\" height=\"" + fmt2(kH - 2 * kMargin) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "</svg>\n";
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hubmix
