#include "quadblockade/cli/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "quadblockade/errors.hpp"
#include "quadblockade/version.hpp"

namespace quadblockade::cli {

namespace {

constexpr ParameterId kParams[] = {ParameterId::delta_c,     ParameterId::omega_m, ParameterId::g0,
                                   ParameterId::omega_drive, ParameterId::gamma_c, ParameterId::gamma_m,
                                   ParameterId::n_th};

std::string number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json axis_json(const Axis& axis) {
  return Json{{"parameter", parameter_name(axis.parameter)}, {"values", axis.values}};
}

Json record_json(const SweepRecord& r) {
  Json j = Json::object();
  j["i1"] = r.i1;
  j["i2"] = r.i2;
  for (auto id : kParams) j["param." + std::string(parameter_name(id))] = parameter_value(r.params, id);
  j["g2_numeric"] = optional_json(r.g2_numeric);
  j["g2_analytic"] = optional_json(r.g2_analytic);
  j["p1"] = r.p1;
  j["p2"] = r.p2;
  j["mean_photons"] = r.mean_photons;
  j["n_phonon_used"] = r.n_phonon_used;
  j["truncation_steps"] = r.truncation_steps;
  j["status"] = status_name(r.status);
  j["message"] = r.message;
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

// ---- SVG helpers ----------------------------------------------------------

constexpr double kWidth = 720, kHeight = 440, kLeft = 70, kRight = 20, kTop = 30, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void svg_open(std::ostream& out, double height) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void axes(std::ostream& out, const Frame& f, const std::string& xlabel, const std::string& ylabel,
          const std::string& title, double y_offset) {
  out << "<g transform=\"translate(0," << y_offset << ")\">\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight << "\" height=\""
      << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double x = f.x0 + (f.x1 - f.x0) * k / 5.0;
    const double y = f.y0 + (f.y1 - f.y0) * k / 5.0;
    out << "<text x=\"" << f.px(x) << "\" y=\"" << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">"
        << number(std::round(x * 1000) / 1000) << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << f.py(y) + 4 << "\" text-anchor=\"end\">"
        << number(std::round(y * 1000) / 1000) << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  out << "<text transform=\"translate(16," << (kTop + kHeight - kBottom) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  out << "<text x=\"" << kLeft << "\" y=\"" << kTop - 10 << "\">" << title << "</text>\n";
  out << "</g>\n";
}

struct Series {
  std::string label;
  bool dashed = false;
  std::vector<std::pair<double, double>> points;  // (x, log10 g2)
};

// Heat colour for log10 g2 on [-3, 1]: blue below 1, red above.
std::string heat_colour(double lg) {
  const double t = std::clamp(lg, -3.0, 1.0);
  int r, g, b;
  if (t < 0.0) {
    const double s = -t / 3.0;
    r = static_cast<int>(255 * (1 - s));
    g = static_cast<int>(255 * (1 - 0.7 * s));
    b = 255;
  } else {
    const double s = t;
    r = 255;
    g = static_cast<int>(255 * (1 - s));
    b = static_cast<int>(255 * (1 - s));
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

double RunOutput::failure_fraction() const {
  std::size_t bad = 0, total = 0;
  for (const auto& s : sweeps) {
    bad += s.result.count(PointStatus::failed) + s.result.count(PointStatus::unconverged);
    total += s.result.records.size();
  }
  return total == 0 ? 0.0 : static_cast<double>(bad) / static_cast<double>(total);
}

const std::vector<std::string>& csv_header() {
  static const std::vector<std::string> header = [] {
    std::vector<std::string> h;
    for (auto id : kParams) h.push_back("param." + std::string(parameter_name(id)));
    for (const char* c : {"g2_numeric", "g2_analytic", "p1", "p2", "n_phonon_used", "status"}) h.emplace_back(c);
    return h;
  }();
  return header;
}

void write_csv(std::ostream& out, const RunOutput& run) {
  const auto& header = csv_header();
  for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
  out << '\n';
  for (const auto& sweep : run.sweeps) {
    for (const auto& r : sweep.result.records) {
      for (auto id : kParams) out << number(parameter_value(r.params, id)) << ',';
      out << optional_number(r.g2_numeric) << ',' << optional_number(r.g2_analytic) << ',' << number(r.p1) << ','
          << number(r.p2) << ',' << r.n_phonon_used << ',' << status_name(r.status) << '\n';
    }
  }
}

Json to_json(const RunOutput& run) {
  Json doc = Json::object();
  doc["csv_schema_version"] = kCsvSchemaVersion;
  doc["generator"] = std::string("quadblockade ") + kVersion;
  doc["command"] = run.command;
  doc["name"] = run.name;
  doc["config"] = run.config.values();
  Json sweeps = Json::array();
  for (const auto& s : run.sweeps) {
    Json j = Json::object();
    j["label"] = s.label;
    j["drive"] = s.result.spec.drive.label();
    j["threads"] = s.result.threads;
    j["axis1"] = axis_json(s.result.spec.axis1);
    j["axis2"] = s.result.spec.axis2 ? axis_json(*s.result.spec.axis2) : Json(nullptr);
    Json records = Json::array();
    for (const auto& r : s.result.records) records.push_back(record_json(r));
    j["records"] = std::move(records);
    sweeps.push_back(std::move(j));
  }
  doc["sweeps"] = std::move(sweeps);
  return doc;
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

std::string reemit_json(const std::string& text) { return dump_json(Json::parse(text)); }

void write_line_svg(std::ostream& out, const RunOutput& run) {
  std::vector<Series> series;
  std::string xlabel = "x";
  for (const auto& s : run.sweeps) {
    const auto& spec = s.result.spec;
    const bool grid = spec.axis2.has_value();
    const ParameterId xid = grid ? spec.axis2->parameter : spec.axis1.parameter;
    xlabel = std::string(parameter_name(xid)) + " / omega_m";
    const std::size_t groups = grid ? spec.axis1.values.size() : 1;
    for (std::size_t g = 0; g < groups; ++g) {
      std::string prefix = s.label;
      if (grid) {
        prefix += (prefix.empty() ? "" : " ") + std::string(parameter_name(spec.axis1.parameter)) + "=" +
                  number(spec.axis1.values[g]);
      }
      Series numeric{prefix + " numeric", false, {}};
      Series analytic{prefix + " analytic", true, {}};
      for (const auto& r : s.result.records) {
        if (grid && r.i1 != g) continue;
        const double x = parameter_value(r.params, xid);
        if (r.g2_numeric && *r.g2_numeric > 0) numeric.points.emplace_back(x, std::log10(*r.g2_numeric));
        if (r.g2_analytic && *r.g2_analytic > 0) analytic.points.emplace_back(x, std::log10(*r.g2_analytic));
      }
      if (!numeric.points.empty()) series.push_back(std::move(numeric));
      if (!analytic.points.empty()) series.push_back(std::move(analytic));
    }
  }

  Frame f{INFINITY, -INFINITY, INFINITY, -INFINITY};
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      f.x0 = std::min(f.x0, x);
      f.x1 = std::max(f.x1, x);
      f.y0 = std::min(f.y0, y);
      f.y1 = std::max(f.y1, y);
    }
  }
  if (series.empty()) f = {0, 1, -1, 1};
  if (f.x1 <= f.x0) f.x1 = f.x0 + 1;
  if (f.y1 <= f.y0) f.y1 = f.y0 + 1;
  const double pad = 0.05 * (f.y1 - f.y0);
  f.y0 -= pad;
  f.y1 += pad;

  const double legend = 18.0 * static_cast<double>(series.size());
  svg_open(out, kHeight + legend);
  axes(out, f, xlabel, "log10 g2(0)", run.name, 0);
  if (f.y0 < 0 && f.y1 > 0) {
    out << "<line x1=\"" << kLeft << "\" x2=\"" << kWidth - kRight << "\" y1=\"" << f.py(0) << "\" y2=\""
        << f.py(0) << "\" stroke=\"gray\" stroke-width=\"0.5\"/>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kPalette[(k / 2) % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\""
        << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
    for (const auto& [x, y] : s.points) out << f.px(x) << ',' << f.py(y) << ' ';
    out << "\"/>\n";
    const double ly = kHeight + 14 + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + 30 << "\" y1=\"" << ly - 4 << "\" y2=\"" << ly - 4
        << "\" stroke=\"" << colour << "\"" << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << "/>\n";
    out << "<text x=\"" << kLeft + 36 << "\" y=\"" << ly << "\">" << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

void write_heat_svg(std::ostream& out, const RunOutput& run) {
  svg_open(out, kHeight * static_cast<double>(std::max<std::size_t>(run.sweeps.size(), 1)));
  double offset = 0;
  for (const auto& s : run.sweeps) {
    const auto& spec = s.result.spec;
    if (!spec.axis2) throw ParameterError("heat map needs a two-dimensional sweep");
    const auto& xs = spec.axis1.values;
    const auto& ys = spec.axis2->values;
    const std::size_t nx = xs.size(), ny = ys.size();
    // Cell edges halfway between grid points.
    auto edges = [](const std::vector<double>& v) {
      std::vector<double> e(v.size() + 1);
      if (v.size() == 1) return std::vector<double>{v[0] - 0.5, v[0] + 0.5};
      e.front() = v.front() - (v[1] - v[0]) / 2;
      e.back() = v.back() + (v.back() - v[v.size() - 2]) / 2;
      for (std::size_t k = 1; k < v.size(); ++k) e[k] = (v[k - 1] + v[k]) / 2;
      return e;
    };
    const auto ex = edges(xs), ey = edges(ys);
    const Frame f{ex.front(), ex.back(), ey.front(), ey.back()};
    out << "<g transform=\"translate(0," << offset << ")\">\n";
    auto value = [&](std::size_t i, std::size_t j) -> std::optional<double> {
      const auto& r = s.result.records[i * ny + j];
      if (!r.g2_numeric || *r.g2_numeric <= 0) return std::nullopt;
      return std::log10(*r.g2_numeric);
    };
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j < ny; ++j) {
        const auto v = value(i, j);
        out << "<rect x=\"" << f.px(ex[i]) << "\" y=\"" << f.py(ey[j + 1]) << "\" width=\""
            << f.px(ex[i + 1]) - f.px(ex[i]) << "\" height=\"" << f.py(ey[j]) - f.py(ey[j + 1]) << "\" fill=\""
            << (v ? heat_colour(*v) : std::string("#bbbbbb")) << "\"/>\n";
      }
    }
    // g2 = 1 level: cell edges separating sub- from super-Poissonian neighbours.
    out << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" d=\"";
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j < ny; ++j) {
        const auto v = value(i, j);
        if (!v) continue;
        if (i + 1 < nx) {
          const auto w = value(i + 1, j);
          if (w && ((*v < 0) != (*w < 0))) {
            out << 'M' << f.px(ex[i + 1]) << ',' << f.py(ey[j]) << 'V' << f.py(ey[j + 1]) << ' ';
          }
        }
        if (j + 1 < ny) {
          const auto w = value(i, j + 1);
          if (w && ((*v < 0) != (*w < 0))) {
            out << 'M' << f.px(ex[i]) << ',' << f.py(ey[j + 1]) << 'H' << f.px(ex[i + 1]) << ' ';
          }
        }
      }
    }
    out << "\"/>\n</g>\n";
    axes(out, f, std::string(parameter_name(spec.axis1.parameter)) + " / omega_m",
         std::string(parameter_name(spec.axis2->parameter)) + " / omega_m",
         run.name + " " + s.label + "  colour: log10 g2(0) in [-3, 1], black: g2(0) = 1", offset);
    offset += kHeight;
  }
  out << "</svg>\n";
}

std::vector<std::filesystem::path> write_outputs(const RunOutput& run) {
  const auto dir = run.config.output_directory();
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot write " + path.string());
    written.push_back(path);
    return out;
  };
  {
    auto out = open(dir / "config.json");
    out << dump_json(run.config.values());
  }
  for (const auto& format : run.config.formats()) {
    auto out = open(dir / (run.name + "." + format));
    if (format == "csv") {
      write_csv(out, run);
    } else if (format == "json") {
      out << dump_json(to_json(run));
    } else if (run.plot == PlotKind::heat) {
      write_heat_svg(out, run);
    } else {
      write_line_svg(out, run);
    }
  }
  return written;
}

}  // namespace quadblockade::cli
