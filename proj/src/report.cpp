// summary.csv / summary.svg emission. The SVG is minimal hand-written markup:
// two line charts (correlations, absolute accuracies), one polyline per
// series with an id naming the series.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "emgalign/csv.hpp"
#include "emgalign/errors.hpp"
#include "emgalign/experiment.hpp"

namespace emgalign {

namespace {

constexpr const char* kSummaryHeader =
    "day,corr_aligned,corr_unaligned,corr_gain,acc_unaligned,acc_aligned,"
    "acc_reference,relative_accuracy,acc_pooled";

struct Series {
  std::string id;
  std::string color;
  std::vector<double> values;
};

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

/// One chart block: axes, y gridlines at 0.25 steps, x tick per day, legend.
std::string chart(const std::string& title, const std::vector<int>& days,
                  const std::vector<Series>& series, double y_min, double y_max,
                  double x0, double y0, double width, double height) {
  const double plot_w = width - 70.0, plot_h = height - 50.0;
  const double px0 = x0 + 50.0, py0 = y0 + 20.0;
  auto sx = [&](std::size_t i) {
    return days.size() == 1
               ? px0 + plot_w / 2.0
               : px0 + plot_w * static_cast<double>(i) / static_cast<double>(days.size() - 1);
  };
  auto sy = [&](double v) { return py0 + plot_h * (1.0 - (v - y_min) / (y_max - y_min)); };

  std::string s;
  s += "<text x=\"" + fmt2(px0) + "\" y=\"" + fmt2(y0 + 12.0) +
       "\" font-size=\"13\" font-family=\"sans-serif\">" + title + "</text>\n";
  for (double g = y_min; g <= y_max + 1e-9; g += 0.25) {
    s += "<line x1=\"" + fmt2(px0) + "\" y1=\"" + fmt2(sy(g)) + "\" x2=\"" +
         fmt2(px0 + plot_w) + "\" y2=\"" + fmt2(sy(g)) +
         "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    s += "<text x=\"" + fmt2(px0 - 8.0) + "\" y=\"" + fmt2(sy(g) + 4.0) +
         "\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"end\">" + fmt2(g) +
         "</text>\n";
  }
  for (std::size_t i = 0; i < days.size(); ++i) {
    s += "<text x=\"" + fmt2(sx(i)) + "\" y=\"" + fmt2(py0 + plot_h + 14.0) +
         "\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"middle\">" +
         std::to_string(days[i]) + "</text>\n";
  }
  s += "<line x1=\"" + fmt2(px0) + "\" y1=\"" + fmt2(py0) + "\" x2=\"" + fmt2(px0) +
       "\" y2=\"" + fmt2(py0 + plot_h) + "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  s += "<line x1=\"" + fmt2(px0) + "\" y1=\"" + fmt2(py0 + plot_h) + "\" x2=\"" +
       fmt2(px0 + plot_w) + "\" y2=\"" + fmt2(py0 + plot_h) +
       "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

  double legend_x = px0 + 10.0;
  for (const auto& ser : series) {
    s += "<polyline id=\"" + ser.id + "\" fill=\"none\" stroke=\"" + ser.color +
         "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < ser.values.size(); ++i) {
      if (i) s += ' ';
      s += fmt2(sx(i)) + "," + fmt2(sy(std::clamp(ser.values[i], y_min, y_max)));
    }
    s += "\"/>\n";
    s += "<rect x=\"" + fmt2(legend_x) + "\" y=\"" + fmt2(y0 + 18.0) +
         "\" width=\"10\" height=\"10\" fill=\"" + ser.color + "\"/>\n";
    s += "<text x=\"" + fmt2(legend_x + 14.0) + "\" y=\"" + fmt2(y0 + 27.0) +
         "\" font-size=\"10\" font-family=\"sans-serif\">" + ser.id + "</text>\n";
    legend_x += 14.0 + 7.0 * static_cast<double>(ser.id.size()) + 18.0;
  }
  return s;
}

}  // namespace

void emit_report(const std::vector<DayReport>& reports, const std::filesystem::path& out_dir) {
  if (reports.empty()) throw ParameterError("emit_report: no day reports");

  std::string text = std::string(kSummaryHeader) + "\n";
  for (const auto& r : reports) {
    text += std::to_string(r.day_id);
    for (double v : {r.corr_aligned, r.corr_unaligned, r.corr_gain, r.acc_unaligned,
                     r.acc_aligned, r.acc_reference, r.relative_accuracy, r.acc_pooled})
      text += ',' + csv::format(v);
    text += '\n';
  }
  csv::write_file(out_dir / "summary.csv", text);

  std::vector<int> days;
  Series corr_aligned{"corr_aligned", "#00a2c8", {}};
  Series corr_unaligned{"corr_unaligned", "#c836b4", {}};
  Series acc_aligned{"acc_aligned", "#1f4fc8", {}};
  Series acc_unaligned{"acc_unaligned", "#8c50b4", {}};
  Series acc_pooled{"acc_pooled", "#28a046", {}};
  double corr_min = 0.0;
  for (const auto& r : reports) {
    days.push_back(r.day_id);
    corr_aligned.values.push_back(r.corr_aligned);
    corr_unaligned.values.push_back(r.corr_unaligned);
    acc_aligned.values.push_back(r.acc_aligned);
    acc_unaligned.values.push_back(r.acc_unaligned);
    acc_pooled.values.push_back(r.acc_pooled);
    corr_min = std::min(corr_min, r.corr_unaligned);
  }
  const double corr_floor = corr_min < 0.0 ? -1.0 : 0.0;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"760\" height=\"520\" "
         "viewBox=\"0 0 760 520\">\n";
  svg += "<rect width=\"760\" height=\"520\" fill=\"#ffffff\"/>\n";
  svg += chart("Calibration correlation per day", days, {corr_aligned, corr_unaligned},
               corr_floor, 1.0, 0.0, 0.0, 760.0, 250.0);
  svg += chart("Classification accuracy per day", days,
               {acc_aligned, acc_unaligned, acc_pooled}, 0.0, 1.0, 0.0, 260.0, 760.0, 250.0);
  svg += "</svg>\n";
  csv::write_file(out_dir / "summary.svg", svg);
}

std::vector<DayReport> load_summary_csv(const std::filesystem::path& path) {
  const auto lines = csv::read_lines(path);
  if (lines.empty() || lines[0] != kSummaryHeader)
    throw IngestError(path.string() + ": missing or unexpected summary header");
  std::vector<DayReport> reports;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = csv::split(lines[i]);
    if (f.size() != 9)
      throw IngestError(path.string() + ": row " + std::to_string(i) + " has " +
                        std::to_string(f.size()) + " fields, expected 9");
    const std::string ctx = path.string() + " row " + std::to_string(i);
    DayReport r;
    r.day_id = static_cast<int>(csv::parse_long(f[0], ctx));
    r.corr_aligned = csv::parse_double(f[1], ctx);
    r.corr_unaligned = csv::parse_double(f[2], ctx);
    r.corr_gain = csv::parse_double(f[3], ctx);
    r.acc_unaligned = csv::parse_double(f[4], ctx);
    r.acc_aligned = csv::parse_double(f[5], ctx);
    r.acc_reference = csv::parse_double(f[6], ctx);
    r.relative_accuracy = csv::parse_double(f[7], ctx);
    r.acc_pooled = csv::parse_double(f[8], ctx);
    reports.push_back(r);
  }
  if (reports.empty()) throw IngestError(path.string() + ": no data rows");
  return reports;
}

}  // namespace emgalign
