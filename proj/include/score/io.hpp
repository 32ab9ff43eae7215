#pragma once

// File formats:
//   predictions CSV   header `true,pred,certainty`, 1-based integer classes
//   curves CSV        `acceptance_rate,metric,value`; value "undefined" when
//                     the metric's denominator is zero
//   table CSV         `threshold,acceptance_rate,accepted,true,pred,count`,
//                     one row per confusion cell per schedule threshold
//   stack JSON        {"columns":[{"acceptance_rate","cells":[{"true","pred","size"}],
//                     "baseline"}],"normalized","options"}; pred is "other"
//                     for condensed error cells
//   mixture JSON      {"classes":[[{"mean":[..],"stddev":[..],"count":n}, ..], ..]}
// CSV reals are printed with 9 significant digits, except the certainty column
// of exported predictions, which round-trips exactly.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "score/metrics.hpp"
#include "score/stack.hpp"
#include "score/synth.hpp"

namespace score::io {

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::string format_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] inline void fail(std::string_view source, std::size_t line, const std::string& what) {
  throw InputError(std::string(source) + ":" + std::to_string(line) + ": " + what);
}

}  // namespace detail

/// Parses a predictions CSV. The class count is the largest class id seen
/// (at least 2) unless `num_classes` overrides it.
inline PredictionSet parse_predictions_csv(std::string_view text, std::optional<int> num_classes = std::nullopt,
                                           std::string_view source = "<input>") {
  std::vector<LabeledPrediction> preds;
  std::size_t line_no = 0;
  bool header_seen = false;
  int max_class = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty()) continue;

    if (!header_seen) {
      const auto fields = detail::split(line, ',');
      if (fields.size() != 3 || fields[0] != "true" || fields[1] != "pred" || fields[2] != "certainty") {
        detail::fail(source, line_no, "expected header 'true,pred,certainty'");
      }
      header_seen = true;
      continue;
    }

    const auto fields = detail::split(line, ',');
    if (fields.size() != 3) detail::fail(source, line_no, "expected 3 fields, got " + std::to_string(fields.size()));

    const auto parse_class = [&](std::string_view f, const char* name) {
      int v = 0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        detail::fail(source, line_no, std::string(name) + " class '" + std::string(f) + "' is not an integer");
      }
      if (v < 1) detail::fail(source, line_no, std::string(name) + " class must be >= 1");
      return v;
    };
    const int t = parse_class(fields[0], "true");
    const int p = parse_class(fields[1], "pred");

    double r = 0.0;
    const auto f = fields[2];
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), r);
    if (ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(r)) {
      detail::fail(source, line_no, "certainty '" + std::string(f) + "' is not a real number");
    }
    if (r < 0.0) detail::fail(source, line_no, "certainty must be >= 0");

    max_class = std::max({max_class, t, p});
    preds.push_back({ClassId(t), ClassId(p), r});
  }

  if (!header_seen) detail::fail(source, line_no == 0 ? 1 : line_no, "empty file");
  if (preds.empty()) detail::fail(source, line_no, "no predictions after header");

  int classes = std::max(2, max_class);
  if (num_classes) {
    if (*num_classes < max_class) {
      throw InputError(std::string(source) + ": class count " + std::to_string(*num_classes) +
                       " is smaller than the largest class id " + std::to_string(max_class));
    }
    classes = *num_classes;
  }
  return PredictionSet(std::move(preds), classes);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline PredictionSet ingest_csv(const std::filesystem::path& path, std::optional<int> num_classes = std::nullopt) {
  return parse_predictions_csv(read_file(path), num_classes, path.string());
}

inline std::string predictions_csv(const PredictionSet& preds) {
  std::string out = "true,pred,certainty\n";
  for (const auto& p : preds) {
    out += std::to_string(p.true_class.value()) + ',' + std::to_string(p.predicted_class.value()) + ',' +
           format_exact(p.certainty) + '\n';
  }
  return out;
}

inline std::string curves_csv(const std::vector<RejectCurve>& curves) {
  std::string out = "acceptance_rate,metric,value\n";
  for (const auto& curve : curves) {
    const auto name = curve.metric.name();
    for (const auto& p : curve.points) {
      out += format_real(p.acceptance_rate) + ',' + name + ',' + (p.value ? format_real(*p.value) : "undefined") +
             '\n';
    }
  }
  return out;
}

inline std::string table_csv(const ConfusionSweep& sweep) {
  std::string out = "threshold,acceptance_rate,accepted,true,pred,count\n";
  for (std::size_t i = 0; i < sweep.matrices.size(); ++i) {
    const auto& cm = sweep.matrices[i];
    const auto prefix = format_real(sweep.schedule.thresholds[i]) + ',' +
                        format_real(sweep.schedule.acceptance_rate(i)) + ',' +
                        std::to_string(sweep.schedule.accepted_counts[i]) + ',';
    for (int t = 1; t <= cm.num_classes(); ++t) {
      for (int p = 1; p <= cm.num_classes(); ++p) {
        out += prefix + std::to_string(t) + ',' + std::to_string(p) + ',' +
               std::to_string(cm.at(ClassId(t), ClassId(p))) + '\n';
      }
    }
  }
  return out;
}

inline nlohmann::json stack_json(const ConfusionStack& stack, std::string_view type = "stack") {
  using nlohmann::json;
  json columns = json::array();
  for (const auto& col : stack.columns) {
    json cells = json::array();
    for (std::size_t k = 0; k < stack.cells.size(); ++k) {
      const auto& cell = stack.cells[k];
      json pred = cell.is_other() ? json("other") : json(cell.predicted_class->value());
      cells.push_back({{"true", cell.true_class.value()}, {"pred", pred}, {"size", col.sizes[k]}});
    }
    columns.push_back({{"acceptance_rate", col.acceptance_rate}, {"cells", cells}, {"baseline", col.baseline}});
  }
  return {
      {"columns", columns},
      {"normalized", stack.normalized()},
      {"options",
       {{"type", std::string(type)},
        {"order", to_string(stack.options.order)},
        {"normalize", stack.options.normalize},
        {"align", to_string(stack.options.align)},
        {"condense", stack.options.condense}}},
  };
}

inline GaussianMixtureSpec parse_mixture_json(std::string_view text, std::string_view source = "<mixture>") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string(source) + ": " + e.what());
  }
  GaussianMixtureSpec spec;
  try {
    for (const auto& cls : doc.at("classes")) {
      std::vector<GaussianComponent> comps;
      for (const auto& c : cls) {
        comps.push_back({c.at("mean").get<std::vector<double>>(), c.at("stddev").get<std::vector<double>>(),
                         c.at("count").get<int>()});
      }
      spec.classes.push_back(std::move(comps));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string(source) + ": " + e.what());
  }
  if (!spec.classes.empty() && !spec.classes.front().empty()) {
    spec.dimensionality = spec.classes.front().front().mean.size();
  }
  try {
    spec.validate();
  } catch (const InputError& e) {
    throw InputError(std::string(source) + ": " + e.what());
  }
  return spec;
}

inline nlohmann::json mixture_json(const GaussianMixtureSpec& spec) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& cls : spec.classes) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : cls) comps.push_back({{"mean", c.mean}, {"stddev", c.stddev}, {"count", c.count}});
    classes.push_back(comps);
  }
  return {{"classes", classes}};
}

/// Writes `contents` to a sibling temporary file and renames it over `path`,
/// so readers never observe a partial file.
inline void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw InputError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot move output into place at " + path.string());
  }
}

}  // namespace score::io
