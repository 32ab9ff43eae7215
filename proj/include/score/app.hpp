#pragma once

// Command implementations behind the `score` CLI. Every command renders all
// of its outputs in memory first and only then writes them, each file via an
// atomic rename.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "score/io.hpp"
#include "score/metrics.hpp"
#include "score/stack.hpp"
#include "score/svg.hpp"
#include "score/synth.hpp"

namespace score::app {

struct CsvInput {
  std::filesystem::path path;
  std::optional<int> num_classes;
};

/// Synthetic data from a mixture; an empty path selects the built-in
/// reference mixture.
struct SyntheticInput {
  std::filesystem::path mixture;
  std::uint64_t seed = 0;
};

using InputSource = std::variant<CsvInput, SyntheticInput>;

enum class Command { Curves, Stack, Pie, Table, PaperFigures };

/// Requested reject curves. No kinds: ARC plus PRC/RRC for every class.
/// Precision/recall curves are drawn for `classes`, or every class if empty.
struct MetricSelection {
  std::vector<MetricKind> kinds;
  std::vector<int> classes;

  std::vector<MetricSpec> resolve(int num_classes) const {
    if (kinds.empty()) return default_curve_metrics(num_classes);
    std::vector<int> targets = classes;
    if (targets.empty()) {
      for (int c = 1; c <= num_classes; ++c) targets.push_back(c);
    }
    for (int c : targets) {
      if (c < 1 || c > num_classes) {
        throw InputError("class " + std::to_string(c) + " is outside 1.." + std::to_string(num_classes));
      }
    }
    std::vector<MetricSpec> out;
    for (auto kind : kinds) {
      if (kind == MetricKind::Accuracy) {
        out.push_back(MetricSpec::accuracy());
        continue;
      }
      for (int c : targets) {
        out.push_back(kind == MetricKind::Precision ? MetricSpec::precision(ClassId(c))
                                                    : MetricSpec::recall(ClassId(c)));
      }
    }
    return out;
  }
};

struct RunConfig {
  Command command = Command::Curves;
  InputSource input = SyntheticInput{};
  StackOptions stack;
  MetricSelection metrics;
  std::filesystem::path out;        // file stem, or directory for PaperFigures
  std::optional<int> width;
  std::optional<int> height;
  std::string title;
};

inline PredictionSet load_predictions(const InputSource& input) {
  if (const auto* csv = std::get_if<CsvInput>(&input)) return io::ingest_csv(csv->path, csv->num_classes);
  const auto& synth = std::get<SyntheticInput>(input);
  const auto spec = synth.mixture.empty() ? paper_spec()
                                          : io::parse_mixture_json(io::read_file(synth.mixture), synth.mixture.string());
  return synthetic_predictions(spec, synth.seed);
}

inline ChartStyle apply_overrides(ChartStyle style, const RunConfig& config) {
  if (config.width) style.width = *config.width;
  if (config.height) style.height = *config.height;
  if (!config.title.empty()) style.title = config.title;
  if (style.width <= 2 * style.margin + style.legend_width + 10 || style.height <= 2 * style.margin + 10) {
    throw InputError("canvas " + std::to_string(style.width) + "x" + std::to_string(style.height) +
                     " is too small");
  }
  return style;
}

/// `dir/name.svg` from a stem that may already carry an extension.
inline std::filesystem::path with_extension(std::filesystem::path stem, const char* ext) {
  if (stem.has_extension()) stem.replace_extension();
  stem += ext;
  return stem;
}

struct OutputFile {
  std::filesystem::path path;
  std::string contents;
};

inline void check_writable_parent(const std::filesystem::path& path) {
  const auto parent = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  if (!std::filesystem::is_directory(parent)) throw InputError("output directory " + parent.string() + " does not exist");
}

inline void write_all(const std::vector<OutputFile>& files) {
  for (const auto& f : files) check_writable_parent(f.path);
  for (const auto& f : files) io::write_atomic(f.path, f.contents);
}

struct Figure {
  std::string file_name;
  std::string contents;
};

/// The six reference figures from one synthetic run: reject curves, the
/// natural stack, and the ordered / aligned / normalized / pie variants.
inline std::vector<Figure> paper_figures(const PredictionSet& preds) {
  const auto sweep = confusion_sweep(preds);

  std::vector<RejectCurve> curves;
  for (const auto& m : default_curve_metrics(preds.num_classes())) curves.push_back(reject_curve(sweep, m));

  auto titled = [](ChartStyle s, std::string title) {
    s.title = std::move(title);
    return s;
  };
  const auto stack_svg = [&](const StackOptions& o, std::string title) {
    return render_stack(build_stack(sweep, o), titled(ChartStyle::stack(), std::move(title))).text;
  };

  std::vector<Figure> out;
  out.push_back({"fig1a_reject_curves.svg",
                 render_curves(curves, titled(ChartStyle::curves(), "ARC, PRC and RRC")).text});
  out.push_back({"fig1b_stack.svg", stack_svg({}, "type=STACK order=NATURAL normalize=FALSE align=BOTTOM")});
  out.push_back({"fig2a_stack_ordered.svg",
                 stack_svg({CellOrder::CorrectLast, false, Align::Bottom, false},
                           "type=STACK order=CORRECT_LAST normalize=FALSE align=BOTTOM")});
  out.push_back({"fig2b_stack_ordered_aligned.svg",
                 stack_svg({CellOrder::CorrectLast, false, Align::CorrectStart, false},
                           "type=STACK order=CORRECT_LAST normalize=FALSE align=CORRECT_START")});
  out.push_back({"fig2c_stack_ordered_aligned_normalized.svg",
                 stack_svg({CellOrder::CorrectLast, true, Align::CorrectStart, false},
                           "type=STACK order=CORRECT_LAST normalize=TRUE align=CORRECT_START")});
  const auto pie = build_stack(sweep, {CellOrder::CorrectLast, true, Align::CorrectCenter, false});
  out.push_back({"fig2d_pie.svg",
                 render_pie(pie, titled(ChartStyle::pie(), "type=PIE order=CORRECT_LAST normalize=TRUE "
                                                           "align=CORRECT_CENTER"))
                     .text});
  return out;
}

/// Executes `config`; returns the paths written.
inline std::vector<std::filesystem::path> run(const RunConfig& config) {
  if (config.out.empty()) throw InputError("no output path given");

  const auto preds = load_predictions(config.input);
  std::vector<OutputFile> files;

  switch (config.command) {
    case Command::Curves: {
      const auto sweep = confusion_sweep(preds);
      std::vector<RejectCurve> curves;
      for (const auto& m : config.metrics.resolve(preds.num_classes())) curves.push_back(reject_curve(sweep, m));
      files.push_back({with_extension(config.out, ".svg"),
                       render_curves(curves, apply_overrides(ChartStyle::curves(), config)).text});
      files.push_back({with_extension(config.out, ".csv"), io::curves_csv(curves)});
      break;
    }
    case Command::Stack:
    case Command::Pie: {
      const bool pie = config.command == Command::Pie;
      const auto stack = build_stack(preds, config.stack);
      const auto doc = pie ? render_pie(stack, apply_overrides(ChartStyle::pie(), config))
                           : render_stack(stack, apply_overrides(ChartStyle::stack(), config));
      files.push_back({with_extension(config.out, ".svg"), doc.text});
      files.push_back({with_extension(config.out, ".json"), io::stack_json(stack, pie ? "pie" : "stack").dump(2) + "\n"});
      break;
    }
    case Command::Table:
      files.push_back({with_extension(config.out, ".csv"), io::table_csv(confusion_sweep(preds))});
      break;
    case Command::PaperFigures: {
      std::filesystem::create_directories(config.out);
      for (auto& fig : paper_figures(preds)) files.push_back({config.out / fig.file_name, std::move(fig.contents)});
      break;
    }
  }

  write_all(files);
  std::vector<std::filesystem::path> written;
  for (const auto& f : files) written.push_back(f.path);
  return written;
}

}  // namespace score::app
