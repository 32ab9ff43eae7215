// score: reject-option evaluation plots from prediction CSVs or synthetic data.
//
// Exit codes: 0 success, 1 input error, 2 internal error.

#include <cstdint>
#include <exception>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "score/app.hpp"

namespace {

using score::Align;
using score::CellOrder;
using score::MetricKind;
using score::app::Command;
using score::app::RunConfig;

struct InputFlags {
  std::string csv;
  int num_classes = 0;
  bool paper = false;
  std::string mixture;
  std::uint64_t seed = 0;
};

void add_input_flags(CLI::App* cmd, InputFlags& in) {
  auto* csv = cmd->add_option("--csv", in.csv, "Predictions CSV with header true,pred,certainty");
  auto* paper = cmd->add_flag("--paper", in.paper, "Sample the built-in two-class Gaussian mixture");
  auto* mixture = cmd->add_option("--mixture", in.mixture, "Sample a Gaussian mixture JSON document");
  csv->excludes(paper)->excludes(mixture);
  paper->excludes(mixture);
  cmd->add_option("--num-classes", in.num_classes, "Class count override for CSV input")->needs(csv)->check(
      CLI::Range(2, 1 << 20));
  cmd->add_option("--seed", in.seed, "Sampling seed for synthetic input");
}

void add_output_flags(CLI::App* cmd, RunConfig& config, int& width, int& height) {
  cmd->add_option("--out,-o", config.out, "Output file stem")->required();
  cmd->add_option("--width", width, "Canvas width in pixels");
  cmd->add_option("--height", height, "Canvas height in pixels");
  cmd->add_option("--title", config.title, "Chart title");
}

void add_stack_flags(CLI::App* cmd, RunConfig& config, std::string& type) {
  const std::map<std::string, CellOrder> orders{{"natural", CellOrder::Natural},
                                                {"correct_last", CellOrder::CorrectLast}};
  const std::map<std::string, Align> aligns{{"bottom", Align::Bottom},
                                            {"correct_start", Align::CorrectStart},
                                            {"correct_center", Align::CorrectCenter}};
  cmd->add_option("--type", type, "stack or pie")->check(CLI::IsMember({"stack", "pie"}));
  cmd->add_option("--order", config.stack.order, "natural or correct_last")
      ->transform(CLI::CheckedTransformer(orders, CLI::ignore_case).description("{natural,correct_last}"));
  cmd->add_flag("--normalize,!--no-normalize", config.stack.normalize, "Divide counts by the accepted count");
  cmd->add_option("--align", config.stack.align, "bottom, correct_start or correct_center")
      ->transform(CLI::CheckedTransformer(aligns, CLI::ignore_case).description("{bottom,correct_start,correct_center}"));
  cmd->add_flag("--condense", config.stack.condense, "Merge the errors of each true class into one cell");
}

score::app::InputSource make_input(const InputFlags& in) {
  if (!in.csv.empty()) {
    score::app::CsvInput csv{in.csv, std::nullopt};
    if (in.num_classes > 0) csv.num_classes = in.num_classes;
    return csv;
  }
  if (!in.paper && in.mixture.empty()) {
    throw score::InputError("choose an input: --csv, --paper or --mixture");
  }
  return score::app::SyntheticInput{in.mixture, in.seed};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reject-option evaluation: reject curves and stacked confusion plots"};
  app.require_subcommand(1);

  RunConfig config;
  InputFlags input;
  int width = 0;
  int height = 0;
  std::string type = "stack";

  auto* curves = app.add_subcommand("curves", "Accuracy/precision/recall reject curves (SVG + CSV)");
  add_input_flags(curves, input);
  add_output_flags(curves, config, width, height);
  std::vector<std::string> metric_names;
  curves->add_option("--metric", metric_names, "accuracy, precision or recall (repeatable)")
      ->check(CLI::IsMember({"accuracy", "precision", "recall"}));
  curves->add_option("--class", config.metrics.classes, "Target class for precision/recall (repeatable)");

  auto* stack = app.add_subcommand("stack", "Stacked confusion plot (SVG + JSON)");
  add_input_flags(stack, input);
  add_output_flags(stack, config, width, height);
  add_stack_flags(stack, config, type);

  auto* pie = app.add_subcommand("pie", "Radial stacked confusion plot (SVG + JSON)");
  add_input_flags(pie, input);
  add_output_flags(pie, config, width, height);
  bool pie_condense = false;
  pie->add_flag("--condense", pie_condense, "Merge the errors of each true class into one cell");

  auto* table = app.add_subcommand("table", "Per-threshold confusion matrices (CSV)");
  add_input_flags(table, input);
  table->add_option("--out,-o", config.out, "Output file stem")->required();

  auto* figures = app.add_subcommand("paper-figures", "Regenerate the six reference figures from the built-in mixture");
  figures->add_option("--seed", input.seed, "Sampling seed");
  figures->add_option("--out,-o", config.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (curves->parsed()) {
      config.command = Command::Curves;
      for (const auto& m : metric_names) {
        config.metrics.kinds.push_back(m == "accuracy"    ? MetricKind::Accuracy
                                       : m == "precision" ? MetricKind::Precision
                                                          : MetricKind::Recall);
      }
      config.input = make_input(input);
    } else if (stack->parsed()) {
      config.command = type == "pie" ? Command::Pie : Command::Stack;
      config.input = make_input(input);
    } else if (pie->parsed()) {
      config.command = Command::Pie;
      config.stack = {CellOrder::CorrectLast, true, Align::CorrectCenter, pie_condense};
      config.input = make_input(input);
    } else if (table->parsed()) {
      config.command = Command::Table;
      config.input = make_input(input);
    } else {
      config.command = Command::PaperFigures;
      config.input = score::app::SyntheticInput{{}, input.seed};
    }
    if (width > 0) config.width = width;
    if (height > 0) config.height = height;

    for (const auto& path : score::app::run(config)) std::cout << path.string() << '\n';
    return 0;
  } catch (const score::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}
