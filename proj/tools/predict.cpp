// predict - exact-arithmetic sequence prediction and randomness analysis.
//
// Exit codes: 0 success, 2 usage or precondition violation, 3 parse
// error, 4 enumeration budget exceeded.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <string>

#include "pred/cli.hpp"
#include "pred/errors.hpp"

namespace {

struct Options {
    std::string stream_path;
    std::string predictor;
    std::string process_path;
    std::string growth = "linear 1";
    std::string target;
    std::string out_path;
    std::vector<std::string> window;
    std::size_t depth = 3;
    pred::Stage stages = 8;
    std::uint64_t budget = 4096;
    std::size_t length = 16;
    bool json = false;
};

void print(const pred::cli::Report& report, bool json) {
    std::fputs((json ? report.json() : report.text()).c_str(), stdout);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact probabilistic sequence prediction and randomness analysis"};
    app.require_subcommand(1);
    Options opt;

    auto* analyze = app.add_subcommand("analyze", "per-prefix redundancy profile");
    analyze->add_option("--stream", opt.stream_path, "bit stream file")->required();
    analyze->add_option("--predictor", opt.predictor, "predictor spec")->required();
    analyze->add_option("--growth", opt.growth, "growth function spec");
    analyze->add_option("--stages", opt.stages, "evaluation stage");
    analyze->add_flag("--json", opt.json, "emit JSON");

    auto* calibrate = app.add_subcommand("calibrate", "confirmed-prediction frequencies");
    calibrate->add_option("--stream", opt.stream_path, "bit stream file")->required();
    calibrate->add_option("--predictor", opt.predictor, "predictor spec")->required();
    calibrate->add_option("--window", opt.window, "window bounds r s")
        ->expected(2)
        ->required();
    calibrate->add_flag("--json", opt.json, "emit JSON");

    auto* convert = app.add_subcommand("convert", "between predictors, processes, "
                                                  "distributions and martingales");
    convert->add_option("--predictor", opt.predictor, "source predictor spec");
    convert->add_option("--process", opt.process_path, "source process table file");
    convert->add_option("--target", opt.target,
                        "process|distribution|martingale|digit_aligned")
        ->required();
    convert->add_option("--depth", opt.depth, "construction depth");
    convert->add_option("--stages", opt.stages, "construction stages");
    convert->add_option("--budget", opt.budget, "enumeration budget");
    convert->add_option("--out", opt.out_path, "write the converted object here");
    convert->add_flag("--json", opt.json, "emit JSON");

    auto* adversary = app.add_subcommand("adversary", "bounded-redundancy sequence "
                                                      "against a positive predictor");
    adversary->add_option("--predictor", opt.predictor, "predictor spec")->required();
    adversary->add_option("--length", opt.length, "digits to construct")->required();
    adversary->add_flag("--json", opt.json, "emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(analyze)) {
            auto bits = pred::cli::parse_stream_file(opt.stream_path);
            print(pred::cli::cmd_analyze(bits, opt.predictor, opt.growth, opt.stages),
                  opt.json);
        } else if (app.got_subcommand(calibrate)) {
            pred::Ratio r = pred::Ratio::from_string(opt.window[0]);
            pred::Ratio s = pred::Ratio::from_string(opt.window[1]);
            pred::cli::validate_window(r, s);  // reject before reading the stream
            auto bits = pred::cli::parse_stream_file(opt.stream_path);
            print(pred::cli::cmd_calibrate(bits, opt.predictor, r, s), opt.json);
        } else if (app.got_subcommand(convert)) {
            auto target = pred::cli::parse_convert_target(opt.target);
            print(pred::cli::cmd_convert(opt.predictor, opt.process_path, target,
                                         opt.depth, opt.stages, opt.budget, opt.out_path),
                  opt.json);
        } else if (app.got_subcommand(adversary)) {
            print(pred::cli::cmd_adversary(opt.predictor, opt.length), opt.json);
        }
    } catch (const pred::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const pred::BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 4;
    } catch (const pred::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
