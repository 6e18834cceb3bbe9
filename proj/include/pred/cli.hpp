#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pred/bitstr.hpp"
#include "pred/predictor.hpp"
#include "pred/process.hpp"
#include "pred/randomness.hpp"

namespace pred::cli {

// Line-oriented command report. Identical inputs produce byte-identical
// renderings; exact rationals are never rendered as floats.
struct Report {
    std::vector<std::pair<std::string, std::string>> fields;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> payload;  // converted object, when not written to a file

    void field(std::string key, std::string value) {
        fields.emplace_back(std::move(key), std::move(value));
    }
    std::string text() const;
    std::string json() const;
};

// ---- input formats ----

// ASCII '0'/'1' with whitespace ignored; anything else is a ParseError
// with line and column.
std::vector<Bit> parse_stream_text(const std::string& text, const std::string& origin);
std::vector<Bit> parse_stream_file(const std::string& path);

// Mini-language:
//   uniform | bernoulli R | dirac BITS | table PATH
//   | mixture [(W, SPEC), (W, SPEC), ...]
StagedPredictor parse_predictor_spec(const std::string& spec);

// linear R | sqrt | log2 | table v1,v2,...
GrowthFunction parse_growth_spec(const std::string& spec);

// Lines `BITS VALUE`, "." for the empty string, '#' comments, optional
// leading `@rule zero_outside|closed_under_prefix` directive.
StagedPredictor parse_table_file(const std::string& path);

// Lines `input<TAB>output`, "." for the empty string, '#' comments,
// duplicate inputs rejected.
MonotoneProcess parse_process_text(const std::string& text, const std::string& origin);
MonotoneProcess parse_process_file(const std::string& path);
std::vector<std::string> render_process_lines(const MonotoneProcess& f);

// Throws PreconditionError unless 1/2 < r <= s < 1; run before reading
// any stream.
void validate_window(const Ratio& r, const Ratio& s);

// ---- commands ----

Report cmd_analyze(const std::vector<Bit>& stream, const std::string& predictor_spec,
                   const std::string& growth_spec, Stage stages);

Report cmd_calibrate(const std::vector<Bit>& stream, const std::string& predictor_spec,
                     const Ratio& r, const Ratio& s);

enum class ConvertTarget { Process, Distribution, Martingale, DigitAligned };

ConvertTarget parse_convert_target(const std::string& name);

// Exactly one of predictor_spec / process_path is nonempty. When
// out_path is empty the converted object lands in the report payload.
Report cmd_convert(const std::string& predictor_spec, const std::string& process_path,
                   ConvertTarget target, std::size_t depth, Stage stages,
                   std::uint64_t budget, const std::string& out_path);

Report cmd_adversary(const std::string& predictor_spec, std::size_t length);

}  // namespace pred::cli
