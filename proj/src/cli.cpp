#include "pred/cli.hpp"

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pred/constructions.hpp"
#include "pred/errors.hpp"
#include "pred/transforms.hpp"

namespace pred::cli {

std::string Report::text() const {
    std::string out;
    for (const auto& [k, v] : fields) out += k + ": " + v + "\n";
    if (!columns.empty()) {
        std::string line;
        for (std::size_t i = 0; i < columns.size(); ++i)
            line += (i ? "\t" : "") + columns[i];
        out += line + "\n";
        for (const auto& row : rows) {
            line.clear();
            for (std::size_t i = 0; i < row.size(); ++i) line += (i ? "\t" : "") + row[i];
            out += line + "\n";
        }
    }
    if (!payload.empty()) {
        out += "---\n";
        for (const auto& line : payload) out += line + "\n";
    }
    return out;
}

std::string Report::json() const {
    nlohmann::ordered_json j;
    nlohmann::ordered_json f = nlohmann::ordered_json::object();
    for (const auto& [k, v] : fields) f[k] = v;
    j["fields"] = f;
    if (!columns.empty()) {
        nlohmann::ordered_json rws = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json r = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < columns.size() && i < row.size(); ++i)
                r[columns[i]] = row[i];
            rws.push_back(r);
        }
        j["rows"] = rws;
    }
    if (!payload.empty()) j["payload"] = payload;
    return j.dump(2) + "\n";
}

// ---- input formats ----

std::vector<Bit> parse_stream_text(const std::string& text, const std::string& origin) {
    std::vector<Bit> bits;
    std::size_t line = 1, col = 0;
    for (char c : text) {
        if (c == '\n') {
            ++line;
            col = 0;
            continue;
        }
        ++col;
        if (c == '0' || c == '1')
            bits.push_back(c - '0');
        else if (!std::isspace(static_cast<unsigned char>(c)))
            throw ParseError(origin + ":" + std::to_string(line) + ":" +
                             std::to_string(col) + ": invalid character '" +
                             std::string(1, c) + "' in bit stream");
    }
    return bits;
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::vector<Bit> parse_stream_file(const std::string& path) {
    return parse_stream_text(slurp(path), path);
}

namespace {

// whitespace-separated tokens with []() and comma split off
std::vector<std::string> tokenize_spec(const std::string& spec) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) tokens.push_back(cur);
        cur.clear();
    };
    for (char c : spec) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
        } else if (c == '[' || c == ']' || c == '(' || c == ')' || c == ',') {
            flush();
            tokens.push_back(std::string(1, c));
        } else {
            cur.push_back(c);
        }
    }
    flush();
    return tokens;
}

struct SpecParser {
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    std::string spec;

    std::string next(const std::string& what) {
        if (pos >= tokens.size())
            throw ParseError("predictor spec \"" + spec + "\": expected " + what);
        return tokens[pos++];
    }
    void expect(const std::string& tok) {
        std::string got = next("'" + tok + "'");
        if (got != tok)
            throw ParseError("predictor spec \"" + spec + "\": expected '" + tok +
                             "', got '" + got + "'");
    }
    bool peek_is(const std::string& tok) const {
        return pos < tokens.size() && tokens[pos] == tok;
    }

    StagedPredictor parse() {
        std::string head = next("a predictor name");
        if (head == "uniform") return uniform_predictor();
        if (head == "bernoulli") return bernoulli_predictor(Ratio::from_string(next("a rational")));
        if (head == "dirac") return dirac_predictor(BitStr::parse(next("a bit string")));
        if (head == "table") return parse_table_file(next("a file path"));
        if (head == "mixture") {
            expect("[");
            std::vector<std::pair<Ratio, StagedPredictor>> family;
            while (!peek_is("]")) {
                expect("(");
                Ratio w = Ratio::from_string(next("a weight"));
                expect(",");
                StagedPredictor member = parse();
                expect(")");
                family.emplace_back(w, member);
                if (peek_is(",")) expect(",");
            }
            expect("]");
            return mixture(std::move(family));
        }
        throw ParseError("unknown predictor \"" + head + "\"");
    }
};

}  // namespace

StagedPredictor parse_predictor_spec(const std::string& spec) {
    SpecParser parser{tokenize_spec(spec), 0, spec};
    StagedPredictor p = parser.parse();
    if (parser.pos != parser.tokens.size())
        throw ParseError("predictor spec \"" + spec + "\": trailing tokens");
    return p;
}

GrowthFunction parse_growth_spec(const std::string& spec) {
    std::istringstream in(spec);
    std::string head;
    in >> head;
    if (head == "sqrt") return GrowthFunction::sqrt();
    if (head == "log2") return GrowthFunction::log2();
    if (head == "linear") {
        std::string r;
        if (!(in >> r)) throw ParseError("growth spec \"" + spec + "\": missing slope");
        return GrowthFunction::linear(Ratio::from_string(r));
    }
    if (head == "table") {
        std::string list;
        if (!(in >> list)) throw ParseError("growth spec \"" + spec + "\": missing values");
        std::vector<std::uint64_t> values;
        std::istringstream items(list);
        std::string item;
        while (std::getline(items, item, ','))
            values.push_back(std::stoull(item));
        return GrowthFunction::table(std::move(values));
    }
    throw ParseError("unknown growth function \"" + head + "\"");
}

StagedPredictor parse_table_file(const std::string& path) {
    std::istringstream in(slurp(path));
    std::string line;
    std::size_t lineno = 0;
    TableDefault rule = TableDefault::ZeroOutside;
    std::map<BitStr, Ratio> entries;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first) || first[0] == '#') continue;
        if (first == "@rule") {
            std::string name;
            fields >> name;
            if (name == "zero_outside")
                rule = TableDefault::ZeroOutside;
            else if (name == "closed_under_prefix")
                rule = TableDefault::ClosedUnderPrefix;
            else
                throw ParseError(path + ":" + std::to_string(lineno) +
                                 ": unknown table rule \"" + name + "\"");
            continue;
        }
        std::string value;
        if (!(fields >> value))
            throw ParseError(path + ":" + std::to_string(lineno) + ": missing value");
        if (!entries.emplace(BitStr::parse(first), Ratio::from_string(value)).second)
            throw ParseError(path + ":" + std::to_string(lineno) + ": duplicate entry " +
                             first);
    }
    return table_predictor(entries, rule);
}

MonotoneProcess parse_process_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::vector<ProcessPair> pairs;
    std::set<BitStr> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(origin + ":" + std::to_string(lineno) +
                             ": expected input<TAB>output");
        BitStr input = BitStr::parse(line.substr(0, tab));
        BitStr output = BitStr::parse(line.substr(tab + 1));
        if (!seen.insert(input).second)
            throw ParseError(origin + ":" + std::to_string(lineno) +
                             ": duplicate input " + input.str());
        pairs.emplace_back(input, output);
    }
    return MonotoneProcess::from_pairs(std::move(pairs));
}

MonotoneProcess parse_process_file(const std::string& path) {
    return parse_process_text(slurp(path), path);
}

std::vector<std::string> render_process_lines(const MonotoneProcess& f) {
    std::vector<std::string> out;
    for (const auto& [x, fx] : f.pairs()) out.push_back(x.str() + "\t" + fx.str());
    return out;
}

void validate_window(const Ratio& r, const Ratio& s) {
    if (!(Ratio(1, 2) < r && r <= s && s < Ratio(1)))
        throw PreconditionError("calibration window must satisfy 1/2 < r <= s < 1, got [" +
                                r.str() + ", " + s.str() + "]");
}

// ---- commands ----

namespace {

std::string decimal9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

}  // namespace

Report cmd_analyze(const std::vector<Bit>& stream, const std::string& predictor_spec,
                   const std::string& growth_spec, Stage stages) {
    StagedPredictor p = parse_predictor_spec(predictor_spec);
    GrowthFunction g = parse_growth_spec(growth_spec);
    Report report;
    report.field("command", "analyze");
    report.field("predictor", predictor_spec);
    report.field("growth", growth_spec);
    report.field("stages", std::to_string(stages));
    report.field("stream-bits", std::to_string(stream.size()));
    report.columns = {"n", "ratio", "log2", "growth", "log2-per-growth"};
    for (const ProfilePoint& point : growth_profile(p, stream, g, stages)) {
        RedundancyValue rv{point.ratio};
        std::string log2 = rv.display_log2_str();
        std::string per;
        if (point.growth == 0)
            per = "n/a";
        else if (rv.log_is_neg_infinity())
            per = "-inf";
        else
            per = decimal9(rv.display_log2() / static_cast<double>(point.growth));
        report.rows.push_back({std::to_string(point.n), point.ratio.str(), log2,
                               std::to_string(point.growth), per});
    }
    return report;
}

Report cmd_calibrate(const std::vector<Bit>& stream, const std::string& predictor_spec,
                     const Ratio& r, const Ratio& s) {
    validate_window(r, s);
    StagedPredictor p = parse_predictor_spec(predictor_spec);
    CalibrationReport cal = calibration_report(p, stream, r, s);
    Report report;
    report.field("command", "calibrate");
    report.field("predictor", predictor_spec);
    report.field("stream-bits", std::to_string(stream.size()));
    report.field("window-low", r.str());
    report.field("window-high", s.str());
    report.field("predictions", std::to_string(cal.predictions));
    report.field("confirmed", std::to_string(cal.confirmed));
    if (cal.verdict == CalibrationVerdict::Vacuous) {
        report.field("ratio", "n/a");
        report.field("ratio-decimal", "n/a");
        report.field("verdict", "vacuous");
    } else {
        report.field("ratio", cal.ratio.str());
        report.field("ratio-decimal",
                     cal.ratio.is_zero() ? "0.000000000"
                                         : decimal9(cal.ratio.numerator().get_d() /
                                                    cal.ratio.denominator().get_d()));
        report.field("verdict", cal.verdict == CalibrationVerdict::Within  ? "within"
                                : cal.verdict == CalibrationVerdict::Below ? "below"
                                                                           : "above");
    }
    return report;
}

ConvertTarget parse_convert_target(const std::string& name) {
    if (name == "process") return ConvertTarget::Process;
    if (name == "distribution") return ConvertTarget::Distribution;
    if (name == "martingale") return ConvertTarget::Martingale;
    if (name == "digit_aligned") return ConvertTarget::DigitAligned;
    throw ParseError("unknown convert target \"" + name + "\"");
}

namespace {

// exact equality of the rebuilt probabilities against the source
std::string verify_process_roundtrip(const MonotoneProcess& f, const StagedPredictor& p,
                                     bool additive, Stage stages, std::size_t depth) {
    for (std::size_t len = 0; len <= depth; ++len) {
        for (const BitStr& y : all_strings_of_length(len)) {
            Ratio expect = additive ? p.limit(y) : p.at(y, stages);
            if (solomonoff_eval(f, y, 0) != expect) return "mismatch at " + y.str();
        }
    }
    return "exact";
}

void write_or_embed(Report& report, const std::vector<std::string>& lines,
                    const std::string& out_path) {
    if (out_path.empty()) {
        report.payload = lines;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + out_path);
    for (const auto& line : lines) out << line << "\n";
    report.field("out", out_path);
}

}  // namespace

Report cmd_convert(const std::string& predictor_spec, const std::string& process_path,
                   ConvertTarget target, std::size_t depth, Stage stages,
                   std::uint64_t budget, const std::string& out_path) {
    if (predictor_spec.empty() == process_path.empty())
        throw PreconditionError("convert needs exactly one of --predictor / --process");
    Report report;
    report.field("command", "convert");
    if (!predictor_spec.empty()) report.field("predictor", predictor_spec);
    if (!process_path.empty()) report.field("process", process_path);
    report.field("depth", std::to_string(depth));

    switch (target) {
        case ConvertTarget::Process: {
            report.field("target", "process");
            StagedPredictor p = parse_predictor_spec(predictor_spec);
            bool additive = p.caps().additive && p.caps().unit_root;
            MonotoneProcess f = additive ? distribution_to_endless_process(p, depth)
                                         : predictor_to_process(p, stages, depth);
            report.field("construction", additive ? "distribution" : "staged");
            if (!additive) report.field("stages", std::to_string(stages));
            report.field("pairs", std::to_string(f.pairs().size()));
            report.field("roundtrip",
                         verify_process_roundtrip(f, p, additive, stages, depth));
            write_or_embed(report, render_process_lines(f), out_path);
            break;
        }
        case ConvertTarget::DigitAligned: {
            report.field("target", "digit_aligned");
            StagedPredictor p = parse_predictor_spec(predictor_spec);
            MonotoneProcess f = digit_aligned_process(p, depth);
            report.field("pairs", std::to_string(f.pairs().size()));
            report.field("roundtrip", verify_process_roundtrip(f, p, true, stages, depth));
            std::size_t max_input = 0;
            for (const auto& [x, fx] : f.pairs()) max_input = std::max(max_input, x.size());
            bool aligned = true;
            for (std::size_t len = 0; len <= depth && aligned; ++len) {
                for (const BitStr& y : all_strings_of_length(len)) {
                    auto digits = Dyadic::from_ratio(p.limit(y)).set_digits();
                    std::map<std::size_t, std::size_t> found;
                    for (std::size_t lx = 0; lx <= max_input; ++lx)
                        for (const BitStr& x : all_strings_of_length(lx))
                            if (is_reduced_encoding(f, x, y, max_input)) ++found[lx];
                    std::map<std::size_t, std::size_t> want;
                    for (unsigned long d : digits) ++want[d];
                    if (found != want) {
                        aligned = false;
                        break;
                    }
                }
            }
            report.field("digit-alignment", aligned ? "verified" : "failed");
            write_or_embed(report, render_process_lines(f), out_path);
            break;
        }
        case ConvertTarget::Distribution: {
            report.field("target", "distribution");
            report.field("budget", std::to_string(budget));
            MonotoneProcess f = parse_process_file(process_path);
            f.declare_endless();
            std::map<BitStr, Ratio> values;
            std::vector<std::string> lines;
            for (std::size_t len = 0; len <= depth; ++len)
                for (const BitStr& y : all_strings_of_length(len)) {
                    Dyadic v = endless_process_to_distribution(f, y, budget);
                    values.emplace(y, v.to_ratio());
                    lines.push_back(y.str() + " " + v.to_ratio().str());
                }
            report.field("values", std::to_string(lines.size()));
            // the inverse construction must reproduce the extracted values
            auto rebuilt = distribution_to_endless_process(
                table_predictor(values, TableDefault::ClosedUnderPrefix), depth);
            report.field("roundtrip", verify_process_roundtrip(
                                          rebuilt,
                                          table_predictor(values,
                                                          TableDefault::ClosedUnderPrefix),
                                          true, stages, depth));
            write_or_embed(report, lines, out_path);
            break;
        }
        case ConvertTarget::Martingale: {
            report.field("target", "martingale");
            StagedPredictor p = parse_predictor_spec(predictor_spec);
            Martingale m = martingale_from_predictor(p);
            std::vector<std::string> lines;
            for (std::size_t len = 0; len <= depth; ++len)
                for (const BitStr& x : all_strings_of_length(len))
                    lines.push_back(x.str() + " " + m.at(x).str());
            report.field("values", std::to_string(lines.size()));
            write_or_embed(report, lines, out_path);
            break;
        }
    }
    return report;
}

Report cmd_adversary(const std::string& predictor_spec, std::size_t length) {
    StagedPredictor p = parse_predictor_spec(predictor_spec);
    AdversaryTrace trace = adversarial_sequence(p, length);
    Report report;
    report.field("command", "adversary");
    report.field("predictor", predictor_spec);
    report.field("length", std::to_string(length));
    report.field("sequence", trace.sequence.str());
    report.field("certificates", trace.verify(p) ? "all-ok" : "FAILED");
    report.columns = {"n", "digit", "value", "threshold", "bound"};
    for (std::size_t n = 0; n < trace.steps.size(); ++n) {
        const AdversaryStep& step = trace.steps[n];
        report.rows.push_back({std::to_string(n + 1), std::to_string(step.digit),
                               step.child_value.str(), step.threshold.str(),
                               step.bound.str()});
    }
    return report;
}

}  // namespace pred::cli
