#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "symdyn/complexity.hpp"
#include "symdyn/error.hpp"
#include "symdyn/generators.hpp"
#include "symdyn/intricacy.hpp"
#include "symdyn/markov.hpp"
#include "symdyn/optimize.hpp"
#include "symdyn/sequence_io.hpp"
#include "symdyn/subshift.hpp"

namespace symdyn::cli {

namespace {

using nlohmann::json;

struct Global {
    std::string out_path;
    std::string format;
    unsigned threads = 0;
    std::uint64_t seed = 0;
};

// Doubles rounded to 12 significant digits; non-finite values become null.
json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::stod(buf);
}

std::string csv_num(double v) {
    if (!std::isfinite(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);)
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string format_or(const Global& g, const std::string& fallback) {
    if (g.format.empty()) return fallback;
    if (g.format != "csv" && g.format != "json") throw InvalidArgument("--format must be csv or json");
    return g.format;
}

// ---------------------------------------------------------------------------
// gen

struct SourceOptions {
    std::string name;
    std::string block;
    std::string spec;
    bool mechanical = false;
    bool characteristic = false;
    bool upper = false;
    bool lower = false;
    std::string cf;
    std::optional<double> alpha;
    double beta = 0.0;
    std::string directive;
};

void add_source_options(CLI::App* cmd, SourceOptions& s) {
    cmd->add_option("--name", s.name, "named sequence: fibonacci, morse, chacon, kolakoski, champernowne_binary, periodic");
    cmd->add_option("--block", s.block, "repeated block for --name periodic");
    cmd->add_option("--spec", s.spec, "generator spec as JSON");
    cmd->add_flag("--mechanical", s.mechanical, "mechanical word with slope --cf or --alpha");
    cmd->add_flag("--characteristic", s.characteristic, "characteristic word of --cf");
    cmd->add_flag("--lower", s.lower, "lower mechanical word (default)");
    cmd->add_flag("--upper", s.upper, "upper mechanical word");
    cmd->add_option("--cf", s.cf, "continued fraction, e.g. 0,2,1,1 or 0,2;1 for a repeating tail");
    cmd->add_option("--alpha", s.alpha, "mechanical slope as a decimal");
    cmd->add_option("--beta", s.beta, "mechanical intercept");
    cmd->add_option("--standard", s.directive, "standard word of a directive sequence, e.g. 1,1,1,1");
}

std::optional<GeneratorSpec> source_spec(const SourceOptions& s) {
    int chosen = !s.name.empty() + !s.spec.empty() + s.mechanical + s.characteristic + !s.directive.empty();
    if (chosen == 0) return std::nullopt;
    if (chosen > 1) throw InvalidArgument("choose exactly one of --name, --spec, --mechanical, --characteristic, --standard");
    if (s.lower && s.upper) throw InvalidArgument("--lower and --upper are exclusive");
    if (!s.spec.empty()) return generator_spec_from_json(s.spec);
    GeneratorSpec spec;
    if (!s.name.empty()) {
        spec.kind = GeneratorSpec::Kind::Named;
        spec.name = s.name;
        spec.block = s.block;
    } else if (s.mechanical) {
        spec.kind = GeneratorSpec::Kind::Mechanical;
        if (!s.cf.empty()) spec.cf = ContinuedFraction::parse(s.cf);
        spec.alpha = s.alpha;
        if (!spec.cf && !spec.alpha) throw InvalidArgument("--mechanical needs --cf or --alpha");
        spec.beta = s.beta;
        spec.variant = s.upper ? MechanicalVariant::Upper : MechanicalVariant::Lower;
    } else if (s.characteristic) {
        spec.kind = GeneratorSpec::Kind::Characteristic;
        if (s.cf.empty()) throw InvalidArgument("--characteristic needs --cf");
        spec.cf = ContinuedFraction::parse(s.cf);
    } else {
        spec.kind = GeneratorSpec::Kind::Standard;
        for (const auto& t : split(s.directive, ',')) spec.directive.push_back(std::stoull(t));
    }
    return spec;
}

int cmd_gen(const Global& g, const SourceOptions& s, std::size_t length, bool header, std::ostream& out) {
    const auto spec = source_spec(s);
    if (!spec) throw InvalidArgument("gen needs a generator (--name, --spec, --mechanical, --characteristic or --standard)");
    const Word w = make_generator(*spec)(length);
    if (format_or(g, "csv") == "json") {
        json j;
        j["spec"] = json::parse(generator_spec_to_json(*spec));
        j["alphabet"] = w.alphabet().to_utf8();
        j["length"] = w.size();
        j["sequence"] = w.to_string();
        out << j.dump() << '\n';
    } else {
        write_sequence(out, w, header);
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// complexity

struct ComplexityOptions {
    std::string input;
    std::string word;
    std::size_t nmax = 10;
    std::size_t length = 1000;
    std::size_t max_length = 64000;
    std::string measures = "p,pal,pn,window,arith,maxpat_lb";
    std::size_t kmax = 3;
    std::size_t window = 24;
    std::size_t maxpat_kmax = 6;
};

int cmd_complexity(const Global& g, const SourceOptions& s, const ComplexityOptions& o, std::istream& in,
                   std::ostream& out) {
    static const std::vector<std::string> kKnown = {"p", "pal", "pn", "window", "arith", "maxpat_lb"};
    const auto measures = split(o.measures, ',');
    for (const auto& m : measures)
        if (std::find(kKnown.begin(), kKnown.end(), m) == kKnown.end())
            throw InvalidArgument("unknown measure '" + m + "' (expected p, pal, pn, window, arith, maxpat_lb)");
    if (o.nmax == 0) throw InvalidArgument("--nmax must be positive");

    const auto spec = source_spec(s);
    const int sources = spec.has_value() + !o.input.empty() + !o.word.empty();
    if (sources != 1) throw InvalidArgument("complexity needs exactly one of a generator, --input or --word");

    Word w;
    std::optional<WordGenerator> gen;
    std::size_t prefix_length = 0;
    bool stable = false;
    std::string source_label;
    if (spec) {
        gen = make_generator(*spec);
        const std::size_t initial = std::max(o.length, 4 * o.nmax);
        auto result = evaluate_on_stable_prefix(*gen, initial, std::max(o.max_length, initial), [&](const Word& x) {
            auto p = complexity_profile(x, std::min(o.nmax, x.size()));
            auto pal = palindrome_complexity(x, std::min(o.nmax, x.size()));
            p.insert(p.end(), pal.begin(), pal.end());
            return p;
        });
        prefix_length = result.prefix_length;
        stable = result.stable;
        w = (*gen)(prefix_length);
        source_label = generator_spec_to_json(*spec);
    } else {
        if (!o.word.empty()) {
            w = Word::parse(o.word);
            source_label = "inline";
        } else {
            std::vector<Word> seqs;
            if (o.input == "-") {
                seqs = read_sequences(in);
            } else {
                std::ifstream f(o.input);
                if (!f) throw InvalidArgument("cannot open input file '" + o.input + "'");
                seqs = read_sequences(f);
            }
            if (seqs.size() != 1) throw InvalidArgument("input must contain exactly one sequence");
            w = seqs.front();
            source_label = o.input;
        }
        prefix_length = w.size();
    }
    if (o.nmax > w.size()) throw InvalidArgument("--nmax exceeds the sequence length");

    const std::size_t window = std::min(o.window, w.size() - 1);
    auto has = [&](const std::string& m) { return std::find(measures.begin(), measures.end(), m) != measures.end(); };
    std::vector<std::string> notes;
    std::vector<std::vector<std::optional<double>>> rows(o.nmax);
    const auto pal = has("pal") ? palindrome_complexity(w, o.nmax) : std::vector<std::size_t>{};
    for (std::size_t n = 1; n <= o.nmax; ++n) {
        auto& row = rows[n - 1];
        for (const auto& m : measures) {
            std::optional<double> v;
            if (m == "p") {
                v = static_cast<double>(count_factors(w, n));
            } else if (m == "pal") {
                v = static_cast<double>(pal[n - 1]);
            } else if (m == "pn") {
                try {
                    v = static_cast<double>(gen ? nonrepetitive_complexity(*gen, n, prefix_length, o.max_length)
                                                : nonrepetitive_complexity(w, n));
                } catch (const PartialResult& e) {
                    notes.push_back("pn(" + std::to_string(n) + ") >= " + std::to_string(e.lower_bound()) +
                                    " (prefix too short)");
                }
            } else if (m == "window") {
                v = static_cast<double>(window_complexity(w, n));
            } else if (m == "arith") {
                v = static_cast<double>(arithmetic_complexity(w, n, o.kmax));
            } else if (m == "maxpat_lb") {
                if (n <= o.maxpat_kmax && n - 1 <= window)
                    v = static_cast<double>(maximal_pattern_complexity_lb(w, n, window).value);
            }
            row.push_back(v);
        }
    }

    const auto verdict = eventual_periodicity_test(w, std::nullopt);
    if (format_or(g, "csv") == "json") {
        json j;
        j["source"] = source_label;
        j["prefix_length"] = prefix_length;
        j["stable"] = stable;
        j["eventually_periodic"] = verdict.eventually_periodic;
        j["periodicity_witness"] = verdict.witness ? json(*verdict.witness) : json(nullptr);
        j["arith_kmax"] = o.kmax;
        j["maxpat_window"] = window;
        json cols = json::object();
        for (std::size_t c = 0; c < measures.size(); ++c) {
            json values = json::array();
            for (const auto& row : rows) values.push_back(row[c] ? num(*row[c]) : json(nullptr));
            cols[measures[c]] = values;
        }
        std::vector<std::size_t> ns(o.nmax);
        for (std::size_t n = 1; n <= o.nmax; ++n) ns[n - 1] = n;
        j["n"] = ns;
        j["measures"] = cols;
        j["notes"] = notes;
        out << j.dump() << '\n';
        return kOk;
    }
    out << "# source: " << source_label << '\n';
    out << "# prefix_length: " << prefix_length << '\n';
    out << "# stable: " << (stable ? "true" : "false") << '\n';
    out << "# eventually_periodic: " << (verdict.eventually_periodic ? "true" : "false");
    if (verdict.witness) out << " (witness n=" << *verdict.witness << ')';
    out << '\n';
    out << "# arith_kmax: " << o.kmax << '\n';
    out << "# maxpat_window: " << window << '\n';
    for (const auto& note : notes) out << "# " << note << '\n';
    out << 'n';
    for (const auto& m : measures) out << ',' << m;
    out << '\n';
    for (std::size_t n = 1; n <= o.nmax; ++n) {
        out << n;
        for (const auto& v : rows[n - 1]) out << ',' << (v ? csv_num(*v) : "");
        out << '\n';
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// sft

int cmd_sft(const Global& g, const std::string& name, std::size_t nmax, std::ostream& out) {
    const Sft x = Sft::resolve(name);
    std::vector<BigInt> counts;
    for (std::size_t n = 1; n <= nmax; ++n) counts.push_back(count_blocks(x, n));
    if (format_or(g, "json") == "csv") {
        out << "n,count\n";
        for (std::size_t n = 1; n <= nmax; ++n) out << n << ',' << counts[n - 1].str() << '\n';
        return kOk;
    }
    json j;
    j["sft"] = json::parse(x.to_json());
    j["states"] = x.state_count();
    j["block_length"] = x.block_length();
    j["entropy"] = num(entropy(x));
    j["power_positive_2"] = is_power_positive(x, 2);
    j["irreducible"] = is_irreducible(de_bruijn_graph(x, x.block_length() + 1));
    json c = json::array();
    for (const auto& v : counts) {
        if (v <= BigInt(std::numeric_limits<std::int64_t>::max()))
            c.push_back(v.convert_to<std::int64_t>());
        else
            c.push_back(v.str());
    }
    j["block_counts"] = c;
    out << j.dump() << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------
// intricacy

int cmd_intricacy(const Global& g, const std::string& name, const std::string& weights, const std::string& mode,
                  std::size_t nmax, std::ostream& out) {
    const Sft x = Sft::resolve(name);
    const auto cs = CoefficientSystem::parse(weights);
    const double h = entropy(x);
    if (mode == "series") {
        if (cs.kind() != CoefficientSystem::Kind::Uniform)
            throw PreconditionError("the series is available for uniform weights only; use --mode profile");
        const auto r = asc_sft_series(x);
        if (format_or(g, "json") == "csv") {
            out << "h,asc,int,terms,tail_bound\n"
                << csv_num(h) << ',' << csv_num(r.asc) << ',' << csv_num(r.intricacy) << ',' << *r.terms << ','
                << csv_num(*r.tail_bound) << '\n';
            return kOk;
        }
        json j;
        j["h"] = num(h);
        j["asc"] = num(r.asc);
        j["int"] = num(r.intricacy);
        j["method"] = "series";
        j["weights"] = r.weights;
        j["terms"] = *r.terms;
        j["tail_bound"] = num(*r.tail_bound);
        out << j.dump() << '\n';
        return kOk;
    }
    if (mode != "profile") throw InvalidArgument("--mode must be series or profile");
    const auto profile = asc_profile(x, nmax, cs, g.threads);
    if (format_or(g, "json") == "csv") {
        out << "# weights: " << cs.name() << '\n' << "# h: " << csv_num(h) << '\n' << "n,asc,int\n";
        for (const auto& r : profile) out << *r.n << ',' << csv_num(r.asc) << ',' << csv_num(r.intricacy) << '\n';
        return kOk;
    }
    json j;
    j["h"] = num(h);
    j["method"] = "brute";
    j["weights"] = cs.name();
    json rows = json::array();
    for (const auto& r : profile) rows.push_back({{"n", *r.n}, {"asc", num(r.asc)}, {"int", num(r.intricacy)}});
    j["profile"] = rows;
    j["asc"] = num(profile.empty() ? 0.0 : profile.back().asc);
    j["int"] = num(profile.empty() ? 0.0 : profile.back().intricacy);
    j["tail_bound"] = nullptr;
    out << j.dump() << '\n';
    return kOk;
}

// ---------------------------------------------------------------------------
// markov

json params_json(const MarkovParams& p) {
    json j = json::object();
    for (const auto& [k, v] : p) j["P" + k] = num(v);
    return j;
}

int cmd_markov_eval(const Global& g, const std::string& name, std::size_t order, const std::string& params,
                    double tol, std::size_t brute_n, std::ostream& out) {
    const Sft x = Sft::resolve(name);
    const auto p = parse_markov_params(params);
    const auto m = build_rstep(x, order, p);
    const auto r = markov_intricacy(m, tol);
    std::optional<double> brute;
    if (brute_n > 0) brute = brute_asc_mu(m, brute_n);
    if (format_or(g, "json") == "csv") {
        out << "h,asc,int" << (brute ? ",brute_asc" : "") << '\n'
            << csv_num(r.entropy) << ',' << csv_num(r.asc) << ',' << csv_num(r.intricacy);
        if (brute) out << ',' << csv_num(*brute);
        out << '\n';
        return kOk;
    }
    json j;
    j["order"] = order;
    j["params"] = params_json(p);
    json states = json::array();
    for (const auto& s : m.states()) states.push_back(s.to_string());
    j["states"] = states;
    json stationary = json::array();
    for (double v : m.stationary()) stationary.push_back(num(v));
    j["stationary"] = stationary;
    j["h"] = num(r.entropy);
    j["asc"] = num(r.asc);
    j["int"] = num(r.intricacy);
    j["method"] = "series";
    j["terms"] = r.terms;
    j["tail_bound"] = num(r.tail_bound);
    j["tolerance"] = num(tol);
    if (r.clamped) j["int_clamped"] = true;
    if (brute) {
        j["brute_n"] = brute_n;
        j["brute_asc"] = num(*brute);
    }
    out << j.dump() << '\n';
    return kOk;
}

int cmd_markov_optimize(const Global& g, const std::string& name, std::size_t order, const std::string& target,
                        double grid, double jitter, const std::string& keys, std::ostream& out) {
    const Sft x = Sft::resolve(name);
    MarkovFamily family = MarkovFamily::standard(x, order);
    if (!keys.empty()) {
        family.keys.clear();
        for (auto k : split(keys, ',')) {
            if (k[0] == 'p' || k[0] == 'P') k.erase(0, 1);
            family.keys.push_back(k);
        }
    }
    OptimizeOptions opts;
    opts.grid = grid;
    opts.jitter = jitter;
    opts.seed = g.seed;
    opts.threads = g.threads;
    const auto report = optimize(family, parse_markov_target(target), opts);
    if (format_or(g, "json") == "csv") {
        for (const auto& k : report.keys) out << 'P' << k << ',';
        out << "value\n";
        for (const auto& m : report.maxima) {
            for (double v : m.point) out << csv_num(v) << ',';
            out << csv_num(m.value) << '\n';
        }
        return kOk;
    }
    json j;
    j["target"] = to_string(report.target);
    j["order"] = report.order;
    json k = json::array();
    for (const auto& key : report.keys) k.push_back("P" + key);
    j["keys"] = k;
    json maxima = json::array();
    for (const auto& m : report.maxima) {
        json point = json::object();
        for (std::size_t i = 0; i < m.point.size(); ++i) point["P" + report.keys[i]] = num(m.point[i]);
        maxima.push_back({{"params", point}, {"value", num(m.value)}});
    }
    j["maxima"] = maxima;
    j["method"] = report.method;
    j["grid"] = num(report.grid);
    j["grid_points"] = report.grid_points;
    j["starts"] = report.starts;
    j["jitter"] = num(jitter);
    j["seed"] = g.seed;
    out << j.dump() << '\n';
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Symbolic dynamics toolkit: words, subshifts, complexity and intricacy"};
    app.name("symdyn");
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--out", g.out_path, "write the report to this file instead of stdout");
    app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", g.threads, "worker threads (0 = all cores)");
    app.add_option("--seed", g.seed, "seed for optimizer start jitter");

    SourceOptions src;
    std::size_t gen_length = 0;
    bool header = false;
    auto* gen = app.add_subcommand("gen", "generate a sequence prefix");
    add_source_options(gen, src);
    gen->add_option("--length", gen_length, "prefix length")->required();
    gen->add_flag("--header", header, "write an #alphabet line first");

    ComplexityOptions co;
    auto* comp = app.add_subcommand("complexity", "complexity measures of a sequence, one row per n");
    add_source_options(comp, src);
    comp->add_option("--input", co.input, "sequence file ('-' for stdin)");
    comp->add_option("--word", co.word, "inline sequence");
    comp->add_option("--nmax", co.nmax, "largest n");
    comp->add_option("--length", co.length, "initial prefix length for generators");
    comp->add_option("--max-length", co.max_length, "longest prefix the doubling rule may use");
    comp->add_option("--measures", co.measures, "comma list of p, pal, pn, window, arith, maxpat_lb");
    comp->add_option("--kmax", co.kmax, "largest step for arithmetic complexity");
    comp->add_option("--window", co.window, "pattern window W for maxpat_lb");
    comp->add_option("--maxpat-kmax", co.maxpat_kmax, "largest k for maxpat_lb");

    std::string sft_name;
    std::size_t sft_nmax = 10;
    auto* sft = app.add_subcommand("sft", "block counts, entropy and structure of a shift of finite type");
    sft->add_option("--sft", sft_name, "golden, full2, full3, period2, figI, figII or inline JSON")->required();
    sft->add_option("--nmax", sft_nmax, "block lengths 1..nmax");

    std::string weights = "uniform", mode = "series";
    std::size_t int_nmax = 12;
    auto* intr = app.add_subcommand("intricacy", "average sample complexity and intricacy of an SFT");
    intr->add_option("--sft", sft_name, "subshift name or JSON")->required();
    intr->add_option("--weights", weights, "uniform, neural, psym:<p> or measure:<x>@<w>,...,leb@<w>");
    intr->add_option("--mode", mode, "series or profile")->check(CLI::IsMember({"series", "profile"}));
    intr->add_option("--nmax", int_nmax, "profile horizon");

    auto* markov = app.add_subcommand("markov", "Markov measures on an SFT");
    markov->require_subcommand(1);
    std::size_t order = 1;
    std::string params, target = "asc", keys;
    double tol = 1e-12, grid = 0.02, jitter = 0.0;
    std::size_t brute_n = 0;
    auto* eval = markov->add_subcommand("eval", "entropy, Asc and Int of one measure");
    eval->add_option("--sft", sft_name, "subshift name or JSON")->required();
    eval->add_option("--order", order, "Markov order");
    eval->add_option("--params", params, "transition probabilities, e.g. p00=0.618")->required();
    eval->add_option("--tol", tol, "series truncation tolerance");
    eval->add_option("--brute-n", brute_n, "also evaluate the finite-n cylinder sum at this n");
    auto* opt = markov->add_subcommand("optimize", "search the family for maxima");
    opt->add_option("--sft", sft_name, "subshift name or JSON")->required();
    opt->add_option("--order", order, "Markov order");
    opt->add_option("--target", target, "entropy, asc or int")->check(CLI::IsMember({"entropy", "asc", "int"}));
    opt->add_option("--grid", grid, "grid spacing of the start search");
    opt->add_option("--jitter", jitter, "random start offset as a fraction of the grid step");
    opt->add_option("--keys", keys, "free parameters, e.g. p00,p11");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!g.out_path.empty()) {
        file.open(g.out_path);
        if (!file) {
            err << "error: cannot write '" << g.out_path << "'\n";
            return kUsage;
        }
        sink = &file;
    }
    try {
        if (gen->parsed()) return cmd_gen(g, src, gen_length, header, *sink);
        if (comp->parsed()) return cmd_complexity(g, src, co, in, *sink);
        if (sft->parsed()) return cmd_sft(g, sft_name, sft_nmax, *sink);
        if (intr->parsed()) return cmd_intricacy(g, sft_name, weights, mode, int_nmax, *sink);
        if (eval->parsed()) return cmd_markov_eval(g, sft_name, order, params, tol, brute_n, *sink);
        if (opt->parsed()) return cmd_markov_optimize(g, sft_name, order, target, grid, jitter, keys, *sink);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return kResource;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kPrecondition;
    } catch (const std::invalid_argument& e) {
        err << "error: malformed number (" << e.what() << ")\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        err << "error: number out of range (" << e.what() << ")\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kOther;
    }
    err << "error: no command given\n";
    return kUsage;
}

}  // namespace symdyn::cli
