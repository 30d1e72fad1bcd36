#include "motif/cli.hpp"

#include "motif/builders.hpp"
#include "motif/error.hpp"
#include "motif/oracle.hpp"
#include "motif/sieve.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>

namespace motif::cli {

namespace {
    using nlohmann::ordered_json;

    struct RunConfig
    {
        std::string command;
        std::string graph_path;
        std::string colors_path;
        std::string motif_path;
        std::string variant;
        int k = 0;
        std::optional<int> r;
        std::string seed = "default";
        int trials = 3;
        std::string engine = "sieve";
        int threads = 0;
        bool json_only = false;
        bool timing = false;
        std::string dump_path;
    };

    std::ifstream open(const std::string & path)
    {
        std::ifstream in(path);
        if (! in)
            throw ValidationError("cannot open " + path);
        return in;
    }

    std::uint64_t parse_seed(const std::string & text)
    {
        if (text == "default")
            return kDefaultSeed;
        if (text == "random") {
            std::random_device rd;
            return (std::uint64_t{rd()} << 32) ^ rd();
        }
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(text, &pos, 0);
        }
        catch (const std::exception &) {
            pos = 0;
        }
        if (pos != text.size() || text.empty() || text[0] == '-')
            throw ValidationError("--seed expects an unsigned integer or 'random', got '" + text + "'");
        return v;
    }

    int thread_setting(int flag)
    {
        if (flag > 0)
            return flag;
        if (const char * env = std::getenv("MOTIF_THREADS")) {
            try {
                const int t = std::stoi(env);
                if (t > 0)
                    return t;
            }
            catch (const std::exception &) {
            }
            throw ValidationError(std::string("MOTIF_THREADS must be a positive integer, got '") + env + "'");
        }
        return 0;
    }

    ordered_json big_to_json(const BigInt & v)
    {
        if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max())
            return static_cast<std::uint64_t>(v);
        return v.str();
    }

    void dump_to(const std::string & path, const Circuit & c)
    {
        std::ofstream f(path);
        if (! f)
            throw ValidationError("cannot write " + path);
        dump(c, f);
    }

    int execute(const RunConfig & cfg, std::ostream & out, std::ostream & err)
    {
        const auto start = std::chrono::steady_clock::now();

        auto gin = open(cfg.graph_path);
        auto cin = open(cfg.colors_path);
        const ColoredGraph g = load_graph(gin, cin, SourceNames{cfg.graph_path, cfg.colors_path});

        std::vector<std::string> warnings;
        MotifQuery q;
        const auto variant = parse_variant(cfg.variant);
        if (! variant)
            throw ValidationError("unknown variant '" + cfg.variant + "'");
        q.variant = *variant;
        q.k = cfg.k;
        q.r = cfg.r;
        if (! cfg.motif_path.empty()) {
            auto min = open(cfg.motif_path);
            q.motif = load_motif(min, g, nullptr, cfg.motif_path);
        }
        const auto checked = validate_query(g, q);
        warnings.insert(warnings.end(), checked.warnings.begin(), checked.warnings.end());

        const bool brute = cfg.engine == "brute";
        const bool counting = cfg.command == "count";
        if (counting && ! brute && q.variant != Variant::XCGM)
            throw ValidationError("count --variant " + cfg.variant +
                                  " needs --engine brute (only xcgm has a polynomial-space counter)");
        if (brute)
            warnings.push_back("brute-force oracle: exponential-time");
        if (cfg.trials < 1)
            throw ValidationError("--trials must be at least 1");

        const std::uint64_t seed = parse_seed(cfg.seed);

        ordered_json j;
        j["command"] = cfg.command;
        j["variant"] = std::string(to_string(q.variant));
        j["k"] = q.k;
        j["r"] = q.r ? ordered_json(*q.r) : ordered_json(nullptr);
        j["engine"] = cfg.engine;
        j["n"] = g.n();
        j["m"] = g.m();

        std::string summary;
        if (! counting) {
            if (brute) {
                const auto res = solve_brute(g, q);
                j["verdict"] = res.found ? "found" : "not-found";
                j["solutions"] = res.solutions.size();
                summary = std::string(res.found ? "found" : "not found") + " (" +
                          std::to_string(res.solutions.size()) + " solutions)";
            }
            else {
                const auto inst = build_instance(g, q);
                if (! cfg.dump_path.empty())
                    dump_to(cfg.dump_path, inst.circuit);
                DetectOptions opt;
                opt.trials = cfg.trials;
                opt.seed = seed;
                opt.threads = thread_setting(cfg.threads);
                const auto rep = detect_multilinear(inst.circuit, inst.K, opt);
                j["verdict"] = rep.found ? "found" : "not-found";
                j["seed"] = seed;
                j["trials"] = cfg.trials;
                j["K"] = inst.K;
                j["T"] = size_T(inst.circuit);
                j["S"] = size_S(inst.circuit);
                j["peak_live_field_elements"] = rep.peak_live_field_elements;
                summary = std::string(rep.found ? "found" : "not found") + ": " + inst.meaning + ", K=" +
                          std::to_string(inst.K) + ", T=" + std::to_string(size_T(inst.circuit)) +
                          ", S=" + std::to_string(size_S(inst.circuit)) + ", seed=" + std::to_string(seed);
            }
        }
        else {
            if (brute) {
                const BigInt count = count_brute(g, q);
                j["count"] = big_to_json(count);
                summary = "count " + count.str();
            }
            else {
                const auto inst = build_xcgm_counting(g, q.k);
                if (! cfg.dump_path.empty())
                    dump_to(cfg.dump_path, inst.circuit);
                const BigInt rooted = count_exact_multilinear(inst.circuit, inst.sieved, thread_setting(cfg.threads));
                const BigInt count = rooted / q.k;
                j["count"] = big_to_json(count);
                j["rooted_count"] = big_to_json(rooted);
                j["K"] = inst.K;
                j["T"] = size_T(inst.circuit);
                j["S"] = size_S(inst.circuit);
                summary = "count " + count.str() + " (rooted " + rooted.str() +
                          "), T=" + std::to_string(size_T(inst.circuit)) + ", S=" + std::to_string(size_S(inst.circuit));
            }
        }
        j["warnings"] = warnings;

        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        if (cfg.timing)
            j["wall_time_ms"] = ms;
        out << j.dump() << '\n';

        if (! cfg.json_only) {
            for (const auto & w : warnings)
                err << "warning: " << w << '\n';
            err << summary << " [" << static_cast<long long>(ms) << " ms]\n";
        }
        return kOk;
    }

    void add_common(CLI::App & sub, RunConfig & cfg)
    {
        sub.add_option("--graph", cfg.graph_path, "Edge list file")->required();
        sub.add_option("--colors", cfg.colors_path, "Vertex color file")->required();
        sub.add_option("--motif", cfg.motif_path, "Motif file (color multiplicity per line)");
        sub.add_option("--variant", cfg.variant, "cgm|xcgm|mgm|xmgm|mgmg|wcgm|wmgm|mincc")->required();
        sub.add_option("--k", cfg.k, "Tree size")->required();
        sub.add_option("--r", cfg.r, "Gap size, weight budget or component budget");
        sub.add_option("--seed", cfg.seed, "Unsigned integer or 'random'");
        sub.add_option("--trials", cfg.trials, "Independent sieve trials");
        sub.add_option("--engine", cfg.engine, "sieve|brute")->check(CLI::IsMember({"sieve", "brute"}));
        sub.add_option("--threads", cfg.threads, "Worker cap (default: MOTIF_THREADS, else all cores)");
        sub.add_flag("--json", cfg.json_only, "JSON only; no summary on stderr");
        sub.add_flag("--timing", cfg.timing, "Add wall_time_ms to the JSON report");
        sub.add_option("--dump-circuit", cfg.dump_path, "Write the circuit in text form to this file");
    }
}

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
    RunConfig cfg;
    CLI::App app{"Vertex-colored subtree search with multilinear sieving", "motif"};
    app.require_subcommand(1, 1);
    auto * detect = app.add_subcommand("detect", "Decide whether a solution exists");
    auto * count = app.add_subcommand("count", "Count solutions exactly");
    add_common(*detect, cfg);
    add_common(*count, cfg);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp & e) {
        out << app.help();
        return kOk;
    }
    catch (const CLI::ParseError & e) {
        err << "error: " << e.what() << '\n';
        if (e.get_exit_code() != 0)
            err << "run 'motif --help' for usage\n";
        return e.get_exit_code() == 0 ? kOk : kInputError;
    }
    cfg.command = detect->parsed() ? "detect" : "count";
    (void) count;

    try {
        return execute(cfg, out, err);
    }
    catch (const CapacityError & e) {
        err << "error: " << e.what() << '\n';
        return kCapacityError;
    }
    catch (const ParseError & e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    catch (const ValidationError & e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    catch (const std::exception & e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

int run(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return run(args, out, err);
}

} // namespace motif::cli
