// Workbench CLI: generate update streams, replay them through the coloring
// engine (optionally against the naive baseline), and sweep benchmark grids.
// Exit codes: 0 ok, 1 violations (under --strict; always for verify), 2 input error.
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dyncol/dyncol.hpp"

namespace {

struct SourceArgs {
    std::string in_path;
    std::string model = "churn:0.6";
    std::uint32_t n = 0;
    int delta = 0;
    std::uint64_t updates = 0;
    std::uint64_t seed = 1;
};

void add_source_flags(CLI::App* cmd, SourceArgs* a, bool file_input) {
    if (file_input)
        cmd->add_option("--in", a->in_path, "read update stream from file instead of generating");
    cmd->add_option("--model", a->model, "stream model: churn:<p> | sliding:<w> | star")
        ->capture_default_str();
    cmd->add_option("--n", a->n, "vertex count (generated streams)");
    cmd->add_option("--delta", a->delta, "degree cap (generated streams)");
    cmd->add_option("--updates", a->updates, "number of update events to generate");
    cmd->add_option("--seed", a->seed, "stream/engine seed")->capture_default_str();
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw dyncol::invalid_config("cannot open input file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

dyncol::Stream obtain_stream(const SourceArgs& a) {
    if (!a.in_path.empty())
        return dyncol::parse_stream_text(slurp(a.in_path));
    if (a.n == 0 || a.delta == 0 || a.updates == 0)
        throw dyncol::invalid_config("generation needs --n, --delta and --updates (or pass --in)");
    return dyncol::generate(dyncol::GenModel::parse(a.model), a.n, a.delta, a.updates, a.seed);
}

void write_out(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f)
        throw dyncol::invalid_config("cannot open output file: " + out_path);
    f << text;
}

void print_verify_summary(const dyncol::RunReport& r) {
    std::printf("updates=%llu conflicts=%llu recolors=%llu audits=%llu proper_checks=%llu\n",
                (unsigned long long)r.updates, (unsigned long long)r.conflicts,
                (unsigned long long)r.recolor_calls, (unsigned long long)r.audits_run,
                (unsigned long long)r.proper_checks_run);
    std::printf("violations: invariant2=%llu palette=%llu call_bound=%llu audit=%llu "
                "proper=%llu baseline=%llu\n",
                (unsigned long long)r.viol_invariant2, (unsigned long long)r.viol_palette,
                (unsigned long long)r.viol_call_bound, (unsigned long long)r.viol_audit,
                (unsigned long long)r.viol_proper, (unsigned long long)r.viol_baseline_proper);
    std::printf("verdict: %s\n", r.violation_total() == 0 ? "ok" : "VIOLATIONS");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fully dynamic (delta+1) vertex coloring workbench"};
    app.require_subcommand(1);

    SourceArgs gen_args;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen", "generate an update stream file");
    add_source_flags(gen, &gen_args, /*file_input=*/false);
    gen->add_option("--out", gen_out, "output path (default: stdout)");

    SourceArgs run_args;
    std::string run_out;
    std::string run_report = "json";
    std::string run_audit = "end";
    bool run_baseline = false;
    bool run_strict = false;
    bool run_skip_invalid = false;
    CLI::App* runc = app.add_subcommand("run", "replay a stream through the engine");
    add_source_flags(runc, &run_args, /*file_input=*/true);
    runc->add_option("--report", run_report, "report format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    runc->add_option("--audit", run_audit, "audit policy: off | end | every:<k>")
        ->capture_default_str();
    runc->add_flag("--baseline", run_baseline, "also replay through the naive recolor-on-conflict baseline");
    runc->add_flag("--strict", run_strict, "exit 1 if any violation is recorded");
    runc->add_flag("--skip-invalid", run_skip_invalid, "warn on rejected events instead of aborting");
    runc->add_option("--out", run_out, "report path (default: stdout)");

    SourceArgs verify_args;
    std::string verify_audit = "every:1000";
    CLI::App* verify = app.add_subcommand("verify", "replay with auditing and baseline cross-check; exit 1 on violations");
    add_source_flags(verify, &verify_args, /*file_input=*/true);
    verify->add_option("--audit", verify_audit, "audit policy: off | end | every:<k>")
        ->capture_default_str();

    std::vector<std::uint32_t> bench_ns{300, 3000, 30000};
    int bench_delta = 10;
    std::uint64_t bench_updates_per_n = 200;
    std::string bench_model = "churn:0.6";
    std::uint64_t bench_seeds = 5;
    std::uint64_t bench_seed_base = 1;
    std::string bench_audit = "end";
    std::string bench_report = "csv";
    std::string bench_out;
    unsigned bench_jobs = 1;
    bool bench_strict = false;
    CLI::App* benchc = app.add_subcommand("bench", "sweep a grid of n values, aggregate amortized cost");
    benchc->add_option("--n", bench_ns, "vertex counts, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    benchc->add_option("--delta", bench_delta, "degree cap")->capture_default_str();
    benchc->add_option("--updates-per-n", bench_updates_per_n, "updates = this * n")
        ->capture_default_str();
    benchc->add_option("--model", bench_model, "stream model")->capture_default_str();
    benchc->add_option("--seeds", bench_seeds, "seeds per configuration")->capture_default_str();
    benchc->add_option("--seed", bench_seed_base, "first seed")->capture_default_str();
    benchc->add_option("--audit", bench_audit, "audit policy per run")->capture_default_str();
    benchc->add_option("--report", bench_report, "report format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    benchc->add_option("--jobs", bench_jobs, "worker threads (output is identical for any value)")
        ->capture_default_str();
    benchc->add_flag("--strict", bench_strict, "exit 1 if any run records a violation");
    benchc->add_option("--out", bench_out, "report path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            dyncol::Stream s = obtain_stream(gen_args);
            write_out(gen_out, dyncol::write_stream_text(s));
            return 0;
        }
        if (runc->parsed()) {
            dyncol::Stream s = obtain_stream(run_args);
            dyncol::RunOptions opt;
            opt.seed = run_args.seed;
            opt.audit = dyncol::AuditPolicy::parse(run_audit);
            opt.baseline = run_baseline;
            opt.skip_invalid = run_skip_invalid;
            opt.model_tag = run_args.in_path.empty() ? run_args.model : "file";
            dyncol::RunReport r = dyncol::run(s, opt);
            write_out(run_out, run_report == "json" ? dyncol::emit_json(r) : dyncol::emit_csv(r));
            return (run_strict && r.violation_total() != 0) ? 1 : 0;
        }
        if (verify->parsed()) {
            dyncol::Stream s = obtain_stream(verify_args);
            dyncol::RunOptions opt;
            opt.seed = verify_args.seed;
            opt.audit = dyncol::AuditPolicy::parse(verify_audit);
            opt.baseline = true;
            opt.model_tag = verify_args.in_path.empty() ? verify_args.model : "file";
            dyncol::RunReport r = dyncol::run(s, opt);
            print_verify_summary(r);
            return r.violation_total() == 0 ? 0 : 1;
        }
        // bench
        dyncol::BenchOptions opt;
        opt.ns = bench_ns;
        opt.delta = bench_delta;
        opt.updates_per_n = bench_updates_per_n;
        opt.model = dyncol::GenModel::parse(bench_model);
        opt.seeds = bench_seeds;
        opt.seed_base = bench_seed_base;
        opt.audit = dyncol::AuditPolicy::parse(bench_audit);
        opt.jobs = bench_jobs;
        dyncol::BenchResult b = dyncol::bench(opt);
        write_out(bench_out,
                  bench_report == "json" ? dyncol::emit_bench_json(b) : dyncol::emit_bench_csv(b));
        bool any_viol = false;
        for (const dyncol::RunReport& r : b.rows)
            any_viol = any_viol || r.violation_total() != 0;
        return (bench_strict && any_viol) ? 1 : 0;
    } catch (const dyncol::stream_parse_error& e) {
        std::fprintf(stderr, "stream error: %s\n", e.what());
        return 2;
    } catch (const dyncol::stream_apply_error& e) {
        std::fprintf(stderr, "stream rejected: %s\n", e.what());
        return 2;
    } catch (const dyncol::invalid_config& e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return 2;
    } catch (const dyncol::structural_corruption& e) {
        std::fprintf(stderr, "internal structure check failed: %s\n", e.what());
        return 1;
    }
}
