#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "tqp/tqp.hpp"

namespace {

enum Exit : int { kOk = 0, kInconsistent = 1, kInvalidInstance = 2, kResourceLimit = 3, kUsage = 4 };

struct Common {
    std::string path;
    std::string format = "text";
    std::uint64_t factor_limit = tqp::FactorOptions{}.rho_iterations;
    std::uint64_t enum_budget = tqp::EnumerationOptions{}.budget;
    unsigned threads = 1;
};

tqp::ClassifierConfig config(const Common& c) {
    tqp::ClassifierConfig cfg;
    cfg.factor.rho_iterations = c.factor_limit;
    cfg.enumeration.budget = c.enum_budget;
    cfg.enumeration.threads = c.threads;
    return cfg;
}

void emit(const tqp::io::Report& r, const Common& c) {
    std::cout << (c.format == "machine" ? tqp::io::render_machine(r) : tqp::io::render_text(r));
}

int exit_for(tqp::ErrorKind k) {
    switch (k) {
        case tqp::ErrorKind::AssumptionViolated:
        case tqp::ErrorKind::OutOfScope:
        case tqp::ErrorKind::NonClassicForm:
        case tqp::ErrorKind::NotPositiveDefinite: return kInvalidInstance;
        case tqp::ErrorKind::FactorizationLimit:
        case tqp::ErrorKind::EnumerationBudgetExceeded:
        case tqp::ErrorKind::GiveUp: return kResourceLimit;
        case tqp::ErrorKind::Parse: return kUsage;
        default: return kInvalidInstance;
    }
}

// Parses and normalizes; on failure the report is emitted and the exit code returned.
struct Loaded {
    tqp::io::Report report;
    std::optional<tqp::CosetInstance> instance;
    int exit_code = kOk;
};

Loaded load(const std::string& command, const Common& c) {
    Loaded out;
    const auto desc = tqp::io::read_instance_file(c.path);  // Parse errors propagate to main
    out.report = tqp::io::make_report(command, c.path, desc);
    try {
        out.instance = tqp::normalize(desc, config(c).factor);
        tqp::io::attach_instance(out.report, *out.instance);
    } catch (const tqp::Error& e) {
        tqp::io::attach_error(out.report, e);
        out.exit_code = exit_for(e.kind());
    }
    return out;
}

int cmd_classify(const Common& c) {
    auto l = load("classify", c);
    if (l.instance) {
        const auto v = tqp::evaluate(*l.instance, config(c));
        tqp::io::attach_verdict(l.report, v);
        if (v.status == tqp::Status::Inconclusive) l.exit_code = kResourceLimit;
    }
    emit(l.report, c);
    return l.exit_code;
}

int cmd_enumerate(const Common& c, std::uint64_t bound) {
    auto l = load("enumerate", c);
    if (l.instance) {
        const auto s = tqp::spectrum(*l.instance, bound, config(c).enumeration);
        tqp::io::attach_spectrum(l.report, s);
        const auto v = tqp::evaluate(*l.instance, config(c));
        tqp::io::attach_verdict(l.report, v);
    }
    emit(l.report, c);
    return l.exit_code;
}

int cmd_verify(const Common& c, const tqp::VerifyOptions& vo, const std::string& forced) {
    auto l = load("verify", c);
    if (l.instance) {
        auto v = tqp::evaluate(*l.instance, config(c));
        if (!forced.empty()) {
            v.status = *tqp::status_from_string(forced);
            v.clause = "forced";
        }
        tqp::io::attach_verdict(l.report, v);
        if (v.status == tqp::Status::Inconclusive) {
            l.exit_code = kResourceLimit;
        } else {
            auto opts = vo;
            opts.enumeration = config(c).enumeration;
            const auto r = tqp::verify(*l.instance, v, opts);
            tqp::io::attach_verification(l.report, r);
            l.exit_code = r.consistent ? kOk : kInconsistent;
        }
    }
    emit(l.report, c);
    return l.exit_code;
}

int cmd_generate(const tqp::GeneratorOptions& go, const std::string& dir) {
    const auto corpus = tqp::generate_instances(go);
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "instance_%04zu.txt", i + 1);
        const auto path = std::filesystem::path(dir) / name;
        std::ofstream f(path);
        if (!f) tqp::fail(tqp::ErrorKind::InvalidArgument, "cannot write " + path.string());
        f << tqp::io::write_instance(tqp::LatticeInput{corpus[i].gram, corpus[i].w, 0},
                                     "generated: seed " + std::to_string(go.seed) + ", entry bound " +
                                         std::to_string(go.entry_bound) + ", index " + std::to_string(i + 1));
    }
    std::cout << "wrote " << corpus.size() << " instances to " << dir << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Classify shifted ternary lattice cosets by the integers they represent"};
    app.require_subcommand(1);

    auto add_common = [](CLI::App* sub, Common& c) {
        sub->add_option("file", c.path, "instance file")->required();
        sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "machine"}));
        sub->add_option("--factor-limit", c.factor_limit, "Pollard rho iteration cap");
        sub->add_option("--enum-budget", c.enum_budget, "maximum lattice points per enumeration");
        sub->add_option("--threads", c.threads, "enumeration threads")->check(CLI::Range(1u, 256u));
    };

    Common classify_c, enumerate_c, verify_c;
    auto* classify = app.add_subcommand("classify", "decide almost-universality");
    add_common(classify, classify_c);

    std::uint64_t enum_bound = 20'000;
    auto* enumerate = app.add_subcommand("enumerate", "list exceptions up to a bound");
    add_common(enumerate, enumerate_c);
    enumerate->add_option("--bound", enum_bound, "enumeration bound B");

    tqp::VerifyOptions vo;
    std::string forced;
    auto* verify = app.add_subcommand("verify", "cross-check the verdict against the spectrum");
    add_common(verify, verify_c);
    verify->add_option("--bound", vo.bound, "enumeration bound B");
    verify->add_option("--escalate", vo.escalated_bound, "bound for the single retry (default 4B)");
    verify->add_option("--qlimit", vo.q_limit, "prime limit for predicted misses");
    verify->add_option("--force-status", forced)
        ->check(CLI::IsMember({"AlmostUniversal", "NotAlmostUniversal"}))
        ->group("");  // fault injection for testing the harness

    tqp::GeneratorOptions go;
    std::string out_dir;
    auto* generate = app.add_subcommand("generate", "write a random corpus of valid instances");
    generate->add_option("--count", go.count, "number of instances");
    generate->add_option("--seed", go.seed, "random seed");
    generate->add_option("--entry-bound", go.entry_bound, "bound E on Gram entries")->check(CLI::PositiveNumber);
    generate->add_option("--max-rejections", go.max_rejections, "rejected samples before giving up");
    generate->add_option("--out", out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*classify) return cmd_classify(classify_c);
        if (*enumerate) {
            if (enum_bound == 0) {
                std::cerr << "error: --bound must be positive\n";
                return kUsage;
            }
            return cmd_enumerate(enumerate_c, enum_bound);
        }
        if (*verify) {
            if (vo.bound == 0) {
                std::cerr << "error: --bound must be positive\n";
                return kUsage;
            }
            return cmd_verify(verify_c, vo, forced);
        }
        if (*generate) return cmd_generate(go, out_dir);
    } catch (const tqp::Error& e) {
        std::cerr << "error: " << tqp::to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_for(e.kind());
    }
    return kUsage;
}
