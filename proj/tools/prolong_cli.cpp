// prolong: decide solubility of polynomial PDE systems in commuting derivations.
//
// Exit status: 0 soluble / ok, 1 insoluble / failed check, 2 undecided,
// 64 usage, 65 malformed input, 66 unreadable file, 70 internal limit.

#include "prolong.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace prolong;

namespace {

constexpr int kUsage = 64, kDataErr = 65, kNoInput = 66, kSoftware = 70;

struct Failure {
    int code;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Failure{kNoInput, "cannot read " + path};
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SystemSpec load(const std::string& path) {
    std::string text = read_file(path);
    try {
        return parse_system(text);
    } catch (const ParseError& e) {
        throw Failure{kDataErr, path + ":" + e.what()};
    } catch (const SystemError& e) {
        throw Failure{kDataErr, path + ": " + e.what()};
    }
}

int exit_for(Verdict::Kind k) {
    switch (k) {
        case Verdict::Soluble: return 0;
        case Verdict::Insoluble: return 1;
        default: return 2;
    }
}

void print_pictures(const Tower& t, const SystemSpec& sys, unsigned h) {
    if (sys.m() != 2) return;
    for (unsigned k = 0; k < sys.n(); ++k) std::cout << sys.unknowns[k] << ":\n" << picture_text(render_triangle(t, k, h));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solubility of polynomial PDE systems in commuting derivations"};
    app.require_subcommand(1);

    std::string file, format = "json", variant = "thm1";
    unsigned max_height = 32, height = 0;
    unsigned bm = 0, bn = 0, br = 0;

    auto* check = app.add_subcommand("check", "decide solubility");
    check->add_option("file", file, "system file")->required();
    check->add_option("--max-height", max_height, "largest saturation height tried")->check(CLI::Range(1u, kMaxHeight));
    check->add_option("--variant", variant, "leader bound variant")->check(CLI::IsMember({"thm1", "thm2", "thm3"}));
    check->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));

    auto* sat = app.add_subcommand("saturate", "saturate to a fixed height");
    sat->add_option("file", file, "system file")->required();
    sat->add_option("--height", height, "target height")->required()->check(CLI::Range(0u, kMaxHeight));
    sat->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "text"}));

    auto* leaders = app.add_subcommand("leaders", "classify leaders of the decided presentation");
    leaders->add_option("file", file, "system file")->required();
    leaders->add_option("--max-height", max_height, "largest saturation height tried")->check(CLI::Range(1u, kMaxHeight));

    auto* bound = app.add_subcommand("bound", "chain-length bound t and height bound s = 2^t r");
    bound->add_option("--m", bm, "number of derivations")->required()->check(CLI::PositiveNumber);
    bound->add_option("--n", bn, "number of unknowns")->required()->check(CLI::PositiveNumber);
    bound->add_option("--r", br, "initial height")->required()->check(CLI::PositiveNumber);

    auto* forms = app.add_subcommand("forms", "exterior calculus helpers");
    forms->require_subcommand(1);
    auto* comm = forms->add_subcommand("commutation", "commutation system of the first-order reduction");
    comm->add_option("file", file, "system file")->required();

    std::string cert_file;
    auto* replay = app.add_subcommand("replay", "check a certificate");
    replay->add_option("file", cert_file, "certificate or report JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kUsage;
    }

    try {
        if (*check) {
            SystemSpec sys = load(file);
            DecideOptions opt;
            opt.max_height = max_height;
            opt.variant = variant_from_string(variant);
            Verdict v = decide(sys, opt);
            if (format == "json") {
                std::cout << verdict_report(v).dump(2) << "\n";
            } else {
                std::cout << explain(v).text();
                if (v.kind == Verdict::Soluble) print_pictures(v.sat.tower, sys, v.sat.height);
            }
            return exit_for(v.kind);
        }
        if (*sat) {
            SystemSpec sys = load(file);
            Saturation s = saturate(sys, height);
            if (format == "json") {
                std::cout << saturation_report(sys, s).dump(2) << "\n";
            } else {
                auto nm = sys.namer();
                for (auto& b : s.bindings) std::cout << "binding: " << b.relation.to_string(nm) << " = 0\n";
                if (s.ok) print_pictures(s.tower, sys, height);
                else std::cout << "contradiction: " << s.violation->residue.to_string() << " = 0\n";
            }
            return s.ok ? 0 : 1;
        }
        if (*leaders) {
            SystemSpec sys = load(file);
            DecideOptions opt;
            opt.max_height = max_height;
            Verdict v = decide(sys, opt);
            json out = verdict_report(v);
            std::cout << json{{"version", kReportVersion}, {"command", "leaders"}, {"verdict", out["verdict"]}, {"height", v.sat.height}, {"leaders", out["leaders"]}}.dump(2) << "\n";
            return exit_for(v.kind);
        }
        if (*bound) {
            SBound b = thm_s_bound(bm, bn, br);
            std::cout << json{{"version", kReportVersion}, {"command", "bound"}, {"m", bm}, {"n", bn}, {"r", br}, {"t", b.t.get_str()}, {"s", b.s.get_str()}}.dump(2) << "\n";
            return 0;
        }
        if (*comm) {
            SystemSpec sys = load(file);
            json rep = commutation_report(sys);
            std::cout << rep.dump(2) << "\n";
            return rep["consistent"].get<bool>() ? 0 : 1;
        }
        if (*replay) {
            json j;
            try {
                j = json::parse(read_file(cert_file));
            } catch (const json::parse_error& e) {
                throw Failure{kDataErr, cert_file + ": " + e.what()};
            }
            if (j.is_object() && j.contains("certificate")) j = j["certificate"];
            ReplayResult r = replay_certificate(j);
            std::cout << json{{"version", kReportVersion}, {"command", "replay"}, {"ok", r.ok}, {"reason", r.reason}}.dump(2) << "\n";
            return r.ok ? 0 : 1;
        }
    } catch (const Failure& f) {
        std::cerr << "prolong: " << f.message << "\n";
        return f.code;
    } catch (const BoundOverflow& e) {
        std::cerr << "prolong: " << e.what() << "\n";
        return kSoftware;
    } catch (const Unsupported& e) {
        std::cerr << "prolong: unsupported: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "prolong: " << e.what() << "\n";
        return kSoftware;
    }
    return kUsage;
}
