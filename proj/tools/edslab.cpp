// edslab: command-line driver for the experiment runners.
//
// Every subcommand reads an optional key=value config file first, then
// applies flag overrides, runs one experiment, and emits the report as CSV
// (stdout or --csv FILE) and optionally JSON (--json FILE).
//
// Exit codes: 0 success, 1 usage or config error, 2 assertion or failed
// reproduction, 3 factoring/search budget exceeded.

#include "eds/errors.hpp"
#include "eds/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace {

struct PendingConfig {
    std::string config_path;
    // Flag overrides in command-line order; keys are the config-file keys.
    std::vector<std::pair<std::string, std::string>> overrides;
};

eds::ExperimentConfig resolve_config(const PendingConfig& pending) {
    eds::ExperimentConfig cfg;
    if (!pending.config_path.empty()) {
        std::ifstream f(pending.config_path);
        if (!f) throw eds::ConfigError("cannot read config file: " + pending.config_path);
        std::stringstream ss;
        ss << f.rdbuf();
        cfg = eds::parse_config_text(ss.str());
    }
    for (const auto& [key, value] : pending.overrides) eds::apply_config_entry(cfg, key, value);
    return cfg;
}

// Writes the report everywhere the config asks for; returns the exit code.
int emit_report(const eds::ExperimentConfig& cfg, const eds::ExperimentReport& rep) {
    const std::string csv = eds::to_csv(rep, cfg.timestamp);
    if (cfg.csv_out.empty()) {
        std::cout << csv;
    } else {
        std::ofstream f(cfg.csv_out, std::ios::binary);
        if (!f) throw eds::EdsError("cannot open CSV output file: " + cfg.csv_out);
        f << csv;
    }
    if (!cfg.json_out.empty()) {
        std::ofstream f(cfg.json_out, std::ios::binary);
        if (!f) throw eds::EdsError("cannot open JSON output file: " + cfg.json_out);
        f << eds::to_json_text(rep, cfg.timestamp);
    }
    return rep.ok ? 0 : 2;
}

std::vector<std::string> split_ids(const std::string& csv) {
    std::vector<std::string> out;
    std::string piece;
    std::stringstream ss(csv);
    while (std::getline(ss, piece, ',')) {
        const auto from = piece.find_first_not_of(" \t");
        if (from == std::string::npos) continue;
        const auto to = piece.find_last_not_of(" \t");
        out.push_back(piece.substr(from, to - from + 1));
    }
    return out;
}

// Registers --key flags that funnel into apply_config_entry overrides.
class FlagSet {
public:
    FlagSet(CLI::App* cmd, PendingConfig& pending) : cmd_(cmd), pending_(&pending) {
        cmd->add_option("--config", pending.config_path, "key=value config file read before flag overrides")
            ->option_text("FILE");
    }

    FlagSet& value(const std::string& flag, const std::string& key, const std::string& desc,
                   const std::string& placeholder = "VAL") {
        auto* pending = pending_;
        cmd_->add_option_function<std::string>(
                flag, [pending, key](const std::string& v) { pending->overrides.emplace_back(key, v); },
                desc)
            ->option_text(placeholder);
        return *this;
    }

    FlagSet& toggle(const std::string& flag, const std::string& key, const std::string& stored,
                    const std::string& desc) {
        auto* pending = pending_;
        cmd_->add_flag_callback(
            flag, [pending, key, stored]() { pending->overrides.emplace_back(key, stored); }, desc);
        return *this;
    }

    FlagSet& curve_point() {
        return value("--curve", "curve", "Weierstrass coefficients a1,a2,a3,a4,a6", "A1,A2,A3,A4,A6")
            .value("--point", "point", "rational point \"x,y\" (or O)", "X,Y");
    }

    FlagSet& budget() {
        return value("--trial-bound", "trial_bound", "trial-division prime bound", "N")
            .value("--rho-iters", "rho_iters", "Brent-rho iterations per attempt", "N")
            .value("--rho-attempts", "rho_attempts", "distinct rho polynomials tried", "N")
            .value("--pm1-bound", "pm1_bound", "Pollard p-1 stage-1 bound", "N");
    }

    FlagSet& output() {
        return value("--seed", "seed", "seed echoed into the report (runs are deterministic)", "N")
            .value("--threads", "threads", "worker threads (0: all available, 1: serial kernels)", "N")
            .value("--csv", "csv_out", "write CSV here instead of stdout", "FILE")
            .value("--json", "json_out", "also write the report as JSON", "FILE")
            .toggle("--no-timestamp", "timestamp", "false",
                    "omit the timestamp header so repeated runs are byte-identical");
    }

private:
    CLI::App* cmd_;
    PendingConfig* pending_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"experiment driver for signed elliptic divisibility sequences"};
    app.require_subcommand(1);

    PendingConfig pc_count, pc_height, pc_census, pc_cheb, pc_equi, pc_period, pc_star2, pc_repro;

    auto* cmd_count =
        app.add_subcommand("count", "bucketed counts of indices |n| <= B where the predicate holds at nP");
    FlagSet(cmd_count, pc_count)
        .curve_point()
        .value("--predicate", "predicate", "y_two_squares | x_two_squares | char_criterion")
        .value("--character", "character", "kronecker:D or prime:q:j (char_criterion only)", "SPEC")
        .value("--B", "B_list", "ascending index bounds", "B1,B2,...")
        .value("--S", "S", "excluded primes for the character criterion (empty: default set)", "P1,P2,...")
        .toggle("--even-only", "even_only", "true", "restrict the scan to even indices")
        .toggle("--identity-component", "identity_component", "true",
                "restrict to multiples on the identity component of E(R)")
        .budget()
        .output();

    auto* cmd_height =
        app.add_subcommand("height-count", "counts with canonical-height thresholds instead of index bounds");
    FlagSet(cmd_height, pc_height)
        .curve_point()
        .value("--predicate", "predicate", "y_two_squares | x_two_squares | char_criterion")
        .value("--character", "character", "kronecker:D or prime:q:j (char_criterion only)", "SPEC")
        .value("--H", "H_list", "ascending canonical-height bounds", "H1,H2,...")
        .value("--S", "S", "excluded primes for the character criterion (empty: default set)", "P1,P2,...")
        .toggle("--even-only", "even_only", "true", "restrict the scan to even indices")
        .toggle("--identity-component", "identity_component", "true",
                "restrict to multiples on the identity component of E(R)")
        .budget()
        .output();

    auto* cmd_census =
        app.add_subcommand("census", "even-character census over prime moduli q <= D");
    FlagSet(cmd_census, pc_census)
        .curve_point()
        .value("--D", "D", "largest prime modulus scanned", "N")
        .value("--alpha-max", "alpha_max", "witness scan limit per character", "N")
        .budget()
        .output();

    auto* cmd_cheb =
        app.add_subcommand("chebotarev", "density of good primes p <= x with ell | #E(F_p)");
    FlagSet(cmd_cheb, pc_cheb)
        .curve_point()
        .value("--x", "x", "prime bound", "N")
        .value("--ell", "ells", "divisors tested (subset of 3,5,7)", "L1,L2,...")
        .output();

    auto* cmd_equi = app.add_subcommand(
        "equidist", "fractional-part statistics of the fitted sign-law slope over primes");
    FlagSet(cmd_equi, pc_equi)
        .curve_point()
        .value("--x", "x", "prime bound", "N")
        .value("--s", "s", "residue class s mod t (t=1: all primes)", "N")
        .value("--t", "t", "residue modulus", "N")
        .value("--a", "a", "window start in [0,1)", "R")
        .value("--b", "b", "window end in (a,1]", "R")
        .value("--window", "window", "sign-data fit window", "N")
        .value("--digits", "digits", "fit precision in decimal digits", "N")
        .output();

    auto* cmd_period =
        app.add_subcommand("period", "certified minimal periods of the sequence modulo fixed moduli");
    FlagSet(cmd_period, pc_period)
        .curve_point()
        .value("--moduli", "moduli", "moduli to certify", "N1,N2,...")
        .output();

    auto* cmd_star2 = app.add_subcommand(
        "star2", "witness search: a coprime index where the character value leaves {0,1}");
    FlagSet(cmd_star2, pc_star2)
        .curve_point()
        .value("--character", "character", "kronecker:D or prime:q:j", "SPEC")
        .value("--alpha-max", "alpha_max", "witness scan limit", "N")
        .output();

    auto* cmd_repro = app.add_subcommand(
        "reproduce", "re-derive the recorded example values and report pass/fail per item");
    std::optional<std::string> select_arg;
    long tamper_index = 0;
    FlagSet(cmd_repro, pc_repro).output();
    cmd_repro
        ->add_option("--select", select_arg,
                     "comma-separated item ids to run (empty string: run nothing)")
        ->option_text("ID1,ID2,...");
    cmd_repro
        ->add_option("--tamper", tamper_index,
                     "fault injection: offset the cached sequence value at this index by one")
        ->option_text("N");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help and friends
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (cmd_count->parsed())
            return emit_report(resolve_config(pc_count), eds::count_predicate(resolve_config(pc_count)));
        if (cmd_height->parsed())
            return emit_report(resolve_config(pc_height), eds::height_count(resolve_config(pc_height)));
        if (cmd_census->parsed())
            return emit_report(resolve_config(pc_census), eds::character_census(resolve_config(pc_census)));
        if (cmd_cheb->parsed())
            return emit_report(resolve_config(pc_cheb), eds::chebotarev_density(resolve_config(pc_cheb)));
        if (cmd_equi->parsed())
            return emit_report(resolve_config(pc_equi),
                               eds::equidistribution_report(resolve_config(pc_equi)));
        if (cmd_period->parsed())
            return emit_report(resolve_config(pc_period), eds::period_report(resolve_config(pc_period)));
        if (cmd_star2->parsed())
            return emit_report(resolve_config(pc_star2), eds::star2_report(resolve_config(pc_star2)));
        if (cmd_repro->parsed()) {
            eds::ReproduceOptions opts;
            if (select_arg) opts.select = split_ids(*select_arg);
            opts.tamper_beta_index = tamper_index;
            return emit_report(resolve_config(pc_repro), eds::reproduce_examples(opts));
        }
        return 1;  // unreachable with require_subcommand(1)
    } catch (const eds::ConfigError& e) {
        std::cerr << "edslab: " << e.what() << "\n";
        return 1;
    } catch (const eds::FactoringBudgetExceeded& e) {
        std::cerr << "edslab: " << e.what() << "\n";
        return 3;
    } catch (const eds::BoundExceedsCap& e) {
        std::cerr << "edslab: " << e.what() << "\n";
        return 3;
    } catch (const eds::EdsError& e) {
        std::cerr << "edslab: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "edslab: " << e.what() << "\n";
        return 2;
    }
}
