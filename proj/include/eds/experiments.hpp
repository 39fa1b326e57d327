#pragma once

#include "eds/curve.hpp"
#include "eds/dirichlet.hpp"
#include "eds/factor.hpp"
#include "eds/predicates.hpp"
#include "eds/sequence.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace eds {

// Membership test applied at each multiple in the counting experiments.
enum class PredicateKind { YTwoSquares, XTwoSquares, CharCriterion };

PredicateKind parse_predicate(const std::string& name);
std::string predicate_name(PredicateKind k);

// Parameters for every experiment runner; each runner reads the fields it
// needs and ignores the rest.  Defaults are the split-multiplicative pair
// used throughout the tests.  parse/serialize round-trip exactly, and all
// runs are deterministic given the same config (the seed is echoed into
// reports for provenance; no stage draws randomness at run time).
struct ExperimentConfig {
    CurveQ curve = new_curve(0, 0, 1, -1, 0);
    PointQ point = PointQ::make_affine(mpq_class(0), mpq_class(0));
    std::string predicate = "y_two_squares";  // y_two_squares|x_two_squares|char_criterion
    std::string character = "kronecker:-4";   // used by char_criterion / star2
    std::vector<long> B_list = {25, 50, 100};          // count: index bounds
    std::vector<double> H_list = {1.0, 10.0, 100.0};   // height-count: height bounds
    uint64_t D = 50;            // census: prime moduli q <= D
    uint64_t alpha_max = 2000;  // census / star2: witness scan limit
    uint64_t x = 20000;         // chebotarev / equidist: prime bound
    std::vector<uint64_t> ells = {3, 5, 7};    // chebotarev: tested divisors
    std::vector<uint64_t> moduli = {4, 7, 28};  // period: moduli to certify
    uint64_t res_s = 0;         // equidist: residue class s mod t (t=1: all)
    uint64_t res_t = 1;
    double win_a = 0.0;         // equidist: window [a, b) for {l beta / 2}
    double win_b = 0.5;
    long window = 60;           // sign-data fit window
    unsigned digits = 64;       // sign-data fit precision
    bool even_only = false;     // count/height-count: restrict to even n
    bool identity_component = false;  // restrict to multiples in E(R)^0
    FactorBudget budget;
    std::optional<std::vector<uint64_t>> S_override;  // excluded primes
    uint64_t seed = 0;
    int threads = 0;   // 0: all available; 1: serial reference kernels
    bool timestamp = true;
    std::string csv_out;   // empty: stdout
    std::string json_out;  // empty: not written

    bool operator==(const ExperimentConfig&) const = default;
};

// Key-value config text ("key = value" lines, '#' comments).  Unknown keys
// are a ConfigError; serialize_config(parse_config_text(s)) is stable.
ExperimentConfig parse_config_text(const std::string& text);
std::string serialize_config(const ExperimentConfig& cfg);
// Apply one key/value pair (shared by the file parser and CLI overrides).
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Tabular result of one experiment.  All cells are preformatted strings so
// the CSV and JSON serializations carry identical data by construction.
struct ExperimentReport {
    std::string experiment;
    std::vector<std::pair<std::string, std::string>> params;       // echo
    std::vector<std::pair<std::string, std::string>> environment;  // library metadata
    std::vector<std::string> notes;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    bool ok = true;  // false when a reproduction item failed
};

// RFC-4180-style quoting; metadata as leading "# key,value" lines.  The
// timestamp line is omitted when with_timestamp is false so that repeated
// runs are byte-identical.
std::string to_csv(const ExperimentReport& rep, bool with_timestamp = true);
// Same data as JSON with a versioned "schema" field.
std::string to_json_text(const ExperimentReport& rep, bool with_timestamp = true);

// --- counting kernels -----------------------------------------------------
// The scans over independent indices exist in two variants: a serial
// reference implementation and an OpenMP one.  Both fill the result slot
// for indices[i] at position i, so outputs are identical and independent of
// scheduling; tests assert equality and tools/bench_kernels compares times.

enum class Bucket { True, False, Unknown };

std::vector<Bucket> predicate_scan_serial(EdsSequence& seq, PredicateKind kind,
                                          const DirichletCharacter* chi,
                                          const std::set<mpz_class>& S,
                                          const std::vector<long>& indices,
                                          const FactorBudget& budget);
std::vector<Bucket> predicate_scan_parallel(EdsSequence& seq, PredicateKind kind,
                                            const DirichletCharacter* chi,
                                            const std::set<mpz_class>& S,
                                            const std::vector<long>& indices,
                                            const FactorBudget& budget, int threads);

// #E(F_p) for each listed good prime.
std::vector<uint64_t> point_count_scan_serial(const CurveQ& c, const std::vector<uint64_t>& primes);
std::vector<uint64_t> point_count_scan_parallel(const CurveQ& c, const std::vector<uint64_t>& primes,
                                                int threads);

// --- experiment runners ---------------------------------------------------

// Three-bucket counts of {n : |n| <= B, predicate holds at nP} for each B,
// with a clearly non-normative reference curve B/(log B)^(1/(2 phi(pi))).
ExperimentReport count_predicate(const ExperimentConfig& cfg);

// Same counts with height thresholds translated to index ranges via the
// canonical height (|n| <= sqrt(H / h(P))).
ExperimentReport height_count(const ExperimentConfig& cfg);

// For every even non-principal character of prime modulus q <= D: scan
// alpha <= alpha_max coprime to the period of beta mod q for a value with
// chi(|beta_alpha|) outside {0, 1}; report satisfied / unsatisfied /
// scan-exhausted per modulus and cumulatively.
ExperimentReport character_census(const ExperimentConfig& cfg);

// Proportion of good primes q <= x with l | #E(F_q), against the reference
// value l/(l^2-1).
ExperimentReport chebotarev_density(const ExperimentConfig& cfg);

// Fits sign data for the configured pair and counts primes l <= x in the
// residue class s mod t with fractional part {l beta / 2} in [a, b).
ExperimentReport equidistribution_report(const ExperimentConfig& cfg);

// Certified minimal periods of beta mod N for each configured modulus.
ExperimentReport period_report(const ExperimentConfig& cfg);

// Witness search report for the configured character.
ExperimentReport star2_report(const ExperimentConfig& cfg);

// --- reproduction of the worked examples ----------------------------------

struct ReproduceOptions {
    // nullopt: run everything; empty list: run nothing; otherwise exact ids.
    std::optional<std::vector<std::string>> select;
    // Fault injection for testing the checker itself: pretend the cached
    // beta value at this index is off by one.
    long tamper_beta_index = 0;
};

// Re-derives every externally quoted value (sequence tables, periods,
// witness indices, local valuations, reduction counts, ...) and reports
// pass/fail per item; ok is false if any item failed.
ExperimentReport reproduce_examples(const ReproduceOptions& opts = {});

}  // namespace eds
