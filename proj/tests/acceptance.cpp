// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Reference values are recomputed here without calling the routine under test.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cantor/cli.hpp"
#include "support.hpp"

using namespace cantor;
using testing_support::exact_measures;

namespace {

// Pinned limits.
constexpr double kAdditivitySeconds = 10.0;
constexpr double kSettlingSeconds = 10.0;
constexpr unsigned kAdditivityDepth = 12;
constexpr unsigned kMetricPrecision = 20;
constexpr unsigned kMetricTripleDepth = 6;
constexpr unsigned kRationalizeDepth = 10;
constexpr unsigned kTransportLevels = 8;
constexpr unsigned kTransportSourceDepth = 17;
constexpr unsigned kImageDepth = 4;
constexpr unsigned kNcrLevels = 6;

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            detail = what;
        }
        pass = pass && ok;
    }
};

BitString bs(const char* s) { return BitString::parse(s); }

std::string fixture(const std::string& name) { return std::string(CANTOR_FIXTURES) + "/" + name; }

Rational pow2(long e) { return Rational::pow2(e); }

bool is_dyadic_value(const Rational& r) {
    const mpz_class d = r.denominator();
    return (d & (d - 1)) == 0;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
    std::ostringstream out;
    out.precision(2);
    out << std::fixed << s << " s";
    return out.str();
}

// ---- criteria ---------------------------------------------------------------

Verdict ac1_additivity() {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t checked = 0;
    for (const auto& [name, mu] : exact_measures()) {
        v.require(mu.value(BitString{}) == Rational(1), name + ": root value is not 1");
        for (unsigned len = 0; len < kAdditivityDepth; ++len) {
            for (const auto& s : strings_of_length(len)) {
                ++checked;
                if (mu.value(s) != mu.value(s.child(0)) + mu.value(s.child(1))) {
                    v.require(false, name + ": not additive at " + s.display());
                }
            }
        }
    }
    const double elapsed = seconds_since(t0);
    v.require(elapsed < kAdditivitySeconds, "took " + fmt_seconds(elapsed));
    if (v.pass) {
        v.detail = std::to_string(exact_measures().size()) + " measures, " + std::to_string(checked) +
                   " nodes to depth " + std::to_string(kAdditivityDepth) + " in " + fmt_seconds(elapsed);
    }
    return v;
}

Verdict ac2_metric() {
    Verdict v;
    const Rational d = metric_dP(lebesgue(), dirac(EventuallyPeriodic::parse("0*")), kMetricPrecision);
    v.require((d - Rational(2, 3)).abs() <= pow2(-static_cast<long>(kMetricPrecision)),
              "d_P(L, dirac 0*) = " + d.str());

    // d_n straight from the definition: half the level-n L1 difference.
    const auto measures = exact_measures();
    const std::size_t k = measures.size();
    std::vector<std::vector<std::vector<Rational>>> table(
        kMetricTripleDepth + 1, std::vector<std::vector<Rational>>(k, std::vector<Rational>(k)));
    for (unsigned n = 0; n <= kMetricTripleDepth; ++n) {
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
                Rational sum(0);
                for (const auto& s : strings_of_length(n)) {
                    sum += (measures[a].second.value(s) - measures[b].second.value(s)).abs();
                }
                table[n][a][b] = sum / Rational(2);
                v.require(metric_dn(measures[a].second, measures[b].second, n) == table[n][a][b],
                          "d_" + std::to_string(n) + " differs from the definition");
            }
        }
    }
    for (unsigned n = 0; n <= kMetricTripleDepth; ++n) {
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
                v.require(table[n][a][b] == table[n][b][a], "asymmetric");
                for (std::size_t c = 0; c < k; ++c) {
                    v.require(table[n][a][c] <= table[n][a][b] + table[n][b][c],
                              "triangle fails for " + measures[a].first + ", " + measures[b].first + ", " +
                                  measures[c].first + " at n=" + std::to_string(n));
                }
            }
        }
    }
    if (v.pass) {
        v.detail = "d_P = " + d.str() + ", " + std::to_string(k * k * k) + " triples for n <= " +
                   std::to_string(kMetricTripleDepth);
    }
    return v;
}

Verdict ac3_atoms() {
    Verdict v;
    const auto mu = mixture({{Rational(1, 2), dirac(EventuallyPeriodic::parse("0*"))}, {Rational(1, 2), lebesgue()}});
    const Rational c(1, 4);
    const unsigned depth = 10;
    const auto tree = atom_tree(mu, c, depth);

    // Membership rule checked on every string of every level.
    std::vector<std::size_t> width(depth + 1, 0);
    for (unsigned len = 0; len <= depth; ++len) {
        for (const auto& s : strings_of_length(len)) {
            bool member = true;
            for (unsigned j = 0; j <= len; ++j) {
                member = member && mu.value(s.prefix(j)) >= c - pow2(-static_cast<long>(j));
            }
            v.require(member == tree.nodes.contains(s), "node set differs at " + s.display());
            width[len] += member;
        }
    }
    v.require(tree.level(depth) == std::vector<BitString>{BitString::zeros(depth)}, "level 10 is not {0^10}");
    for (unsigned m = 0; m <= depth; ++m) {
        if (c > pow2(-static_cast<long>(m))) {
            v.require(Rational(static_cast<long>(width[m])) <= Rational(1) / (c - pow2(-static_cast<long>(m))),
                      "width bound fails at level " + std::to_string(m));
        }
    }
    const auto report = isolated_paths(tree);
    v.require(report.paths.size() == 1 && report.paths[0].path == BitString::zeros(depth) && !report.inconclusive,
              "0^10 not certified isolated");
    if (v.pass) {
        v.detail = "level 10 = {0000000000}, isolated from level " + std::to_string(report.paths[0].certified_from);
    }
    return v;
}

Verdict ac4_rationalize() {
    Verdict v;
    const CylinderAssignment thirds(1, ExtensionPolicy::uniform, {Rational(1), Rational(1, 3), Rational(2, 3)});
    auto no_11 = [](const BitString& s) { return s.str().find("11") == std::string::npos; };
    auto full = [](const BitString&) { return true; };
    const std::vector<std::pair<std::string, MeasureOracle>> inputs{
        {"bernoulli 1/4", bernoulli(Dyadic::parse("1/4"))},
        {"(1/3, 2/3)", thirds.to_oracle()},
        {"tree no 11", tree_uniform(no_11, 6)},
        {"tree full", tree_uniform(full, 6)},
    };
    for (const auto& [name, mu] : inputs) {
        const auto nu = rationalize(mu, kRationalizeDepth);
        for (unsigned len = 0; len <= kRationalizeDepth; ++len) {
            for (const auto& s : strings_of_length(len)) {
                const Rational& x = nu.at(s);
                v.require(is_dyadic_value(x), name + ": not dyadic at " + s.display());
                v.require(mu.value(s) < Rational(2) * x, name + ": mu >= 2 nu at " + s.display());
                if (len < kRationalizeDepth) {
                    v.require(x == nu.at(s.child(0)) + nu.at(s.child(1)), name + ": not additive at " + s.display());
                }
            }
        }
        v.require(nu.at(BitString{}) == Rational(1), name + ": root is not 1");
    }
    const auto worked = rationalize(thirds.to_oracle(), 1);
    const bool example = worked.at(bs("0")) == Rational(3, 8) && worked.at(bs("1")) == Rational(5, 8);
    v.require(example, "properties hold on all inputs; worked example gives nu(0)=" + worked.at(bs("0")).str() +
                           ", nu(1)=" + worked.at(bs("1")).str() + ", expected 3/8, 5/8");
    if (v.pass) {
        v.detail = "4 inputs to depth " + std::to_string(kRationalizeDepth) + ", worked example 3/8, 5/8";
    }
    return v;
}

/// Image of ν under φ at each level, accumulated over the use-length inputs.
std::vector<std::map<BitString, Rational>> level_images(const MeasureOracle& nu, const MonotoneFunctional& phi) {
    std::vector<std::map<BitString, Rational>> out(phi.depth() + 1);
    out[0][BitString{}] = Rational(1);
    for (unsigned n = 1; n <= phi.depth(); ++n) {
        const unsigned u = phi.use(n);
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << u); ++i) {
            const BitString x = BitString::from_index(i, u);
            out[n][phi.table(x).prefix(n)] += nu.value(x);
        }
    }
    return out;
}

Verdict ac5_transport() {
    Verdict v;
    const std::vector<std::pair<std::string, CylinderAssignment>> sources{
        {"lebesgue", CylinderAssignment::truncate(lebesgue(), kTransportLevels + 2)},
        {"rationalized bernoulli 1/4", rationalize(bernoulli(Dyadic::parse("1/4")), kTransportSourceDepth)},
    };
    std::string summary;
    for (const auto& [name, nu] : sources) {
        const auto phi = transport_map(nu, kTransportLevels);
        const auto oracle = nu.to_oracle();
        const auto images = level_images(oracle, phi);
        const auto img = image_measure(oracle, phi, kTransportLevels);
        Rational worst(0);
        for (unsigned n = 0; n <= kTransportLevels; ++n) {
            const Rational l = pow2(-static_cast<long>(n));
            v.require(images[n].size() == (std::size_t{1} << n), name + ": level " + std::to_string(n) + " not onto");
            BitString previous;
            for (std::uint64_t i = 0; n > 0 && i < (std::uint64_t{1} << phi.use(n)); ++i) {
                const BitString out = phi.table(BitString::from_index(i, phi.use(n))).prefix(n);
                v.require(i == 0 || previous.index() <= out.index(),
                          name + ": level " + std::to_string(n) + " not order-preserving");
                previous = out;
            }
            for (const auto& tau : strings_of_length(n)) {
                const auto it = images[n].find(tau);
                const Rational value = it == images[n].end() ? Rational(0) : it->second;
                v.require(img.at(tau) == value, name + ": image_measure disagrees at " + tau.display());
                const Rational gap = (value - l).abs();
                v.require(gap <= l, name + ": |image - L| > L at " + tau.display());
                if (gap / l > worst) {
                    worst = gap / l;
                }
            }
        }
        summary += (summary.empty() ? "" : "; ") + name + " worst |img-L|/L " + worst.str();
    }
    if (v.pass) {
        v.detail = summary;
    }
    return v;
}

Verdict ac6_image() {
    Verdict v;
    const std::vector<std::pair<std::string, MonotoneFunctional>> fixtures{
        {"identity", functionals::identity(kImageDepth)},
        {"pairwise-xor", functionals::pairwise_xor(kImageDepth)},
        {"constant-0", functionals::constant_zero(kImageDepth)},
    };
    std::size_t compared = 0;
    for (const auto& [fname, phi] : fixtures) {
        for (const auto& [mname, mu] : exact_measures()) {
            for (unsigned d = 0; d <= kImageDepth; ++d) {
                const auto img = image_measure(mu, phi, d);
                for (unsigned len = 0; len <= d; ++len) {
                    for (const auto& tau : strings_of_length(len)) {
                        ++compared;
                        v.require(img.at(tau) == testing_support::brute_image_value(mu, phi, tau),
                                  fname + " on " + mname + " differs at " + tau.display());
                    }
                }
            }
        }
    }
    if (v.pass) {
        v.detail = std::to_string(compared) + " cylinder values";
    }
    return v;
}

Verdict ac7_constraints() {
    Verdict v;
    const auto id = build_constraints(functionals::identity(4), functionals::identity(4), 4);
    const auto leb = constraint_measure(id);
    for (unsigned len = 0; len <= 4; ++len) {
        for (const auto& s : strings_of_length(len)) {
            v.require(leb.at(s) == pow2(-static_cast<long>(len)), "identity pair not Lebesgue at " + s.display());
        }
    }
    const auto cs = build_constraints(functionals::drop_odd_bits(4), functionals::double_each_bit(4), 4);
    const auto mu = constraint_measure(cs);
    for (const auto& [sigma, r] : cs.records) {
        v.require(r.lower <= mu.at(sigma) && mu.at(sigma) <= r.upper, "record violated at " + sigma.display());
        v.require(mu.at(sigma) <= pow2(-static_cast<long>(sigma.size())), "mu > 2^-|s| at " + sigma.display());
    }

    ConstraintSystem bad;
    bad.depth = 1;
    bad.records.emplace(bs("0"), ConstraintRecord{bs("0"), {}, Rational(3, 4), Rational(1)});
    bad.records.emplace(bs("1"), ConstraintRecord{bs("1"), {}, Rational(1, 2), Rational(1)});
    std::string witness = "none";
    try {
        constraint_measure(bad);
    } catch (const Infeasible& e) {
        witness = e.witness().display();
    }
    v.require(witness == "0", "contradictory fixture witness " + witness);
    if (v.pass) {
        v.detail = "identity gives L at depth 4; drop-odd/double feasible on " + std::to_string(cs.records.size()) +
                   " records; witness 0";
    }
    return v;
}

Verdict ac8_pullback() {
    Verdict v;
    std::vector<std::pair<std::string, MLTest>> tests;
    for (const char* name : {"test_pass.txt", "test_fail.txt"}) {
        tests.emplace_back(name, cli::detail::read_file(fixture(name), [](std::istream& in) { return io::read_test(in); }));
    }
    auto rng = testing_support::make_rng(2024);
    for (int i = 0; i < 20; ++i) {
        std::vector<TestLevel> levels;
        for (unsigned n = 0; n < 4; ++n) {
            levels.push_back({n, testing_support::random_set(rng, rng() % 6, 4)});
        }
        tests.emplace_back("random " + std::to_string(i), MLTest(levels));
    }

    std::vector<std::pair<std::string, ConstraintSystem>> systems{
        {"identity", build_constraints(functionals::identity(4), functionals::identity(4), 4)},
        {"drop-odd/double", build_constraints(functionals::drop_odd_bits(4), functionals::double_each_bit(4), 4)},
    };
    for (int i = 0; i < 6; ++i) {
        systems.emplace_back("random " + std::to_string(i),
                             build_constraints(testing_support::random_functional(rng, 4, 1),
                                               testing_support::random_functional(rng, 4, 1), 4));
    }

    std::size_t pairs = 0;
    for (const auto& [sname, cs] : systems) {
        std::optional<CylinderAssignment> mu;
        try {
            mu = constraint_measure(cs, 6);
        } catch (const Infeasible&) {
            continue;
        }
        for (const auto& [tname, t] : tests) {
            MLTest pulled;
            try {
                pulled = pullback(t, cs);
            } catch (const MissingConstraint&) {
                continue;
            }
            ++pairs;
            for (std::size_t n = 0; n < t.size(); ++n) {
                Rational leb(0);
                for (const auto& s : pulled[n].strings) {
                    leb += pow2(-static_cast<long>(s.size()));
                }
                Rational source(0);
                for (const auto& s : t[n].strings) {
                    source += mu->at(s);
                }
                v.require(leb <= source, sname + " / " + tname + " level " + std::to_string(n));
            }
        }
    }
    v.require(pairs >= tests.size() * 2, "too few system/test pairs");
    if (v.pass) {
        v.detail = std::to_string(pairs) + " system/test pairs";
    }
    return v;
}

Verdict ac9_settling() {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    const StageEnumeration e({{1, 3}, {0, 5}});
    const auto seq = settling_sequence(e, 12);
    std::vector<std::uint64_t> expected{0};
    for (std::uint64_t m = 5; m < 12; ++m) {
        expected.push_back(m);
    }
    v.require(seq.markers == expected, "markers differ");
    for (const auto& [name, mu] :
         std::vector<std::pair<std::string, MeasureOracle>>{{"lebesgue", lebesgue()},
                                                              {"bernoulli 1/4", bernoulli(Dyadic::parse("1/4"))}}) {
        const auto report = verify_ncr(mu, e, kNcrLevels, 40);
        for (const auto& level : report.levels) {
            const std::string at = name + " n=" + std::to_string(level.cover.n);
            Rational raw(0);
            for (const auto& s : level.cover.level.strings) {
                raw += mu.value(s);
            }
            v.require(raw <= pow2(-static_cast<long>(level.cover.n)), at + ": budget exceeded");
            // Coverage against S computed from its definition: the markers above.
            const auto settled = settling_sequence(e, std::max(level.cover.n0, level.cover.n1));
            bool covered = false;
            for (const auto& s : level.cover.level.strings) {
                covered = covered || s.is_prefix_of(settled.s);
            }
            v.require(covered, at + ": S not covered");
            v.require(level.budget_ok && level.covers_s, at + ": report disagrees");
        }
    }
    const double elapsed = seconds_since(t0);
    v.require(elapsed < kSettlingSeconds, "took " + fmt_seconds(elapsed));
    if (v.pass) {
        v.detail = "markers 0,5,6,...; n <= " + std::to_string(kNcrLevels) + " for both measures in " +
                   fmt_seconds(elapsed);
    }
    return v;
}

Verdict ac10_basis() {
    Verdict v;
    struct Case {
        const char* name;
        unsigned levels;
        unsigned depth;
    };
    for (const Case& c : {Case{"basis_a", 2, 2}, Case{"basis_b", 2, 4}, Case{"basis_c", 1, 3}}) {
        const auto tree = cli::detail::read_file(fixture(std::string(c.name) + "_tree.txt"),
                                                 [](std::istream& in) { return io::read_tree(in); });
        const auto family = cli::detail::read_file(fixture(std::string(c.name) + "_family.txt"),
                                                   [](std::istream& in) { return io::read_family(in); });
        const auto result = basis_combine(tree, family, c.levels, c.depth);
        for (unsigned n = 0; n < c.levels; ++n) {
            std::set<BitString> expected;
            for (unsigned len = 0; len <= c.depth; ++len) {
                for (const auto& sigma : strings_of_length(len)) {
                    bool all = true;
                    for (const auto& tau : tree) {
                        if (tau.size() != len) continue;
                        const auto it = family.find({n, tau});
                        all = all && it != family.end() && testing_support::brute_contained(sigma, it->second);
                    }
                    if (all) expected.insert(sigma);
                }
            }
            v.require(result.test[n].strings == expected,
                      std::string(c.name) + " level " + std::to_string(n) + " differs");
        }
    }
    if (v.pass) {
        v.detail = "3 fixtures";
    }
    return v;
}

Verdict ac11_cli() {
    Verdict v;
    auto run = [](const std::vector<std::string>& args, std::string& out) {
        std::ostringstream o;
        std::ostringstream e;
        const int code = cli::run(args, o, e);
        out = o.str();
        return code;
    };
    const std::string en = fixture("enum_sample.txt");
    const std::vector<std::vector<std::string>> commands{
        {"eval", "--measure", fixture("measure_skewed.txt"), "--sigma", "01"},
        {"dist", "--a", "lebesgue", "--b", "dirac:0*"},
        {"dist", "--a", "bernoulli:1/4", "--b", fixture("measure_skewed.txt"), "--n", "4"},
        {"modulus", "--measure", "bernoulli:3/8", "--epsilon", "1/100"},
        {"atoms", "--measure", "bernoulli:1/4", "--c", "1/3", "--depth", "8"},
        {"atoms", "--measure", "tree:" + fixture("basis_c_tree.txt"), "--c", "1/2", "--depth", "3"},
        {"rationalize", "--measure", fixture("measure_skewed.txt"), "--depth", "6"},
        {"transport", "--measure", "bernoulli:1/4", "--m", "3", "--depth", "10"},
        {"image", "--measure", "bernoulli:1/4", "--functional", fixture("functional_xor.txt"), "--depth", "2"},
        {"repair", "--measure", "lebesgue", "--phi", "constant-zero:3", "--psi", "identity:3", "--depth", "3"},
        {"constraints", "--phi", "drop-odd-bits:3", "--psi", "double-each-bit:3", "--depth", "3"},
        {"solve-measure", "--phi", "drop-odd-bits:3", "--psi", "double-each-bit:3", "--depth", "3"},
        {"test-verify", "--test", fixture("test_pass.txt"), "--measure", "lebesgue"},
        {"test-verify", "--test", fixture("test_fail.txt"), "--measure", "lebesgue"},
        {"test-covers", "--test", fixture("test_pass.txt"), "--x", "0001"},
        {"test-pullback", "--test", fixture("test_pass.txt"), "--phi", "drop-odd-bits:3", "--psi",
         "double-each-bit:3", "--depth", "3"},
        {"basis-combine", "--tree", fixture("basis_b_tree.txt"), "--family", fixture("basis_b_family.txt"), "--levels",
         "2", "--depth", "4", "--query", "0001"},
        {"settling", "--enum", en, "--length", "12"},
        {"cover", "--measure", "lebesgue", "--enum", en, "--n", "3"},
        {"verify-ncr", "--measure", "bernoulli:1/4", "--enum", en, "--n", "3"},
        {"eval", "--measure", fixture("measure_bad_additivity.txt"), "--sigma", "0"},
    };
    for (const auto& c : commands) {
        std::string first;
        std::string second;
        const int a = run(c, first);
        const int b = run(c, second);
        v.require(a == b && first == second, c[0] + " is not reproducible");
    }
    std::string ignored;
    v.require(run({"test-verify", "--test", fixture("test_pass.txt"), "--measure", "lebesgue"}, ignored) == 0,
              "pass path did not exit 0");
    v.require(run({"test-verify", "--test", fixture("test_fail.txt"), "--measure", "lebesgue"}, ignored) == 1,
              "failure path did not exit 1");
    v.require(run({"eval", "--measure", fixture("measure_bad_additivity.txt"), "--sigma", "0"}, ignored) == 2,
              "parse error did not exit 2");
    if (v.pass) {
        v.detail = std::to_string(commands.size()) + " commands byte-identical; exit codes 0/1/2";
    }
    return v;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"AC1", ac1_additivity}, {"AC2", ac2_metric},    {"AC3", ac3_atoms},       {"AC4", ac4_rationalize},
        {"AC5", ac5_transport},  {"AC6", ac6_image},     {"AC7", ac7_constraints}, {"AC8", ac8_pullback},
        {"AC9", ac9_settling},   {"AC10", ac10_basis},   {"AC11", ac11_cli},
    };
    int failures = 0;
    for (const auto& [id, check] : criteria) {
        Verdict v;
        try {
            v = check();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        failures += !v.pass;
        std::cout << id << ' ' << (v.pass ? "PASS" : "FAIL") << ' ' << v.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
