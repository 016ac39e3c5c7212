#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cantor/cantor.hpp"

namespace cantor::cli {

enum ExitCode : int { ok = 0, property_failure = 1, input_error = 2 };

namespace detail {

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(0, "cannot open '" + path + "'");
    }
    return in;
}

template <typename Reader>
auto read_file(const std::string& path, Reader&& reader) {
    auto in = open_input(path);
    try {
        return reader(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path + ": " + e.what());
    }
}

/// lebesgue | dirac:<point> | bernoulli:<dyadic> | tree:<tree file> | <measure file>
inline MeasureOracle load_measure(const std::string& spec) {
    if (spec == "lebesgue") {
        return lebesgue();
    }
    if (spec.rfind("dirac:", 0) == 0) {
        return dirac(EventuallyPeriodic::parse(spec.substr(6)));
    }
    if (spec.rfind("bernoulli:", 0) == 0) {
        return bernoulli(Dyadic::parse(spec.substr(10)));
    }
    if (spec.rfind("tree:", 0) == 0) {
        const auto nodes = read_file(spec.substr(5), [](std::istream& in) { return io::read_tree(in); });
        std::size_t depth = 0;
        for (const auto& s : nodes) {
            depth = std::max(depth, s.size());
        }
        return tree_uniform([&nodes](const BitString& s) { return nodes.contains(s); },
                            static_cast<unsigned>(depth));
    }
    return read_file(spec, [](std::istream& in) { return io::read_measure(in); }).to_oracle(spec);
}

/// <name>:<depth> for a built-in functional, otherwise a functional file.
inline MonotoneFunctional load_functional(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string name = spec.substr(0, colon);
        const std::string arg = spec.substr(colon + 1);
        if (arg.empty() || arg.size() > 3 || arg.find_first_not_of("0123456789") != std::string::npos) {
            throw FormatError("invalid depth in functional '" + spec + "'");
        }
        const unsigned depth = static_cast<unsigned>(std::stoul(arg));
        if (name == "identity") return functionals::identity(depth);
        if (name == "pairwise-xor") return functionals::pairwise_xor(depth);
        if (name == "constant-zero") return functionals::constant_zero(depth);
        if (name == "drop-odd-bits") return functionals::drop_odd_bits(depth);
        if (name == "double-each-bit") return functionals::double_each_bit(depth);
        throw FormatError("unknown built-in functional '" + name + "'");
    }
    return read_file(spec, [](std::istream& in) { return io::read_functional(in); });
}

inline std::string join(const std::set<BitString>& strings) {
    std::string out;
    for (const auto& s : strings) {
        out += (out.empty() ? "" : ", ") + s.display();
    }
    return "{" + out + "}";
}

/// The assignment behind a measure: truncated at `depth`.
inline CylinderAssignment assignment_of(const MeasureOracle& mu, unsigned depth) {
    return CylinderAssignment::truncate(mu, depth, ExtensionPolicy::uniform);
}

} // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact measures, tests and transformations on Cantor space", "cantor"};
    app.require_subcommand(1);

    std::string measure;
    std::string measure_b;
    std::string sigma;
    std::string epsilon;
    std::string threshold;
    std::string functional;
    std::string phi_spec;
    std::string psi_spec;
    std::string test_path;
    std::string enum_path;
    std::string tree_path;
    std::string family_path;
    std::string query;
    std::string partial = "uniform";
    unsigned depth = 6;
    unsigned precision = 20;
    unsigned max_depth = 32;
    unsigned n = 0;
    unsigned grid = 8;
    unsigned levels = 1;
    unsigned length = 16;
    unsigned m = 4;
    std::optional<unsigned> stage;
    std::optional<unsigned> dn;

    auto add_measure = [&](CLI::App* c) { c->add_option("--measure", measure, "measure specifier")->required(); };
    auto add_pair = [&](CLI::App* c) {
        c->add_option("--phi", phi_spec, "functional Φ")->required();
        c->add_option("--psi", psi_spec, "functional Ψ")->required();
    };

    auto* eval = app.add_subcommand("eval", "value of a measure on a cylinder");
    add_measure(eval);
    eval->add_option("--sigma", sigma, "bit string, @ for the empty string")->required();
    eval->add_option("--precision", precision, "oracle precision");

    auto* dist = app.add_subcommand("dist", "distance between two measures");
    dist->add_option("--a", measure, "first measure")->required();
    dist->add_option("--b", measure_b, "second measure")->required();
    dist->add_option("--precision", precision, "d_P to within 2^-precision");
    dist->add_option("--n", dn, "print d_n instead of d_P");

    auto* modulus = app.add_subcommand("modulus", "least level with every cylinder at most epsilon");
    add_measure(modulus);
    modulus->add_option("--epsilon", epsilon, "positive rational")->required();
    modulus->add_option("--max-depth", max_depth, "search limit");

    auto* atoms = app.add_subcommand("atoms", "atom tree and isolated paths");
    add_measure(atoms);
    atoms->add_option("--c", threshold, "threshold in (0,1)")->required();
    atoms->add_option("--depth", depth, "tree depth");

    auto* rational = app.add_subcommand("rationalize", "dyadic measure dominating half of the input");
    add_measure(rational);
    rational->add_option("--depth", depth, "assignment depth");

    auto* transport = app.add_subcommand("transport", "order-preserving map towards Lebesgue measure");
    add_measure(transport);
    transport->add_option("--m", m, "output levels");
    transport->add_option("--depth", depth, "depth at which the measure is read");

    auto* image = app.add_subcommand("image", "image measure under a functional");
    add_measure(image);
    image->add_option("--functional", functional, "functional file or <builtin>:<depth>")->required();
    image->add_option("--depth", depth, "output depth");
    image->add_option("--partial", partial, "uniform | reject");

    auto* repair = app.add_subcommand("repair", "continuity repair of an image measure");
    add_measure(repair);
    add_pair(repair);
    repair->add_option("--depth", depth, "output depth");

    auto* constraints = app.add_subcommand("constraints", "w/Pre constraint records");
    add_pair(constraints);
    constraints->add_option("--depth", depth, "string length limit");

    auto* solve = app.add_subcommand("solve-measure", "measure meeting the constraint system");
    add_pair(solve);
    solve->add_option("--depth", depth, "string length limit");
    solve->add_option("--grid-exponent", grid, "extra binary digits in the search grid");

    auto* verify = app.add_subcommand("test-verify", "budget check of a test");
    verify->add_option("--test", test_path, "test file")->required();
    add_measure(verify);

    auto* covers_cmd = app.add_subcommand("test-covers", "coverage of a prefix by each level");
    covers_cmd->add_option("--test", test_path, "test file")->required();
    covers_cmd->add_option("--x", sigma, "prefix of the real")->required();

    auto* pull = app.add_subcommand("test-pullback", "pull a test back along Φ");
    pull->add_option("--test", test_path, "test file")->required();
    add_pair(pull);
    pull->add_option("--depth", depth, "constraint depth");

    auto* basis = app.add_subcommand("basis-combine", "combine a tree-indexed family of tests");
    basis->add_option("--tree", tree_path, "tree file")->required();
    basis->add_option("--family", family_path, "family file")->required();
    basis->add_option("--levels", levels, "number of levels");
    basis->add_option("--depth", depth, "string length limit");
    basis->add_option("--query", query, "prefix of a real to trace through the tree");

    auto* settling = app.add_subcommand("settling", "settling-time markers and S");
    settling->add_option("--enum", enum_path, "enumeration file")->required();
    settling->add_option("--length", length, "length of S");
    settling->add_option("--stage", stage, "replay only up to this stage");

    auto* cover = app.add_subcommand("cover", "level n of the test covering S");
    add_measure(cover);
    cover->add_option("--enum", enum_path, "enumeration file")->required();
    cover->add_option("--n", n, "level");
    cover->add_option("--max-depth", max_depth, "modulus search limit");

    auto* ncr = app.add_subcommand("verify-ncr", "budget and coverage for levels 0..n");
    add_measure(ncr);
    ncr->add_option("--enum", enum_path, "enumeration file")->required();
    ncr->add_option("--n", n, "last level");
    ncr->add_option("--max-depth", max_depth, "modulus search limit");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return ok;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return input_error;
    }

    using namespace detail;
    try {
        if (eval->parsed()) {
            const auto mu = load_measure(measure);
            const BitString s = BitString::parse(sigma);
            out << s.display() << ' ' << mu.value(s, precision) << '\n';
            return ok;
        }
        if (dist->parsed()) {
            const auto a = load_measure(measure);
            const auto b = load_measure(measure_b);
            if (dn) {
                out << "d_" << *dn << ' ' << metric_dn(a, b, *dn) << '\n';
            } else {
                out << "d_P " << metric_dP(a, b, precision) << " (within 2^-" << precision << ")\n";
            }
            return ok;
        }
        if (modulus->parsed()) {
            const auto mu = load_measure(measure);
            const Rational eps = Rational::parse(epsilon);
            try {
                const unsigned l = continuity_modulus(mu, eps, max_depth);
                out << "l(" << eps << ") = " << l << '\n';
            } catch (const NotContinuousWithin& e) {
                out << "not continuous within depth " << e.max_depth() << '\n';
                return property_failure;
            }
            return ok;
        }
        if (atoms->parsed()) {
            const auto mu = load_measure(measure);
            const auto tree = atom_tree(mu, Rational::parse(threshold), depth);
            out << "atom tree c=" << tree.threshold << " depth=" << tree.depth << '\n';
            for (const auto& s : tree.nodes) {
                out << std::string(2 * s.size(), ' ') << s.display() << ' ' << tree.mass.at(s) << '\n';
            }
            bool widths_ok = true;
            for (unsigned k = 0; k <= depth; ++k) {
                out << "level " << k << ": width " << tree.level(k).size();
                if (tree.width_bound_applies(k)) {
                    const bool fits = Rational(static_cast<long>(tree.level(k).size())) <= tree.width_bound(k);
                    widths_ok = widths_ok && fits;
                    out << " bound " << tree.width_bound(k) << (fits ? " ok" : " EXCEEDED");
                } else {
                    out << " bound vacuous";
                }
                out << '\n';
            }
            const auto report = isolated_paths(tree);
            for (const auto& p : report.paths) {
                out << "isolated " << p.path.display() << " from level " << p.certified_from << '\n';
            }
            out << "inconclusive " << (report.inconclusive ? "yes" : "no") << '\n';
            return widths_ok ? ok : property_failure;
        }
        if (rational->parsed()) {
            io::write_measure(out, rationalize(load_measure(measure), depth));
            return ok;
        }
        if (transport->parsed()) {
            const auto nu = assignment_of(load_measure(measure), depth);
            io::write_functional(out, transport_map(nu, m));
            return ok;
        }
        if (image->parsed()) {
            const auto policy = parse_partial_output_policy(partial);
            const auto result = image_measure(load_measure(measure), load_functional(functional), depth, policy);
            io::write_measure(out, result, {"partial-output: " + to_string(policy)});
            return ok;
        }
        if (repair->parsed()) {
            io::write_measure(out, continuity_repair(load_measure(measure), load_functional(phi_spec),
                                                     load_functional(psi_spec), depth));
            return ok;
        }
        if (constraints->parsed()) {
            const auto cs = build_constraints(load_functional(phi_spec), load_functional(psi_spec), depth);
            for (unsigned len = 0; len <= depth; ++len) {
                for (const auto& s : strings_of_length(len)) {
                    const auto* r = cs.find(s);
                    if (r == nullptr) {
                        out << s.display() << " unconstrained\n";
                        continue;
                    }
                    out << s.display() << " w=" << r->w.display() << " pre=" << join(r->pre) << " lower=" << r->lower
                        << " upper=" << r->upper << (r->lower <= r->upper ? "" : " EMPTY") << '\n';
                }
            }
            return ok;
        }
        if (solve->parsed()) {
            const auto cs = build_constraints(load_functional(phi_spec), load_functional(psi_spec), depth);
            try {
                io::write_measure(out, constraint_measure(cs, grid));
            } catch (const Infeasible& e) {
                out << "infeasible at " << e.witness().display() << '\n';
                return property_failure;
            }
            return ok;
        }
        if (verify->parsed()) {
            const auto t = read_file(test_path, [](std::istream& in) { return io::read_test(in); });
            bool all = true;
            for (const auto& r : verify_bound(t, load_measure(measure))) {
                out << "level " << r.index << ": raw " << r.raw_sum << " open " << r.open_measure << " budget "
                    << r.budget << (r.pass ? " PASS" : " FAIL") << '\n';
                all = all && r.pass;
            }
            return all ? ok : property_failure;
        }
        if (covers_cmd->parsed()) {
            const auto t = read_file(test_path, [](std::istream& in) { return io::read_test(in); });
            const BitString x = BitString::parse(sigma);
            const auto verdicts = covers(t, x);
            for (std::size_t k = 0; k < verdicts.size(); ++k) {
                out << "level " << k << ": " << to_string(verdicts[k]) << '\n';
            }
            return ok;
        }
        if (pull->parsed()) {
            const auto t = read_file(test_path, [](std::istream& in) { return io::read_test(in); });
            const auto cs = build_constraints(load_functional(phi_spec), load_functional(psi_spec), depth);
            io::write_test(out, pullback(t, cs));
            return ok;
        }
        if (basis->parsed()) {
            const auto tree = read_file(tree_path, [](std::istream& in) { return io::read_tree(in); });
            const auto family = read_file(family_path, [](std::istream& in) { return io::read_family(in); });
            std::optional<BitString> q;
            if (!query.empty()) {
                q = BitString::parse(query);
            }
            const auto result = basis_combine(tree, family, levels, depth, q);
            io::write_test(out, result.test);
            for (const auto& s : result.survivors) {
                out << "survivors " << s.index << ": " << join(s.nodes);
                if (s.deepest) {
                    out << " deepest " << s.deepest->display();
                }
                out << '\n';
            }
            return ok;
        }
        if (settling->parsed()) {
            const auto e = read_file(enum_path, [](std::istream& in) { return io::read_enumeration(in); });
            const auto r = stage ? settling_at_stage(e, *stage, length) : settling_sequence(e, length);
            out << "markers";
            for (auto k : r.markers) {
                out << ' ' << k;
            }
            out << "\nS " << r.s.display() << '\n';
            return ok;
        }
        if (cover->parsed()) {
            const auto e = read_file(enum_path, [](std::istream& in) { return io::read_enumeration(in); });
            const auto mu = load_measure(measure);
            try {
                const auto c = continuous_cover(mu, e, n, max_depth);
                Rational raw(0);
                for (const auto& s : c.level.strings) {
                    raw += mu.value(s, precision);
                }
                out << "n " << c.n << "\nn0 " << c.n0 << "\nn1 " << c.n1 << "\nhead " << c.head.display() << '\n';
                for (std::size_t k = 0; k < c.markers.size(); ++k) {
                    out << "block s=" << c.markers[k] << ' ' << c.zero_blocks[k].display() << '\n';
                }
                out << "level " << join(c.level.strings) << "\nraw " << raw << "\nbudget "
                    << Rational::pow2(-static_cast<long>(n)) << '\n';
            } catch (const NotContinuousWithin& ex) {
                out << "not continuous within depth " << ex.max_depth() << '\n';
                return property_failure;
            }
            return ok;
        }
        if (ncr->parsed()) {
            const auto e = read_file(enum_path, [](std::istream& in) { return io::read_enumeration(in); });
            try {
                const auto report = verify_ncr(load_measure(measure), e, n, max_depth);
                for (const auto& r : report.levels) {
                    out << "n=" << r.cover.n << " n0=" << r.cover.n0 << " n1=" << r.cover.n1 << " raw=" << r.raw_sum
                        << " budget=" << r.budget << " budget:" << (r.budget_ok ? "PASS" : "FAIL")
                        << " cover:" << (r.covers_s ? "PASS" : "FAIL") << (r.unsettled ? " unsettled" : "") << '\n';
                }
                return report.all_pass() ? ok : property_failure;
            } catch (const NotContinuousWithin& ex) {
                out << "not continuous within depth " << ex.max_depth() << '\n';
                return property_failure;
            }
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const MonotonicityViolation& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const MissingConstraint& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const BeyondDepth& e) {
        err << "error: " << e.what() << '\n';
        return input_error;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return property_failure;
    }
    return input_error;
}

} // namespace cantor::cli
